#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "twistlift/synthesis.hpp"

#include <random>

using namespace twistlift;

static CoverPresentation make(int d, std::vector<std::pair<int, int>> br) {
    CoverPresentation p;
    p.degree = d;
    for (auto [a, b] : br) p.branches.emplace_back(a, b);
    return p;
}

static const CoverPresentation disk3 = make(3, {{1, 2}, {2, 3}, {1, 2}});

static ArcCode standard_code(int n, int c) {
    ArcCode a;
    a.n = n;
    a.s = c;
    a.t = c + 1;
    return a;
}

static ArcCode apply_word(ArcCode a, const BraidWord &w) {
    for (int l : w.letters) a = apply_halftwist_gen(a, l);
    return a;
}

static bool same_braid(const BraidWord &a, const BraidWord &b) {
    if (a.strands != b.strands) return false;
    for (int i = 1; i <= a.strands; ++i)
        if (!(artin_action(a, FreeWord::generator(i)) == artin_action(b, FreeWord::generator(i))))
            return false;
    return true;
}

TEST_CASE("arc_code of basic arcs") {
    ArcDiagram standard;
    standard.vertices = {Pt(Rat(2), Rat(0)), Pt(Rat(3), Rat(0))};
    ArcCode c = arc_code(standard, disk3);
    CHECK(c.n == 3);
    CHECK(c.s == 2);
    CHECK(c.t == 3);
    CHECK(c.word.empty());
    CHECK(c.standard());

    ArcDiagram over; // from point 1 to point 3 above point 2
    over.vertices = {Pt(Rat(1), Rat(0)), Pt(Rat(3, 2), Rat(1, 2)), Pt(Rat(5, 2), Rat(1, 2)),
                     Pt(Rat(3), Rat(0))};
    c = arc_code(over, disk3);
    CHECK(c.s == 1);
    CHECK(c.t == 3);
    CHECK(c.side == +1);
    CHECK(c.word.empty());

    ArcDiagram under = over;
    for (Pt &p : under.vertices) p.y = -p.y;
    c = arc_code(under, disk3);
    CHECK(c.side == -1);
    CHECK(c.word.empty());

    ArcDiagram reversed = over;
    std::reverse(reversed.vertices.begin(), reversed.vertices.end());
    CHECK(arc_code(reversed, disk3) == arc_code(over, disk3));
}

TEST_CASE("arc_code crossings, tangencies and on-axis runs") {
    // from point 1 below points 2,3, around the right of 3, back above to 2
    ArcDiagram wrap;
    wrap.vertices = {Pt(Rat(1), Rat(0)),      Pt(Rat(3, 2), Rat(-1, 2)),
                     Pt(Rat(7, 2), Rat(-1, 2)), Pt(Rat(7, 2), Rat(1, 2)),
                     Pt(Rat(2), Rat(0))};
    ArcCode c = arc_code(wrap, disk3);
    CHECK(c.s == 1);
    CHECK(c.t == 2);
    CHECK(c.side == -1);
    CHECK(c.word == std::vector<int>{3});

    // a tangency (touching the axis without crossing) contributes nothing
    ArcDiagram tangent;
    tangent.vertices = {Pt(Rat(1), Rat(0)),      Pt(Rat(5, 4), Rat(1, 2)),
                        Pt(Rat(3, 2), Rat(0)),   Pt(Rat(7, 4), Rat(1, 2)),
                        Pt(Rat(2), Rat(0))};
    c = arc_code(tangent, disk3);
    CHECK(c.word.empty());
    CHECK(c.standard());

    // a run along the axis that does cross: the crossing swings around the
    // left endpoint, so the reduced code is the plain over-arc
    ArcDiagram run;
    run.vertices = {Pt(Rat(1), Rat(0)),        Pt(Rat(9, 8), Rat(-1, 2)),
                    Pt(Rat(5, 4), Rat(0)),     Pt(Rat(11, 8), Rat(0)),
                    Pt(Rat(3, 2), Rat(1, 2)),  Pt(Rat(3), Rat(0))};
    c = arc_code(run, disk3);
    CHECK(c.s == 1);
    CHECK(c.t == 3);
    CHECK(c.side == +1);
    CHECK(c.word.empty());

    ArcDiagram through; // passes through branch point 2
    through.vertices = {Pt(Rat(1), Rat(0)), Pt(Rat(3), Rat(0))};
    CHECK_THROWS_AS(arc_code(through, disk3), PreconditionFailed);

    CoverPresentation off = disk3;
    off.positions = {Pt(Rat(1), Rat(0)), Pt(Rat(2), Rat(1, 2)), Pt(Rat(3), Rat(0))};
    ArcDiagram any;
    any.vertices = {Pt(Rat(1), Rat(0)), Pt(Rat(3), Rat(0))};
    CHECK_THROWS_AS(arc_code(any, off), NotNormalized);
}

TEST_CASE("half-twist generator action satisfies the braid relations") {
    std::mt19937 rng(23);
    for (int iter = 0; iter < 300; ++iter) {
        int n = 3 + int(rng() % 3);
        ArcCode a = standard_code(n, 1 + int(rng() % (n - 1)));
        for (int i = 0; i < 8; ++i) {
            int g = 1 + int(rng() % (n - 1));
            a = apply_halftwist_gen(a, rng() % 2 ? g : -g);
        }
        int i = 1 + int(rng() % (n - 1));
        CHECK(apply_halftwist_gen(apply_halftwist_gen(a, i), -i) == a);
        CHECK(apply_halftwist_gen(apply_halftwist_gen(a, -i), i) == a);
        if (i + 1 < n) {
            ArcCode lhs = apply_word(a, BraidWord(n, {i, i + 1, i}));
            ArcCode rhs = apply_word(a, BraidWord(n, {i + 1, i, i + 1}));
            CHECK(lhs == rhs);
        }
        if (i + 3 < n) {
            int j = i + 2 + int(rng() % (n - i - 3 + 1));
            CHECK(apply_word(a, BraidWord(n, {i, j})) == apply_word(a, BraidWord(n, {j, i})));
        }
    }
}

TEST_CASE("straighten on the standard and near-standard arcs") {
    ArcDiagram standard;
    standard.vertices = {Pt(Rat(2), Rat(0)), Pt(Rat(3), Rat(0))};
    HalfTwistWord h = straighten(standard, disk3);
    CHECK(h.conjugator.letters.empty());
    CHECK(h.core == 2);
    CHECK(h.sign == +1);

    std::reverse(standard.vertices.begin(), standard.vertices.end());
    HalfTwistWord hr = straighten(standard, disk3);
    CHECK(hr.conjugator.letters.empty());
    CHECK(hr.core == 2);

    ArcDiagram over;
    over.vertices = {Pt(Rat(1), Rat(0)), Pt(Rat(3, 2), Rat(1, 2)), Pt(Rat(5, 2), Rat(1, 2)),
                     Pt(Rat(3), Rat(0))};
    h = straighten(over, disk3);
    CHECK(h.conjugator.letters.size() == 1);
    // equal, as a braid, to the sigma_2-conjugate of sigma_1
    BraidWord word = halftwist_to_word(h);
    CHECK(same_braid(word, BraidWord(3, {-1, 2, 1})));
    CHECK(same_braid(word, BraidWord(3, {2, 1, -2})));
    Perm p = underlying_permutation(word);
    CHECK(p(1) == 3);
    CHECK(p(3) == 1);
    CHECK(p(2) == 2);

    // determinism
    HalfTwistWord again = straighten(over, disk3);
    CHECK(again.conjugator == h.conjugator);
    CHECK(again.core == h.core);
}

static LabelledDiagram rectangle(Rat x0, Rat y0, Rat x1, Rat y1, int base_label = 1) {
    LabelledDiagram d;
    d.vertices = {Pt(x0, y0), Pt(x1, y0), Pt(x1, y1), Pt(x0, y1)};
    d.base_edge = 0;
    d.base_label = base_label;
    return d;
}

static int inner_face(const CoverPresentation &p, const LabelledDiagram &d) {
    FaceDecomposition fd = faces(d, p);
    for (const FaceInfo &f : fd.faces)
        if (!f.outer) return f.id;
    return -1;
}

TEST_CASE("t2_minimize expels a branch whose support the curve avoids") {
    // degree 4; the rectangle encloses branches 0,1,2 and carries only the
    // labels 1,2, so the (3,4) branch leaves through one T2
    CoverPresentation p = make(4, {{1, 2}, {1, 2}, {3, 4}, {2, 3}});
    LabelledDiagram d = rectangle(Rat(1, 2), Rat(-1, 2), Rat(7, 2), Rat(1, 2));
    int f = inner_face(p, d);
    REQUIRE(f >= 0);
    StageResult st = t2_minimize(p, d, f);
    REQUIRE(st.steps.size() == 1);
    CHECK(st.steps[0].move.kind == MoveKind::T2);
    CHECK(st.steps[0].move.branch == 2);
    CHECK(st.stabilizations == 0);

    FaceDecomposition fd = faces(st.diagram, st.pres);
    int g = inner_face(st.pres, st.diagram);
    CHECK(fd.faces[size_t(g)].branch_points == std::vector<int>{0, 1});
    CHECK(homology_class(st.diagram, st.pres) == homology_class(d, p));

    // a second run is a fixed point
    StageResult st2 = t2_minimize(st.pres, st.diagram, g);
    CHECK(st2.steps.empty());

    MoveTrace tr{p, d, st.steps};
    CHECK(replay(tr).ok);
}

TEST_CASE("case1_extract on the annulus rectangle") {
    CoverPresentation annulus = make(2, {{1, 2}, {1, 2}});
    LabelledDiagram d = rectangle(Rat(1, 2), Rat(-1, 2), Rat(5, 2), Rat(1, 2));
    ExtractResult ex = case1_extract(annulus, d);
    CHECK(ex.stage.steps.empty());
    CHECK(ex.stage.stabilizations == 0);
    CHECK(ex.sign == +1);
    CHECK(ex.arc.vertices.front() == Pt(Rat(1), Rat(0)));
    CHECK(ex.arc.vertices.back() == Pt(Rat(2), Rat(0)));
    LiftedArc la = lift_arc(ex.arc, annulus);
    CHECK(la.has_closed);
}

TEST_CASE("synthesize stabilizes when every curve label hits every support") {
    // degree 2 with four (1,2) branches inside the rectangle: the curve only
    // carries labels 1 and 2, so no branch can be expelled directly and the
    // reduction must stabilize at least once
    CoverPresentation p = make(2, {{1, 2}, {1, 2}, {1, 2}, {1, 2}});
    LabelledDiagram d = rectangle(Rat(1, 2), Rat(-1, 2), Rat(9, 2), Rat(1, 2));
    REQUIRE(!homology_class(d, p).is_zero());
    SynthesisResult r = synthesize(p, d);
    CHECK(r.stats.stabilizations >= 1);
    CHECK(r.stats.regions == 2);
    CHECK(r.stats.stabilizations <= 3 * r.stats.regions);
    CHECK(r.final_pres.degree == 2 + r.stats.stabilizations);
    REQUIRE(replay(r.trace).ok);

    // the arc joining the final pair lifts to a closed curve
    LabelledDiagram fin = d;
    CoverPresentation fp = p;
    for (const MoveStep &s : r.trace.steps) {
        MoveResult mr = apply_move(fp, fin, s.move);
        fp = mr.pres;
        fin = mr.diagram;
    }
    LiftedArc la = lift_arc(r.halftwist.arc, fp);
    CHECK(la.has_closed);
}

TEST_CASE("synthesize the annulus core curve as one half-twist") {
    CoverPresentation annulus = make(2, {{1, 2}, {1, 2}});
    LabelledDiagram d = rectangle(Rat(1, 2), Rat(-1, 2), Rat(5, 2), Rat(1, 2));
    SynthesisResult r = synthesize(annulus, d);
    CHECK(r.stats.stabilizations == 0);
    CHECK(r.stats.regions == 2);
    CHECK(r.halftwist.sign == +1);
    CHECK(r.halftwist.word.core == 1);
    CHECK(r.halftwist.word.conjugator.letters.empty());
    CHECK(r.final_pres.degree == 2);
    CHECK(r.final_pres.branch_count() == 2);
    CHECK(replay(r.trace).ok);

    // a trivial curve is rejected upfront
    CoverPresentation p3 = make(3, {{1, 2}, {2, 3}, {1, 2}});
    LabelledDiagram triv = rectangle(Rat(1, 2), Rat(-1, 2), Rat(3, 2), Rat(1, 2), 3);
    CHECK_THROWS_AS(synthesize(p3, triv), HomologicallyTrivial);
}

TEST_CASE("straighten recovers a conjugating word for scrambled arcs") {
    std::mt19937 rng(71);
    for (int iter = 0; iter < 120; ++iter) {
        int n = 2 + int(rng() % 4);
        int c = 1 + int(rng() % (n - 1));
        int len = int(rng() % 13);
        BraidWord u(n, {});
        for (int i = 0; i < len; ++i) {
            int g = 1 + int(rng() % (n - 1));
            u.letters.push_back(rng() % 2 ? g : -g);
        }
        ArcCode a = apply_word(standard_code(n, c), u);
        HalfTwistWord h = straighten_code(a);
        CHECK(h.sign == +1);
        BraidWord got = halftwist_to_word(h);
        BraidWord expect = u.inverse().concat(BraidWord(n, {c})).concat(u);
        CHECK(same_braid(got, expect));
        Perm p = underlying_permutation(got);
        CHECK(p(a.s) == a.t);
        CHECK(p(a.t) == a.s);
    }
}
