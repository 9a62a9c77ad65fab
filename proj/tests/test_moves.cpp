#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "twistlift/moves.hpp"

using namespace twistlift;

static CoverPresentation make(int d, std::vector<std::pair<int, int>> br) {
    CoverPresentation p;
    p.degree = d;
    for (auto [a, b] : br) p.branches.emplace_back(a, b);
    return p;
}

static Pt pt(const char *x, const char *y) { return Pt(rat_parse(x), rat_parse(y)); }

static const CoverPresentation annulus = make(2, {{1, 2}, {1, 2}});
static const CoverPresentation disk3 = make(3, {{1, 2}, {2, 3}});

static LabelledDiagram core_rectangle() {
    LabelledDiagram d;
    d.vertices = {pt("1/2", "-1/2"), pt("5/2", "-1/2"), pt("5/2", "1/2"), pt("1/2", "1/2")};
    return d;
}

static LabelledDiagram figure_eight() {
    LabelledDiagram d;
    d.vertices = {pt("9/4", "3/4"), pt("3/4", "-3/4"), pt("3/4", "3/4"), pt("9/4", "-3/4")};
    return d;
}

static Move mk(MoveKind k, int fe, const char *ft, int te, const char *tt,
               std::vector<Pt> rep, int branch = -1) {
    Move m;
    m.kind = k;
    m.from = {fe, rat_parse(ft)};
    m.to = {te, rat_parse(tt)};
    m.replacement = std::move(rep);
    m.branch = branch;
    return m;
}

TEST_CASE("planar isotopy bumps an edge without changing anything else") {
    LabelledDiagram d = core_rectangle();
    Move m = mk(MoveKind::PlanarIsotopy, 2, "3/10", 2, "7/10",
                {pt("19/10", "3/4"), pt("11/10", "3/4")});
    MoveResult r = apply_move(annulus, d, m);
    CHECK(r.diagram.vertices.size() == 8);
    CHECK(r.diagram.vertices[0] == pt("11/10", "1/2"));
    CHECK(homology_class(r.diagram, annulus).coefficients == std::vector<long>{1, -1});
    CHECK(validate_diagram(r.diagram, annulus).crossings.empty());
    CHECK(diagram_hash(r.diagram) != diagram_hash(d));
}

TEST_CASE("isotopy across a branch point is rejected") {
    // label-3 square above branch 0; the sweep region holds the branch point
    LabelledDiagram sq;
    sq.vertices = {pt("3/4", "1/4"), pt("5/4", "1/4"), pt("5/4", "3/4"), pt("3/4", "3/4")};
    sq.base_label = 3;
    Move over = mk(MoveKind::PlanarIsotopy, 3, "1/2", 1, "1/2",
                   {pt("7/10", "-1/4"), pt("13/10", "-1/4")});
    CHECK_THROWS_AS(apply_move(disk3, sq, over), PreconditionFailed);
    over.kind = MoveKind::RSlide; // still has the branch point inside
    CHECK_THROWS_AS(apply_move(disk3, sq, over), PreconditionFailed);
}

TEST_CASE("rslide crosses a splitting arc below its branch point") {
    LabelledDiagram d = core_rectangle();
    Move m = mk(MoveKind::RSlide, 0, "1/8", 0, "3/8", {pt("3/4", "-1/4"), pt("5/4", "-1/4")});
    MoveResult r = apply_move(annulus, d, m);
    DiagramLabelling lab = validate_diagram(r.diagram, annulus);
    CHECK(lab.transits.size() == 2); // still one transit per arc
    CHECK(homology_class(r.diagram, annulus).coefficients == std::vector<long>{1, -1});

    m.kind = MoveKind::PlanarIsotopy; // arc inside the region forbids plain isotopy
    CHECK_THROWS_AS(apply_move(annulus, d, m), PreconditionFailed);
}

TEST_CASE("same-edge wrap keeps only the chord between the cut points") {
    LabelledDiagram tri;
    tri.vertices = {pt("1/5", "3/5"), pt("4/5", "3/5"), pt("1/2", "9/10")};
    Move m = mk(MoveKind::PlanarIsotopy, 0, "3/4", 0, "1/4",
                {pt("13/20", "13/20"), pt("7/20", "13/20")});
    MoveResult r = apply_move(annulus, tri, m);
    REQUIRE(r.diagram.vertices.size() == 4);
    CHECK(r.diagram.vertices[0] == pt("7/20", "3/5"));
    CHECK(r.diagram.vertices[1] == pt("13/20", "3/5"));
}

TEST_CASE("cut point bookkeeping is validated") {
    LabelledDiagram d = core_rectangle();
    CHECK_THROWS_AS(apply_move(annulus, d,
                               mk(MoveKind::PlanarIsotopy, 0, "0", 0, "1/2", {pt("1", "1")})),
                    PreconditionFailed);
    CHECK_THROWS_AS(apply_move(annulus, d,
                               mk(MoveKind::PlanarIsotopy, 9, "1/2", 0, "1/2", {pt("1", "1")})),
                    PreconditionFailed);
    CHECK_THROWS_AS(apply_move(annulus, d,
                               mk(MoveKind::PlanarIsotopy, 1, "1/2", 1, "1/2", {pt("1", "1")})),
                    PreconditionFailed);
    // (1, -1/2) sits on splitting arc 0
    CHECK_THROWS_AS(apply_move(annulus, d,
                               mk(MoveKind::PlanarIsotopy, 0, "1/4", 0, "1/2", {pt("1", "0/1")})),
                    PreconditionFailed);
    // (3/2, 0) is the figure-eight crossing
    CHECK_THROWS_AS(apply_move(annulus, figure_eight(),
                               mk(MoveKind::PlanarIsotopy, 0, "1/2", 1, "1/2", {pt("1", "1/2")})),
                    PreconditionFailed);
}

TEST_CASE("t2 slides an arc across a branch point fixing its label") {
    LabelledDiagram sq;
    sq.vertices = {pt("3/4", "1/4"), pt("5/4", "1/4"), pt("5/4", "3/4"), pt("3/4", "3/4")};
    sq.base_label = 3; // (1 2) fixes 3
    Move m = mk(MoveKind::T2, 3, "1/2", 1, "1/2", {pt("7/10", "-1/4"), pt("13/10", "-1/4")}, 0);
    MoveResult r = apply_move(disk3, sq, m);
    DiagramLabelling lab = validate_diagram(r.diagram, disk3);
    CHECK(lab.transits.size() == 1);
    CHECK(lab.transits[0].label_before == 3);
    CHECK(lab.transits[0].label_after == 3);
    CHECK(homology_class(r.diagram, disk3).is_zero());

    // a label moved by the transposition cannot slide across
    sq.base_label = 1;
    CHECK_THROWS_AS(apply_move(disk3, sq, m), DomainError);
}

TEST_CASE("t3 opens a bigon and t3inv closes it again") {
    LabelledDiagram d = core_rectangle();
    Move open = mk(MoveKind::T3, 2, "3/10", 2, "7/10", {pt("19/10", "-3/4"), pt("11/10", "-3/4")});
    MoveResult r = apply_move(annulus, d, open);
    DiagramLabelling lab = validate_diagram(r.diagram, annulus);
    REQUIRE(lab.crossings.size() == 2);
    CHECK(lab.crossings[0].label_a != lab.crossings[0].label_b);
    CHECK(homology_class(r.diagram, annulus).coefficients == std::vector<long>{1, -1});

    Move close = mk(MoveKind::T3inv, 5, "1/5", 7, "4/5", {});
    MoveResult r2 = apply_move(annulus, r.diagram, close);
    CHECK(validate_diagram(r2.diagram, annulus).crossings.empty());
    CHECK(homology_class(r2.diagram, annulus).coefficients == std::vector<long>{1, -1});

    // undoing with the wrong kind fails the chord count
    Move wrong = close;
    wrong.kind = MoveKind::T3;
    CHECK_THROWS_AS(apply_move(annulus, r.diagram, wrong), PreconditionFailed);
}

TEST_CASE("t3 bigon between same-label arcs is rejected") {
    LabelledDiagram d = core_rectangle();
    // right of both branch points the bottom edge carries label 1 again
    Move m = mk(MoveKind::T3, 2, "1/20", 2, "1/5", {pt("12/5", "-3/4"), pt("21/10", "-3/4")});
    CHECK_THROWS_AS(apply_move(annulus, d, m), SameLabelCrossing);
}

TEST_CASE("t1inv removes a kink and t1 recreates one") {
    LabelledDiagram d = figure_eight();
    REQUIRE(validate_diagram(d, annulus).crossings.size() == 1);

    Move rem = mk(MoveKind::T1inv, 0, "1/4", 2, "3/4", {pt("3/8", "15/16"), pt("3/8", "-15/16")}, 0);
    MoveResult r = apply_move(annulus, d, rem);
    CHECK(validate_diagram(r.diagram, annulus).crossings.empty());
    CHECK(homology_class(r.diagram, annulus).coefficients == std::vector<long>{1, -1});
    REQUIRE(r.diagram.vertices.size() == 6);
    CHECK(r.diagram.vertices[0] == pt("15/8", "-3/8"));

    // wind a new loop around branch 0 from the embedded curve
    Move add = mk(MoveKind::T1, 3, "1/4", 5, "1/2",
                  {pt("5/8", "-5/8"), pt("5/8", "3/8"), pt("21/16", "3/8")}, 0);
    MoveResult r2 = apply_move(annulus, r.diagram, add);
    DiagramLabelling lab2 = validate_diagram(r2.diagram, annulus);
    REQUIRE(lab2.crossings.size() == 1);
    CHECK(lab2.crossings[0].label_a != lab2.crossings[0].label_b);
    CHECK(homology_class(r2.diagram, annulus).coefficients == std::vector<long>{1, -1});

    // the kinked side must hold exactly one self-crossing
    Move flat = mk(MoveKind::T1, 3, "1/4", 5, "1/2", {pt("5/8", "-1/8")}, 0);
    CHECK_THROWS_AS(apply_move(annulus, r.diagram, flat), DomainError);
    // and T1inv demands the crossing on the removed side
    Move nokink = mk(MoveKind::T1inv, 3, "1/4", 5, "1/2", {pt("5/8", "-1/8")}, 0);
    CHECK_THROWS_AS(apply_move(annulus, r.diagram, nokink), PreconditionFailed);
}

// one closed curve on the 3-sheet cover with three pairwise distinct labels
// meeting in a triangle: strands through the band x in [6/5, 9/5] carry
// labels 1, 2 and 3
static LabelledDiagram triangle_curve() {
    LabelledDiagram d;
    d.vertices = {pt("6/5", "-3/5"),   pt("9/5", "-2/5"),   pt("12/5", "-2/5"), pt("12/5", "1/2"),
                  pt("1/2", "1/2"),    pt("1/2", "-9/20"),  pt("6/5", "-2/5"),  pt("9/5", "-3/5"),
                  pt("11/5", "-3/5"),  pt("11/5", "1/5"),   pt("19/10", "1/5"), pt("19/10", "-11/20"),
                  pt("23/20", "-11/20"), pt("23/20", "-4/5"), pt("5/2", "-4/5"), pt("13/5", "13/20"),
                  pt("2/5", "13/20"),  pt("2/5", "-3/5")};
    return d;
}

TEST_CASE("t4 slides a strand across a crossing of two others") {
    LabelledDiagram d = triangle_curve();
    DiagramLabelling lab = validate_diagram(d, disk3);
    REQUIRE(lab.crossings.size() == 6);
    CHECK(homology_class(d, disk3).is_zero());

    // the label-3 strand on edge 11 moves from below the (1,2) crossing to above
    Move m = mk(MoveKind::T4, 11, "2/15", 11, "13/15", {pt("9/5", "-9/20"), pt("5/4", "-9/20")});
    MoveResult r = apply_move(disk3, d, m);
    DiagramLabelling lab2 = validate_diagram(r.diagram, disk3);
    CHECK(lab2.crossings.size() == 6);
    CHECK(homology_class(r.diagram, disk3).is_zero());

    // sliding away from the crossing leaves the chords uncrossed
    Move miss = mk(MoveKind::T4, 11, "2/15", 11, "13/15", {pt("17/10", "-7/10"), pt("13/10", "-7/10")});
    CHECK_THROWS_AS(apply_move(disk3, d, miss), PreconditionFailed);
}

TEST_CASE("stabilize adds a branch point without touching the diagram") {
    LabelledDiagram d = core_rectangle();
    Move m;
    m.kind = MoveKind::Stabilize;
    m.sheet = 1;
    m.position = pt("11/4", "0");
    MoveResult r = apply_move(annulus, d, m);
    CHECK(r.pres.degree == 3);
    REQUIRE(r.pres.branch_count() == 3);
    CHECK(r.pres.branches[2] == Transposition(1, 3));
    CHECK(r.pres.branch_position(2) == pt("11/4", "0"));
    CHECK(r.diagram.vertices == d.vertices);
    HomologyClass h = homology_class(r.diagram, r.pres);
    CHECK(h.coefficients == std::vector<long>{1, -1, 0});
}

TEST_CASE("stabilize may cross the diagram only at fixed labels") {
    LabelledDiagram d = core_rectangle();
    Move m;
    m.kind = MoveKind::Stabilize;
    m.position = pt("3/2", "0");
    m.sheet = 1; // bottom edge carries label 2 at x = 3/2, fixed by (1 3)
    MoveResult r = apply_move(annulus, d, m);
    DiagramLabelling lab = validate_diagram(r.diagram, r.pres);
    CHECK(lab.transits.size() == 3);
    CHECK(lab.transits[1].label_before == 2);
    CHECK(lab.transits[1].label_after == 2);

    m.sheet = 2; // (2 3) would relabel the crossed piece
    CHECK_THROWS_AS(apply_move(annulus, d, m), PreconditionFailed);
}

TEST_CASE("traces replay and detect tampering") {
    MoveTrace trace;
    trace.initial_pres = annulus;
    trace.initial_diagram = core_rectangle();

    CoverPresentation pres = annulus;
    LabelledDiagram d = core_rectangle();
    auto record = [&](const Move &m) {
        MoveResult r = apply_move(pres, d, m);
        trace.steps.push_back({m, diagram_hash(r.diagram), r.pres.degree, r.pres.branch_count()});
        pres = r.pres;
        d = r.diagram;
    };
    record(mk(MoveKind::T3, 2, "3/10", 2, "7/10", {pt("19/10", "-3/4"), pt("11/10", "-3/4")}));
    record(mk(MoveKind::T3inv, 5, "1/5", 7, "4/5", {}));
    Move stab;
    stab.kind = MoveKind::Stabilize;
    stab.sheet = 1;
    stab.position = pt("11/4", "0");
    record(stab);

    ReplayResult ok = replay(trace);
    CHECK(ok.ok);

    MoveTrace bad = trace;
    bad.steps[1].diagram_hash ^= 1;
    ReplayResult fail = replay(bad);
    CHECK(!fail.ok);
    CHECK(fail.failing_step == 1);
    CHECK(fail.reason == "diagram hash mismatch");

    MoveTrace badmove = trace;
    badmove.steps[0].move.kind = MoveKind::PlanarIsotopy;
    ReplayResult fail2 = replay(badmove);
    CHECK(!fail2.ok);
    CHECK(fail2.failing_step == 0);

    // round trip through json preserves replayability
    MoveTrace back = trace_from_json(to_json(trace));
    CHECK(replay(back).ok);
    CHECK(to_json(back).dump() == to_json(trace).dump());
}

TEST_CASE("move kind names and json round trip") {
    for (MoveKind k : {MoveKind::T1, MoveKind::T1inv, MoveKind::T2, MoveKind::T3, MoveKind::T3inv,
                       MoveKind::T4, MoveKind::RSlide, MoveKind::Stabilize, MoveKind::PlanarIsotopy})
        CHECK(move_kind_from_name(move_kind_name(k)) == k);
    CHECK_THROWS_AS(move_kind_from_name("T9"), DomainError);

    Move m = mk(MoveKind::T2, 3, "1/2", 1, "1/3", {pt("22/7", "-1/3")}, 1);
    Move back = move_from_json(to_json(m));
    CHECK(back.kind == MoveKind::T2);
    CHECK(back.from.edge == 3);
    CHECK(back.from.t == rat_parse("1/2"));
    CHECK(back.to.t == rat_parse("1/3"));
    CHECK(back.replacement == m.replacement);
    CHECK(back.branch == 1);

    Move stab;
    stab.kind = MoveKind::Stabilize;
    stab.sheet = 2;
    stab.position = pt("5/2", "0");
    Move back2 = move_from_json(to_json(stab));
    CHECK(back2.kind == MoveKind::Stabilize);
    CHECK(back2.sheet == 2);
    CHECK(back2.position == stab.position);
}
