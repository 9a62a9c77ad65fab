#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "twistlift/arrange.hpp"
#include "twistlift/diagram.hpp"

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

// rectangle around both branch points of the annulus cover
static LabelledDiagram core_rectangle() {
    LabelledDiagram d;
    d.vertices = {pt("1/2", "-1/2"), pt("5/2", "-1/2"), pt("5/2", "1/2"), pt("1/2", "1/2")};
    return d;
}

// two lobes joined at (3/2, 0): left around branch 0, right around branch 1
static LabelledDiagram figure_eight() {
    LabelledDiagram d;
    d.vertices = {pt("9/4", "3/4"), pt("3/4", "-3/4"), pt("3/4", "3/4"), pt("9/4", "-3/4")};
    return d;
}

TEST_CASE("annulus core curve labels and crossing word") {
    LabelledDiagram d = core_rectangle();
    DiagramLabelling lab = validate_diagram(d, annulus);
    REQUIRE(lab.transits.size() == 2);
    CHECK(lab.transits[0].branch == 0);
    CHECK(lab.transits[0].left_to_right);
    CHECK(lab.transits[0].label_before == 1);
    CHECK(lab.transits[0].label_after == 2);
    CHECK(lab.transits[1].branch == 1);
    CHECK(lab.transits[1].label_after == 1);
    CHECK(lab.crossings.empty());

    CrossingWord w = crossing_word(d, annulus);
    CHECK(w.entries == std::vector<std::pair<int, bool>>{{0, true}, {1, true}});

    HomologyClass h = homology_class(d, annulus);
    CHECK(h.coefficients == std::vector<long>{1, -1});
    CHECK(is_homologically_nontrivial(d, annulus));
}

TEST_CASE("base edge shift rotates the crossing word") {
    LabelledDiagram d = core_rectangle();
    d.base_edge = 2; // top edge, crosses nothing; transits still start from it
    DiagramLabelling lab = validate_diagram(d, annulus);
    REQUIRE(lab.transits.size() == 2);
    CHECK(lab.transits[0].branch == 0); // wraps around to edge 0
    // both transits sit on edge 0, so every edge starts on sheet 1
    CHECK(lab.edge_start_label == std::vector<int>{1, 1, 1, 1});
    CHECK(lab.label_at(0, rat_parse("1/2")) == 2); // between the two transits
}

TEST_CASE("label closure failure around a single branch point") {
    LabelledDiagram d;
    d.vertices = {pt("1/2", "-1/2"), pt("3/2", "-1/2"), pt("3/2", "1/2"), pt("1/2", "1/2")};
    CHECK_THROWS_AS(validate_diagram(d, annulus), LabelClosureFailure);
}

TEST_CASE("back-and-forth transit cancels in homology") {
    LabelledDiagram d;
    d.vertices = {pt("3/4", "-3/4"), pt("5/4", "-3/4"), pt("5/4", "-1/4"), pt("3/4", "-1/4")};
    CrossingWord w = crossing_word(d, annulus);
    CHECK(w.entries == std::vector<std::pair<int, bool>>{{0, true}, {0, false}});
    CHECK(!is_homologically_nontrivial(d, annulus));
}

TEST_CASE("loop away from all arcs is trivial") {
    LabelledDiagram d;
    d.vertices = {pt("1/4", "1/4"), pt("3/4", "1/4"), pt("1/2", "3/4")};
    CHECK(crossing_word(d, annulus).entries.empty());
    CHECK(!is_homologically_nontrivial(d, annulus));
}

TEST_CASE("same-label crossing is rejected") {
    LabelledDiagram d;
    d.vertices = {pt("1/5", "1/5"), pt("4/5", "4/5"), pt("4/5", "1/5"), pt("1/5", "4/5")};
    CHECK_THROWS_AS(validate_diagram(d, annulus), SameLabelCrossing);
}

TEST_CASE("figure eight has one valid crossing with distinct labels") {
    LabelledDiagram d = figure_eight();
    DiagramLabelling lab = validate_diagram(d, annulus);
    REQUIRE(lab.crossings.size() == 1);
    CHECK(lab.crossings[0].point == pt("3/2", "0"));
    CHECK(lab.crossings[0].label_a != lab.crossings[0].label_b);
    HomologyClass h = homology_class(d, annulus);
    CHECK(h.coefficients == std::vector<long>{1, -1});
}

TEST_CASE("genericity rejections") {
    CoverPresentation pres = annulus;
    LabelledDiagram d;
    // vertex on a splitting arc
    d.vertices = {pt("1", "-1/2"), pt("2", "-1/2"), pt("3/2", "1/2")};
    CHECK_THROWS_AS(validate_diagram(d, pres), NotGeneric);
    // passes through a branch point
    d.vertices = {pt("1/2", "-1/2"), pt("3/2", "1/2"), pt("1/2", "1/2")};
    CHECK_THROWS_AS(validate_diagram(d, pres), NotGeneric); // (1,0) on first edge
    // edge collinear with a splitting arc
    d.vertices = {pt("1", "-1/4"), pt("1", "-3/4"), pt("1/2", "-1/2")};
    CHECK_THROWS_AS(validate_diagram(d, pres), NotGeneric);
    // leaves the rectangle
    d.vertices = {pt("-1/2", "1/2"), pt("1/2", "1/2"), pt("1/2", "-1/2")};
    CHECK_THROWS_AS(validate_diagram(d, pres), NotGeneric);
    // non-transverse self-touch: vertex of one edge interior to another
    d.vertices = {pt("1/4", "1/4"), pt("3/4", "1/4"), pt("3/4", "3/4"), pt("1/2", "1/4"),
                  pt("1/4", "3/4")};
    CHECK_THROWS_AS(validate_diagram(d, pres), NotGeneric);
}

TEST_CASE("base indices are range checked") {
    LabelledDiagram d = core_rectangle();
    d.base_label = 3;
    CHECK_THROWS_AS(validate_diagram(d, annulus), IndexOutOfRange);
    d.base_label = 1;
    d.base_edge = 4;
    CHECK_THROWS_AS(validate_diagram(d, annulus), IndexOutOfRange);
}

TEST_CASE("faces of the embedded core curve") {
    FaceDecomposition fd = faces(core_rectangle(), annulus);
    CHECK(fd.crossings == 0);
    REQUIRE(fd.faces.size() == 2);
    int bounded = fd.outer_id == 0 ? 1 : 0;
    CHECK(fd.faces[size_t(bounded)].arity == 0);
    CHECK(fd.faces[size_t(bounded)].branch_points == std::vector<int>{0, 1});
    CHECK(fd.outer().branch_points.empty());
    CHECK(fd.onegons() == 0);
}

TEST_CASE("faces of the figure eight") {
    FaceDecomposition fd = faces(figure_eight(), annulus);
    CHECK(fd.crossings == 1);
    REQUIRE(fd.faces.size() == 3);
    int lobes = 0;
    for (const FaceInfo &f : fd.faces) {
        if (f.outer) {
            CHECK(f.branch_points.empty());
            continue;
        }
        ++lobes;
        CHECK(f.arity == 1);
        REQUIRE(f.branch_points.size() == 1);
    }
    CHECK(lobes == 2);
    CHECK(fd.onegons() == 2);

    auto og = find_innermost_onegon(figure_eight(), annulus);
    REQUIRE(og.has_value());
    CHECK(fd.faces[size_t(*og)].arity == 1);

    CHECK(!find_innermost_onegon(core_rectangle(), annulus).has_value());
}

TEST_CASE("arrangement satisfies the Euler formula") {
    LabelledDiagram d = figure_eight();
    std::vector<Arrangement::Input> inputs;
    for (size_t i = 0; i < d.edge_count(); ++i) inputs.push_back({d.edge(i), 0});
    for (int k = 0; k < annulus.branch_count(); ++k)
        inputs.push_back({annulus.splitting_arc(k), 1});
    Arrangement arr = Arrangement::build(inputs);
    long V = long(arr.verts().size());
    long E = long(arr.edges().size());
    long F = long(arr.faces().size());
    CHECK(V == 11);
    CHECK(E == 12);
    CHECK(V - E + F == 2);

    // interior points land back in their own faces
    for (size_t f = 0; f < arr.faces().size(); ++f) {
        if (int(f) == arr.outer_face()) continue;
        if (arr.faces()[f].outer) continue;
        Pt p = face_interior_point(arr, int(f));
        CHECK(arr.face_containing(p) == int(f));
    }
}

TEST_CASE("lift of the straight annulus arc closes up") {
    ArcDiagram a;
    a.vertices = {pt("1", "0"), pt("2", "0")};
    LiftedArc lifted = lift_arc(a, annulus);
    CHECK(lifted.has_closed);
    REQUIRE(lifted.components.size() == 1);
    CHECK(lifted.components[0].closed);
    CHECK(lifted.components[0].strands == std::vector<int>{1, 2});
    REQUIRE(lifted.closed_diagram.has_value());

    const LabelledDiagram &c = *lifted.closed_diagram;
    DiagramLabelling lab = validate_diagram(c, annulus);
    CHECK(lab.crossings.empty());
    HomologyClass h = homology_class(c, annulus);
    REQUIRE(h.coefficients.size() == 2);
    CHECK(h.coefficients[0] + h.coefficients[1] == 0);
    CHECK(std::abs(h.coefficients[0]) == 1);
    CHECK(point_in_walk(c.vertices, pt("1", "0")));
    CHECK(point_in_walk(c.vertices, pt("2", "0")));
}

TEST_CASE("lift of a bent arc still closes up") {
    ArcDiagram a;
    a.vertices = {pt("1", "0"), pt("3/2", "1/2"), pt("2", "0")};
    LiftedArc lifted = lift_arc(a, annulus);
    CHECK(lifted.has_closed);
    REQUIRE(lifted.closed_diagram.has_value());
    CHECK(is_homologically_nontrivial(*lifted.closed_diagram, annulus));
}

TEST_CASE("lift with mismatched endpoint monodromies stays open") {
    ArcDiagram a;
    a.vertices = {pt("1", "0"), pt("2", "0")};
    LiftedArc lifted = lift_arc(a, disk3);
    CHECK(!lifted.has_closed);
    CHECK(!lifted.closed_diagram.has_value());
    REQUIRE(lifted.components.size() == 1);
    CHECK(lifted.components[0].strands == std::vector<int>{1, 2, 3});
    CHECK(!lifted.components[0].closed);
}

TEST_CASE("lift endpoint transport accounts for transits") {
    // arc from branch 0 dips across splitting arc 1 and back before ending
    // on branch 1; the conjugated monodromies still match on the annulus
    ArcDiagram a;
    a.vertices = {pt("1", "0"), pt("3/2", "-1/2"), pt("9/4", "-1/2"), pt("9/4", "-1/4"),
                  pt("2", "0")};
    LiftedArc lifted = lift_arc(a, annulus);
    CHECK(lifted.has_closed);

    ArcDiagram bad;
    bad.vertices = {pt("1/2", "1/2"), pt("2", "0")};
    CHECK_THROWS_AS(lift_arc(bad, annulus), PreconditionFailed);
}

TEST_CASE("diagram json round trip is bit exact") {
    LabelledDiagram d = figure_eight();
    d.base_edge = 1;
    d.base_label = 2;
    LabelledDiagram back = diagram_from_json(to_json(d));
    CHECK(back.vertices == d.vertices);
    CHECK(back.base_edge == 1);
    CHECK(back.base_label == 2);

    ArcDiagram a;
    a.vertices = {pt("1", "0"), pt("22/7", "-1/3")};
    CHECK(arc_from_json(to_json(a)).vertices == a.vertices);
}
