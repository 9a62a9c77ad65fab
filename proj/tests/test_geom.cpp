#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "twistlift/geom.hpp"

using namespace twistlift;

static Pt P(long x, long y) { return Pt(Rat(x), Rat(y)); }

TEST_CASE("segment intersection basics") {
    Seg a(P(0, 0), P(2, 2));
    Seg b(P(0, 2), P(2, 0));
    SegX x = intersect(a, b);
    REQUIRE(x.kind == SegXKind::Point);
    CHECK(x.point == Pt(Rat(1), Rat(1)));
    CHECK(proper_crossing(a, b));

    Seg c(P(0, 1), P(1, 1));
    CHECK(intersect(a, c).kind == SegXKind::Point);
    CHECK(!proper_crossing(a, c)); // touches at an endpoint of c

    Seg d(P(3, 3), P(4, 4));
    CHECK(intersect(a, d).kind == SegXKind::None);

    Seg e(P(1, 1), P(3, 3));
    CHECK(intersect(a, e).kind == SegXKind::Overlap);
}

TEST_CASE("rational intersection point is exact") {
    Seg a(P(0, 0), P(3, 1));
    Seg b(P(0, 1), P(3, 0));
    SegX x = intersect(a, b);
    REQUIRE(x.kind == SegXKind::Point);
    CHECK(x.point.x == Rat(3, 2));
    CHECK(x.point.y == Rat(1, 2));
}

TEST_CASE("winding and point-in-walk") {
    std::vector<Pt> sq = {P(0, 0), P(4, 0), P(4, 4), P(0, 4)};
    CHECK(winding_number(sq, P(1, 1)) == 1);
    CHECK(winding_number(sq, P(5, 5)) == 0);
    CHECK(point_in_walk(sq, P(1, 1)));
    CHECK(!point_in_walk(sq, P(5, 1)));

    std::vector<Pt> rev(sq.rbegin(), sq.rend());
    CHECK(winding_number(rev, P(1, 1)) == -1);
}

TEST_CASE("polyline simplicity") {
    CHECK(polyline_simple({P(0, 0), P(1, 0), P(1, 1), P(0, 1)}, true));
    CHECK(!polyline_simple({P(0, 0), P(2, 2), P(2, 0), P(0, 2)}, true));
    CHECK(polyline_simple({P(0, 0), P(1, 0), P(2, 0)}, false));
}

TEST_CASE("simplify_polyline drops collinear interior points") {
    auto out = simplify_polyline({P(0, 0), P(1, 0), P(2, 0), P(2, 2), P(0, 2)}, true);
    CHECK(out.size() == 4);
    out = simplify_polyline({P(0, 0), P(0, 0), P(1, 1)}, false);
    CHECK(out.size() == 2);
}
