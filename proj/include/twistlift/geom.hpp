#pragma once

#include "twistlift/rational.hpp"

#include <optional>
#include <vector>

namespace twistlift {

struct Pt {
    Rat x, y;
    Pt() : x(0), y(0) {}
    Pt(Rat px, Rat py) : x(std::move(px)), y(std::move(py)) {}
    bool operator==(const Pt &o) const { return x == o.x && y == o.y; }
    bool operator!=(const Pt &o) const { return !(*this == o); }
};

inline Pt operator+(const Pt &a, const Pt &b) { return {a.x + b.x, a.y + b.y}; }
inline Pt operator-(const Pt &a, const Pt &b) { return {a.x - b.x, a.y - b.y}; }
inline Pt operator*(const Rat &s, const Pt &a) { return {s * a.x, s * a.y}; }

// Lexicographic (x, y) order, used for all deterministic tie-breaks.
inline bool lex_less(const Pt &a, const Pt &b) {
    int c = cmp(a.x, b.x);
    if (c != 0) return c < 0;
    return a.y < b.y;
}

inline Rat cross(const Pt &o, const Pt &a, const Pt &b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Sign of the turn o->a->b: +1 left, -1 right, 0 collinear.
inline int orient(const Pt &o, const Pt &a, const Pt &b) {
    return sgn(cross(o, a, b));
}

struct Seg {
    Pt a, b;
    Seg() = default;
    Seg(Pt pa, Pt pb) : a(std::move(pa)), b(std::move(pb)) {}
};

bool on_segment(const Pt &p, const Seg &s);          // includes endpoints
bool on_open_segment(const Pt &p, const Seg &s);     // excludes endpoints

enum class SegXKind { None, Point, Overlap };

struct SegX {
    SegXKind kind = SegXKind::None;
    Pt point; // valid when kind == Point
};

// Exact intersection of two closed segments.
SegX intersect(const Seg &s, const Seg &t);

// True if the segments cross transversally at a single interior point of both.
bool proper_crossing(const Seg &s, const Seg &t);

// Winding number of a closed polyline around p; p must avoid the polyline.
long winding_number(const std::vector<Pt> &poly, const Pt &p);

// Even-odd test against a closed walk (vertices in order, implicitly closed).
// p must not lie on the walk.
bool point_in_walk(const std::vector<Pt> &walk, const Pt &p);

bool point_on_polyline(const std::vector<Pt> &poly, const Pt &p, bool closed);

// True if the polyline (open) has no self-intersections.
bool polyline_simple(const std::vector<Pt> &poly, bool closed);

// Squared-distance comparison helper: dist2(p, seg) as a rational.
Rat dist2_point_seg(const Pt &p, const Seg &s);

Rat dist2(const Pt &a, const Pt &b);

// Intersection of two lines given by point + direction; nullopt if parallel.
std::optional<Pt> line_intersect(const Pt &p, const Pt &dp, const Pt &q, const Pt &dq);

// Drops collinear interior vertices and exact duplicates.
std::vector<Pt> simplify_polyline(std::vector<Pt> poly, bool closed);

} // namespace twistlift
