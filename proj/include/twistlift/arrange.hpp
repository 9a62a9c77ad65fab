#pragma once

#include "twistlift/geom.hpp"

#include <map>
#include <optional>
#include <vector>

namespace twistlift {

// Exact planar subdivision of a set of tagged segments. Input segments may
// meet only at single points (overlaps must be excluded beforehand).
class Arrangement {
public:
    struct Input {
        Seg seg;
        int curve; // caller-chosen tag, e.g. 0 = diagram, 1 = splitting arcs
    };

    struct Edge {
        int u, v;     // vertex ids, u < v not guaranteed
        int curve;    // tag inherited from the input segment
        int input;    // input segment id
    };

    struct Face {
        std::vector<int> half_edges; // interior on the left of each half edge
        std::vector<int> walk_verts; // vertex ids along the boundary walk
        bool outer = false;
    };

    static Arrangement build(const std::vector<Input> &segments);

    const std::vector<Pt> &verts() const { return verts_; }
    const std::vector<Edge> &edges() const { return edges_; }
    const std::vector<Face> &faces() const { return faces_; }
    int outer_face() const { return outer_face_; }

    int degree(int v) const { return int(out_[size_t(v)].size()); }

    // Vertex lies in the interior of at least two input segments of the
    // given tag (a transverse crossing of that curve with itself).
    bool is_self_crossing(int v, int curve) const;

    // Vertex lies in the interior of input segments of two distinct tags.
    bool is_cross_curve_crossing(int v, int curve_a, int curve_b) const;

    std::vector<Pt> face_polygon(int f) const;

    // Bounded face containing p (by even-odd test on its walk); p must not
    // lie on any edge. Returns outer face id if no bounded face contains it.
    int face_containing(const Pt &p) const;

    // Number of corners of the face walk at self-crossings of `curve`.
    int face_arity(int f, int curve) const;

    std::vector<int> face_neighbors(int f) const;

    int half_edge_from(int he) const { return he % 2 == 0 ? edges_[size_t(he / 2)].u : edges_[size_t(he / 2)].v; }
    int half_edge_to(int he) const { return he % 2 == 0 ? edges_[size_t(he / 2)].v : edges_[size_t(he / 2)].u; }
    int face_of_half_edge(int he) const { return he_face_[size_t(he)]; }

private:
    std::vector<Pt> face_polygon_of(const Face &f) const;

    std::vector<Pt> verts_;
    std::vector<int> input_curve_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> out_; // per vertex: outgoing half-edge ids, CCW
    std::vector<Face> faces_;
    std::vector<int> he_face_;
    std::vector<std::vector<std::pair<int, bool>>> vert_incidence_; // (input id, interior?)
    int outer_face_ = -1;
};

// A point strictly inside face f, off every edge; found by nudging a
// half-edge midpoint leftwards with a shrinking offset.
Pt face_interior_point(const Arrangement &arr, int f);

} // namespace twistlift
