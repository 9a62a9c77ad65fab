#pragma once

#include "twistlift/cover.hpp"
#include "twistlift/geom.hpp"

#include <json.hpp>
#include <optional>
#include <vector>

namespace twistlift {

// Closed generic polyline in the interior of the rectangle, labelled by the
// sheet carried just after the start vertex of the base edge. Edge i runs
// vertices[i] -> vertices[(i+1) % size].
struct LabelledDiagram {
    std::vector<Pt> vertices;
    int base_edge = 0;
    int base_label = 1;

    size_t edge_count() const { return vertices.size(); }
    Seg edge(size_t i) const { return Seg(vertices[i], vertices[(i + 1) % vertices.size()]); }
};

// Open generic polyline; endpoints may sit on branch points or the boundary.
struct ArcDiagram {
    std::vector<Pt> vertices;

    size_t edge_count() const { return vertices.empty() ? 0 : vertices.size() - 1; }
    Seg edge(size_t i) const { return Seg(vertices[i], vertices[i + 1]); }
};

// One crossing of a splitting arc, in traversal order from the base point of
// the (closed or open) polyline. `t` parametrizes the crossing along edge
// `edge` counted from the traversal start, so transits sort by (edge, t).
struct Transit {
    int edge = 0;
    Rat t;
    Pt point;
    int branch = 0;        // 0-based branch index
    bool left_to_right = false;
    int label_before = 0;
    int label_after = 0;
};

struct Crossing {
    Pt point;
    int edge_a = 0, edge_b = 0; // edge_a earlier in traversal order
    Rat ta, tb;
    int label_a = 0, label_b = 0;
};

struct DiagramLabelling {
    std::vector<Transit> transits;     // traversal order
    std::vector<int> edge_start_label; // indexed by edge, in traversal order from base edge
    std::vector<Crossing> crossings;   // sorted by crossing point, lex
    int degree = 0;

    // Label of the piece of edge `e` at parameter `t` (t must avoid transits).
    int label_at(int edge, const Rat &t) const;
};

// Full genericity + labelling validation. Throws NotGeneric,
// LabelClosureFailure, SameLabelCrossing, IndexOutOfRange.
DiagramLabelling validate_diagram(const LabelledDiagram &d, const CoverPresentation &pres);

// Genericity of an open arc; endpoints listed in `branch_endpoints` are the
// branch points the arc is allowed (and then required) to end on.
void validate_arc(const ArcDiagram &a, const CoverPresentation &pres);

// Transits of an arc with a chosen starting label, labels propagated.
std::vector<Transit> arc_transits(const ArcDiagram &a, const CoverPresentation &pres,
                                  int start_label);

struct CrossingWord {
    std::vector<std::pair<int, bool>> entries; // (branch, left_to_right)
    bool operator==(const CrossingWord &o) const { return entries == o.entries; }
};

CrossingWord crossing_word(const LabelledDiagram &d, const CoverPresentation &pres);

// One coefficient per branch point: a transit whose labels run low -> high
// counts +1, high -> low counts -1, anything else 0.
HomologyClass homology_class(const LabelledDiagram &d, const CoverPresentation &pres);

bool is_homologically_nontrivial(const LabelledDiagram &d, const CoverPresentation &pres);

struct FaceInfo {
    int id = 0;
    bool outer = false;
    int arity = 0;                  // corners at diagram self-crossings
    std::vector<int> branch_points; // 0-based indices of branch points inside
    std::vector<Pt> polygon;        // boundary walk
    std::vector<int> neighbors;     // adjacent face ids
};

struct FaceDecomposition {
    std::vector<FaceInfo> faces;
    int outer_id = -1;
    int crossings = 0; // sigma(C)

    int onegons() const;
    const FaceInfo &outer() const { return faces[size_t(outer_id)]; }
};

FaceDecomposition faces(const LabelledDiagram &d, const CoverPresentation &pres);

// Bounded 1-gon face whose disk contains no other 1-gon face; ties broken by
// lex-least crossing coordinate on its walk.
std::optional<int> find_innermost_onegon(const LabelledDiagram &d, const CoverPresentation &pres);

struct LiftComponent {
    std::vector<int> strands; // lifts it passes through, by starting sheet
    bool closed = false;
};

struct LiftedArc {
    std::vector<LiftComponent> components;
    bool has_closed = false;
    std::optional<LabelledDiagram> closed_diagram; // neighborhood boundary of the arc
};

// Total lift of an arc with both endpoints at branch points. A closed
// component exists iff the endpoint monodromies agree after transporting one
// along the arc; its isotoped diagram is the boundary of a thin neighborhood
// of the arc, labelled compatibly.
LiftedArc lift_arc(const ArcDiagram &a, const CoverPresentation &pres);

nlohmann::json to_json(const LabelledDiagram &d);
LabelledDiagram diagram_from_json(const nlohmann::json &j);
nlohmann::json to_json(const ArcDiagram &a);
ArcDiagram arc_from_json(const nlohmann::json &j);

nlohmann::json to_json(const FaceDecomposition &f);

} // namespace twistlift
