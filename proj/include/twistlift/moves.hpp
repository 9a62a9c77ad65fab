#pragma once

#include "twistlift/diagram.hpp"

#include <json.hpp>
#include <string>
#include <vector>

namespace twistlift {

enum class MoveKind { T1, T1inv, T2, T3, T3inv, T4, RSlide, Stabilize, PlanarIsotopy };

std::string move_kind_name(MoveKind k);
MoveKind move_kind_from_name(const std::string &s);

// Point on the diagram: parameter t in (0,1) along edge `edge`.
struct PathLoc {
    int edge = 0;
    Rat t;
};

// Every geometric move replaces the traversal sub-path running forward from
// `from` to `to` by the polyline from -> replacement... -> to. The kind
// determines what the swept region between the old and new sub-paths may
// contain:
//   PlanarIsotopy  nothing: no branch points, no splitting arcs, no other arcs
//   RSlide         splitting arcs only (labels recomputed)
//   T2             exactly the branch point `branch`; sub-path labels must
//                  avoid its support
//   T3/T3inv       one chord of the rest of the diagram, crossing the new
//                  (resp. old) side twice
//   T4             two chords crossing each other once inside the region
//   T1/T1inv       the kinked side holds a loop around `branch` whose
//                  crossing labels equal the branch monodromy
// Stabilize ignores the replacement fields and adds branch (sheet, d+1) at
// `position`; the new splitting arc may cross the diagram only at labels
// fixed by the new transposition.
struct Move {
    MoveKind kind = MoveKind::PlanarIsotopy;
    PathLoc from, to;
    std::vector<Pt> replacement; // interior vertices of the new sub-path
    int branch = -1;             // T1/T1inv/T2
    int sheet = 0;               // Stabilize
    Pt position;                 // Stabilize
};

struct MoveResult {
    CoverPresentation pres;
    LabelledDiagram diagram;
};

MoveResult apply_move(const CoverPresentation &pres, const LabelledDiagram &d, const Move &m);

// Deterministic 64-bit content hash of a diagram (FNV-1a over the exact
// serialization), stable across runs and platforms.
uint64_t diagram_hash(const LabelledDiagram &d);

struct MoveStep {
    Move move;
    uint64_t diagram_hash = 0;
    int degree = 0;
    int branch_count = 0;
};

struct MoveTrace {
    CoverPresentation initial_pres;
    LabelledDiagram initial_diagram;
    std::vector<MoveStep> steps;
};

struct ReplayResult {
    bool ok = true;
    int failing_step = -1;
    std::string reason;
};

// Re-applies every move, checking preconditions, the recorded hashes, and
// homology preservation (zero-padded across Stabilize) at each step.
ReplayResult replay(const MoveTrace &trace);

nlohmann::json to_json(const Move &m);
Move move_from_json(const nlohmann::json &j);
nlohmann::json to_json(const MoveTrace &t);
MoveTrace trace_from_json(const nlohmann::json &j);

} // namespace twistlift
