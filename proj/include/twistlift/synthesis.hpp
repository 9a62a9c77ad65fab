#pragma once

#include "twistlift/braid.hpp"
#include "twistlift/moves.hpp"

#include <json.hpp>
#include <optional>
#include <vector>

namespace twistlift {

// Embedded arc between two branch points, the sign of the half-twist around
// it, and the twist straightened into w sigma_k^sign w^{-1} form.
struct HalfTwistSpec {
    ArcDiagram arc;
    int sign = +1;
    HalfTwistWord word;
};

struct SynthesisStats {
    int stabilizations = 0;
    int moves = 0;
    int regions = 0; // faces of B^2 - C at input, outer face included
};

struct SynthesisResult {
    CoverPresentation final_pres;
    HalfTwistSpec halftwist;
    MoveTrace trace;
    SynthesisStats stats;
};

// What a pipeline stage leaves behind: the transformed cover and diagram,
// the trace steps it appended, and how often it stabilized.
struct StageResult {
    CoverPresentation pres;
    LabelledDiagram diagram;
    std::vector<MoveStep> steps;
    int stabilizations = 0;
};

struct TransverseArc {
    ArcDiagram arc;
    Pt meeting; // the single point where the arc crosses the diagram
};

// Full pipeline: arc preparation, singularity elimination, reduction of the
// inner face to two branch points, arc extraction, straightening. Rejects
// homologically trivial diagrams upfront.
SynthesisResult synthesize(const CoverPresentation &pres, const LabelledDiagram &d);

// Properly embedded arc meeting the diagram at exactly one point, with equal
// labels on both sides of the meeting point, and both closed halves embedded.
TransverseArc transverse_arc(const CoverPresentation &pres, const LabelledDiagram &d);

// Expels from face `face` every branch point with a pseudo-singular lift over
// the face, one T2 per expulsion; fixed point when no such branch remains.
StageResult t2_minimize(const CoverPresentation &pres, const LabelledDiagram &d, int face);

// Reduces the number of branch points in `face` to 1 when the face is a
// 1-gon, 0 otherwise, stabilizing when no expulsion label is available.
// Carrier polylines avoid `avoid` when given.
StageResult clear_region(const CoverPresentation &pres, const LabelledDiagram &d, int face,
                         const std::optional<ArcDiagram> &avoid = std::nullopt);

// Removes all self-crossings by induction on innermost 1-gons.
StageResult eliminate_singularities(const CoverPresentation &pres, const LabelledDiagram &d);

struct ExtractResult {
    StageResult stage;
    ArcDiagram arc;
    int sign = +1;
};

// Embedded case: reduce the inner face to exactly two branch points and
// return the arc joining them inside the closed face.
ExtractResult case1_extract(const CoverPresentation &pres, const LabelledDiagram &d);

// Expresses the half-twist around the arc as w sigma_k w^{-1}: the recorded
// letters, applied in order, carry the arc to the standard segment between
// the branch points k, k+1. Requires branch points on the axis, x-sorted.
HalfTwistWord straighten(const ArcDiagram &arc, const CoverPresentation &pres);

// Axis-crossing code of an embedded arc between punctures s and t (1-based):
// the side of the axis the arc takes leaving s (+1 above, -1 below) and the
// interval index 0..n of each axis crossing in traversal order. Reduced codes
// have no empty humps and no peelable first or last crossing.
struct ArcCode {
    int n = 0; // punctures
    int s = 1, t = 2;
    int side = +1;
    std::vector<int> word;

    bool operator==(const ArcCode &o) const {
        return n == o.n && s == o.s && t == o.t && side == o.side && word == o.word;
    }
    bool standard() const { return word.empty() && t == s + 1; }
};

ArcCode arc_code(const ArcDiagram &arc, const CoverPresentation &pres);

// Image of the code under the half-twist generator sigma_|g|^{sign g}
// (positive = counterclockwise, the left puncture passes below), reduced.
ArcCode apply_halftwist_gen(const ArcCode &a, int g);

HalfTwistWord straighten_code(const ArcCode &code);

nlohmann::json to_json(const HalfTwistSpec &h);
HalfTwistSpec halftwist_spec_from_json(const nlohmann::json &j);
nlohmann::json to_json(const SynthesisResult &r);
SynthesisResult synthesis_result_from_json(const nlohmann::json &j);

} // namespace twistlift
