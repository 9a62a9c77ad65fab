#pragma once

#include "twistlift/braid.hpp"

#include <json.hpp>
#include <string>
#include <vector>

namespace twistlift {

struct SynthesisResult; // synthesis.hpp
struct LabelledDiagram; // diagram.hpp

struct VerificationCheck {
    std::string name;
    bool pass = false;
    std::string witness;
};

struct VerificationReport {
    std::vector<VerificationCheck> checks;
    bool overall = true;

    void add(std::string name, bool pass, std::string witness = "") {
        overall = overall && pass;
        checks.push_back({std::move(name), pass, std::move(witness)});
    }
};

// Independent realization of the lifting criterion on transposition
// tuples: sigma_i replaces (t_i, t_{i+1}) by (t_i t_{i+1} t_i, t_i) and the
// braid lifts iff the branch tuple is fixed exactly. Deliberately shares no
// permutation or word code with the braid module.
bool hurwitz_liftable(const BraidWord &b, const CoverPresentation &pres);

// Exhaustive enumeration of liftable words up to maxLen with both
// liftability oracles; any disagreement is a hard failure. Guarded to
// n <= 5, maxLen <= 6.
std::vector<BraidWord> enumerate_liftable(const CoverPresentation &pres, int max_len);

// Serial reference for the OpenMP enumeration above; must produce the
// identical word list.
std::vector<BraidWord> enumerate_liftable_serial(const CoverPresentation &pres, int max_len);

VerificationReport verify_synthesis(const CoverPresentation &pres, const LabelledDiagram &diagram,
                                    const SynthesisResult &result);

nlohmann::json to_json(const VerificationReport &r);

} // namespace twistlift
