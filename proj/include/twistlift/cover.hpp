#pragma once

#include "twistlift/errors.hpp"
#include "twistlift/geom.hpp"
#include "twistlift/perm.hpp"

#include <json.hpp>

#include <optional>
#include <vector>

namespace twistlift {

// Monodromy of one branch point; stored normalized low < high.
struct Transposition {
    int low = 1, high = 2;
    Transposition() = default;
    Transposition(int a, int b) : low(std::min(a, b)), high(std::max(a, b)) {}
    bool operator==(const Transposition &o) const { return low == o.low && high == o.high; }
    bool operator!=(const Transposition &o) const { return !(*this == o); }
    bool moves(int sheet) const { return sheet == low || sheet == high; }
    int apply(int sheet) const {
        if (sheet == low) return high;
        if (sheet == high) return low;
        return sheet;
    }
    Perm as_perm(int degree) const { return Perm::transposition(degree, low, high); }
};

// Combinatorial presentation of a simple branched covering F -> B^2:
// degree d sheets, one transposition per branch point. Branch point k
// (0-based) sits at (k+1, 0) unless explicit positions are given; its
// splitting arc runs straight down to the bottom boundary y = -1.
// The ambient rectangle is [0, n+1] x [-1, 1].
struct CoverPresentation {
    int degree = 2;
    std::vector<Transposition> branches;
    std::optional<std::vector<Pt>> positions;

    int branch_count() const { return int(branches.size()); }

    Pt branch_position(int k) const {
        if (positions) return (*positions)[size_t(k)];
        return Pt(Rat(k + 1), Rat(0));
    }

    Rat rect_width() const; // n+1, widened if custom positions stick out
    Seg splitting_arc(int k) const {
        Pt b = branch_position(k);
        return Seg(Pt(b.x, Rat(-1)), b);
    }

    bool all_on_axis() const;
};

struct CoverValidation {
    bool ok = true;
    bool transitive = true;
    std::vector<std::string> errors;
    std::vector<std::vector<int>> orbits; // witness partition when not transitive
};

// Index ranges always checked; transitivity reported (and demanded by
// callers that need a connected covering surface).
CoverValidation validate_cover(const CoverPresentation &pres, bool demand_connected = false);

int euler_characteristic(const CoverPresentation &pres);

// Cycle type (descending) of the product of all branch transpositions,
// leftmost applied first. One cycle per boundary component of F.
std::vector<int> boundary_components(const CoverPresentation &pres);

int genus(const CoverPresentation &pres);

CoverPresentation stabilize(const CoverPresentation &pres, int sheet,
                            std::optional<Pt> position = std::nullopt);

struct SpineGraph {
    int vertex_count = 0;                      // one vertex per sheet
    std::vector<std::pair<int, int>> edges;    // edge k = branch k, oriented low->high
};

SpineGraph spine_graph(const CoverPresentation &pres);

int spine_homology_rank(const CoverPresentation &pres);

struct HomologyClass {
    std::vector<long> coefficients; // one per branch point

    bool is_zero() const {
        for (long c : coefficients)
            if (c != 0) return false;
        return true;
    }
    bool operator==(const HomologyClass &o) const { return coefficients == o.coefficients; }
};

// Equality of presentations up to renumbering of the sheets; never
// applied silently anywhere else.
bool equivalent_up_to_renumbering(const CoverPresentation &a, const CoverPresentation &b);

nlohmann::json to_json(const CoverPresentation &pres);
CoverPresentation cover_from_json(const nlohmann::json &j);

} // namespace twistlift
