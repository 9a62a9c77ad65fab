#include "twistlift/cover.hpp"

#include <numeric>
#include <map>

namespace twistlift {

Rat CoverPresentation::rect_width() const {
    Rat w(branch_count() + 1);
    if (positions) {
        for (const Pt &p : *positions)
            if (p.x + 1 > w) w = p.x + 1;
    }
    return w;
}

bool CoverPresentation::all_on_axis() const {
    if (!positions) return true;
    for (const Pt &p : *positions)
        if (sgn(p.y) != 0) return false;
    return true;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

} // namespace

CoverValidation validate_cover(const CoverPresentation &pres, bool demand_connected) {
    CoverValidation v;
    if (pres.degree < 1) {
        v.ok = false;
        v.errors.push_back("degree must be positive");
        return v;
    }
    for (int k = 0; k < pres.branch_count(); ++k) {
        const Transposition &t = pres.branches[size_t(k)];
        if (t.low < 1 || t.high > pres.degree || t.low >= t.high) {
            v.ok = false;
            v.errors.push_back("branch " + std::to_string(k) + ": sheet indices out of 1.." +
                               std::to_string(pres.degree));
        }
    }
    if (pres.positions) {
        if (int(pres.positions->size()) != pres.branch_count()) {
            v.ok = false;
            v.errors.push_back("positions list length differs from branch count");
        } else {
            for (size_t i = 0; i < pres.positions->size(); ++i) {
                const Pt &p = (*pres.positions)[i];
                if (sgn(p.x) <= 0 || p.x >= pres.rect_width() || cmp(p.y, Rat(-1)) <= 0 ||
                    cmp(p.y, Rat(1)) >= 0) {
                    v.ok = false;
                    v.errors.push_back("branch position " + std::to_string(i) + " not interior to the disk");
                }
                for (size_t j = i + 1; j < pres.positions->size(); ++j)
                    if ((*pres.positions)[i].x == (*pres.positions)[j].x) {
                        v.ok = false;
                        v.errors.push_back("branch positions " + std::to_string(i) + "," + std::to_string(j) +
                                           " share an x coordinate (splitting arcs would overlap)");
                    }
            }
        }
    }
    if (!v.ok) return v;

    UnionFind uf(pres.degree + 1);
    for (const Transposition &t : pres.branches) uf.unite(t.low, t.high);
    std::map<int, std::vector<int>> orbit_map;
    for (int s = 1; s <= pres.degree; ++s) orbit_map[uf.find(s)].push_back(s);
    v.transitive = orbit_map.size() == 1;
    if (!v.transitive) {
        for (auto &[root, members] : orbit_map) v.orbits.push_back(members);
        if (demand_connected) {
            v.ok = false;
            v.errors.push_back("monodromy group is not transitive");
        }
    }
    return v;
}

int euler_characteristic(const CoverPresentation &pres) {
    return pres.degree - pres.branch_count();
}

std::vector<int> boundary_components(const CoverPresentation &pres) {
    Perm total(pres.degree);
    for (const Transposition &t : pres.branches)
        total = total.then(t.as_perm(pres.degree));
    return total.cycle_type();
}

int genus(const CoverPresentation &pres) {
    int chi = euler_characteristic(pres);
    int b = int(boundary_components(pres).size());
    int num = 2 - b - chi;
    if (num < 0 || num % 2 != 0)
        throw InternalInvariant("genus parity violation: chi=" + std::to_string(chi) +
                                " b=" + std::to_string(b));
    return num / 2;
}

CoverPresentation stabilize(const CoverPresentation &pres, int sheet, std::optional<Pt> position) {
    if (sheet < 1 || sheet > pres.degree)
        throw IndexOutOfRange("stabilize: sheet " + std::to_string(sheet) + " not in 1.." +
                              std::to_string(pres.degree));
    CoverPresentation out = pres;
    out.degree += 1;
    out.branches.emplace_back(sheet, pres.degree + 1);
    if (position) {
        if (!out.positions) {
            out.positions.emplace();
            for (int k = 0; k < pres.branch_count(); ++k)
                out.positions->push_back(pres.branch_position(k));
        }
        out.positions->push_back(*position);
    } else if (out.positions) {
        out.positions->push_back(Pt(Rat(pres.branch_count() + 1), Rat(0)));
    }
    return out;
}

SpineGraph spine_graph(const CoverPresentation &pres) {
    SpineGraph g;
    g.vertex_count = pres.degree;
    for (const Transposition &t : pres.branches) g.edges.emplace_back(t.low, t.high);
    return g;
}

int spine_homology_rank(const CoverPresentation &pres) {
    return pres.branch_count() - pres.degree + 1;
}

bool equivalent_up_to_renumbering(const CoverPresentation &a, const CoverPresentation &b) {
    if (a.degree != b.degree || a.branch_count() != b.branch_count()) return false;
    // brute force over sheet renumberings; degrees stay small in practice
    std::vector<int> perm(size_t(a.degree));
    std::iota(perm.begin(), perm.end(), 1);
    do {
        bool match = true;
        for (int k = 0; k < a.branch_count() && match; ++k) {
            Transposition t(perm[size_t(a.branches[size_t(k)].low - 1)],
                            perm[size_t(a.branches[size_t(k)].high - 1)]);
            if (t != b.branches[size_t(k)]) match = false;
        }
        if (match) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

nlohmann::json to_json(const CoverPresentation &pres) {
    nlohmann::json j;
    j["degree"] = pres.degree;
    nlohmann::json br = nlohmann::json::array();
    for (const Transposition &t : pres.branches) br.push_back({t.low, t.high});
    j["branches"] = br;
    if (pres.positions) {
        nlohmann::json ps = nlohmann::json::array();
        for (const Pt &p : *pres.positions) ps.push_back({rat_str(p.x), rat_str(p.y)});
        j["positions"] = ps;
    }
    return j;
}

CoverPresentation cover_from_json(const nlohmann::json &j) {
    CoverPresentation pres;
    pres.degree = j.at("degree").get<int>();
    for (const auto &b : j.at("branches"))
        pres.branches.emplace_back(b.at(0).get<int>(), b.at(1).get<int>());
    if (j.contains("positions") && !j["positions"].is_null()) {
        pres.positions.emplace();
        for (const auto &p : j["positions"])
            pres.positions->emplace_back(rat_parse(p.at(0).get<std::string>()),
                                         rat_parse(p.at(1).get<std::string>()));
    }
    return pres;
}

} // namespace twistlift
