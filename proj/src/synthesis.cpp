#include "twistlift/synthesis.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace twistlift {

namespace {

using CodeKey = std::tuple<int, int, int, std::vector<int>>;

CodeKey code_key(const ArcCode &a) { return {a.s, a.t, a.side, a.word}; }

std::pair<size_t, int> code_complexity(const ArcCode &a) {
    return {a.word.size(), a.t - a.s};
}

// Free reduction (empty humps), head/tail peels (crossings in an interval
// adjacent to an endpoint swing around it), then orientation normalization.
void reduce_code(ArcCode &a) {
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<int> w;
        for (int c : a.word) {
            if (!w.empty() && w.back() == c) {
                w.pop_back();
                changed = true;
            } else {
                w.push_back(c);
            }
        }
        a.word = std::move(w);
        if (!a.word.empty() && (a.word.front() == a.s - 1 || a.word.front() == a.s)) {
            a.word.erase(a.word.begin());
            a.side = -a.side;
            changed = true;
            continue;
        }
        if (!a.word.empty() && (a.word.back() == a.t - 1 || a.word.back() == a.t)) {
            a.word.pop_back();
            changed = true;
        }
    }
    if (a.s > a.t) {
        int m = int(a.word.size());
        std::swap(a.s, a.t);
        std::reverse(a.word.begin(), a.word.end());
        if (m % 2 != 0) a.side = -a.side;
    }
    if (a.t == a.s + 1 && a.word.empty()) a.side = +1;
}

// Branch positions in x order; throws unless all sit on the axis, x-sorted.
std::vector<Rat> puncture_xs(const CoverPresentation &pres) {
    std::vector<Rat> xs;
    for (int k = 0; k < pres.branch_count(); ++k) {
        Pt b = pres.branch_position(k);
        if (sgn(b.y) != 0)
            throw NotNormalized("branch points must lie on the axis");
        if (!xs.empty() && !(xs.back() < b.x))
            throw NotNormalized("branch points must be x-sorted");
        xs.push_back(b.x);
    }
    return xs;
}

int interval_of(const std::vector<Rat> &xs, const Rat &x) {
    int idx = 0;
    for (const Rat &p : xs)
        if (p < x) ++idx;
    return idx;
}

} // namespace

ArcCode arc_code(const ArcDiagram &arc, const CoverPresentation &pres) {
    std::vector<Rat> xs = puncture_xs(pres);
    int n = int(xs.size());
    if (n < 2) throw PreconditionFailed("arc_code", "need at least two branch points");
    if (arc.vertices.size() < 2) throw PreconditionFailed("arc_code", "degenerate arc");

    auto puncture_at = [&](const Pt &p) {
        if (sgn(p.y) != 0) return 0;
        for (int i = 0; i < n; ++i)
            if (xs[size_t(i)] == p.x) return i + 1;
        return 0;
    };
    int s = puncture_at(arc.vertices.front());
    int t = puncture_at(arc.vertices.back());
    if (s == 0 || t == 0 || s == t)
        throw PreconditionFailed("arc_code", "arc must join two distinct branch points");

    // Interleaved scan of the polyline: maximal on-axis runs ("touches",
    // recorded by their x-range) separated by constant-sign stretches.
    struct Touch {
        Rat xlo, xhi;
    };
    std::vector<Touch> touches;
    std::vector<int> gaps; // sign of the stretch after touch i
    auto add_touch_point = [&](const Rat &x) {
        if (gaps.size() == touches.size() || touches.empty()) {
            touches.push_back({x, x});
        } else {
            Touch &tc = touches.back();
            tc.xlo = std::min(tc.xlo, x);
            tc.xhi = std::max(tc.xhi, x);
        }
    };
    for (size_t i = 0; i < arc.vertices.size(); ++i) {
        const Pt &v = arc.vertices[size_t(i)];
        int sg = sgn(v.y);
        if (sg == 0) {
            add_touch_point(v.x);
            continue;
        }
        if (i == 0) throw PreconditionFailed("arc_code", "arc must start on a branch point");
        const Pt &u = arc.vertices[i - 1];
        int sp = sgn(u.y);
        if (sp != 0 && sp != sg) {
            // crossing in the middle of the edge
            Rat x = u.x + (Rat(0) - u.y) * (v.x - u.x) / (v.y - u.y);
            add_touch_point(x);
        }
        if (gaps.size() < touches.size()) gaps.push_back(sg);
    }
    if (gaps.size() == touches.size())
        throw PreconditionFailed("arc_code", "arc must end on a branch point");

    ArcCode code;
    code.n = n;
    code.s = s;
    code.t = t;
    for (size_t i = 0; i < touches.size(); ++i) {
        const Touch &tc = touches[i];
        // punctures allowed on a touch only as the arc's own endpoints
        for (int p = 0; p < n; ++p) {
            const Rat &px = xs[size_t(p)];
            if (tc.xlo <= px && px <= tc.xhi) {
                bool endpoint = (i == 0 && p + 1 == s) || (i + 1 == touches.size() && p + 1 == t);
                if (!endpoint)
                    throw PreconditionFailed("arc_code", "arc passes through a branch point");
            }
        }
        if (i == 0 || i + 1 == touches.size()) continue;
        if (gaps[i - 1] != gaps[i]) code.word.push_back(interval_of(xs, tc.xlo));
    }
    code.side = gaps.empty() ? +1 : gaps.front();
    reduce_code(code);
    return code;
}

ArcCode apply_halftwist_gen(const ArcCode &a, int g) {
    int k = std::abs(g);
    int e = g > 0 ? +1 : -1;
    if (k < 1 || k >= a.n) throw GeneratorOutOfRange("half-twist generator out of range");
    if (a.word.empty() && ((a.s == k && a.t == k + 1) || (a.s == k + 1 && a.t == k)))
        return a; // the twist preserves its own core arc

    ArcCode out;
    out.n = a.n;
    std::vector<int> mid;
    int side = a.side; // side of the axis just before each crossing
    for (int c : a.word) {
        if (c == k) {
            bool down = side == +1;
            if (down == (e > 0)) {
                mid.push_back(k - 1);
                mid.push_back(k);
                mid.push_back(k + 1);
            } else {
                mid.push_back(k + 1);
                mid.push_back(k);
                mid.push_back(k - 1);
            }
        } else {
            mid.push_back(c);
        }
        side = -side;
    }
    int arrive = side;

    out.s = a.s;
    out.side = a.side;
    std::vector<int> pre, post;
    if (a.s == k || a.s == k + 1) {
        int f = a.side;
        pre.push_back(f * e > 0 ? k - 1 : k + 1);
        out.s = a.s == k ? k + 1 : k;
        out.side = -f;
    }
    out.t = a.t;
    if (a.t == k || a.t == k + 1) {
        int f = arrive;
        post.push_back(f * e > 0 ? k - 1 : k + 1);
        out.t = a.t == k ? k + 1 : k;
    }
    out.word = std::move(pre);
    out.word.insert(out.word.end(), mid.begin(), mid.end());
    out.word.insert(out.word.end(), post.begin(), post.end());
    reduce_code(out);
    return out;
}

HalfTwistWord straighten_code(const ArcCode &start) {
    int n = start.n;
    if (n < 2) throw PreconditionFailed("straighten", "need at least two branch points");
    ArcCode code = start;
    std::vector<int> applied;
    while (!code.standard()) {
        bool moved = false;
        for (int k = 1; k < n && !moved; ++k) {
            for (int e : {+1, -1}) {
                ArcCode cand = apply_halftwist_gen(code, e * k);
                if (code_complexity(cand) < code_complexity(code)) {
                    applied.push_back(e * k);
                    code = cand;
                    moved = true;
                    break;
                }
            }
        }
        if (moved) continue;

        // No single generator helps: uniform-cost search over codes, ordered
        // by complexity, until one below the current complexity pops.
        std::map<CodeKey, std::pair<CodeKey, int>> parent;
        std::map<CodeKey, ArcCode> codes;
        std::set<std::tuple<size_t, int, long, CodeKey>> frontier;
        long seq = 0;
        CodeKey start_key = code_key(code);
        parent[start_key] = {start_key, 0};
        codes[start_key] = code;
        auto push = [&](const ArcCode &c) {
            auto [len, span] = code_complexity(c);
            frontier.insert({len, span, seq++, code_key(c)});
        };
        push(code);
        auto target = code_complexity(code);
        bool found = false;
        size_t expansions = 0;
        while (!frontier.empty()) {
            auto it = frontier.begin();
            CodeKey cur_key = std::get<3>(*it);
            frontier.erase(it);
            ArcCode cur = codes.at(cur_key);
            if (code_complexity(cur) < target) {
                std::vector<int> path;
                CodeKey k2 = cur_key;
                while (parent.at(k2).second != 0) {
                    path.push_back(parent.at(k2).second);
                    k2 = parent.at(k2).first;
                }
                std::reverse(path.begin(), path.end());
                for (int g : path) applied.push_back(g);
                code = cur;
                found = true;
                break;
            }
            if (++expansions > 200000)
                throw InternalInvariant("straighten: search budget exhausted");
            for (int k = 1; k < n; ++k) {
                for (int e : {+1, -1}) {
                    ArcCode cand = apply_halftwist_gen(cur, e * k);
                    CodeKey key = code_key(cand);
                    if (parent.count(key)) continue;
                    parent[key] = {cur_key, e * k};
                    codes[key] = cand;
                    push(cand);
                }
            }
        }
        if (!found) throw InternalInvariant("straighten: no reducing sequence exists");
    }
    HalfTwistWord h;
    h.conjugator = BraidWord(n, applied);
    h.core = code.s;
    h.sign = +1;
    return h;
}

HalfTwistWord straighten(const ArcDiagram &arc, const CoverPresentation &pres) {
    return straighten_code(arc_code(arc, pres));
}

nlohmann::json to_json(const HalfTwistSpec &h) {
    return nlohmann::json{{"arc", to_json(h.arc)}, {"sign", h.sign}, {"word", to_json(h.word)}};
}

HalfTwistSpec halftwist_spec_from_json(const nlohmann::json &j) {
    HalfTwistSpec h;
    h.arc = arc_from_json(j.at("arc"));
    h.sign = j.at("sign").get<int>();
    h.word = halftwist_from_json(j.at("word"));
    return h;
}

nlohmann::json to_json(const SynthesisResult &r) {
    return nlohmann::json{
        {"final_pres", to_json(r.final_pres)},
        {"halftwist", to_json(r.halftwist)},
        {"trace", to_json(r.trace)},
        {"stats",
         {{"stabilizations", r.stats.stabilizations},
          {"moves", r.stats.moves},
          {"regions", r.stats.regions}}},
    };
}

SynthesisResult synthesis_result_from_json(const nlohmann::json &j) {
    SynthesisResult r;
    r.final_pres = cover_from_json(j.at("final_pres"));
    r.halftwist = halftwist_spec_from_json(j.at("halftwist"));
    r.trace = trace_from_json(j.at("trace"));
    const auto &s = j.at("stats");
    r.stats.stabilizations = s.at("stabilizations").get<int>();
    r.stats.moves = s.at("moves").get<int>();
    r.stats.regions = s.at("regions").get<int>();
    return r;
}

} // namespace twistlift
