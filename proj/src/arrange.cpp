#include "twistlift/arrange.hpp"

#include "twistlift/errors.hpp"

#include <algorithm>
#include <map>

namespace twistlift {

namespace {

struct PtLess {
    bool operator()(const Pt &a, const Pt &b) const { return lex_less(a, b); }
};

// Counterclockwise order of directions starting at the positive x-axis.
// Upper half first (y > 0, or y == 0 with x > 0), then within a half by
// the cross product.
bool dir_ccw_less(const Pt &a, const Pt &b) {
    auto half = [](const Pt &d) { return (sgn(d.y) > 0 || (sgn(d.y) == 0 && sgn(d.x) > 0)) ? 0 : 1; };
    int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    Rat c = a.x * b.y - a.y * b.x;
    int s = sgn(c);
    if (s != 0) return s > 0;
    throw InternalInvariant("two half-edges with identical direction at a vertex");
}

Rat walk_area2(const std::vector<Pt> &walk) {
    Rat a(0);
    for (size_t i = 0; i < walk.size(); ++i) {
        const Pt &p = walk[i];
        const Pt &q = walk[(i + 1) % walk.size()];
        a += p.x * q.y - p.y * q.x;
    }
    return a;
}

bool bbox_disjoint(const Seg &s, const Seg &t) {
    auto lo = [](const Rat &a, const Rat &b) { return a < b ? a : b; };
    auto hi = [](const Rat &a, const Rat &b) { return a < b ? b : a; };
    if (hi(s.a.x, s.b.x) < lo(t.a.x, t.b.x)) return true;
    if (hi(t.a.x, t.b.x) < lo(s.a.x, s.b.x)) return true;
    if (hi(s.a.y, s.b.y) < lo(t.a.y, t.b.y)) return true;
    if (hi(t.a.y, t.b.y) < lo(s.a.y, s.b.y)) return true;
    return false;
}

} // namespace

Arrangement Arrangement::build(const std::vector<Input> &segments) {
    Arrangement arr;
    for (const Input &in : segments) arr.input_curve_.push_back(in.curve);

    // Points on each input segment: both endpoints plus every pairwise
    // intersection point. Overlapping inputs are a caller bug.
    std::vector<std::vector<Pt>> cuts(segments.size());
    for (size_t i = 0; i < segments.size(); ++i) {
        cuts[i].push_back(segments[i].seg.a);
        cuts[i].push_back(segments[i].seg.b);
    }
    for (size_t i = 0; i < segments.size(); ++i) {
        for (size_t j = i + 1; j < segments.size(); ++j) {
            if (bbox_disjoint(segments[i].seg, segments[j].seg)) continue;
            SegX x = intersect(segments[i].seg, segments[j].seg);
            if (x.kind == SegXKind::Overlap)
                throw InternalInvariant("overlapping segments fed to arrangement");
            if (x.kind == SegXKind::Point) {
                cuts[i].push_back(x.point);
                cuts[j].push_back(x.point);
            }
        }
    }

    std::map<Pt, int, PtLess> vid;
    auto vertex = [&](const Pt &p) {
        auto [it, fresh] = vid.try_emplace(p, int(arr.verts_.size()));
        if (fresh) {
            arr.verts_.push_back(p);
            arr.vert_incidence_.emplace_back();
        }
        return it->second;
    };

    std::map<std::pair<int, int>, int> eid;
    for (size_t i = 0; i < segments.size(); ++i) {
        const Seg &s = segments[i].seg;
        auto &pts = cuts[i];
        // sort along the segment; any axis with extent works, prefer x
        bool by_x = s.a.x != s.b.x;
        std::sort(pts.begin(), pts.end(), [&](const Pt &p, const Pt &q) {
            Rat tp = by_x ? p.x : p.y, tq = by_x ? q.x : q.y;
            if (by_x ? s.a.x > s.b.x : s.a.y > s.b.y) return tq < tp;
            return tp < tq;
        });
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        for (size_t k = 0; k < pts.size(); ++k) {
            int v = vertex(pts[k]);
            bool interior = pts[k] != s.a && pts[k] != s.b;
            arr.vert_incidence_[size_t(v)].push_back({int(i), interior});
        }
        for (size_t k = 0; k + 1 < pts.size(); ++k) {
            int u = vertex(pts[k]), v = vertex(pts[k + 1]);
            if (u == v) continue;
            auto key = std::minmax(u, v);
            if (eid.count({key.first, key.second}))
                throw InternalInvariant("duplicate edge in arrangement input");
            eid[{key.first, key.second}] = int(arr.edges_.size());
            arr.edges_.push_back(Edge{u, v, segments[i].curve, int(i)});
        }
    }

    arr.out_.assign(arr.verts_.size(), {});
    for (size_t e = 0; e < arr.edges_.size(); ++e) {
        arr.out_[size_t(arr.edges_[e].u)].push_back(int(2 * e));
        arr.out_[size_t(arr.edges_[e].v)].push_back(int(2 * e + 1));
    }
    for (size_t v = 0; v < arr.verts_.size(); ++v) {
        std::sort(arr.out_[v].begin(), arr.out_[v].end(), [&](int ha, int hb) {
            Pt da = arr.verts_[size_t(arr.half_edge_to(ha))] - arr.verts_[v];
            Pt db = arr.verts_[size_t(arr.half_edge_to(hb))] - arr.verts_[v];
            return dir_ccw_less(da, db);
        });
    }

    // Face tracing with the interior on the left: the successor of (u -> v)
    // is the half-edge clockwise-next from (v -> u) around v.
    auto next_he = [&](int he) {
        int v = arr.half_edge_to(he);
        int rev = he ^ 1;
        const auto &ring = arr.out_[size_t(v)];
        auto it = std::find(ring.begin(), ring.end(), rev);
        size_t idx = size_t(it - ring.begin());
        return ring[(idx + ring.size() - 1) % ring.size()];
    };

    arr.he_face_.assign(2 * arr.edges_.size(), -1);
    Rat most_negative(0);
    for (size_t h0 = 0; h0 < arr.he_face_.size(); ++h0) {
        if (arr.he_face_[h0] != -1) continue;
        Face f;
        int h = int(h0);
        do {
            arr.he_face_[size_t(h)] = int(arr.faces_.size());
            f.half_edges.push_back(h);
            f.walk_verts.push_back(arr.half_edge_from(h));
            h = next_he(h);
        } while (h != int(h0));
        Rat a2 = walk_area2(arr.face_polygon_of(f));
        f.outer = sgn(a2) <= 0;
        if (f.outer && (arr.outer_face_ == -1 || a2 < most_negative)) {
            most_negative = a2;
            arr.outer_face_ = int(arr.faces_.size());
        }
        arr.faces_.push_back(std::move(f));
    }
    return arr;
}

std::vector<Pt> Arrangement::face_polygon_of(const Face &f) const {
    std::vector<Pt> poly;
    for (int v : f.walk_verts) poly.push_back(verts_[size_t(v)]);
    return poly;
}

std::vector<Pt> Arrangement::face_polygon(int f) const {
    return face_polygon_of(faces_[size_t(f)]);
}

bool Arrangement::is_self_crossing(int v, int curve) const {
    int interior = 0;
    for (auto [input, inner] : vert_incidence_[size_t(v)]) {
        if (!inner) continue;
        if (input_curve_[size_t(input)] == curve) ++interior;
    }
    return interior >= 2;
}

bool Arrangement::is_cross_curve_crossing(int v, int curve_a, int curve_b) const {
    bool a = false, b = false;
    for (auto [input, inner] : vert_incidence_[size_t(v)]) {
        if (!inner) continue;
        if (input_curve_[size_t(input)] == curve_a) a = true;
        if (input_curve_[size_t(input)] == curve_b) b = true;
    }
    return a && b;
}

int Arrangement::face_containing(const Pt &p) const {
    int best = outer_face_;
    Rat best_area(0);
    for (size_t f = 0; f < faces_.size(); ++f) {
        if (faces_[f].outer) continue;
        std::vector<Pt> poly = face_polygon(int(f));
        if (!point_in_walk(poly, p)) continue;
        Rat a2 = walk_area2(poly);
        if (best == outer_face_ || a2 < best_area) {
            best = int(f);
            best_area = a2;
        }
    }
    return best;
}

int Arrangement::face_arity(int f, int curve) const {
    int arity = 0;
    for (int v : faces_[size_t(f)].walk_verts)
        if (is_self_crossing(v, curve)) ++arity;
    return arity;
}

std::vector<int> Arrangement::face_neighbors(int f) const {
    std::vector<int> out;
    for (int he : faces_[size_t(f)].half_edges) {
        int g = he_face_[size_t(he ^ 1)];
        if (g != f) out.push_back(g);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Pt face_interior_point(const Arrangement &arr, int f) {
    int he = arr.faces()[size_t(f)].half_edges.front();
    Pt a = arr.verts()[size_t(arr.half_edge_from(he))];
    Pt b = arr.verts()[size_t(arr.half_edge_to(he))];
    Pt mid = Rat(1, 2) * (a + b);
    Pt d = b - a;
    Rat s = Rat(1, 8) / (abs(d.x) + abs(d.y));
    Pt n(-d.y, d.x); // interior is on the left
    for (int attempt = 0; attempt < 128; ++attempt, s /= 2) {
        Pt p = mid + s * n;
        bool on_edge = false;
        for (const Arrangement::Edge &e : arr.edges())
            if (on_segment(p, Seg(arr.verts()[size_t(e.u)], arr.verts()[size_t(e.v)]))) on_edge = true;
        if (on_edge) continue;
        if (arr.face_containing(p) == f ||
            (f == arr.outer_face() && arr.face_containing(p) == arr.outer_face()))
            return p;
    }
    throw InternalInvariant("no interior point found for face");
}

} // namespace twistlift
