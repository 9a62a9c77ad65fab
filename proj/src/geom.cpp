#include "twistlift/geom.hpp"

namespace twistlift {

bool on_segment(const Pt &p, const Seg &s) {
    if (orient(s.a, s.b, p) != 0) return false;
    return cmp(std::min(s.a.x, s.b.x), p.x) <= 0 && cmp(p.x, std::max(s.a.x, s.b.x)) <= 0 &&
           cmp(std::min(s.a.y, s.b.y), p.y) <= 0 && cmp(p.y, std::max(s.a.y, s.b.y)) <= 0;
}

bool on_open_segment(const Pt &p, const Seg &s) {
    return on_segment(p, s) && p != s.a && p != s.b;
}

static bool bbox_overlap(const Seg &s, const Seg &t) {
    if (std::max(s.a.x, s.b.x) < std::min(t.a.x, t.b.x)) return false;
    if (std::max(t.a.x, t.b.x) < std::min(s.a.x, s.b.x)) return false;
    if (std::max(s.a.y, s.b.y) < std::min(t.a.y, t.b.y)) return false;
    if (std::max(t.a.y, t.b.y) < std::min(s.a.y, s.b.y)) return false;
    return true;
}

SegX intersect(const Seg &s, const Seg &t) {
    SegX r;
    if (!bbox_overlap(s, t)) return r;
    int o1 = orient(s.a, s.b, t.a);
    int o2 = orient(s.a, s.b, t.b);
    int o3 = orient(t.a, t.b, s.a);
    int o4 = orient(t.a, t.b, s.b);
    if (o1 == 0 && o2 == 0) {
        // collinear: overlap unless they meet in at most a point
        Pt lo = lex_less(s.a, s.b) ? s.a : s.b;
        Pt hi = lex_less(s.a, s.b) ? s.b : s.a;
        Pt lo2 = lex_less(t.a, t.b) ? t.a : t.b;
        Pt hi2 = lex_less(t.a, t.b) ? t.b : t.a;
        if (lex_less(hi, lo2) || lex_less(hi2, lo)) return r;
        if (hi == lo2) { r.kind = SegXKind::Point; r.point = hi; return r; }
        if (hi2 == lo) { r.kind = SegXKind::Point; r.point = lo; return r; }
        r.kind = SegXKind::Overlap;
        return r;
    }
    if (o1 * o2 <= 0 && o3 * o4 <= 0) {
        // at least touching; solve for the point
        Rat d = (s.b.x - s.a.x) * (t.b.y - t.a.y) - (s.b.y - s.a.y) * (t.b.x - t.a.x);
        if (sgn(d) == 0) {
            // one endpoint of one segment lies on the other
            for (const Pt &p : {t.a, t.b}) if (on_segment(p, s)) { r.kind = SegXKind::Point; r.point = p; return r; }
            for (const Pt &p : {s.a, s.b}) if (on_segment(p, t)) { r.kind = SegXKind::Point; r.point = p; return r; }
            return r;
        }
        Rat u = cross(s.a, t.a, t.b);
        Rat v = cross(s.a, s.b, t.a); // careful with orientation below
        // parameter along s: s.a + w*(s.b-s.a)
        Rat w = ((t.a.x - s.a.x) * (t.b.y - t.a.y) - (t.a.y - s.a.y) * (t.b.x - t.a.x)) / d;
        Pt p{s.a.x + w * (s.b.x - s.a.x), s.a.y + w * (s.b.y - s.a.y)};
        if (on_segment(p, s) && on_segment(p, t)) {
            r.kind = SegXKind::Point;
            r.point = p;
        }
        (void)u; (void)v;
        return r;
    }
    return r;
}

bool proper_crossing(const Seg &s, const Seg &t) {
    int o1 = orient(s.a, s.b, t.a);
    int o2 = orient(s.a, s.b, t.b);
    int o3 = orient(t.a, t.b, s.a);
    int o4 = orient(t.a, t.b, s.b);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

long winding_number(const std::vector<Pt> &poly, const Pt &p) {
    long w = 0;
    size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Pt &a = poly[i];
        const Pt &b = poly[(i + 1) % n];
        if (cmp(a.y, p.y) <= 0) {
            if (cmp(b.y, p.y) > 0 && orient(a, b, p) > 0) ++w;
        } else {
            if (cmp(b.y, p.y) <= 0 && orient(a, b, p) < 0) --w;
        }
    }
    return w;
}

bool point_in_walk(const std::vector<Pt> &walk, const Pt &p) {
    bool in = false;
    size_t n = walk.size();
    for (size_t i = 0; i < n; ++i) {
        const Pt &a = walk[i];
        const Pt &b = walk[(i + 1) % n];
        bool ay = cmp(a.y, p.y) > 0;
        bool by = cmp(b.y, p.y) > 0;
        if (ay != by) {
            // x coordinate of edge at height p.y vs p.x
            Rat xc = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (xc > p.x) in = !in;
        }
    }
    return in;
}

bool point_on_polyline(const std::vector<Pt> &poly, const Pt &p, bool closed) {
    size_t n = poly.size();
    size_t m = closed ? n : n - 1;
    for (size_t i = 0; i < m; ++i)
        if (on_segment(p, Seg(poly[i], poly[(i + 1) % n]))) return true;
    return false;
}

bool polyline_simple(const std::vector<Pt> &poly, bool closed) {
    size_t n = poly.size();
    if (n < 2) return true;
    size_t m = closed ? n : n - 1;
    std::vector<Seg> segs;
    for (size_t i = 0; i < m; ++i) segs.emplace_back(poly[i], poly[(i + 1) % n]);
    for (size_t i = 0; i < segs.size(); ++i) {
        for (size_t j = i + 1; j < segs.size(); ++j) {
            SegX x = intersect(segs[i], segs[j]);
            if (x.kind == SegXKind::None) continue;
            if (x.kind == SegXKind::Overlap) return false;
            bool adjacent = (j == i + 1) || (closed && i == 0 && j == segs.size() - 1);
            if (adjacent) {
                Pt shared = (j == i + 1) ? segs[i].b : segs[i].a;
                if (x.point != shared) return false;
            } else {
                return false;
            }
        }
    }
    return true;
}

Rat dist2(const Pt &a, const Pt &b) {
    return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y);
}

Rat dist2_point_seg(const Pt &p, const Seg &s) {
    Pt d = s.b - s.a;
    Rat len2 = d.x * d.x + d.y * d.y;
    if (sgn(len2) == 0) return dist2(p, s.a);
    Rat t = ((p.x - s.a.x) * d.x + (p.y - s.a.y) * d.y) / len2;
    if (t < 0) t = 0;
    if (t > 1) t = 1;
    Pt q{s.a.x + t * d.x, s.a.y + t * d.y};
    return dist2(p, q);
}

std::optional<Pt> line_intersect(const Pt &p, const Pt &dp, const Pt &q, const Pt &dq) {
    Rat den = dp.x * dq.y - dp.y * dq.x;
    if (sgn(den) == 0) return std::nullopt;
    Rat t = ((q.x - p.x) * dq.y - (q.y - p.y) * dq.x) / den;
    return Pt{p.x + t * dp.x, p.y + t * dp.y};
}

std::vector<Pt> simplify_polyline(std::vector<Pt> poly, bool closed) {
    // drop consecutive duplicates
    std::vector<Pt> out;
    for (const Pt &p : poly)
        if (out.empty() || out.back() != p) out.push_back(p);
    if (closed && out.size() > 1 && out.front() == out.back()) out.pop_back();
    // drop collinear interior vertices (only when the middle point lies
    // between its neighbours, so spikes are preserved)
    auto pass = [&](std::vector<Pt> v) {
        std::vector<Pt> w;
        size_t n = v.size();
        for (size_t i = 0; i < n; ++i) {
            if (n >= 3) {
                size_t prev = (i + n - 1) % n;
                size_t next = (i + 1) % n;
                bool interior = closed || (i > 0 && i + 1 < n);
                if (interior && orient(v[prev], v[i], v[next]) == 0 &&
                    on_segment(v[i], Seg(v[prev], v[next])))
                    continue;
            }
            w.push_back(v[i]);
        }
        return w;
    };
    size_t before;
    do {
        before = out.size();
        out = pass(std::move(out));
    } while (out.size() < before);
    return out;
}

} // namespace twistlift
