#include "twistlift/moves.hpp"

#include <algorithm>
#include <map>

namespace twistlift {

std::string move_kind_name(MoveKind k) {
    switch (k) {
    case MoveKind::T1: return "T1";
    case MoveKind::T1inv: return "T1inv";
    case MoveKind::T2: return "T2";
    case MoveKind::T3: return "T3";
    case MoveKind::T3inv: return "T3inv";
    case MoveKind::T4: return "T4";
    case MoveKind::RSlide: return "RSlide";
    case MoveKind::Stabilize: return "Stabilize";
    case MoveKind::PlanarIsotopy: return "PlanarIsotopy";
    }
    throw InternalInvariant("unknown move kind");
}

MoveKind move_kind_from_name(const std::string &s) {
    for (MoveKind k : {MoveKind::T1, MoveKind::T1inv, MoveKind::T2, MoveKind::T3, MoveKind::T3inv,
                       MoveKind::T4, MoveKind::RSlide, MoveKind::Stabilize, MoveKind::PlanarIsotopy})
        if (move_kind_name(k) == s) return k;
    throw DomainError("unknown move kind: " + s);
}

namespace {

Pt loc_point(const LabelledDiagram &d, const PathLoc &loc) {
    Seg s = d.edge(size_t(loc.edge));
    return Pt(s.a.x + loc.t * (s.b.x - s.a.x), s.a.y + loc.t * (s.b.y - s.a.y));
}

void fail(MoveKind k, const std::string &reason) {
    throw PreconditionFailed(move_kind_name(k), reason);
}

struct Split {
    Pt A, B;                // points of the cut, A = from, B = to
    std::vector<Pt> O;      // old sub-path A -> ... -> B (traversal forward)
    std::vector<Pt> N;      // new sub-path A -> replacement -> B
    std::vector<Pt> K;      // kept path B -> ... -> A (rest of the diagram)
    LabelledDiagram next;   // rebased result diagram
};

Split split_diagram(const LabelledDiagram &d, const DiagramLabelling &lab,
                    const CoverPresentation &pres, const Move &m) {
    size_t n = d.vertices.size();
    auto check_loc = [&](const PathLoc &loc) {
        if (loc.edge < 0 || size_t(loc.edge) >= n) fail(m.kind, "cut edge out of range");
        if (sgn(loc.t) <= 0 || cmp(loc.t, Rat(1)) >= 0) fail(m.kind, "cut parameter must be in (0,1)");
    };
    check_loc(m.from);
    check_loc(m.to);

    Split sp;
    sp.A = loc_point(d, m.from);
    sp.B = loc_point(d, m.to);
    if (sp.A == sp.B) fail(m.kind, "cut points coincide");
    for (const Pt &p : {sp.A, sp.B})
        for (int b = 0; b < pres.branch_count(); ++b)
            if (on_segment(p, pres.splitting_arc(b))) fail(m.kind, "cut point on a splitting arc");
    for (const Crossing &c : lab.crossings)
        if (c.point == sp.A || c.point == sp.B) fail(m.kind, "cut point sits on a crossing");

    size_t fe = size_t(m.from.edge), te = size_t(m.to.edge);
    sp.O.push_back(sp.A);
    if (fe == te && m.from.t < m.to.t) {
        // removed piece stays within one edge
    } else {
        size_t steps = fe == te ? n : (te + n - fe) % n;
        for (size_t i = 1; i <= steps; ++i) sp.O.push_back(d.vertices[(fe + i) % n]);
    }
    sp.O.push_back(sp.B);

    sp.K.push_back(sp.B);
    if (fe == te && m.from.t > m.to.t) {
        // kept piece stays within one edge
    } else {
        size_t steps = fe == te ? n : (fe + n - te) % n;
        for (size_t i = 1; i <= steps; ++i) sp.K.push_back(d.vertices[(te + i) % n]);
    }
    sp.K.push_back(sp.A);

    sp.N.push_back(sp.A);
    for (const Pt &p : m.replacement) sp.N.push_back(p);
    sp.N.push_back(sp.B);

    sp.next.vertices = sp.K; // B ... A
    for (const Pt &p : m.replacement) sp.next.vertices.push_back(p);
    sp.next.base_edge = 0;
    sp.next.base_label = lab.label_at(m.to.edge, m.to.t);
    return sp;
}

size_t open_segs(const std::vector<Pt> &p) { return p.size() - 1; }
Seg open_seg(const std::vector<Pt> &p, size_t i) { return Seg(p[i], p[i + 1]); }

// Intersection points between two open polylines, skipping the listed
// contact points; overlaps are a hard precondition failure.
std::vector<Pt> polyline_crossings(MoveKind k, const std::vector<Pt> &p, const std::vector<Pt> &q,
                                   const std::vector<Pt> &contacts) {
    std::vector<Pt> out;
    for (size_t i = 0; i < open_segs(p); ++i)
        for (size_t j = 0; j < open_segs(q); ++j) {
            SegX x = intersect(open_seg(p, i), open_seg(q, j));
            if (x.kind == SegXKind::None) continue;
            if (x.kind == SegXKind::Overlap) fail(k, "sub-paths overlap");
            bool contact = false;
            for (const Pt &c : contacts)
                if (x.point == c) contact = true;
            if (contact) continue;
            bool seen = false;
            for (const Pt &c : out)
                if (c == x.point) seen = true;
            if (!seen) out.push_back(x.point);
        }
    return out;
}

// Self-intersection points of an open polyline (beyond shared neighbours).
std::vector<Pt> self_crossings(MoveKind k, const std::vector<Pt> &p) {
    std::vector<Pt> out;
    for (size_t i = 0; i < open_segs(p); ++i)
        for (size_t j = i + 2; j < open_segs(p); ++j) {
            SegX x = intersect(open_seg(p, i), open_seg(p, j));
            if (x.kind == SegXKind::None) continue;
            if (x.kind == SegXKind::Overlap) fail(k, "sub-path overlaps itself");
            out.push_back(x.point);
        }
    return out;
}

// Labels attained on the traversal span (from, to) of a validated diagram;
// the span is the removed sub-path, partial edges included exactly.
std::vector<int> span_labels(const LabelledDiagram &d, const DiagramLabelling &lab,
                             const PathLoc &from, const PathLoc &to) {
    std::vector<int> labels{lab.label_at(from.edge, from.t)};
    size_t n = d.vertices.size();
    auto take = [&](int edge, const Rat *lo, const Rat *hi) {
        for (const Transit &tr : lab.transits)
            if (tr.edge == edge && (!lo || tr.t > *lo) && (!hi || tr.t < *hi))
                labels.push_back(tr.label_after);
    };
    if (from.edge == to.edge && from.t < to.t) {
        take(from.edge, &from.t, &to.t);
        return labels;
    }
    take(from.edge, &from.t, nullptr);
    size_t steps = (size_t(to.edge) + n - size_t(from.edge)) % n;
    if (from.edge == to.edge) steps = n;
    for (size_t i = 1; i < steps; ++i) take(int((size_t(from.edge) + i) % n), nullptr, nullptr);
    take(to.edge, nullptr, &to.t);
    return labels;
}

// Labels on the replacement side: the tail edges of the rebased diagram,
// from vertex A (index |K|-1) back around to B (index 0).
std::vector<int> new_span_labels(const Split &sp, const DiagramLabelling &lab2) {
    std::vector<int> labels;
    size_t a_idx = sp.K.size() - 1;
    for (size_t e = a_idx; e < sp.next.vertices.size(); ++e) {
        labels.push_back(lab2.edge_start_label[e]);
        for (const Transit &tr : lab2.transits)
            if (tr.edge == int(e)) labels.push_back(tr.label_after);
    }
    return labels;
}

bool inside(const std::vector<Pt> &walk, const Pt &p) { return point_in_walk(walk, p); }

// closed boundary walk of the swept region for the Jordan-region kinds
std::vector<Pt> region_walk(const Split &sp) {
    std::vector<Pt> walk = sp.O; // A ... B
    for (size_t i = sp.N.size() - 2; i >= 1; --i) walk.push_back(sp.N[i]);
    return walk;
}

void check_branches_in_region(MoveKind k, const std::vector<Pt> &walk,
                              const CoverPresentation &pres, int allowed) {
    for (int b = 0; b < pres.branch_count(); ++b) {
        Pt pos = pres.branch_position(b);
        if (point_on_polyline(walk, pos, true)) fail(k, "branch point on the swept boundary");
        bool in = inside(walk, pos);
        if (b == allowed) {
            if (!in) fail(k, "designated branch point not inside the swept region");
        } else if (in) {
            fail(k, "unexpected branch point " + std::to_string(b) + " inside the swept region");
        }
    }
}

void check_kept_outside(MoveKind k, const Split &sp, const std::vector<Pt> &walk) {
    if (sp.K.size() == 2) {
        Pt mid = Rat(1, 2) * (sp.K[0] + sp.K[1]);
        if (inside(walk, mid)) fail(k, "rest of the diagram enters the swept region");
        return;
    }
    for (size_t i = 1; i + 1 < sp.K.size(); ++i) {
        if (point_on_polyline(walk, sp.K[i], true)) fail(k, "rest of the diagram touches the swept boundary");
        if (inside(walk, sp.K[i])) fail(k, "rest of the diagram enters the swept region");
    }
}

void check_no_splitting_arcs(MoveKind k, const std::vector<Pt> &walk, const CoverPresentation &pres) {
    for (int b = 0; b < pres.branch_count(); ++b) {
        Seg arc = pres.splitting_arc(b);
        for (size_t i = 0; i < walk.size(); ++i)
            if (intersect(Seg(walk[i], walk[(i + 1) % walk.size()]), arc).kind != SegXKind::None)
                fail(k, "splitting arc meets the swept region");
        if (inside(walk, arc.a) || inside(walk, arc.b)) fail(k, "splitting arc inside the swept region");
    }
}

// parameter of point p along open polyline q, as (segment index, t)
std::pair<size_t, Rat> param_on(const std::vector<Pt> &q, const Pt &p) {
    for (size_t i = 0; i < open_segs(q); ++i) {
        Seg s = open_seg(q, i);
        if (!on_segment(p, s)) continue;
        Rat t = s.a.x != s.b.x ? (p.x - s.a.x) / (s.b.x - s.a.x) : (p.y - s.a.y) / (s.b.y - s.a.y);
        return {i, t};
    }
    throw InternalInvariant("point not on polyline");
}

std::vector<Pt> subpath_between(const std::vector<Pt> &q, const Pt &p1, const Pt &p2) {
    auto [i1, t1] = param_on(q, p1);
    auto [i2, t2] = param_on(q, p2);
    if (i2 < i1 || (i1 == i2 && t2 < t1)) return subpath_between(q, p2, p1);
    std::vector<Pt> out{p1};
    for (size_t i = i1 + 1; i <= i2; ++i) out.push_back(q[i]);
    out.push_back(p2);
    return simplify_polyline(out, false);
}

// crossing count between two open polylines (proper points only, deduped)
int crossing_count(MoveKind k, const std::vector<Pt> &p, const std::vector<Pt> &q,
                   const std::vector<Pt> &contacts) {
    return int(polyline_crossings(k, p, q, contacts).size());
}

struct KinkParts {
    Pt X;
    std::vector<Pt> loop;   // closed walk starting at X
    std::vector<Pt> corner; // A -> X -> B along the kinked side
};

// Splits a once-self-crossing sub-path into its loop and corner parts.
KinkParts kink_parts(MoveKind k, const std::vector<Pt> &side) {
    std::vector<Pt> sx = self_crossings(k, side);
    if (sx.size() != 1) fail(k, "kinked side must have exactly one self-crossing");
    KinkParts kp;
    kp.X = sx[0];
    // passages of X along the side
    std::vector<std::pair<size_t, Rat>> passes;
    for (size_t i = 0; i < open_segs(side); ++i)
        if (on_segment(kp.X, open_seg(side, i))) {
            Seg s = open_seg(side, i);
            Rat t = s.a.x != s.b.x ? (kp.X.x - s.a.x) / (s.b.x - s.a.x)
                                   : (kp.X.y - s.a.y) / (s.b.y - s.a.y);
            passes.push_back({i, t});
        }
    if (passes.size() != 2) fail(k, "self-crossing is not a clean double passage");
    kp.loop.push_back(kp.X);
    for (size_t i = passes[0].first + 1; i <= passes[1].first; ++i) kp.loop.push_back(side[i]);
    kp.loop = simplify_polyline(kp.loop, true);
    for (size_t i = 0; i <= passes[0].first; ++i) kp.corner.push_back(side[i]);
    kp.corner.push_back(kp.X);
    for (size_t i = passes[1].first + 1; i < side.size(); ++i) kp.corner.push_back(side[i]);
    kp.corner = simplify_polyline(kp.corner, false);
    if (kp.loop.size() < 3 || !polyline_simple(kp.loop, true)) fail(k, "kink loop is not embedded");
    return kp;
}

void check_kink(MoveKind k, const Split &sp, const CoverPresentation &pres, int branch,
                const std::vector<Pt> &kinked, const std::vector<Pt> &flat,
                const std::pair<int, int> &cross_labels) {
    if (branch < 0 || branch >= pres.branch_count()) fail(k, "branch index out of range");
    const Transposition &mu = pres.branches[size_t(branch)];
    if (std::minmax(cross_labels.first, cross_labels.second) != std::minmax(mu.low, mu.high))
        fail(k, "kink crossing labels do not match the branch monodromy");

    if (!polyline_simple(flat, false)) fail(k, "flat side must be embedded");
    KinkParts kp = kink_parts(k, kinked);

    // loop disk holds exactly the designated branch point
    for (int b = 0; b < pres.branch_count(); ++b) {
        Pt pos = pres.branch_position(b);
        if (point_on_polyline(kp.loop, pos, true)) fail(k, "branch point on the kink loop");
        bool in = inside(kp.loop, pos);
        if (b == branch && !in) fail(k, "designated branch point not inside the kink loop");
        if (b != branch && in) fail(k, "extra branch point inside the kink loop");
    }

    // outer region between the corner path and the flat side
    if (!polyline_simple(kp.corner, false)) fail(k, "corner path is not embedded");
    if (!polyline_crossings(k, kp.corner, flat, {sp.A, sp.B}).empty())
        fail(k, "sides meet away from the cut points");
    std::vector<Pt> walk = kp.corner;
    for (size_t i = flat.size() - 2; i >= 1; --i) walk.push_back(flat[i]);
    walk = simplify_polyline(walk, true);
    if (walk.size() < 3 || !polyline_simple(walk, true)) fail(k, "swept boundary is not embedded");

    // loop attaches at X and lies inside the swept region
    for (size_t i = 0; i < kp.loop.size(); ++i)
        for (size_t j = 0; j < walk.size(); ++j) {
            SegX x = intersect(Seg(kp.loop[i], kp.loop[(i + 1) % kp.loop.size()]),
                               Seg(walk[j], walk[(j + 1) % walk.size()]));
            if (x.kind == SegXKind::Overlap) fail(k, "kink loop overlaps the swept boundary");
            if (x.kind == SegXKind::Point && x.point != kp.X)
                fail(k, "kink loop leaves the swept region");
        }
    Pt probe = Rat(1, 2) * (kp.loop[0] + kp.loop[1]);
    if (!inside(walk, probe)) fail(k, "kink loop not inside the swept region");

    for (int b = 0; b < pres.branch_count(); ++b) {
        Pt pos = pres.branch_position(b);
        if (point_on_polyline(walk, pos, true)) fail(k, "branch point on the swept boundary");
        if (b != branch && inside(walk, pos)) fail(k, "extra branch point in the swept region");
    }
    check_kept_outside(k, sp, walk);
    if (crossing_count(k, sp.K, kinked, {sp.A, sp.B}) != 0 ||
        crossing_count(k, sp.K, flat, {sp.A, sp.B}) != 0)
        fail(k, "rest of the diagram meets the kink area");
}

// labels at the unique crossing of the given diagram lying at point X
std::pair<int, int> crossing_labels_at(MoveKind k, const DiagramLabelling &lab, const Pt &X) {
    for (const Crossing &c : lab.crossings)
        if (c.point == X) return {c.label_a, c.label_b};
    fail(k, "kink crossing not found in the validated diagram");
    return {};
}

MoveResult apply_stabilize(const CoverPresentation &pres, const LabelledDiagram &d, const Move &m) {
    DiagramLabelling lab = validate_diagram(d, pres);
    CoverPresentation next = stabilize(pres, m.sheet, m.position);
    CoverValidation cv = validate_cover(next);
    if (!cv.ok) fail(MoveKind::Stabilize, cv.errors.front());

    // the fresh splitting arc may cross the diagram only where the label is
    // untouched by the new transposition, so the labelling stays put
    Seg arc = next.splitting_arc(next.branch_count() - 1);
    for (size_t e = 0; e < d.edge_count(); ++e) {
        Seg s = d.edge(e);
        SegX x = intersect(s, arc);
        if (x.kind == SegXKind::None) continue;
        if (!proper_crossing(s, arc))
            fail(MoveKind::Stabilize, "new splitting arc touches the diagram non-transversally");
        Rat t = s.a.x != s.b.x ? (x.point.x - s.a.x) / (s.b.x - s.a.x)
                               : (x.point.y - s.a.y) / (s.b.y - s.a.y);
        int label = lab.label_at(int(e), t);
        if (label == m.sheet)
            fail(MoveKind::Stabilize, "new splitting arc crosses the diagram at the stabilized sheet");
    }
    validate_diagram(d, next);
    return {next, d};
}

} // namespace

MoveResult apply_move(const CoverPresentation &pres, const LabelledDiagram &d, const Move &m) {
    if (m.kind == MoveKind::Stabilize) {
        MoveResult r = apply_stabilize(pres, d, m);
        HomologyClass before = homology_class(d, pres), after = homology_class(r.diagram, r.pres);
        for (size_t i = 0; i < after.coefficients.size(); ++i) {
            long want = i < before.coefficients.size() ? before.coefficients[i] : 0;
            if (after.coefficients[i] != want)
                throw InternalInvariant("stabilization changed the homology chain");
        }
        return r;
    }

    DiagramLabelling lab = validate_diagram(d, pres);
    Split sp = split_diagram(d, lab, pres, m);
    DiagramLabelling lab2 = validate_diagram(sp.next, pres);

    const MoveKind k = m.kind;
    int k_vs_old = crossing_count(k, sp.K, sp.O, {sp.A, sp.B});
    int k_vs_new = crossing_count(k, sp.K, sp.N, {sp.A, sp.B});

    switch (k) {
    case MoveKind::PlanarIsotopy:
    case MoveKind::RSlide:
    case MoveKind::T2: {
        if (!polyline_simple(sp.O, false)) fail(k, "old sub-path must be embedded");
        if (!polyline_simple(sp.N, false)) fail(k, "new sub-path must be embedded");
        if (!polyline_crossings(k, sp.O, sp.N, {sp.A, sp.B}).empty())
            fail(k, "sub-paths meet away from the cut points");
        if (k_vs_old != 0 || k_vs_new != 0) fail(k, "rest of the diagram crosses the swept region");
        std::vector<Pt> walk = simplify_polyline(region_walk(sp), true);
        if (walk.size() < 3 || !polyline_simple(walk, true)) fail(k, "swept region is degenerate");
        check_kept_outside(k, sp, walk);
        if (k == MoveKind::PlanarIsotopy) {
            check_branches_in_region(k, walk, pres, -1);
            check_no_splitting_arcs(k, walk, pres);
        } else if (k == MoveKind::RSlide) {
            check_branches_in_region(k, walk, pres, -1);
        } else {
            if (m.branch < 0 || m.branch >= pres.branch_count()) fail(k, "branch index out of range");
            check_branches_in_region(k, walk, pres, m.branch);
            const Transposition &mu = pres.branches[size_t(m.branch)];
            for (int l : span_labels(d, lab, m.from, m.to))
                if (mu.moves(l)) fail(k, "old sub-path label in the branch support");
            for (int l : new_span_labels(sp, lab2))
                if (mu.moves(l)) fail(k, "new sub-path label in the branch support");
        }
        break;
    }
    case MoveKind::T3:
    case MoveKind::T3inv: {
        if (!polyline_simple(sp.O, false)) fail(k, "old sub-path must be embedded");
        if (!polyline_simple(sp.N, false)) fail(k, "new sub-path must be embedded");
        if (!polyline_crossings(k, sp.O, sp.N, {sp.A, sp.B}).empty())
            fail(k, "sub-paths meet away from the cut points");
        int want_old = k == MoveKind::T3inv ? 2 : 0;
        int want_new = k == MoveKind::T3inv ? 0 : 2;
        if (k_vs_old != want_old || k_vs_new != want_new)
            fail(k, "chord crossing counts are off (" + std::to_string(k_vs_old) + "," +
                        std::to_string(k_vs_new) + ")");
        std::vector<Pt> walk = simplify_polyline(region_walk(sp), true);
        if (walk.size() < 3 || !polyline_simple(walk, true)) fail(k, "swept region is degenerate");
        check_branches_in_region(k, walk, pres, -1);
        // the chord between its two boundary crossings stays inside
        const std::vector<Pt> &side = k == MoveKind::T3inv ? sp.O : sp.N;
        std::vector<Pt> xs = polyline_crossings(k, sp.K, side, {sp.A, sp.B});
        std::vector<Pt> chord = subpath_between(sp.K, xs[0], xs[1]);
        Pt probe = Rat(1, 2) * (chord[0] + chord[1]);
        if (!inside(walk, probe)) fail(k, "chord does not pass through the swept region");
        for (size_t i = 1; i + 1 < chord.size(); ++i)
            if (!inside(walk, chord[i])) fail(k, "chord leaves the swept region");
        // non-chord parts of the rest stay outside
        for (size_t i = 1; i + 1 < sp.K.size(); ++i) {
            const Pt &p = sp.K[i];
            bool on_chord = point_on_polyline(chord, p, false);
            if (!on_chord && inside(walk, p)) fail(k, "rest of the diagram enters the swept region");
        }
        break;
    }
    case MoveKind::T4: {
        if (!polyline_simple(sp.O, false)) fail(k, "old sub-path must be embedded");
        if (!polyline_simple(sp.N, false)) fail(k, "new sub-path must be embedded");
        if (!polyline_crossings(k, sp.O, sp.N, {sp.A, sp.B}).empty())
            fail(k, "sub-paths meet away from the cut points");
        if (k_vs_old != 2 || k_vs_new != 2) fail(k, "need exactly two chords through the region");
        std::vector<Pt> walk = simplify_polyline(region_walk(sp), true);
        if (walk.size() < 3 || !polyline_simple(walk, true)) fail(k, "swept region is degenerate");
        check_branches_in_region(k, walk, pres, -1);
        // order all four boundary hits along the kept path
        std::vector<Pt> hits = polyline_crossings(k, sp.K, sp.O, {sp.A, sp.B});
        for (const Pt &p : polyline_crossings(k, sp.K, sp.N, {sp.A, sp.B})) hits.push_back(p);
        std::sort(hits.begin(), hits.end(), [&](const Pt &a, const Pt &b) {
            return param_on(sp.K, a) < param_on(sp.K, b);
        });
        if (hits.size() != 4) fail(k, "expected four boundary crossings");
        std::vector<Pt> chord1 = subpath_between(sp.K, hits[0], hits[1]);
        std::vector<Pt> chord2 = subpath_between(sp.K, hits[2], hits[3]);
        auto on_side = [&](const std::vector<Pt> &side, const Pt &p) {
            return point_on_polyline(side, p, false);
        };
        for (const std::vector<Pt> &ch : {chord1, chord2}) {
            bool o = on_side(sp.O, ch.front()) || on_side(sp.O, ch.back());
            bool nn = on_side(sp.N, ch.front()) || on_side(sp.N, ch.back());
            if (!o || !nn) fail(k, "each chord must run from the old side to the new side");
            Pt probe = Rat(1, 2) * (ch[0] + ch[1]);
            if (!inside(walk, probe)) fail(k, "chord does not pass through the swept region");
        }
        if (polyline_crossings(k, chord1, chord2, {}).size() != 1)
            fail(k, "the two chords must cross exactly once inside the region");
        break;
    }
    case MoveKind::T1inv: {
        std::vector<Pt> sx = self_crossings(k, sp.O);
        if (sx.size() != 1) fail(k, "old sub-path must carry exactly one crossing");
        check_kink(k, sp, pres, m.branch, sp.O, sp.N, crossing_labels_at(k, lab, sx[0]));
        break;
    }
    case MoveKind::T1: {
        std::vector<Pt> sx = self_crossings(k, sp.N);
        if (sx.size() != 1) fail(k, "new sub-path must carry exactly one crossing");
        check_kink(k, sp, pres, m.branch, sp.N, sp.O, crossing_labels_at(k, lab2, sx[0]));
        break;
    }
    default:
        throw InternalInvariant("unhandled move kind");
    }

    // sigma bookkeeping per kind
    long ds = long(lab2.crossings.size()) - long(lab.crossings.size());
    long want = k == MoveKind::T1 ? 1 : k == MoveKind::T1inv ? -1 : k == MoveKind::T3 ? 2
                : k == MoveKind::T3inv                                                ? -2
                                                                                      : 0;
    if (ds != want) throw InternalInvariant("crossing count delta mismatch for " + move_kind_name(k));

    HomologyClass before = homology_class(d, pres), after = homology_class(sp.next, pres);
    if (!(before == after)) throw InternalInvariant("move changed the homology chain");

    return {pres, sp.next};
}

uint64_t diagram_hash(const LabelledDiagram &d) {
    std::string s = to_json(d).dump();
    uint64_t h = 1469598103934665603ULL; // FNV-1a
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

ReplayResult replay(const MoveTrace &trace) {
    CoverPresentation pres = trace.initial_pres;
    LabelledDiagram d = trace.initial_diagram;
    HomologyClass h0;
    try {
        validate_diagram(d, pres);
        h0 = homology_class(d, pres);
    } catch (const DomainError &e) {
        return {false, -1, std::string("initial state invalid: ") + e.what()};
    }
    for (size_t i = 0; i < trace.steps.size(); ++i) {
        const MoveStep &step = trace.steps[i];
        try {
            MoveResult r = apply_move(pres, d, step.move);
            pres = r.pres;
            d = r.diagram;
        } catch (const std::exception &e) {
            return {false, int(i), e.what()};
        }
        if (diagram_hash(d) != step.diagram_hash) return {false, int(i), "diagram hash mismatch"};
        if (pres.degree != step.degree || pres.branch_count() != step.branch_count)
            return {false, int(i), "presentation size mismatch"};
        HomologyClass h = homology_class(d, pres);
        for (size_t c = 0; c < h.coefficients.size(); ++c) {
            long want = c < h0.coefficients.size() ? h0.coefficients[c] : 0;
            if (h.coefficients[c] != want) return {false, int(i), "homology not preserved"};
        }
    }
    return {true, -1, ""};
}

nlohmann::json to_json(const Move &m) {
    nlohmann::json j;
    j["kind"] = move_kind_name(m.kind);
    if (m.kind == MoveKind::Stabilize) {
        j["sheet"] = m.sheet;
        j["position"] = {rat_str(m.position.x), rat_str(m.position.y)};
        return j;
    }
    j["from"] = {{"edge", m.from.edge}, {"t", rat_str(m.from.t)}};
    j["to"] = {{"edge", m.to.edge}, {"t", rat_str(m.to.t)}};
    nlohmann::json rep = nlohmann::json::array();
    for (const Pt &p : m.replacement) rep.push_back({rat_str(p.x), rat_str(p.y)});
    j["replacement"] = rep;
    if (m.branch >= 0) j["branch"] = m.branch;
    return j;
}

Move move_from_json(const nlohmann::json &j) {
    Move m;
    m.kind = move_kind_from_name(j.at("kind").get<std::string>());
    if (m.kind == MoveKind::Stabilize) {
        m.sheet = j.at("sheet").get<int>();
        m.position = Pt(rat_parse(j.at("position").at(0).get<std::string>()),
                        rat_parse(j.at("position").at(1).get<std::string>()));
        return m;
    }
    m.from.edge = j.at("from").at("edge").get<int>();
    m.from.t = rat_parse(j.at("from").at("t").get<std::string>());
    m.to.edge = j.at("to").at("edge").get<int>();
    m.to.t = rat_parse(j.at("to").at("t").get<std::string>());
    for (const auto &p : j.at("replacement"))
        m.replacement.emplace_back(rat_parse(p.at(0).get<std::string>()),
                                   rat_parse(p.at(1).get<std::string>()));
    if (j.contains("branch")) m.branch = j["branch"].get<int>();
    return m;
}

nlohmann::json to_json(const MoveTrace &t) {
    nlohmann::json steps = nlohmann::json::array();
    for (const MoveStep &s : t.steps)
        steps.push_back({{"move", to_json(s.move)},
                         {"diagram_hash", s.diagram_hash},
                         {"degree", s.degree},
                         {"branch_count", s.branch_count}});
    return nlohmann::json{{"initial_cover", to_json(t.initial_pres)},
                          {"initial_diagram", to_json(t.initial_diagram)},
                          {"steps", steps}};
}

MoveTrace trace_from_json(const nlohmann::json &j) {
    MoveTrace t;
    t.initial_pres = cover_from_json(j.at("initial_cover"));
    t.initial_diagram = diagram_from_json(j.at("initial_diagram"));
    for (const auto &s : j.at("steps")) {
        MoveStep step;
        step.move = move_from_json(s.at("move"));
        step.diagram_hash = s.at("diagram_hash").get<uint64_t>();
        step.degree = s.at("degree").get<int>();
        step.branch_count = s.at("branch_count").get<int>();
        t.steps.push_back(std::move(step));
    }
    return t;
}

} // namespace twistlift
