#include "twistlift/diagram.hpp"

#include "twistlift/arrange.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace twistlift {

namespace {

std::string pt_str(const Pt &p) {
    return "(" + rat_str(p.x) + ", " + rat_str(p.y) + ")";
}

struct SelfCrossing {
    Pt point;
    size_t i, j; // global edge indices, i < j
};

size_t seg_count(const std::vector<Pt> &v, bool closed) {
    return closed ? v.size() : v.size() - 1;
}

Seg seg_at(const std::vector<Pt> &v, bool closed, size_t i) {
    return Seg(v[i], v[(i + 1) % v.size()]);
}

bool strictly_inside_rect(const Pt &p, const CoverPresentation &pres) {
    return sgn(p.x) > 0 && p.x < pres.rect_width() && cmp(p.y, Rat(-1)) > 0 && cmp(p.y, Rat(1)) < 0;
}

bool on_rect_boundary(const Pt &p, const CoverPresentation &pres) {
    bool x_in = sgn(p.x) >= 0 && p.x <= pres.rect_width();
    bool y_in = cmp(p.y, Rat(-1)) >= 0 && cmp(p.y, Rat(1)) <= 0;
    if (!x_in || !y_in) return false;
    return sgn(p.x) == 0 || p.x == pres.rect_width() || cmp(p.y, Rat(-1)) == 0 ||
           cmp(p.y, Rat(1)) == 0;
}

// Position checks plus the full transversality discipline: self-crossings
// must be transverse double points of edge interiors, meetings with
// splitting arcs must be transverse crossings of both interiors, and the
// two never coincide. Open polylines may end on the boundary or (when
// allowed) exactly at branch points.
std::vector<SelfCrossing> check_generic(const std::vector<Pt> &v, bool closed,
                                        const CoverPresentation &pres,
                                        bool allow_branch_endpoints) {
    size_t n = v.size();
    if ((closed && n < 3) || (!closed && n < 2))
        throw NotGeneric("polyline needs at least " + std::string(closed ? "3" : "2") + " vertices");
    size_t m = seg_count(v, closed);
    for (size_t i = 0; i < m; ++i)
        if (v[i] == v[(i + 1) % n]) throw NotGeneric("zero-length edge at vertex " + std::to_string(i));

    for (size_t i = 0; i < n; ++i) {
        bool endpoint = !closed && (i == 0 || i + 1 == n);
        if (strictly_inside_rect(v[i], pres)) continue;
        if (endpoint && on_rect_boundary(v[i], pres)) continue;
        throw NotGeneric("vertex " + std::to_string(i) + " at " + pt_str(v[i]) +
                         " leaves the ambient rectangle");
    }
    if (!closed && n == 2 && on_rect_boundary(v[0], pres) && on_rect_boundary(v[1], pres)) {
        Pt mid = Rat(1, 2) * (v[0] + v[1]);
        if (!strictly_inside_rect(mid, pres)) throw NotGeneric("arc runs along the boundary");
    }

    std::vector<SelfCrossing> crossings;
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = i + 1; j < m; ++j) {
            Seg si = seg_at(v, closed, i), sj = seg_at(v, closed, j);
            SegX x = intersect(si, sj);
            bool adjacent = (j == i + 1) || (closed && i == 0 && j == m - 1);
            if (adjacent) {
                Pt shared = (j == i + 1) ? si.b : si.a;
                if (x.kind == SegXKind::Overlap || (x.kind == SegXKind::Point && x.point != shared))
                    throw NotGeneric("adjacent edges " + std::to_string(i) + "," + std::to_string(j) +
                                     " meet away from their shared vertex");
                continue;
            }
            if (x.kind == SegXKind::None) continue;
            if (x.kind == SegXKind::Overlap || !proper_crossing(si, sj))
                throw NotGeneric("edges " + std::to_string(i) + "," + std::to_string(j) +
                                 " meet non-transversally");
            crossings.push_back({x.point, i, j});
        }
    }
    for (size_t a = 0; a < crossings.size(); ++a)
        for (size_t b = a + 1; b < crossings.size(); ++b)
            if (crossings[a].point == crossings[b].point)
                throw NotGeneric("triple point at " + pt_str(crossings[a].point));

    for (size_t i = 0; i < m; ++i) {
        Seg s = seg_at(v, closed, i);
        for (int k = 0; k < pres.branch_count(); ++k) {
            Seg arc = pres.splitting_arc(k);
            SegX x = intersect(s, arc);
            if (x.kind == SegXKind::None) continue;
            if (x.kind == SegXKind::Overlap)
                throw NotGeneric("edge " + std::to_string(i) + " collinear with splitting arc " +
                                 std::to_string(k));
            if (x.point == pres.branch_position(k)) {
                bool terminal = !closed && allow_branch_endpoints &&
                                (x.point == v.front() || x.point == v.back());
                if (terminal) continue;
                throw NotGeneric("polyline meets branch point " + std::to_string(k));
            }
            if (!proper_crossing(s, arc))
                throw NotGeneric("edge " + std::to_string(i) + " touches splitting arc " +
                                 std::to_string(k) + " non-transversally at " + pt_str(x.point));
        }
    }
    for (const SelfCrossing &c : crossings)
        for (int k = 0; k < pres.branch_count(); ++k)
            if (on_segment(c.point, pres.splitting_arc(k)))
                throw NotGeneric("self-crossing at " + pt_str(c.point) + " lies on splitting arc " +
                                 std::to_string(k));
    return crossings;
}

// Transits in traversal order, labels propagated from start_label. The edge
// order is base_edge, base_edge+1, ... (mod size) when closed.
std::vector<Transit> collect_transits(const std::vector<Pt> &v, bool closed, int base_edge,
                                      const CoverPresentation &pres, int start_label) {
    size_t m = seg_count(v, closed);
    std::vector<Transit> out;
    for (size_t pos = 0; pos < m; ++pos) {
        size_t e = closed ? (size_t(base_edge) + pos) % m : pos;
        Seg s = seg_at(v, closed, e);
        std::vector<Transit> here;
        for (int k = 0; k < pres.branch_count(); ++k) {
            Seg arc = pres.splitting_arc(k);
            if (!proper_crossing(s, arc)) continue;
            SegX x = intersect(s, arc);
            if (x.kind != SegXKind::Point) throw InternalInvariant("proper crossing without a point");
            Transit tr;
            tr.edge = int(e);
            tr.point = x.point;
            tr.t = (x.point.x - s.a.x) / (s.b.x - s.a.x);
            tr.branch = k;
            tr.left_to_right = s.b.x > s.a.x;
            here.push_back(tr);
        }
        std::sort(here.begin(), here.end(), [](const Transit &a, const Transit &b) { return a.t < b.t; });
        out.insert(out.end(), here.begin(), here.end());
    }
    int label = start_label;
    for (Transit &tr : out) {
        tr.label_before = label;
        label = pres.branches[size_t(tr.branch)].apply(label);
        tr.label_after = label;
    }
    return out;
}

void check_cover_for_diagram(const CoverPresentation &pres) {
    CoverValidation cv = validate_cover(pres);
    if (!cv.ok) throw IndexOutOfRange("invalid cover: " + cv.errors.front());
}

} // namespace

int DiagramLabelling::label_at(int edge, const Rat &t) const {
    // start label of the edge, advanced past every earlier transit on it
    int label = edge_start_label[size_t(edge)];
    std::vector<const Transit *> on_edge;
    for (const Transit &tr : transits)
        if (tr.edge == edge && tr.t < t) on_edge.push_back(&tr);
    std::sort(on_edge.begin(), on_edge.end(),
              [](const Transit *a, const Transit *b) { return a->t < b->t; });
    for (const Transit *tr : on_edge) {
        if (label != tr->label_before) throw InternalInvariant("label bookkeeping mismatch");
        label = tr->label_after;
    }
    return label;
}

DiagramLabelling validate_diagram(const LabelledDiagram &d, const CoverPresentation &pres) {
    check_cover_for_diagram(pres);
    size_t n = d.vertices.size();
    if (n < 3) throw NotGeneric("closed diagram needs at least 3 vertices");
    if (d.base_edge < 0 || size_t(d.base_edge) >= n)
        throw IndexOutOfRange("base edge " + std::to_string(d.base_edge) + " not in 0.." +
                              std::to_string(n - 1));
    if (d.base_label < 1 || d.base_label > pres.degree)
        throw IndexOutOfRange("base label " + std::to_string(d.base_label) + " not in 1.." +
                              std::to_string(pres.degree));

    std::vector<SelfCrossing> raw = check_generic(d.vertices, true, pres, false);

    DiagramLabelling lab;
    lab.degree = pres.degree;
    lab.transits = collect_transits(d.vertices, true, d.base_edge, pres, d.base_label);

    lab.edge_start_label.assign(n, 0);
    int label = d.base_label;
    for (size_t pos = 0; pos < n; ++pos) {
        size_t e = (size_t(d.base_edge) + pos) % n;
        lab.edge_start_label[e] = label;
        for (const Transit &tr : lab.transits)
            if (tr.edge == int(e)) label = tr.label_after;
    }
    if (label != d.base_label)
        throw LabelClosureFailure("labels do not close up: returned " + std::to_string(label) +
                                  ", expected " + std::to_string(d.base_label));

    auto traversal_pos = [&](size_t e) { return (e + n - size_t(d.base_edge)) % n; };
    for (const SelfCrossing &c : raw) {
        Crossing cr;
        size_t i = c.i, j = c.j;
        if (traversal_pos(j) < traversal_pos(i)) std::swap(i, j);
        cr.point = c.point;
        cr.edge_a = int(i);
        cr.edge_b = int(j);
        Seg si = seg_at(d.vertices, true, i), sj = seg_at(d.vertices, true, j);
        cr.ta = si.a.x != si.b.x ? (c.point.x - si.a.x) / (si.b.x - si.a.x)
                                 : (c.point.y - si.a.y) / (si.b.y - si.a.y);
        cr.tb = sj.a.x != sj.b.x ? (c.point.x - sj.a.x) / (sj.b.x - sj.a.x)
                                 : (c.point.y - sj.a.y) / (sj.b.y - sj.a.y);
        cr.label_a = lab.label_at(cr.edge_a, cr.ta);
        cr.label_b = lab.label_at(cr.edge_b, cr.tb);
        if (cr.label_a == cr.label_b)
            throw SameLabelCrossing("crossing at " + pt_str(cr.point) + " has equal labels " +
                                    std::to_string(cr.label_a));
        lab.crossings.push_back(cr);
    }
    std::sort(lab.crossings.begin(), lab.crossings.end(),
              [](const Crossing &a, const Crossing &b) { return lex_less(a.point, b.point); });
    return lab;
}

void validate_arc(const ArcDiagram &a, const CoverPresentation &pres) {
    check_cover_for_diagram(pres);
    check_generic(a.vertices, false, pres, true);
}

std::vector<Transit> arc_transits(const ArcDiagram &a, const CoverPresentation &pres,
                                  int start_label) {
    if (start_label < 1 || start_label > pres.degree)
        throw IndexOutOfRange("start label " + std::to_string(start_label) + " not in 1.." +
                              std::to_string(pres.degree));
    return collect_transits(a.vertices, false, 0, pres, start_label);
}

CrossingWord crossing_word(const LabelledDiagram &d, const CoverPresentation &pres) {
    DiagramLabelling lab = validate_diagram(d, pres);
    CrossingWord w;
    for (const Transit &tr : lab.transits) w.entries.push_back({tr.branch, tr.left_to_right});
    return w;
}

HomologyClass homology_class(const LabelledDiagram &d, const CoverPresentation &pres) {
    DiagramLabelling lab = validate_diagram(d, pres);
    HomologyClass h;
    h.coefficients.assign(size_t(pres.branch_count()), 0);
    for (const Transit &tr : lab.transits) {
        const Transposition &t = pres.branches[size_t(tr.branch)];
        if (tr.label_before == t.low && tr.label_after == t.high) h.coefficients[size_t(tr.branch)] += 1;
        if (tr.label_before == t.high && tr.label_after == t.low) h.coefficients[size_t(tr.branch)] -= 1;
    }
    return h;
}

bool is_homologically_nontrivial(const LabelledDiagram &d, const CoverPresentation &pres) {
    return !homology_class(d, pres).is_zero();
}

int FaceDecomposition::onegons() const {
    int c = 0;
    for (const FaceInfo &f : faces)
        if (!f.outer && f.arity == 1) ++c;
    return c;
}

FaceDecomposition faces(const LabelledDiagram &d, const CoverPresentation &pres) {
    validate_diagram(d, pres);
    std::vector<Arrangement::Input> inputs;
    for (size_t i = 0; i < d.edge_count(); ++i) inputs.push_back({d.edge(i), 0});
    Arrangement arr = Arrangement::build(inputs);

    FaceDecomposition out;
    out.outer_id = arr.outer_face();
    for (size_t v = 0; v < arr.verts().size(); ++v)
        if (arr.is_self_crossing(int(v), 0)) ++out.crossings;
    for (size_t f = 0; f < arr.faces().size(); ++f) {
        FaceInfo info;
        info.id = int(f);
        info.outer = arr.faces()[f].outer;
        info.arity = arr.face_arity(int(f), 0);
        info.polygon = arr.face_polygon(int(f));
        info.neighbors = arr.face_neighbors(int(f));
        out.faces.push_back(std::move(info));
    }
    for (int k = 0; k < pres.branch_count(); ++k) {
        int f = arr.face_containing(pres.branch_position(k));
        out.faces[size_t(f)].branch_points.push_back(k);
    }
    return out;
}

std::optional<int> find_innermost_onegon(const LabelledDiagram &d, const CoverPresentation &pres) {
    validate_diagram(d, pres);
    std::vector<Arrangement::Input> inputs;
    for (size_t i = 0; i < d.edge_count(); ++i) inputs.push_back({d.edge(i), 0});
    Arrangement arr = Arrangement::build(inputs);

    std::vector<int> onegons;
    for (size_t f = 0; f < arr.faces().size(); ++f)
        if (!arr.faces()[f].outer && arr.face_arity(int(f), 0) == 1) onegons.push_back(int(f));
    if (onegons.empty()) return std::nullopt;

    std::vector<Pt> inner_pts;
    for (int f : onegons) inner_pts.push_back(face_interior_point(arr, f));

    std::optional<int> best;
    Pt best_corner;
    for (size_t a = 0; a < onegons.size(); ++a) {
        std::vector<Pt> poly = arr.face_polygon(onegons[a]);
        bool innermost = true;
        for (size_t b = 0; b < onegons.size() && innermost; ++b)
            if (b != a && point_in_walk(poly, inner_pts[b])) innermost = false;
        if (!innermost) continue;
        Pt corner;
        bool have = false;
        for (int v : arr.faces()[size_t(onegons[a])].walk_verts)
            if (arr.is_self_crossing(v, 0)) {
                Pt p = arr.verts()[size_t(v)];
                if (!have || lex_less(p, corner)) corner = p;
                have = true;
            }
        if (!best || lex_less(corner, best_corner)) {
            best = onegons[a];
            best_corner = corner;
        }
    }
    return best;
}

namespace {

// Thin two-sided offset of the arc with caps looping around its endpoints;
// built by guess-and-verify on the half-width, every check exact.
LabelledDiagram neighborhood_boundary(const std::vector<Pt> &arc, const CoverPresentation &pres,
                                      int base_label) {
    std::vector<Pt> v = simplify_polyline(arc, false);
    size_t m = v.size() - 1;
    Rat delta(1, 8);
    for (int attempt = 0; attempt < 48; ++attempt, delta /= 2) {
        std::vector<Pt> dir(m), off(m);
        for (size_t i = 0; i < m; ++i) {
            dir[i] = v[i + 1] - v[i];
            Rat s = delta / (abs(dir[i].x) + abs(dir[i].y));
            off[i] = Pt(s * dir[i].y, -s * dir[i].x); // right-hand normal
        }
        Rat s0 = delta / (abs(dir[0].x) + abs(dir[0].y));
        Rat sm = delta / (abs(dir[m - 1].x) + abs(dir[m - 1].y));
        // chains start slightly advanced along the arc so their tips avoid
        // the splitting arcs hanging off the endpoints; the advance fraction
        // varies per attempt since a fixed one can cancel against the normal
        // offset for particular slopes, independently of delta
        Rat adv(1, attempt + 2);
        auto chain = [&](int side) {
            std::vector<Pt> c;
            c.push_back(v[0] + adv * s0 * dir[0] + Rat(side) * off[0]);
            for (size_t i = 1; i < m; ++i) {
                auto p = line_intersect(v[i - 1] + Rat(side) * off[i - 1], dir[i - 1],
                                        v[i] + Rat(side) * off[i], dir[i]);
                if (!p) return std::vector<Pt>{}; // parallel joints; shrink and retry
                c.push_back(*p);
            }
            c.push_back(v[m] - adv * sm * dir[m - 1] + Rat(side) * off[m - 1]);
            return c;
        };
        std::vector<Pt> right = chain(+1), left = chain(-1);
        if (right.empty() || left.empty()) continue;

        std::vector<Pt> poly = right;
        poly.push_back(v[m] + sm * dir[m - 1]);
        poly.insert(poly.end(), left.rbegin(), left.rend());
        poly.push_back(v[0] - s0 * dir[0]);
        poly = simplify_polyline(poly, true);

        if (poly.size() < 3 || !polyline_simple(poly, true)) continue;
        bool ok = true;
        for (const Pt &p : poly)
            if (!strictly_inside_rect(p, pres)) ok = false;
        if (!ok) continue;
        for (size_t i = 0; i < poly.size() && ok; ++i)
            for (size_t j = 0; j < m && ok; ++j)
                if (intersect(Seg(poly[i], poly[(i + 1) % poly.size()]), Seg(v[j], v[j + 1])).kind !=
                    SegXKind::None)
                    ok = false;
        if (!ok) continue;
        if (!point_in_walk(poly, v[0]) || !point_in_walk(poly, v[m])) continue;
        for (int k = 0; k < pres.branch_count() && ok; ++k) {
            Pt b = pres.branch_position(k);
            if (b == v[0] || b == v[m]) continue;
            if (point_on_polyline(poly, b, true) || point_in_walk(poly, b)) ok = false;
        }
        if (!ok) continue;

        LabelledDiagram d;
        d.vertices = poly;
        d.base_edge = 0;
        d.base_label = base_label;
        try {
            validate_diagram(d, pres);
        } catch (const DomainError &) {
            continue;
        }
        return d;
    }
    throw InternalInvariant("neighborhood boundary construction did not converge");
}

} // namespace

LiftedArc lift_arc(const ArcDiagram &a, const CoverPresentation &pres) {
    validate_arc(a, pres);
    auto branch_at = [&](const Pt &p) {
        for (int k = 0; k < pres.branch_count(); ++k)
            if (pres.branch_position(k) == p) return k;
        return -1;
    };
    int bp = branch_at(a.vertices.front());
    int bq = branch_at(a.vertices.back());
    if (bp < 0 || bq < 0)
        throw PreconditionFailed("lift_arc", "both arc endpoints must be branch points");

    std::vector<Transit> transits = collect_transits(a.vertices, false, 0, pres, 1);
    auto transport = [&](int sheet) {
        for (const Transit &tr : transits) sheet = pres.branches[size_t(tr.branch)].apply(sheet);
        return sheet;
    };
    std::vector<int> pi(size_t(pres.degree) + 1), pi_inv(size_t(pres.degree) + 1);
    for (int s = 1; s <= pres.degree; ++s) pi[size_t(s)] = transport(s);
    for (int s = 1; s <= pres.degree; ++s) pi_inv[size_t(pi[size_t(s)])] = s;

    const Transposition &mu_p = pres.branches[size_t(bp)];
    const Transposition &mu_q = pres.branches[size_t(bq)];
    int u = pi_inv[size_t(mu_q.low)], w = pi_inv[size_t(mu_q.high)];

    // union-find over strands, glued where the endpoints are branch points
    std::vector<int> parent(size_t(pres.degree) + 1);
    for (int s = 1; s <= pres.degree; ++s) parent[size_t(s)] = s;
    std::function<int(int)> find = [&](int x) {
        return parent[size_t(x)] == x ? x : parent[size_t(x)] = find(parent[size_t(x)]);
    };
    parent[size_t(find(mu_p.low))] = find(mu_p.high);
    parent[size_t(find(u))] = find(w);

    bool closed = (u == mu_p.low && w == mu_p.high) || (u == mu_p.high && w == mu_p.low);

    LiftedArc out;
    std::map<int, LiftComponent> comps;
    for (int s = 1; s <= pres.degree; ++s) comps[find(s)].strands.push_back(s);
    for (auto &[root, comp] : comps) {
        comp.closed = closed && comp.strands == std::vector<int>{mu_p.low, mu_p.high};
        out.components.push_back(comp);
    }
    out.has_closed = closed;
    if (closed)
        out.closed_diagram = neighborhood_boundary(a.vertices, pres, mu_p.low);
    return out;
}

nlohmann::json to_json(const LabelledDiagram &d) {
    nlohmann::json verts = nlohmann::json::array();
    for (const Pt &p : d.vertices) verts.push_back({rat_str(p.x), rat_str(p.y)});
    return nlohmann::json{{"vertices", verts}, {"base_edge", d.base_edge}, {"base_label", d.base_label}};
}

LabelledDiagram diagram_from_json(const nlohmann::json &j) {
    LabelledDiagram d;
    for (const auto &p : j.at("vertices"))
        d.vertices.emplace_back(rat_parse(p.at(0).get<std::string>()),
                                rat_parse(p.at(1).get<std::string>()));
    d.base_edge = j.at("base_edge").get<int>();
    d.base_label = j.at("base_label").get<int>();
    return d;
}

nlohmann::json to_json(const ArcDiagram &a) {
    nlohmann::json verts = nlohmann::json::array();
    for (const Pt &p : a.vertices) verts.push_back({rat_str(p.x), rat_str(p.y)});
    return nlohmann::json{{"vertices", verts}};
}

ArcDiagram arc_from_json(const nlohmann::json &j) {
    ArcDiagram a;
    for (const auto &p : j.at("vertices"))
        a.vertices.emplace_back(rat_parse(p.at(0).get<std::string>()),
                                rat_parse(p.at(1).get<std::string>()));
    return a;
}

nlohmann::json to_json(const FaceDecomposition &fd) {
    nlohmann::json fs = nlohmann::json::array();
    for (const FaceInfo &f : fd.faces) {
        nlohmann::json poly = nlohmann::json::array();
        for (const Pt &p : f.polygon) poly.push_back({rat_str(p.x), rat_str(p.y)});
        fs.push_back({{"id", f.id},
                      {"outer", f.outer},
                      {"arity", f.arity},
                      {"branch_points", f.branch_points},
                      {"neighbors", f.neighbors},
                      {"polygon", poly}});
    }
    return nlohmann::json{{"faces", fs}, {"outer_id", fd.outer_id}, {"crossings", fd.crossings}};
}

} // namespace twistlift
