#include "twistlift/arrange.hpp"
#include "twistlift/errors.hpp"
#include "twistlift/synthesis.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

namespace twistlift {

namespace {

Pt neg(const Pt &p) { return Pt(-p.x, -p.y); }

Rat dot2(const Pt &a, const Pt &b) { return a.x * b.x + a.y * b.y; }
Rat cross2(const Pt &a, const Pt &b) { return a.x * b.y - a.y * b.x; }

// Scale to max(|x|,|y|) == 1, so offsets built from these are comparable.
Pt dir_unit(const Pt &e) {
    Rat m = abs(e.x) < abs(e.y) ? abs(e.y) : abs(e.x);
    if (sgn(m) == 0) throw InternalInvariant("zero direction vector");
    return Pt(e.x / m, e.y / m);
}

Pt perp_left(const Pt &d) { return Pt(-d.y, d.x); }

// Interior sector at a boundary-walk corner, swept counterclockwise from the
// outgoing direction e2 to the back-direction e1 of the incoming edge.
bool in_sector(const Pt &e1, const Pt &e2, const Pt &u) {
    if (sgn(u.x) == 0 && sgn(u.y) == 0) return false;
    int c = sgn(cross2(e2, e1));
    if (c > 0) return sgn(cross2(e2, u)) > 0 && sgn(cross2(u, e1)) > 0;
    if (c < 0) return sgn(cross2(e2, u)) > 0 || sgn(cross2(u, e1)) > 0;
    if (sgn(dot2(e1, e2)) < 0) return sgn(cross2(e2, u)) > 0; // straight boundary
    // spike (antenna tip): everything but the outgoing ray points inward
    return !(sgn(cross2(e2, u)) == 0 && sgn(dot2(e2, u)) > 0);
}

Pt corner_dir(const Pt &e1, const Pt &e2) {
    Pt a = dir_unit(e1), b = dir_unit(e2);
    const Pt cands[] = {a + b, neg(a + b),      perp_left(b), neg(perp_left(b)),
                        perp_left(a), neg(perp_left(a)), a - b, b - a};
    for (const Pt &u : cands) {
        if (sgn(u.x) == 0 && sgn(u.y) == 0) continue;
        if (in_sector(e1, e2, u)) return dir_unit(u);
    }
    throw InternalInvariant("no inward direction at a walk corner");
}

Rat seg_param(const Seg &s, const Pt &p) {
    if (s.a.x != s.b.x) return (p.x - s.a.x) / (s.b.x - s.a.x);
    return (p.y - s.a.y) / (s.b.y - s.a.y);
}

struct PieceInfo {
    int tag = -1;        // 0 diagram, 1 splitting arc, 2 ambient box
    int curve_edge = -1; // tag 0: diagram edge index
    int branch = -1;     // tag 1: branch index
    Rat tlo, thi;        // tag 0: parameter range along the diagram edge
    int label = 0;       // tag 0: sheet carried on this piece
};

// Working state for the geometric stages: the current cover and diagram,
// their labelling, and one exact arrangement of the diagram edges (tag 0),
// the splitting arcs (tag 1) and the ambient rectangle (tag 2). Chambers are
// the arrangement faces; the rectangle keeps everything connected.
struct Bench {
    CoverPresentation pres;
    LabelledDiagram d;
    DiagramLabelling lab;
    FaceDecomposition fdec;
    Arrangement arr;
    std::vector<PieceInfo> pieces; // per arrangement edge
    std::vector<int> comp;         // per chamber: component under arc-crossing
    std::vector<int> comp_face;    // per component: curve-face id, -1 if unbounded
    std::vector<MoveStep> steps;
    int stabs = 0;

    void init(const CoverPresentation &p, const LabelledDiagram &dia) {
        pres = p;
        d = dia;
        rebuild();
    }

    Pt vert(int v) const { return arr.verts()[size_t(v)]; }

    Pt he_inward(int he) const {
        Pt a = vert(arr.half_edge_from(he)), b = vert(arr.half_edge_to(he));
        return dir_unit(perp_left(b - a));
    }

    void rebuild();
    bool try_move(const Move &m);
    int tip_chamber(int branch, int *tip_he_out = nullptr) const;
    StageResult stage() const { return {pres, d, steps, stabs}; }
};

void Bench::rebuild() {
    lab = validate_diagram(d, pres);
    fdec = faces(d, pres);

    std::vector<Arrangement::Input> in;
    int E = int(d.edge_count());
    for (int i = 0; i < E; ++i) in.push_back({d.edge(size_t(i)), 0});
    for (int k = 0; k < pres.branch_count(); ++k) in.push_back({pres.splitting_arc(k), 1});
    Rat W = pres.rect_width();
    Pt c0(Rat(0), Rat(-1)), c1(W, Rat(-1)), c2(W, Rat(1)), c3(Rat(0), Rat(1));
    in.push_back({Seg(c0, c1), 2});
    in.push_back({Seg(c1, c2), 2});
    in.push_back({Seg(c2, c3), 2});
    in.push_back({Seg(c3, c0), 2});
    arr = Arrangement::build(in);

    pieces.assign(arr.edges().size(), {});
    for (size_t e = 0; e < arr.edges().size(); ++e) {
        const Arrangement::Edge &ed = arr.edges()[e];
        PieceInfo pi;
        pi.tag = ed.curve;
        if (ed.curve == 0) {
            pi.curve_edge = ed.input;
            Seg s = d.edge(size_t(ed.input));
            Rat tu = seg_param(s, vert(ed.u)), tv = seg_param(s, vert(ed.v));
            pi.tlo = tu < tv ? tu : tv;
            pi.thi = tu < tv ? tv : tu;
            pi.label = lab.label_at(ed.input, (pi.tlo + pi.thi) / 2);
        } else if (ed.curve == 1) {
            pi.branch = ed.input - E;
        }
        pieces[e] = pi;
    }

    // Chamber components under crossing splitting-arc walls only; each
    // bounded component is the set of chambers of one curve face.
    comp.assign(arr.faces().size(), -1);
    int nc = 0;
    for (size_t f0 = 0; f0 < arr.faces().size(); ++f0) {
        if (comp[f0] != -1) continue;
        comp[f0] = nc;
        std::deque<int> q{int(f0)};
        while (!q.empty()) {
            int f = q.front();
            q.pop_front();
            for (int he : arr.faces()[size_t(f)].half_edges) {
                if (pieces[size_t(he / 2)].tag != 1) continue;
                int g = arr.face_of_half_edge(he ^ 1);
                if (comp[size_t(g)] == -1) {
                    comp[size_t(g)] = nc;
                    q.push_back(g);
                }
            }
        }
        ++nc;
    }

    std::vector<Arrangement::Input> cin;
    for (int i = 0; i < E; ++i) cin.push_back({d.edge(size_t(i)), 0});
    Arrangement curve_arr = Arrangement::build(cin);
    comp_face.assign(size_t(nc), -1);
    for (size_t f = 0; f < arr.faces().size(); ++f) {
        if (int(f) == arr.outer_face()) continue;
        int c = comp[f];
        if (comp_face[size_t(c)] != -1) continue;
        comp_face[size_t(c)] = curve_arr.face_containing(face_interior_point(arr, int(f)));
    }
}

bool Bench::try_move(const Move &m) {
    MoveResult r;
    try {
        r = apply_move(pres, d, m);
    } catch (const DomainError &e) {
        if (getenv("TL_DUMP")) fprintf(stderr, "          move rejected: %s\n", e.what());
        return false;
    }
    pres = r.pres;
    d = r.diagram;
    steps.push_back({m, diagram_hash(d), pres.degree, pres.branch_count()});
    if (m.kind == MoveKind::Stabilize) ++stabs;
    rebuild();
    return true;
}

// The chamber holding branch point `branch`, via the arc piece at its tip;
// both sides of the tip piece bound the same chamber. The reported half-edge
// is oriented away from the branch point.
int Bench::tip_chamber(int branch, int *tip_he_out) const {
    Pt bp = pres.branch_position(branch);
    int v = -1;
    for (size_t i = 0; i < arr.verts().size(); ++i)
        if (arr.verts()[i] == bp) {
            v = int(i);
            break;
        }
    if (v < 0) throw InternalInvariant("branch point missing from the arrangement");
    for (size_t e = 0; e < arr.edges().size(); ++e) {
        const Arrangement::Edge &ed = arr.edges()[e];
        if (pieces[e].tag != 1 || pieces[e].branch != branch) continue;
        if (ed.u != v && ed.v != v) continue;
        int he = int(2 * e) + (ed.u == v ? 0 : 1);
        if (tip_he_out) *tip_he_out = he;
        return arr.face_of_half_edge(he);
    }
    throw InternalInvariant("tip piece missing from the arrangement");
}

// ---------------------------------------------------------------------------
// Chamber-lift search. Nodes are (chamber, sheet); crossing an arc wall of
// branch k maps the sheet through its transposition (when arcs_act), diagram
// walls are crossable only when allowed and carrying a different label, and
// the ambient box is never crossed.

struct LiftPath {
    std::vector<int> hes;   // crossed walls; hes[j] bounds faces[j]
    std::vector<int> faces; // chambers, hes.size() + 1 of them
    std::vector<int> sheets;
};

std::optional<LiftPath> lift_bfs(const Bench &B, const std::vector<std::pair<int, int>> &starts,
                                 const std::function<bool(int, int)> &is_target,
                                 const std::function<bool(int)> &sheet_ok, bool cross_curve,
                                 bool arcs_act) {
    int D = B.pres.degree;
    auto id = [&](int f, int s) { return f * D + (s - 1); };
    std::map<int, std::pair<int, int>> parent; // node -> (prev node, wall he)
    std::deque<std::pair<int, int>> q;
    for (auto [f, s] : starts) {
        if (!sheet_ok(s) || parent.count(id(f, s))) continue;
        parent[id(f, s)] = {-1, -1};
        q.push_back({f, s});
    }
    while (!q.empty()) {
        auto [f, s] = q.front();
        q.pop_front();
        if (is_target(f, s)) {
            LiftPath p;
            std::vector<int> nodes;
            int node = id(f, s);
            while (node >= 0) {
                nodes.push_back(node);
                auto pr = parent.at(node);
                if (pr.first >= 0) p.hes.push_back(pr.second);
                node = pr.first;
            }
            std::reverse(nodes.begin(), nodes.end());
            std::reverse(p.hes.begin(), p.hes.end());
            for (int nd : nodes) {
                p.faces.push_back(nd / D);
                p.sheets.push_back(nd % D + 1);
            }
            return p;
        }
        for (int he : B.arr.faces()[size_t(f)].half_edges) {
            const PieceInfo &pi = B.pieces[size_t(he / 2)];
            int g = B.arr.face_of_half_edge(he ^ 1);
            int s2;
            if (pi.tag == 1) {
                s2 = arcs_act ? B.pres.branches[size_t(pi.branch)].apply(s) : s;
            } else if (pi.tag == 0 && cross_curve) {
                if (s == pi.label) continue;
                s2 = s;
            } else {
                continue;
            }
            if (!sheet_ok(s2) || parent.count(id(g, s2))) continue;
            parent[id(g, s2)] = {id(f, s), he};
            q.push_back({g, s2});
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Boundary hugging: walk the face boundary from a point on one half-edge to
// a point on another at a fixed inward offset, nudging into the interior
// sector at every corner. `fwd` follows the walk order, otherwise its
// reverse. Exact rational arithmetic throughout; callers shrink eps and try
// direction variants until the move engine accepts the result.
template <class BB>
std::vector<Pt> face_route(const BB &B, int f, int ha, const Pt &pa, int hb, const Pt &pb,
                           const Rat &eps, bool fwd, bool fan = false) {
    if (!fwd) {
        std::vector<Pt> r = face_route(B, f, hb, pb, ha, pa, eps, true, fan);
        std::reverse(r.begin(), r.end());
        return r;
    }
    const std::vector<int> &walk = B.arr.faces()[size_t(f)].half_edges;
    size_t m = walk.size(), ia = m, ib = m;
    for (size_t i = 0; i < m; ++i) {
        if (walk[i] == ha) ia = i;
        if (walk[i] == hb) ib = i;
    }
    if (ia == m || ib == m) throw InternalInvariant("face_route: half-edge not on the face");

    bool wrap = false;
    if (ia == ib && !(pa == pb)) {
        Pt a = B.vert(B.arr.half_edge_from(ha));
        Pt dir = B.vert(B.arr.half_edge_to(ha)) - a;
        wrap = !(dot2(pa - a, dir) < dot2(pb - a, dir));
    }
    size_t corners = ia == ib ? (wrap ? m : 0) : (ib + m - ia) % m;

    std::vector<Pt> out;
    out.push_back(pa + eps * B.he_inward(ha));
    for (size_t k = 0; k < corners; ++k) {
        size_t i = (ia + k) % m, j = (i + 1) % m;
        int v = B.arr.half_edge_to(walk[i]);
        Pt vp = B.vert(v);
        Pt e1 = B.vert(B.arr.half_edge_from(walk[i])) - vp;
        Pt e2 = B.vert(B.arr.half_edge_to(walk[j])) - vp;
        // With `fan`, round the corner along the offset square: one point
        // where the incoming parallel ends, one inward nudge, one where the
        // outgoing parallel starts, keeping whichever lies in the interior
        // sector. A single diagonal nudge drifts off the offset curve and can
        // sweep across anything closer to the walls, which matters for
        // connector legs that pass the same walls repeatedly.
        if (fan) {
            // The incoming parallel extends to the offset-square corner past
            // the vertex (travel direction is opposite e1), the outgoing one
            // starts a square corner early; around a spike this traces the
            // square, never a diagonal through the tip neighbourhood.
            Pt u_in = B.he_inward(walk[i]) - dir_unit(e1);
            Pt u_out = B.he_inward(walk[j]) - dir_unit(e2);
            if (in_sector(e1, e2, u_in)) out.push_back(vp + eps * dir_unit(u_in));
            out.push_back(vp + eps * corner_dir(e1, e2));
            if (in_sector(e1, e2, u_out)) out.push_back(vp + eps * dir_unit(u_out));
        } else {
            out.push_back(vp + eps * corner_dir(e1, e2));
        }
    }
    // a full lap ends at a slightly smaller offset so the closing stretch
    // does not run through the starting nudge
    Rat end_eps = wrap ? eps * Rat(7, 8) : eps;
    out.push_back(pb + end_eps * B.he_inward(hb));
    return out;
}

void append_pts(std::vector<Pt> &dst, const std::vector<Pt> &src) {
    dst.insert(dst.end(), src.begin(), src.end());
}

// ---------------------------------------------------------------------------
// T2 finger: cut the diagram inside the door piece and grow two parallel
// strands (outgoing at offsets ~eps, returning at half of that) along the
// corridor, wrap the splitting arc of the target branch around its tip, and
// come back. The wrap crosses the arc exactly once, below the turn.

std::optional<Move> build_t2(const Bench &B, int door_he, const LiftPath &path, int branch,
                             const Rat &eps, bool dir, int tip_side) {
    const PieceInfo &door = B.pieces[size_t(door_he / 2)];
    Seg ds = B.d.edge(size_t(door.curve_edge));
    Rat mid = (door.tlo + door.thi) / 2, dt = (door.thi - door.tlo) / 8;
    Rat t_a = mid - dt, t_b = mid + dt;
    Pt pa = ds.a + t_a * (ds.b - ds.a);
    Pt pb = ds.a + t_b * (ds.b - ds.a);

    size_t K = path.hes.size();
    Rat denom(long(2 * (K + 2)));
    auto alpha = [&](size_t j) -> Rat { return eps * Rat(long(2 * (K + 2) - j)) / denom; };
    auto beta = [&](size_t j) -> Rat { return alpha(j) / 2; };

    std::vector<Pt> Xout(K), Xret(K);
    for (size_t j = 0; j < K; ++j) {
        int he = path.hes[j];
        Pt wa = B.vert(B.arr.half_edge_from(he)), wb = B.vert(B.arr.half_edge_to(he));
        Rat off = Rat(long(j + 1)) / (2 * denom);
        Xout[j] = wa + (Rat(1, 2) - off) * (wb - wa);
        Xret[j] = wa + (Rat(1, 2) + off) * (wb - wa);
    }

    int tip_he = -1;
    int cb = B.tip_chamber(branch, &tip_he);
    if (path.faces.back() != cb) throw InternalInvariant("corridor does not reach the branch");
    int side_he = tip_side == 0 ? tip_he : (tip_he ^ 1);
    Pt bp = B.vert(B.arr.half_edge_from(tip_he));
    Pt vlow = B.vert(B.arr.half_edge_to(tip_he));
    auto H = [&](const Rat &f) { return bp + f * (vlow - bp); }; // f: tip -> lower end

    std::vector<Pt> out;
    try {
        int cur_he = door_he;
        Pt cur = pa;
        for (size_t j = 0; j < K; ++j) {
            append_pts(out, face_route(B, path.faces[j], cur_he, cur, path.hes[j], Xout[j],
                                       alpha(j), dir));
            cur_he = path.hes[j] ^ 1;
            cur = Xout[j];
        }
        Rat aK = alpha(K), bK = beta(K);
        append_pts(out, face_route(B, path.faces[K], cur_he, cur, side_he, H(Rat(1, 2)), aK, dir));
        Pt n1 = B.he_inward(side_he); // exactly (+-1, 0): splitting arcs are vertical
        Rat sx = n1.x;
        out.push_back(Pt(bp.x + sx * aK, bp.y));
        out.push_back(Pt(bp.x, bp.y + aK));
        out.push_back(Pt(bp.x - sx * aK, bp.y));
        out.push_back(Pt(bp.x - sx * aK, H(Rat(9, 16)).y));
        out.push_back(Pt(bp.x + sx * bK, H(Rat(5, 8)).y)); // crosses the arc once

        std::vector<Pt> ret;
        cur_he = door_he;
        cur = pb;
        for (size_t j = 0; j < K; ++j) {
            append_pts(ret, face_route(B, path.faces[j], cur_he, cur, path.hes[j], Xret[j],
                                       beta(j), dir));
            cur_he = path.hes[j] ^ 1;
            cur = Xret[j];
        }
        append_pts(ret, face_route(B, path.faces[K], cur_he, cur, side_he, H(Rat(5, 8)), bK, dir));
        std::reverse(ret.begin(), ret.end());
        append_pts(out, ret);
    } catch (const InternalInvariant &) {
        return std::nullopt; // no inward direction at some corner for this variant
    }

    Move m;
    m.kind = MoveKind::T2;
    m.from = {door.curve_edge, t_a};
    m.to = {door.curve_edge, t_b};
    m.replacement = simplify_polyline(out, false);
    m.branch = branch;
    return m;
}

void sort_doors(const Bench &B, std::vector<int> &doors) {
    std::sort(doors.begin(), doors.end(), [&](int x, int y) {
        const PieceInfo &px = B.pieces[size_t(x / 2)], &py = B.pieces[size_t(y / 2)];
        return std::tuple(px.curve_edge, px.tlo, x) < std::tuple(py.curve_edge, py.tlo, y);
    });
}

// True when the polyline intersects the arc anywhere; used to keep carrier
// fingers away from a connecting arc that must survive later moves.
bool hits_avoid(const std::vector<Pt> &poly, const ArcDiagram &avoid) {
    for (size_t i = 0; i + 1 < poly.size(); ++i)
        for (size_t j = 0; j + 1 < avoid.vertices.size(); ++j)
            if (intersect(Seg(poly[i], poly[i + 1]),
                          Seg(avoid.vertices[j], avoid.vertices[j + 1]))
                    .kind != SegXKind::None)
                return true;
    return false;
}

// Expel branch b from its curve face through any diagram-boundary door whose
// label avoids supp(mu_b), if a corridor with sheets off the support exists.
// When into_face is given, only doors whose far side lies in that curve face
// are used, so the branch lands there. When avoid is given, carrier fingers
// keeping clear of it are required: a T2 sweep is bounded by the old and new
// sub-paths, so an arc crossing neither stays outside the swept region.
bool try_expel(Bench &B, int b, std::optional<int> into_face = std::nullopt,
               const ArcDiagram *avoid = nullptr) {
    const Transposition &mu = B.pres.branches[size_t(b)];
    int cb = B.tip_chamber(b);
    int target_comp = B.comp[size_t(cb)];

    std::vector<int> doors;
    for (size_t e = 0; e < B.arr.edges().size(); ++e) {
        if (B.pieces[e].tag != 0 || mu.moves(B.pieces[e].label)) continue;
        for (int he : {int(2 * e), int(2 * e + 1)}) {
            if (B.comp[size_t(B.arr.face_of_half_edge(he))] != target_comp) continue;
            if (into_face &&
                B.comp_face[size_t(B.comp[size_t(B.arr.face_of_half_edge(he ^ 1))])] !=
                    *into_face)
                continue;
            doors.push_back(he);
        }
    }
    sort_doors(B, doors);

    // Prefer short corridors through doors near the branch: long boundary
    // hugs wall off other branch points behind the new finger.
    Pt bp = B.pres.branch_position(b);
    std::vector<std::tuple<size_t, Rat, int, LiftPath>> cands;
    for (int door : doors) {
        int lab = B.pieces[size_t(door / 2)].label;
        auto path = lift_bfs(
            B, {{B.arr.face_of_half_edge(door), lab}}, [&](int f, int) { return f == cb; },
            [&](int s) { return !mu.moves(s); }, false, true);
        if (!path) continue;
        const PieceInfo &pi = B.pieces[size_t(door / 2)];
        Seg s = B.d.edge(size_t(pi.curve_edge));
        Pt mid = s.a + (pi.tlo + pi.thi) / 2 * (s.b - s.a);
        Rat d2 = dot2(mid - bp, mid - bp);
        cands.emplace_back(path->hes.size(), d2, door, std::move(*path));
    }
    std::stable_sort(cands.begin(), cands.end(), [](const auto &x, const auto &y) {
        return std::get<0>(x) != std::get<0>(y) ? std::get<0>(x) < std::get<0>(y)
                                                : std::get<1>(x) < std::get<1>(y);
    });
    if (cands.size() > 12) cands.resize(12);
    for (const auto &[plen, d2, door, path] : cands) {
        Rat eps(1, 4);
        for (int att = 0; att < 9; ++att, eps /= 2)
            for (bool dir : {true, false})
                for (int side : {0, 1}) {
                    auto m = build_t2(B, door, path, b, eps, dir, side);
                    if (!m || (avoid && hits_avoid(m->replacement, *avoid))) continue;
                    if (B.try_move(*m)) return true;
                }
    }
    return false;
}

// Repeatedly expel until no listed branch can leave.
void expel_all(Bench &B, std::vector<int> inside) {
    bool progress = true;
    while (progress) {
        progress = false;
        for (size_t i = 0; i < inside.size(); ++i)
            if (try_expel(B, inside[i])) {
                inside.erase(inside.begin() + long(i));
                progress = true;
                break;
            }
    }
}

// ---------------------------------------------------------------------------
// Connecting arc between two branch points through chambers of one curve
// face, crossing only splitting-arc walls at their midpoints.

// True when walking the face boundary forward from ha reaches hb in no more
// steps than walking backward; legs of multi-chamber routes take the short
// way around their face so they stay local and cannot collide.
template <class BB>
bool short_way_fwd(const BB &B, int f, int ha, int hb) {
    const std::vector<int> &walk = B.arr.faces()[size_t(f)].half_edges;
    size_t m = walk.size(), ia = m, ib = m;
    for (size_t i = 0; i < m; ++i) {
        if (walk[i] == ha) ia = i;
        if (walk[i] == hb) ib = i;
    }
    if (ia == m || ib == m) return true;
    return (ib + m - ia) % m <= (ia + m - ib) % m;
}

// A minimal bench over a scratch arrangement, enough for boundary hugging.
struct Scene {
    Arrangement arr;
    Pt vert(int v) const { return arr.verts()[size_t(v)]; }
    Pt he_inward(int he) const {
        Pt a = vert(arr.half_edge_from(he)), b = vert(arr.half_edge_to(he));
        return dir_unit(perp_left(b - a));
    }
};

// Route the connector one leg at a time, each leg in a scratch arrangement
// that contains the partial connector as extra walls. A leg hugs the boundary
// of the face holding the current free end, so it stays clear of the curve,
// the splitting arcs, the box and every earlier leg at once: the finished arc
// is embedded by construction, whatever walls the transport path revisits.
// Offsets shrink by thirds per leg so no two derived parallels coincide.
std::optional<ArcDiagram> build_connector(const Bench &B, const LiftPath &path, int tip_p_he,
                                          int tip_q_he, int sp, int sq, const Rat &eps,
                                          bool dir) {
    size_t K = path.hes.size();
    int E = int(B.d.edge_count());
    Pt bp_p = B.vert(B.arr.half_edge_from(tip_p_he));
    Pt bp_q = B.vert(B.arr.half_edge_from(tip_q_he));
    int branch_p = B.pieces[size_t(tip_p_he / 2)].branch;
    int branch_q = B.pieces[size_t(tip_q_he / 2)].branch;

    std::vector<Pt> pts{bp_p};
    try {
        Rat ej = eps;
        for (size_t j = 0; j <= K; ++j, ej /= 3) {
            std::vector<Arrangement::Input> in;
            for (int i = 0; i < E; ++i) in.push_back({B.d.edge(size_t(i)), 0});
            for (int k = 0; k < B.pres.branch_count(); ++k)
                in.push_back({B.pres.splitting_arc(k), 1});
            Rat W = B.pres.rect_width();
            Pt c0(Rat(0), Rat(-1)), c1(W, Rat(-1)), c2(W, Rat(1)), c3(Rat(0), Rat(1));
            in.push_back({Seg(c0, c1), 2});
            in.push_back({Seg(c1, c2), 2});
            in.push_back({Seg(c2, c3), 2});
            in.push_back({Seg(c3, c0), 2});
            std::vector<Pt> laid = simplify_polyline(pts, false);
            for (size_t i = 0; i + 1 < laid.size(); ++i)
                in.push_back({Seg(laid[i], laid[i + 1]), 3});
            Scene S{Arrangement::build(in)};

            // the current free end and the half-edge leading away from it
            Pt tip = pts.back();
            int tv = -1;
            for (size_t v = 0; v < S.arr.verts().size() && tv < 0; ++v)
                if (S.arr.verts()[v] == tip) tv = int(v);
            if (tv < 0) throw InternalInvariant("connector: free end not a vertex");
            int hs = -1;
            for (size_t e = 0; e < S.arr.edges().size() && hs < 0; ++e) {
                const Arrangement::Edge &ed = S.arr.edges()[e];
                if (ed.u != tv && ed.v != tv) continue;
                bool want = j == 0 ? (ed.curve == 1 && ed.input - E == branch_p)
                                   : ed.curve == 3;
                if (want) hs = int(2 * e) + (ed.u == tv ? 0 : 1);
            }
            if (hs < 0) throw InternalInvariant("connector: free end edge missing");
            if (j == 0 ? sp : sq) hs ^= 1;
            int f = S.arr.face_of_half_edge(hs);

            int hb = -1;
            Pt X;
            if (j < K) {
                // any scratch piece of the planned wall on the current face
                int he0 = path.hes[j];
                Pt qa = B.vert(B.arr.half_edge_from(he0)), qb = B.vert(B.arr.half_edge_to(he0));
                auto on_plan = [&](const Pt &r) -> bool {
                    if (sgn(cross2(qb - qa, r - qa)) != 0) return false;
                    Rat t = dot2(r - qa, qb - qa);
                    return sgn(t) >= 0 && t <= dot2(qb - qa, qb - qa);
                };
                Rat best;
                for (size_t e = 0; e < S.arr.edges().size(); ++e) {
                    const Arrangement::Edge &ed = S.arr.edges()[e];
                    if (ed.curve != 1 || ed.input - E != B.pieces[size_t(he0 / 2)].branch)
                        continue;
                    if (!on_plan(S.vert(ed.u)) || !on_plan(S.vert(ed.v))) continue;
                    for (int he : {int(2 * e), int(2 * e + 1)}) {
                        if (S.arr.face_of_half_edge(he) != f) continue;
                        Pt mid = Rat(1, 2) * (S.vert(ed.u) + S.vert(ed.v));
                        Rat d2 = dot2(mid - tip, mid - tip);
                        if (hb < 0 || d2 < best) {
                            hb = he;
                            best = d2;
                            X = mid;
                        }
                    }
                }
                if (hb < 0) throw InternalInvariant("connector: planned wall unreachable");
            } else {
                // the destination tip piece, oriented away from the endpoint
                int qv = -1;
                for (size_t v = 0; v < S.arr.verts().size() && qv < 0; ++v)
                    if (S.arr.verts()[v] == bp_q) qv = int(v);
                for (size_t e = 0; e < S.arr.edges().size() && hb < 0; ++e) {
                    const Arrangement::Edge &ed = S.arr.edges()[e];
                    if (ed.curve != 1 || ed.input - E != branch_q) continue;
                    if (ed.u != qv && ed.v != qv) continue;
                    hb = int(2 * e) + (ed.u == qv ? 0 : 1);
                }
                if (hb < 0) throw InternalInvariant("connector: destination tip missing");
                if (S.arr.face_of_half_edge(hb) != f) hb ^= 1;
                if (S.arr.face_of_half_edge(hb) != f)
                    throw InternalInvariant("connector: destination off the face");
                X = bp_q;
            }

            bool fwd = short_way_fwd(S, f, hs, hb) == dir;
            append_pts(pts, face_route(S, f, hs, tip, hb, X, ej, fwd, true));
            if (j < K)
                pts.push_back(X + Rat(ej / 3) * S.he_inward(hb ^ 1)); // stub past the wall
            else
                pts.push_back(bp_q);
        }
    } catch (const InternalInvariant &) {
        return std::nullopt;
    } catch (const DomainError &) {
        return std::nullopt;
    }
    ArcDiagram arc;
    arc.vertices = simplify_polyline(pts, false);
    return arc;
}

void dump_geo(const Bench &B, const ArcDiagram &arc) {
    static int count = 0;
    if (!getenv("TL_GEO") || ++count != atoi(getenv("TL_GEO"))) return;
    FILE *f = fopen("/tmp/geo.txt", "w");
    for (size_t e = 0; e < B.arr.edges().size(); ++e) {
        const Arrangement::Edge &ed = B.arr.edges()[e];
        Pt a = B.vert(ed.u), b = B.vert(ed.v);
        fprintf(f, "E %.10f %.10f %.10f %.10f %d\n", a.x.get_d(), a.y.get_d(), b.x.get_d(),
                b.y.get_d(), B.pieces[e].tag);
    }
    for (const Pt &v : arc.vertices) fprintf(f, "A %.10f %.10f\n", v.x.get_d(), v.y.get_d());
    fclose(f);
}

bool connector_ok(const Bench &B, const ArcDiagram &arc, int p, int q) {
    if (arc.vertices.size() < 2 || !polyline_simple(arc.vertices, false)) {
        dump_geo(B, arc);
        if (getenv("TL_DUMP")) fprintf(stderr, "        conn: not simple\n");
        if (getenv("TL_DUMP"))
            for (size_t i = 0; i + 1 < arc.vertices.size(); ++i)
                for (size_t j = i + 2; j + 1 < arc.vertices.size(); ++j) {
                    if (i == 0 && j + 2 == arc.vertices.size()) continue;
                    auto ix = intersect(Seg(arc.vertices[i], arc.vertices[i + 1]),
                                        Seg(arc.vertices[j], arc.vertices[j + 1]));
                    if (ix.kind != SegXKind::None)
                        fprintf(stderr, "          X seg%zu (%s,%s)-(%s,%s) seg%zu (%s,%s)-(%s,%s)\n", i,
                                arc.vertices[i].x.get_str().c_str(), arc.vertices[i].y.get_str().c_str(),
                                arc.vertices[i + 1].x.get_str().c_str(), arc.vertices[i + 1].y.get_str().c_str(), j,
                                arc.vertices[j].x.get_str().c_str(), arc.vertices[j].y.get_str().c_str(),
                                arc.vertices[j + 1].x.get_str().c_str(), arc.vertices[j + 1].y.get_str().c_str());
                }
        return false;
    }
    for (size_t i = 0; i + 1 < arc.vertices.size(); ++i)
        for (size_t j = 0; j < B.d.edge_count(); ++j)
            if (intersect(Seg(arc.vertices[i], arc.vertices[i + 1]), B.d.edge(j)).kind !=
                SegXKind::None) { if (getenv("TL_DUMP")) fprintf(stderr, "        conn: hits curve\n");
                return false; }
    for (int k = 0; k < B.pres.branch_count(); ++k) {
        if (k == p || k == q) continue;
        if (point_on_polyline(arc.vertices, B.pres.branch_position(k), false)) { if (getenv("TL_DUMP")) fprintf(stderr, "        conn: hits branch\n"); return false; }
    }
    try {
        validate_arc(arc, B.pres);
        bool cl = lift_arc(arc, B.pres).has_closed;
        if (!cl && getenv("TL_DUMP")) fprintf(stderr, "        conn: lift open\n");
        return cl;
    } catch (const DomainError &e) {
        if (getenv("TL_DUMP")) fprintf(stderr, "        conn: domain error %s\n", e.what());
        return false;
    }
}

// Chamber path from cp to cq crossing only splitting-arc walls, along which
// the transport carries supp(mu_p) onto supp(mu_q). Both lifts of such an
// arc then close up, which is what the half-twist needs.
std::optional<LiftPath> pair_bfs(const Bench &B, int cp, int cq, const Transposition &mp,
                                 const Transposition &mq, const std::set<int> &banned_edges) {
    int D = B.pres.degree + 1;
    int NF = int(B.arr.faces().size());
    auto id = [&](int f, int a, int b) { return (f * D + a) * D + b; };
    std::vector<std::pair<int, int>> parent(size_t(NF) * size_t(D) * size_t(D), {-2, -1});
    std::deque<std::tuple<int, int, int>> q;
    parent[size_t(id(cp, mp.low, mp.high))] = {-1, -1};
    q.push_back({cp, mp.low, mp.high});
    while (!q.empty()) {
        auto [f, a, b] = q.front();
        q.pop_front();
        if (f == cq && std::min(a, b) == mq.low && std::max(a, b) == mq.high) {
            LiftPath p;
            std::vector<int> nodes;
            int node = id(f, a, b);
            while (node >= 0) {
                nodes.push_back(node);
                auto pr = parent[size_t(node)];
                if (pr.first >= 0) p.hes.push_back(pr.second);
                node = pr.first;
            }
            std::reverse(nodes.begin(), nodes.end());
            std::reverse(p.hes.begin(), p.hes.end());
            for (int nd : nodes) {
                p.faces.push_back(nd / (D * D));
                p.sheets.push_back(nd / D % D);
            }
            return p;
        }
        for (int he : B.arr.faces()[size_t(f)].half_edges) {
            const PieceInfo &pi = B.pieces[size_t(he / 2)];
            if (pi.tag != 1 || banned_edges.count(he / 2)) continue;
            const Transposition &mu = B.pres.branches[size_t(pi.branch)];
            int g = B.arr.face_of_half_edge(he ^ 1);
            int a2 = mu.apply(a), b2 = mu.apply(b);
            if (parent[size_t(id(g, a2, b2))].first != -2) continue;
            parent[size_t(id(g, a2, b2))] = {id(f, a, b), he};
            q.push_back({g, a2, b2});
        }
    }
    return std::nullopt;
}

// All essentially different transport paths, found by re-running the search
// with every wall piece of an already-found path banned in turn, shortest
// first. Distinct paths cross different walls or chambers, so when one is
// geometrically blocked another may still realize.
std::vector<LiftPath> pair_paths(const Bench &B, int cp, int cq, const Transposition &mp,
                                 const Transposition &mq, size_t limit) {
    std::vector<LiftPath> out;
    std::set<std::vector<int>> seen;
    std::deque<std::set<int>> bans{{}};
    std::set<std::set<int>> seen_bans{{}};
    while (!bans.empty() && out.size() < limit) {
        std::set<int> ban = std::move(bans.front());
        bans.pop_front();
        auto p = pair_bfs(B, cp, cq, mp, mq, ban);
        if (!p) continue;
        if (seen.insert(p->hes).second) out.push_back(*p);
        for (int he : p->hes) {
            std::set<int> b2 = ban;
            b2.insert(he / 2);
            if (seen_bans.insert(b2).second) bans.push_back(std::move(b2));
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const LiftPath &x, const LiftPath &y) { return x.hes.size() < y.hes.size(); });
    return out;
}

std::optional<ArcDiagram> try_connect(const Bench &B, int p, int q) {
    int tp_he = -1, tq_he = -1;
    int cp = B.tip_chamber(p, &tp_he), cq = B.tip_chamber(q, &tq_he);
    auto paths =
        pair_paths(B, cp, cq, B.pres.branches[size_t(p)], B.pres.branches[size_t(q)], 16);
    if (paths.empty()) { fprintf(stderr, "      [connect %d-%d] no transport path cp=%d cq=%d\n", p, q, cp, cq); return std::nullopt; }
    fprintf(stderr, "      [connect %d-%d] %zu paths, first len=%zu\n", p, q, paths.size(), paths[0].hes.size());
    // Coarse offsets over every path first, then finer; the engine checks
    // referee each candidate.
    Rat eps(1, 4);
    for (int att = 0; att < 14; ++att, eps /= 2)
        for (const LiftPath &path : paths)
            for (bool dir : {true, false})
                for (int sp : {0, 1})
                    for (int sq : {0, 1}) {
                        auto arc = build_connector(B, path, tp_he, tq_he, sp, sq, eps, dir);
                        if (arc && connector_ok(B, *arc, p, q)) return arc;
                    }
    return std::nullopt;
}

ArcDiagram connect_branches(const Bench &B, int p, int q) {
    auto arc = try_connect(B, p, q);
    if (!arc) throw InternalInvariant("no valid connecting arc found");
    return *arc;
}

int unique_bounded_face(const Bench &B) {
    int inner = -1;
    for (const FaceInfo &f : B.fdec.faces)
        if (!f.outer) {
            if (inner >= 0) throw InternalInvariant("embedded curve with two bounded faces");
            inner = f.id;
        }
    if (inner < 0) throw InternalInvariant("embedded curve without a bounded face");
    return inner;
}

ArcDiagram reduce_to_pair(Bench &B); // stabilization cascade, below

} // namespace

StageResult t2_minimize(const CoverPresentation &pres, const LabelledDiagram &d, int face) {
    Bench B;
    B.init(pres, d);
    if (face < 0 || face >= int(B.fdec.faces.size()))
        throw IndexOutOfRange("face id " + std::to_string(face) + " out of range");
    expel_all(B, B.fdec.faces[size_t(face)].branch_points);
    return B.stage();
}

ExtractResult case1_extract(const CoverPresentation &pres, const LabelledDiagram &d) {
    Bench B;
    B.init(pres, d);
    if (B.fdec.crossings != 0)
        throw PreconditionFailed("case1_extract", "diagram must be embedded");
    if (!is_homologically_nontrivial(d, pres)) throw HomologicallyTrivial();

    ArcDiagram arc = reduce_to_pair(B);
    int inner = unique_bounded_face(B);
    if (B.fdec.faces[size_t(inner)].branch_points.size() != 2)
        throw InternalInvariant("inner face not reducible to two branch points");
    ExtractResult out;
    out.arc = arc;
    out.sign = +1;
    out.stage = B.stage();
    return out;
}

StageResult eliminate_singularities(const CoverPresentation &pres, const LabelledDiagram &d) {
    Bench B;
    B.init(pres, d);
    if (B.fdec.crossings == 0) return B.stage();
    throw InternalInvariant("eliminate_singularities: not implemented");
}

namespace {

// Half-edges of diagram pieces whose chamber lies in the given curve face,
// optionally restricted to one label, in deterministic order.
std::vector<int> face_doors(const Bench &B, int face, std::optional<int> label) {
    std::vector<int> doors;
    for (size_t e = 0; e < B.arr.edges().size(); ++e) {
        if (B.pieces[e].tag != 0) continue;
        if (label && B.pieces[e].label != *label) continue;
        for (int he : {int(2 * e), int(2 * e + 1)}) {
            int c = B.comp[size_t(B.arr.face_of_half_edge(he))];
            if (B.comp_face[size_t(c)] == face) doors.push_back(he);
        }
    }
    sort_doors(B, doors);
    return doors;
}

// Slide dip: cut a door piece carrying sheet l, run a corridor to the tip
// piece of branch bstar, poke across the splitting arc and back. The short
// stub on the far side then carries the sheet mu_bstar(l), a fresh label no
// old branch support contains.
std::optional<Move> build_dip(const Bench &B, int door_he, const LiftPath &path, int tip_he,
                              const Rat &eps, bool dir, int tip_side) {
    const PieceInfo &door = B.pieces[size_t(door_he / 2)];
    Seg ds = B.d.edge(size_t(door.curve_edge));
    Rat mid = (door.tlo + door.thi) / 2, dt = (door.thi - door.tlo) / 8;
    Rat t_a = mid - dt, t_b = mid + dt;
    Pt pa = ds.a + t_a * (ds.b - ds.a);
    Pt pb = ds.a + t_b * (ds.b - ds.a);

    size_t K = path.hes.size();
    Rat denom(long(2 * (K + 2)));
    auto alpha = [&](size_t j) -> Rat { return eps * Rat(long(2 * (K + 2) - j)) / denom; };
    auto beta = [&](size_t j) -> Rat { return alpha(j) / 2; };
    std::vector<Pt> Xout(K), Xret(K);
    for (size_t j = 0; j < K; ++j) {
        int he = path.hes[j];
        Pt wa = B.vert(B.arr.half_edge_from(he)), wb = B.vert(B.arr.half_edge_to(he));
        Rat off = Rat(long(j + 1)) / (2 * denom);
        Xout[j] = wa + (Rat(1, 2) - off) * (wb - wa);
        Xret[j] = wa + (Rat(1, 2) + off) * (wb - wa);
    }

    int side_he = tip_side == 0 ? tip_he : (tip_he ^ 1);
    Pt bp = B.vert(B.arr.half_edge_from(tip_he));
    Pt vlow = B.vert(B.arr.half_edge_to(tip_he));
    auto H = [&](const Rat &f) { return bp + f * (vlow - bp); };

    std::vector<Pt> out;
    try {
        int cur_he = door_he;
        Pt cur = pa;
        for (size_t j = 0; j < K; ++j) {
            append_pts(out, face_route(B, path.faces[j], cur_he, cur, path.hes[j], Xout[j],
                                       alpha(j), dir));
            cur_he = path.hes[j] ^ 1;
            cur = Xout[j];
        }
        Rat aK = alpha(K), bK = beta(K), gm = bK / 2;
        append_pts(out, face_route(B, path.faces[K], cur_he, cur, side_he, H(Rat(3, 8)), aK, dir));
        Pt n1 = B.he_inward(side_he); // exactly (+-1, 0)
        Rat sx = n1.x;
        Rat y1 = H(Rat(3, 8)).y, y2 = H(Rat(5, 8)).y;
        out.push_back(Pt(bp.x - sx * gm, y1)); // across the arc
        out.push_back(Pt(bp.x - sx * gm, y2)); // the stub
        out.push_back(Pt(bp.x + sx * bK, y2)); // and back

        std::vector<Pt> ret;
        cur_he = door_he;
        cur = pb;
        for (size_t j = 0; j < K; ++j) {
            append_pts(ret, face_route(B, path.faces[j], cur_he, cur, path.hes[j], Xret[j],
                                       beta(j), dir));
            cur_he = path.hes[j] ^ 1;
            cur = Xret[j];
        }
        append_pts(ret, face_route(B, path.faces[K], cur_he, cur, side_he, H(Rat(5, 8)), bK, dir));
        std::reverse(ret.begin(), ret.end());
        append_pts(out, ret);
    } catch (const InternalInvariant &) {
        return std::nullopt;
    }

    Move m;
    m.kind = MoveKind::RSlide;
    m.from = {door.curve_edge, t_a};
    m.to = {door.curve_edge, t_b};
    m.replacement = simplify_polyline(out, false);
    return m;
}

// Dip: with branch bstar inside the inner face, slide a finger of the face
// boundary from a sheet-l door across bstar's splitting arc near its free
// tip and back. The short stub beyond the arc carries the fresh sheet
// mu_bstar(l) = d+1, giving the face a door no old branch support contains.
// Variants are enumerated deterministically; the first `skip` engine-valid
// ones are passed over, so a failed downstream stage can back into the next.
bool dip_stub(Bench &B, int bstar, int l, int skip) {
    int inner = unique_bounded_face(B);
    int tip_he = -1;
    int cb = B.tip_chamber(bstar, &tip_he);
    if (B.comp_face[size_t(B.comp[size_t(cb)])] != inner) return false;
    // Any door works: the finger starts with the door's label and must only
    // arrive at the arc carrying sheet l, so the stub gets mu_bstar(l) = d+1.
    // Prefer short corridors near the target arc: long boundary hugs wall off
    // other branch points behind the new finger.
    Pt bp = B.pres.branch_position(bstar);
    std::vector<std::tuple<size_t, Rat, int, LiftPath>> cands;
    for (int door : face_doors(B, inner, std::nullopt)) {
        int lab = B.pieces[size_t(door / 2)].label;
        auto path = lift_bfs(
            B, {{B.arr.face_of_half_edge(door), lab}},
            [&](int f, int s) { return f == cb && s == l; }, [](int) { return true; }, false,
            true);
        if (!path) continue;
        const PieceInfo &pi = B.pieces[size_t(door / 2)];
        Seg s = B.d.edge(size_t(pi.curve_edge));
        Pt mid = s.a + (pi.tlo + pi.thi) / 2 * (s.b - s.a);
        Rat d2 = dot2(mid - bp, mid - bp);
        cands.emplace_back(path->hes.size(), d2, door, std::move(*path));
    }
    std::stable_sort(cands.begin(), cands.end(), [](const auto &x, const auto &y) {
        return std::get<0>(x) != std::get<0>(y) ? std::get<0>(x) < std::get<0>(y)
                                                : std::get<1>(x) < std::get<1>(y);
    });
    if (cands.size() > 12) cands.resize(12);
    int nbuilt = 0, nrej = 0;
    for (const auto &[plen, d2, door, path] : cands) {
        Rat eps(1, 4);
        for (int att = 0; att < 9; ++att, eps /= 2)
            for (bool dir : {true, false})
                for (int side : {0, 1}) {
                    auto m = build_dip(B, door, path, tip_he, eps, dir, side);
                    if (!m) continue;
                    ++nbuilt;
                    Bench S = B;
                    if (!S.try_move(*m)) { ++nrej;
                        static int dcount = 0;
                        if (getenv("TL_GEO2") && ++dcount == atoi(getenv("TL_GEO2"))) {
                            FILE *f = fopen("/tmp/geo2.txt", "w");
                            for (size_t e2 = 0; e2 < B.arr.edges().size(); ++e2) {
                                Pt a = B.vert(B.arr.edges()[e2].u), b2 = B.vert(B.arr.edges()[e2].v);
                                fprintf(f, "E %.10f %.10f %.10f %.10f %d\n", a.x.get_d(), a.y.get_d(),
                                        b2.x.get_d(), b2.y.get_d(), B.pieces[e2].tag);
                            }
                            for (const Pt &v : m->replacement)
                                fprintf(f, "A %.10f %.10f\n", v.x.get_d(), v.y.get_d());
                            fclose(f);
                        }
                        continue; }
                    if (skip-- > 0) continue;
                    B = std::move(S);
                    return true;
                }
    }
    fprintf(stderr, "  [dip] cands=%zu built=%d engine-rejected=%d\n", cands.size(), nbuilt, nrej);
    return false;
}

// Expel every listed branch from the inner face, in any order that makes
// progress; true when all of them have left.
bool expel_each(Bench &B, std::vector<int> rest, const ArcDiagram *avoid) {
    while (!rest.empty()) {
        bool progress = false;
        for (size_t i = 0; i < rest.size(); ++i)
            if (try_expel(B, rest[i], std::nullopt, avoid)) {
                rest.erase(rest.begin() + long(i));
                progress = true;
                break;
            }
        if (!progress) return false;
    }
    return true;
}

// Embedded-case reduction. First expel every branch point with a
// pseudo-singular lift over the inner face (T2 minimization). Two branch
// points cannot be expelled when the boundary lift is homologically
// nontrivial, and at the minimum the component of the cover over the face
// containing that lift is an annulus, so when exactly two remain their
// connecting arc closes and we are done. Otherwise one stabilization
// suffices: keep one branch point, add b* = (l, d+1) outside the curve, hop
// it inside through a T2 door, dip a finger of the face boundary across its
// splitting arc so the face gains a sheet-(d+1) door, and expel every other
// branch point. The survivors {keeper, b*} then connect. Keeper, sheet, and
// dip variant are enumerated with backtracking, since a geometric
// realization can fail even when the topology is right.
ArcDiagram reduce_to_pair(Bench &B) {
    expel_all(B, B.fdec.faces[size_t(unique_bounded_face(B))].branch_points);
    int inner = unique_bounded_face(B);
    std::vector<int> in = B.fdec.faces[size_t(inner)].branch_points;
    if (in.size() < 2) throw InternalInvariant("inner face lost its branch points");
    if (in.size() == 2) {
        auto arc = try_connect(B, in[0], in[1]);
        if (!arc) throw InternalInvariant("minimal two-point face has no closing connector");
        return *arc;
    }
    for (int keeper : in) {
        std::vector<int> rest;
        for (int b : in)
            if (b != keeper) rest.push_back(b);
        for (int l = 1; l <= B.pres.degree; ++l) {
            Bench S0 = B;
            Move sm;
            sm.kind = MoveKind::Stabilize;
            sm.sheet = l;
            sm.position = Pt(S0.pres.rect_width(), Rat(0));
            if (!S0.try_move(sm)) continue;
            int bstar = S0.pres.branch_count() - 1;
            if (!try_expel(S0, bstar, unique_bounded_face(S0))) continue;
            for (int skip = 0; skip < 16; ++skip) {
                Bench S = S0;
                if (!dip_stub(S, bstar, l, skip)) { fprintf(stderr, "[k=%d l=%d] dip end skip=%d\n", keeper, l, skip); break; }
                // Fix the connecting arc now, while the diagram is still
                // simple, and keep every later carrier away from it.
                auto arc = try_connect(S, keeper, bstar);
                if (!arc) { fprintf(stderr, "[k=%d l=%d skip=%d] early connect fail\n", keeper, l, skip); continue; }
                if (!expel_each(S, rest, &*arc)) { fprintf(stderr, "[k=%d l=%d skip=%d] expel fail\n", keeper, l, skip); continue; }
                int in2 = unique_bounded_face(S);
                const std::vector<int> &fin = S.fdec.faces[size_t(in2)].branch_points;
                if (fin.size() != 2 || !connector_ok(S, *arc, keeper, bstar)) { fprintf(stderr, "[k=%d l=%d skip=%d] final fail fin=%zu\n", keeper, l, skip, fin.size()); continue; }
                B = std::move(S);
                return *arc;
            }
        }
    }
    throw InternalInvariant("stabilization cascade stuck");
}

} // namespace

SynthesisResult synthesize(const CoverPresentation &pres, const LabelledDiagram &d) {
    if (pres.degree < 2) throw PreconditionFailed("synthesize", "degree must be at least 2");
    CoverValidation cv = validate_cover(pres, true);
    if (!cv.transitive) throw NotTransitive(cv.orbits);
    if (!cv.ok) throw PreconditionFailed("synthesize", cv.errors.front());
    validate_diagram(d, pres);
    if (!is_homologically_nontrivial(d, pres)) throw HomologicallyTrivial();

    FaceDecomposition fd0 = faces(d, pres);

    CoverPresentation cur = pres;
    LabelledDiagram cd = d;
    std::vector<MoveStep> steps;
    int stabs = 0;
    auto chain = [&](const StageResult &s) {
        cur = s.pres;
        cd = s.diagram;
        steps.insert(steps.end(), s.steps.begin(), s.steps.end());
        stabs += s.stabilizations;
    };

    if (fd0.crossings > 0) chain(eliminate_singularities(cur, cd));
    ExtractResult ex = case1_extract(cur, cd);
    chain(ex.stage);

    SynthesisResult res;
    res.final_pres = cur;
    res.halftwist.arc = ex.arc;
    res.halftwist.sign = ex.sign;
    res.halftwist.word = straighten(ex.arc, cur);
    res.trace.initial_pres = pres;
    res.trace.initial_diagram = d;
    res.trace.steps = steps;
    res.stats.stabilizations = stabs;
    res.stats.moves = int(steps.size());
    res.stats.regions = int(fd0.faces.size());
    return res;
}

} // namespace twistlift
