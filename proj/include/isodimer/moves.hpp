#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "isodimer/heights.hpp"

namespace isodimer {

enum class MoveKind { quadri_flip, lozenge_flip };

// quadri_flip: rotate an alternating interior dual face cycle (support =
// its dual edge ids). lozenge_flip: rotate the three lozenges of a unit
// hexagon around `hex_vertex` and re-cut each new lozenge along the diagonal
// selected by a bit of orientation_choice.
struct Move {
    MoveKind kind = MoveKind::quadri_flip;
    std::vector<int> support;
    int orientation_choice = 0;
    int hex_vertex = -1;
};

// A quadri-tiling as a mutable whole: lozenge flips change the patch itself,
// so moves act on (patch, matching) pairs.
struct QuadriState {
    RhombusPatch base;
    TriangulatedPatch tri;
    IsoradialDual dual;
    DimerConfig config;

    static QuadriState make(RhombusPatch p, DimerConfig m) {
        QuadriState s;
        s.base = std::move(p);
        s.tri = add_diagonals(s.base);
        s.dual = dual_graph(s.tri);
        s.config = std::move(m);
        validate_matching(s.dual, s.config);
        return s;
    }
};

namespace detail {

inline bool alternates(const DimerConfig& m, const std::vector<int>& cycle) {
    if (cycle.size() % 2 != 0) return false;
    int phase = m.contains(cycle[0]) ? 0 : 1;
    for (size_t i = 0; i < cycle.size(); ++i)
        if (m.contains(cycle[i]) != (int(i % 2) == phase ? true : false)) return false;
    return true;
}

// Dual edge crossing the half-diagonal (center, corner) of rhombus r.
inline int leg_edge(const TriangulatedPatch& t, const IsoradialDual& d, int r, int corner) {
    const auto& q = t.base.rhombi[size_t(r)].v;
    int j = -1;
    for (int i = 0; i < 4; ++i)
        if (q[size_t(i)] == corner) j = i;
    require(j >= 0, "leg_edge: vertex is not a corner of the rhombus");
    int fa = 4 * r + (j + 3) % 4, fb = 4 * r + j;
    int e = d.edge_between(fa, fb);
    require(e >= 0, "leg_edge: missing dual edge");
    return e;
}

// True when all four faces of rhombus r are matched among themselves.
inline bool internally_matched(const TriangulatedPatch& t, const IsoradialDual& d,
                               const DimerConfig& m, int r) {
    for (int i = 0; i < 4; ++i) {
        int f = 4 * r + i;
        bool ok = false;
        for (int eid : d.vedges[size_t(f)]) {
            const auto& e = d.edges[size_t(eid)];
            int g = e.w == f ? e.b : e.w;
            if (m.contains(eid) && g / 4 == r) ok = true;
        }
        if (!ok) return false;
    }
    return true;
}

// The diagonal of r through `corner` (true) or avoiding it: matched leg
// edges cross the halves of the *other* diagonal.
inline std::pair<int, int> cut_edges(const TriangulatedPatch& t, const IsoradialDual& d, int r,
                                     int corner, bool through_corner) {
    const auto& q = t.base.rhombi[size_t(r)].v;
    int j = -1;
    for (int i = 0; i < 4; ++i)
        if (q[size_t(i)] == corner) j = i;
    require(j >= 0, "cut_edges: vertex is not a corner of the rhombus");
    int c0 = through_corner ? q[size_t((j + 1) % 4)] : q[size_t(j)];
    int c1 = through_corner ? q[size_t((j + 3) % 4)] : q[size_t((j + 2) % 4)];
    return {leg_edge(t, d, r, c0), leg_edge(t, d, r, c1)};
}

struct HexNeighborhood {
    std::vector<int> rhombi;   // 3 lozenges cclw around the vertex
    std::vector<int> near;     // near[i]: corner after the center in rhombi[i]
    std::vector<int> far;      // far[i]: corner opposite the center
};

// Interior corner vertex with exactly three incident lozenges = unit hexagon.
inline std::optional<HexNeighborhood> hexagon_at(const RhombusPatch& p, int v) {
    std::vector<std::pair<int, int>> rj;  // (rhombus, corner position)
    for (const auto& r : p.rhombi)
        for (int i = 0; i < 4; ++i)
            if (r.v[size_t(i)] == v) rj.emplace_back(r.id, i);
    if (rj.size() != 3) return std::nullopt;
    for (const auto& de : p.boundary())
        if (de.from == v) return std::nullopt;
    HexNeighborhood h;
    std::sort(rj.begin(), rj.end(), [&](auto a, auto b) {
        return angle_of(p.center(a.first) - p.vpos(v)) < angle_of(p.center(b.first) - p.vpos(v));
    });
    for (auto [r, j] : rj) {
        h.rhombi.push_back(r);
        h.near.push_back(p.rhombi[size_t(r)].v[size_t((j + 1) % 4)]);
        h.far.push_back(p.rhombi[size_t(r)].v[size_t((j + 2) % 4)]);
    }
    return h;
}

}  // namespace detail

inline std::vector<Move> elementary_moves(const QuadriState& s) {
    std::vector<Move> out;
    for (const auto& cyc : s.dual.cycles)
        if (detail::alternates(s.config, cyc.edges)) {
            Move mv;
            mv.kind = MoveKind::quadri_flip;
            mv.support = cyc.edges;
            out.push_back(std::move(mv));
        }
    if (!lozenge_aligned(s.base)) return out;
    for (int v = 0; v < int(s.base.vertices.size()); ++v) {
        auto hex = detail::hexagon_at(s.base, v);
        if (!hex) continue;
        bool ok = true;
        for (int r : hex->rhombi)
            if (!detail::internally_matched(s.tri, s.dual, s.config, r)) ok = false;
        if (!ok) continue;
        for (int choice = 0; choice < 8; ++choice) {
            Move mv;
            mv.kind = MoveKind::lozenge_flip;
            mv.hex_vertex = v;
            mv.orientation_choice = choice;
            for (int r : hex->rhombi)
                for (int eid : s.config.matched)
                    if (s.dual.edges[size_t(eid)].w / 4 == r) mv.support.push_back(eid);
            out.push_back(std::move(mv));
        }
    }
    return out;
}

inline QuadriState apply_move(const QuadriState& s, const Move& mv) {
    if (mv.kind == MoveKind::quadri_flip) {
        require(detail::alternates(s.config, mv.support),
                "apply_move: stale move (support no longer alternating)");
        std::set<int> m(s.config.matched.begin(), s.config.matched.end());
        for (int e : mv.support) {
            if (m.count(e))
                m.erase(e);
            else
                m.insert(e);
        }
        QuadriState out = s;
        out.config.matched.assign(m.begin(), m.end());
        validate_matching(out.dual, out.config);
        return out;
    }

    auto hex = detail::hexagon_at(s.base, mv.hex_vertex);
    require(bool(hex), "apply_move: stale lozenge flip (vertex is not a unit hexagon center)");
    for (int r : hex->rhombi)
        require(detail::internally_matched(s.tri, s.dual, s.config, r),
                "apply_move: stale lozenge flip (a lozenge is not internally cut)");

    // Rotate the three lozenges: new ones span (v, far_i, near_{i+1}, far_{i+1}).
    RhombusPatch np;
    np.vertices = s.base.vertices;
    std::vector<int> old_of_new;  // new rhombus id -> old id, -1 for replaced ones
    std::set<int> replaced(hex->rhombi.begin(), hex->rhombi.end());
    for (const auto& r : s.base.rhombi) {
        if (replaced.count(r.id)) continue;
        Rhombus nr = r;
        nr.id = int(np.rhombi.size());
        old_of_new.push_back(r.id);
        np.rhombi.push_back(nr);
    }
    std::vector<int> new_hex_rhombi;
    for (int i = 0; i < 3; ++i) {
        Rhombus nr;
        nr.id = int(np.rhombi.size());
        nr.v = {mv.hex_vertex, hex->far[size_t(i)], hex->near[size_t((i + 1) % 3)],
                hex->far[size_t((i + 1) % 3)]};
        old_of_new.push_back(-1);
        new_hex_rhombi.push_back(nr.id);
        np.rhombi.push_back(nr);
    }
    detail::color_by_bfs(np);
    np.finalize();

    QuadriState out;
    out.base = std::move(np);
    out.tri = add_diagonals(out.base);
    out.dual = dual_graph(out.tri);

    // carry over matched edges outside the hexagon, keyed by (old rhombus, side)
    std::vector<int> new_of_old(s.base.rhombi.size(), -1);
    for (int nr = 0; nr < int(old_of_new.size()); ++nr)
        if (old_of_new[size_t(nr)] >= 0) new_of_old[size_t(old_of_new[size_t(nr)])] = nr;
    auto map_face = [&](int f) {
        int nr = new_of_old[size_t(f / 4)];
        return nr < 0 ? -1 : 4 * nr + f % 4;
    };
    std::set<int> matched;
    for (int eid : s.config.matched) {
        const auto& e = s.dual.edges[size_t(eid)];
        int fw = map_face(e.w), fb = map_face(e.b);
        if (fw < 0 || fb < 0) continue;  // interior to the flipped hexagon
        int ne = out.dual.edge_between(fw, fb);
        require(ne >= 0, "apply_move: lost a dual edge while rebuilding the patch");
        matched.insert(ne);
    }
    // re-cut the three new lozenges per orientation bit (0 = diagonal through
    // the hexagon center vertex)
    for (int i = 0; i < 3; ++i) {
        bool through = ((mv.orientation_choice >> i) & 1) == 0;
        auto [e1, e2] =
            detail::cut_edges(out.tri, out.dual, new_hex_rhombi[size_t(i)], mv.hex_vertex, through);
        matched.insert(e1);
        matched.insert(e2);
    }
    out.config.matched.assign(matched.begin(), matched.end());
    validate_matching(out.dual, out.config);
    return out;
}

// Deterministic starting configuration: every rhombus cut along its shorter
// diagonal (ties broken toward the v0-v2 diagonal).
inline DimerConfig initial_config(const TriangulatedPatch& t, const IsoradialDual& d) {
    DimerConfig m;
    for (const auto& r : t.base.rhombi) {
        double d02 = (t.base.vpos(r.v[0]) - t.base.vpos(r.v[2])).norm();
        double d13 = (t.base.vpos(r.v[1]) - t.base.vpos(r.v[3])).norm();
        int c0 = d13 < d02 - kGeomTol ? r.v[1] : r.v[0];
        int c2 = d13 < d02 - kGeomTol ? r.v[3] : r.v[2];
        // cut along (c0, c2): matched legs cross the other diagonal's halves
        auto [e1, e2] = detail::cut_edges(t, d, r.id, c0, true);
        (void)c2;
        m.matched.push_back(e1);
        m.matched.push_back(e2);
    }
    std::sort(m.matched.begin(), m.matched.end());
    validate_matching(d, m);
    return m;
}

// --- canonical keys and region-level enumeration ------------------------------

// Exact integer coordinates on the side-2 triangular lattice: p = a*(1,0) +
// b*(1/2, sqrt(3)/2). All corners, centers and circumcenters of lozenge
// patches land on this grid.
inline std::pair<long long, long long> axial_coords(Vec2 p) {
    double b = p.y / (std::sqrt(3.0) / 2.0);
    double a = p.x - b / 2.0;
    long long ia = std::llround(a), ib = std::llround(b);
    require(std::abs(a - double(ia)) < 1e-6 && std::abs(b - double(ib)) < 1e-6,
            "axial_coords: point is off the triangular lattice");
    return {ia, ib};
}

using StateKey = std::vector<long long>;

// A quadri-tiling is the set of its tiles; each tile the set of its two
// triangles; each triangle its three lattice points.
inline StateKey canonical_key(const QuadriState& s) {
    std::vector<std::vector<long long>> tiles;
    for (int eid : s.config.matched) {
        const auto& e = s.dual.edges[size_t(eid)];
        std::vector<std::vector<long long>> tris;
        for (int f : {e.w, e.b}) {
            const auto& tf = s.tri.faces[size_t(f)];
            std::vector<std::pair<long long, long long>> pts;
            for (int v : {tf.center, tf.a, tf.b}) pts.push_back(axial_coords(s.tri.vpos(v)));
            std::sort(pts.begin(), pts.end());
            std::vector<long long> flat;
            for (auto [x, y] : pts) {
                flat.push_back(x);
                flat.push_back(y);
            }
            tris.push_back(std::move(flat));
        }
        std::sort(tris.begin(), tris.end());
        std::vector<long long> tile;
        for (auto& t : tris) tile.insert(tile.end(), t.begin(), t.end());
        tiles.push_back(std::move(tile));
    }
    std::sort(tiles.begin(), tiles.end());
    StateKey key;
    for (auto& t : tiles) key.insert(key.end(), t.begin(), t.end());
    return key;
}

// Split every lozenge of a patch into its two lattice triangles (along the
// short diagonal, which is a lattice edge).
struct LatticeTriangle {
    std::array<std::pair<long long, long long>, 3> pts;  // sorted
    bool operator<(const LatticeTriangle& o) const { return pts < o.pts; }
    bool operator==(const LatticeTriangle& o) const { return pts == o.pts; }
};

inline std::vector<LatticeTriangle> region_triangles(const RhombusPatch& lozenges) {
    require(lozenge_aligned(lozenges), "region: not a lozenge patch");
    std::vector<LatticeTriangle> out;
    for (const auto& r : lozenges.rhombi) {
        Vec2 p0 = lozenges.vpos(r.v[0]), p1 = lozenges.vpos(r.v[1]), p2 = lozenges.vpos(r.v[2]),
             p3 = lozenges.vpos(r.v[3]);
        bool diag02 = near((p0 - p2).norm(), 2.0, 1e-7);
        require(diag02 || near((p1 - p3).norm(), 2.0, 1e-7), "region: rhombus is not a lozenge");
        std::array<std::array<Vec2, 3>, 2> tris;
        if (diag02)
            tris = {{{p0, p1, p2}, {p0, p2, p3}}};
        else
            tris = {{{p1, p2, p3}, {p1, p3, p0}}};
        for (const auto& t : tris) {
            LatticeTriangle lt;
            for (int i = 0; i < 3; ++i) lt.pts[size_t(i)] = axial_coords(t[size_t(i)]);
            std::sort(lt.pts.begin(), lt.pts.end());
            out.push_back(lt);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// All lozenge tilings of the region covered by `region_patch` (2-tilings of
// its triangle set), each returned as a lozenge patch.
inline std::vector<RhombusPatch> enumerate_lozenge_tilings(const RhombusPatch& region_patch) {
    auto tris = region_triangles(region_patch);
    std::vector<std::pair<int, int>> adj;
    for (int i = 0; i < int(tris.size()); ++i)
        for (int j = i + 1; j < int(tris.size()); ++j) {
            int shared = 0;
            for (const auto& p : tris[size_t(i)].pts)
                for (const auto& q : tris[size_t(j)].pts)
                    if (p == q) ++shared;
            if (shared == 2) adj.emplace_back(i, j);
        }
    std::vector<RhombusPatch> out;
    for (const auto& m : enumerate_perfect_matchings(int(tris.size()), adj)) {
        detail::PatchBuilder b;
        for (int eid : m) {
            auto [i, j] = adj[size_t(eid)];
            // lozenge = union of two triangles; order the 4 distinct points cclw
            std::vector<std::pair<long long, long long>> pts;
            for (const auto& p : tris[size_t(i)].pts) pts.push_back(p);
            for (const auto& p : tris[size_t(j)].pts) pts.push_back(p);
            std::sort(pts.begin(), pts.end());
            pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
            require(pts.size() == 4, "region: triangle pair does not form a lozenge");
            Vec2 c{0, 0};
            std::vector<Vec2> v;
            for (auto [x, y] : pts) {
                v.push_back(Vec2{double(x) + double(y) / 2.0, double(y) * std::sqrt(3.0) / 2.0});
                c += v.back() * 0.25;
            }
            std::sort(v.begin(), v.end(),
                      [&](Vec2 a, Vec2 bb) { return angle_of(a - c) < angle_of(bb - c); });
            b.rhombus(v[0], v[1], v[2], v[3]);
        }
        out.push_back(b.build());
    }
    return out;
}

// Every quadri-tiling of the region: all matchings of all lozenge tilings.
inline std::set<StateKey> enumerate_region_quadri_tilings(const RhombusPatch& region_patch) {
    std::set<StateKey> keys;
    for (const auto& loz : enumerate_lozenge_tilings(region_patch)) {
        auto tri = add_diagonals(loz);
        auto dual = dual_graph(tri);
        for (const auto& m : enumerate_matchings(dual)) {
            QuadriState s;
            s.base = loz;
            s.tri = tri;
            s.dual = dual;
            s.config = m;
            keys.insert(canonical_key(s));
        }
    }
    return keys;
}

// Orbit of a state under elementary moves.
inline std::set<StateKey> move_orbit(const QuadriState& start, size_t limit = 100000) {
    std::set<StateKey> seen;
    std::vector<QuadriState> queue{start};
    seen.insert(canonical_key(start));
    while (!queue.empty()) {
        QuadriState s = std::move(queue.back());
        queue.pop_back();
        for (const auto& mv : elementary_moves(s)) {
            QuadriState ns = apply_move(s, mv);
            auto key = canonical_key(ns);
            if (seen.insert(key).second) {
                require(seen.size() <= limit, "move_orbit: state limit exceeded");
                queue.push_back(std::move(ns));
            }
        }
    }
    return seen;
}

}  // namespace isodimer
