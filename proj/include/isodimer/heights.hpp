#pragma once

#include <map>
#include <queue>
#include <vector>

#include "isodimer/matching.hpp"

namespace isodimer {

// Integer height field over the vertices of a triangulated patch (or of a
// lozenge patch, for the second height function). Exact integers, explicit
// base vertex.
struct HeightField {
    int base_vertex = -1;
    std::map<int, int> values;

    int at(int v) const {
        auto it = values.find(v);
        require(it != values.end(), "height field: no value at vertex");
        return it->second;
    }
};

namespace detail {
// The dual edge crossing an interior primal edge, -1 on the patch boundary.
inline int crossing_dual_edge(const TriangulatedPatch& t, const IsoradialDual& d,
                              const PrimalEdge& pe) {
    if (pe.faces[1] == -1) return -1;
    int e = d.edge_between(pe.faces[0], pe.faces[1]);
    require(e >= 0, "internal: face pair without dual edge");
    return e;
}
}  // namespace detail

// First height function of a quadri-tiling: +1 along an oriented edge on the
// boundary of a tile, -2 along the edge a tile is glued across.
inline HeightField height1(const TriangulatedPatch& t, const IsoradialDual& d,
                           const DimerConfig& m, int base) {
    validate_matching(d, m);
    require(base >= 0 && base < int(t.verts.size()) && !t.is_center(base),
            "height1: base vertex must lie on a rhombus boundary edge");
    require(t.base.simply_connected(), "height1: patch is not simply connected");

    HeightField h;
    h.base_vertex = base;
    h.values[base] = 0;
    std::queue<int> q;
    q.push(base);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        int hv = h.values[v];
        for (int eid : t.edges_at(v)) {
            const auto& pe = t.pedges[size_t(eid)];
            int de = detail::crossing_dual_edge(t, d, pe);
            int step = (de >= 0 && m.contains(de)) ? -2 : +1;
            int u = pe.from == v ? pe.to : pe.from;
            int hu = pe.from == v ? hv + step : hv - step;
            auto it = h.values.find(u);
            if (it == h.values.end()) {
                h.values[u] = hu;
                q.push(u);
            } else if (it->second != hu) {
                throw DomainError("height1: monodromy on cycle through vertices " +
                                  std::to_string(v) + " and " + std::to_string(u));
            }
        }
    }
    require(int(h.values.size()) == int(t.verts.size()), "height1: patch not connected");
    return h;
}

// Inverse bijection of Lemma 3: tiles are glued exactly across the edges with
// |height difference| = 2.
inline DimerConfig tiling_from_height1(const HeightField& h, const TriangulatedPatch& t,
                                       const IsoradialDual& d) {
    require(h.at(h.base_vertex) == 0, "tiling_from_height1: base value must be 0");
    DimerConfig m;
    for (const auto& pe : t.pedges) {
        int diff = h.at(pe.to) - h.at(pe.from);
        require(diff == 1 || diff == -2,
                "tiling_from_height1: height step not in {+1, -2} along an oriented edge");
        if (diff == -2) {
            int de = detail::crossing_dual_edge(t, d, pe);
            require(de >= 0, "tiling_from_height1: -2 step across a boundary edge");
            m.matched.push_back(de);
        }
    }
    std::sort(m.matched.begin(), m.matched.end());
    validate_matching(d, m);
    return m;
}

// --- second height function ---------------------------------------------------
// Thurston's height on the side-2 triangular lattice. Edges are oriented cclw
// around up-triangles, i.e. along directions {u, w, -v}.

inline bool lozenge_aligned(const RhombusPatch& p) {
    const Vec2 dirs[3] = {tri_u(), tri_v(), tri_w()};
    for (const auto& e : p.edges()) {
        Vec2 d = p.vpos(e.b) - p.vpos(e.a);
        bool ok = false;
        for (const auto& t : dirs)
            if (near(d, t, 1e-7) || near(d, Vec2{-t.x, -t.y}, 1e-7)) ok = true;
        if (!ok) return false;
    }
    return true;
}

// +1 when an edge points along u, w or -v; those are the directions of the
// cclw boundaries of up-triangles of the lattice.
inline int tri_edge_sign(Vec2 d) {
    if (near(d, tri_u(), 1e-7) || near(d, tri_w(), 1e-7) || near(d, Vec2{0, 0} - tri_v(), 1e-7))
        return +1;
    Vec2 md{-d.x, -d.y};
    if (near(md, tri_u(), 1e-7) || near(md, tri_w(), 1e-7) || near(md, Vec2{0, 0} - tri_v(), 1e-7))
        return -1;
    throw DomainError("height2: edge not aligned with the triangular lattice");
}

// Heights of the corners of a lozenge tiling, plus the min+1 value at each
// lozenge center. Center values are keyed by ncorners + rhombus id.
inline HeightField height2(const RhombusPatch& lozenges, int base) {
    require(lozenge_aligned(lozenges), "height2: patch is not a lozenge tiling of the lattice");
    require(lozenges.simply_connected(), "height2: region is not simply connected");
    require(base >= 0 && base < int(lozenges.vertices.size()), "height2: bad base vertex");

    HeightField h;
    h.base_vertex = base;
    h.values[base] = 0;
    std::queue<int> q;
    q.push(base);
    std::vector<std::vector<int>> at(lozenges.vertices.size());
    for (const auto& e : lozenges.edges()) {
        at[size_t(e.a)].push_back(e.id);
        at[size_t(e.b)].push_back(e.id);
    }
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int eid : at[size_t(v)]) {
            const auto& e = lozenges.edges()[size_t(eid)];
            int u = e.a == v ? e.b : e.a;
            Vec2 d = lozenges.vpos(u) - lozenges.vpos(v);
            int hu = h.values[v] + tri_edge_sign(d);
            auto it = h.values.find(u);
            if (it == h.values.end()) {
                h.values[u] = hu;
                q.push(u);
            } else {
                require(it->second == hu, "height2: inconsistent heights (region has a hole?)");
            }
        }
    }
    int nc = int(lozenges.vertices.size());
    for (const auto& r : lozenges.rhombi) {
        int lo = h.at(r.v[0]);
        for (int i = 1; i < 4; ++i) lo = std::min(lo, h.at(r.v[size_t(i)]));
        h.values[nc + r.id] = lo + 1;
    }
    return h;
}

}  // namespace isodimer
