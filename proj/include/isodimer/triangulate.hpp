#pragma once

#include <array>
#include <map>
#include <vector>

#include "isodimer/patch.hpp"

namespace isodimer {

// One right triangle of a rhombus-with-diagonals patch. Vertices in cclw
// order are (center, corner a, corner b); the hypotenuse is the rhombus side
// a -> b, the legs are the half-diagonals.
struct TriFace {
    int id = -1;
    int rhombus = -1;
    int center = -1;
    int a = -1, b = -1;   // hypotenuse a -> b in cclw face order
    VColor color = VColor::white;
};

// Edge of the triangulated complex, with the edge orientation used by the
// first height function (cclw around black faces).
struct PrimalEdge {
    int id = -1;
    int from = -1, to = -1;     // oriented
    bool is_leg = false;        // legs join a center to a corner
    std::array<int, 2> faces{-1, -1};
};

class TriangulatedPatch {
  public:
    RhombusPatch base;
    std::vector<PatchVertex> verts;  // corners then one center per rhombus
    std::vector<TriFace> faces;      // 4 per rhombus, id = 4*rhombus + side
    std::vector<PrimalEdge> pedges;

    int ncorners() const { return int(base.vertices.size()); }
    int center_of(int rhombus) const { return ncorners() + rhombus; }
    bool is_center(int v) const { return v >= ncorners(); }
    Vec2 vpos(int v) const { return verts[size_t(v)].pos; }

    const std::vector<int>& edges_at(int v) const { return vedges_[size_t(v)]; }
    int pedge_between(int u, int v) const {
        auto it = pe_index_.find(key(u, v));
        return it == pe_index_.end() ? -1 : it->second;
    }
    bool vertex_on_boundary(int v) const { return on_boundary_[size_t(v)]; }

    // Faces incident to a primal edge appear in `faces`; the matched dual edge
    // of that pair is what height1 reads off.
    int face_across(int pedge, int face) const {
        const auto& e = pedges[size_t(pedge)];
        return e.faces[0] == face ? e.faces[1] : e.faces[0];
    }

    void build() {
        verts = base.vertices;
        for (const auto& r : base.rhombi) {
            PatchVertex c;
            c.id = int(verts.size());
            c.pos = base.center(r.id);
            c.color = VColor::black;  // quadri-tile coloring: right angle is black
            verts.push_back(c);
        }
        faces.clear();
        for (const auto& r : base.rhombi) {
            for (int i = 0; i < 4; ++i) {
                TriFace f;
                f.id = 4 * r.id + i;
                f.rhombus = r.id;
                f.center = center_of(r.id);
                f.a = r.v[size_t(i)];
                f.b = r.v[size_t((i + 1) % 4)];
                // Lemma-2 rule: cclw traversal of a black face runs the
                // hypotenuse white -> black.
                f.color = base.vertices[size_t(f.a)].color == VColor::white ? VColor::black
                                                                            : VColor::white;
                faces.push_back(f);
            }
        }
        build_pedges();
        check_face_coloring();
    }

  private:
    static long long key(int a, int b) {
        if (a > b) std::swap(a, b);
        return (long long)a << 32 | (unsigned)b;
    }

    void add_face_to_edge(int u, int v, int face, bool leg) {
        auto [it, fresh] = pe_index_.try_emplace(key(u, v), int(pedges.size()));
        if (fresh) pedges.push_back({it->second, u, v, leg, {-1, -1}});
        auto& e = pedges[size_t(it->second)];
        require(e.faces[1] == -1, "triangulate: edge incident to more than two faces");
        e.faces[e.faces[0] == -1 ? 0 : 1] = face;
    }

    void build_pedges() {
        pedges.clear();
        pe_index_.clear();
        for (const auto& f : faces) {
            add_face_to_edge(f.a, f.b, f.id, false);
            add_face_to_edge(f.center, f.a, f.id, true);
            add_face_to_edge(f.center, f.b, f.id, true);
        }
        // Orient every edge cclw around its black face (equivalently cw around
        // the white one); boundary hypotenuses use their single face.
        for (auto& e : pedges) {
            int f = e.faces[0];
            if (e.faces[1] != -1 && faces[size_t(e.faces[1])].color == VColor::black) f = e.faces[1];
            const TriFace& t = faces[size_t(f)];
            // cclw order of face f is (center, a, b)
            std::array<int, 3> c = {t.center, t.a, t.b};
            int i = 0;
            while (!(c[size_t(i)] == e.from || c[size_t(i)] == e.to) ||
                   !(c[size_t((i + 1) % 3)] == e.from || c[size_t((i + 1) % 3)] == e.to))
                ++i;
            int u = c[size_t(i)], v = c[size_t((i + 1) % 3)];
            if (t.color == VColor::white) std::swap(u, v);
            e.from = u;
            e.to = v;
        }
        vedges_.assign(verts.size(), {});
        for (const auto& e : pedges) {
            vedges_[size_t(e.from)].push_back(e.id);
            vedges_[size_t(e.to)].push_back(e.id);
        }
        on_boundary_.assign(verts.size(), false);
        for (const auto& e : pedges)
            if (e.faces[1] == -1) {
                on_boundary_[size_t(e.from)] = true;
                on_boundary_[size_t(e.to)] = true;
            }
    }

    void check_face_coloring() const {
        for (const auto& e : pedges)
            if (e.faces[1] != -1)
                require(faces[size_t(e.faces[0])].color != faces[size_t(e.faces[1])].color,
                        "triangulate: adjacent faces share a color");
    }

    std::map<long long, int> pe_index_;
    std::vector<std::vector<int>> vedges_;
    std::vector<bool> on_boundary_;
};

inline TriangulatedPatch add_diagonals(const RhombusPatch& p) {
    TriangulatedPatch t;
    t.base = p;
    t.build();
    return t;
}

}  // namespace isodimer
