#pragma once

#include <map>
#include <queue>
#include <vector>

#include "isodimer/triangulate.hpp"

namespace isodimer {

enum class EdgeKind { leg, hypotenuse };

// The unit rhombus R(e) attached to a dual edge e = (w, b): its other two
// corners x, y are primal vertices, (w, x, b, y) in cclw order. alpha/beta
// are the angles of the unit vectors y - w and x - w.
struct RhombusData {
    int x = -1, y = -1;
    double alpha = 0.0, beta = 0.0;
};

struct DualEdge {
    int id = -1;
    int w = -1, b = -1;  // white / black dual vertex
    EdgeKind kind = EdgeKind::leg;
    RhombusData rho;
    double theta = 0.0;  // rhombus angle: nu = 2 sin(theta)
    double nu = 0.0;
};

// Planar face complex feeding the dual construction: faces with unit
// circumradius, a proper 2-coloring, and cclw primal boundary cycles.
struct FaceComplex {
    std::vector<Vec2> primal;
    struct Face {
        Vec2 circumcenter;
        VColor color = VColor::white;
        std::vector<int> boundary;          // primal ids, cclw
        int hyp_black = -1, hyp_white = -1;  // colored hypotenuse ends (rhombus duals only)
    };
    std::vector<Face> faces;
};

// Cycle of dual edges around one interior primal vertex = a face of the dual
// graph, stored cclw.
struct DualFaceCycle {
    int primal_vertex = -1;
    std::vector<int> faces;  // dual vertex ids, cyclic
    std::vector<int> edges;  // edges[i] joins faces[i] and faces[i+1]
};

class IsoradialDual {
  public:
    std::vector<Vec2> vpos;
    std::vector<VColor> vcolor;
    std::vector<int> hyp_black, hyp_white;  // per dual vertex, -1 if not applicable
    std::vector<Vec2> ppos;
    std::vector<DualEdge> edges;
    std::vector<std::vector<int>> vedges;
    std::vector<DualFaceCycle> cycles;

    // Edge-path graph of the rhombic complex R~ = union of unit rhombi R(e).
    // Each R~ edge joins a dual vertex and a primal vertex; its canonical
    // direction runs away from white dual vertices and toward black ones.
    struct RtEdge {
        int dual = -1, primal = -1;
        double angle = 0.0;  // angle of the canonically directed unit vector
    };
    std::vector<RtEdge> rt_edges;
    std::vector<std::vector<int>> rt_adj;  // node -> rt edge ids; node = dual id, or nd()+primal id

    int nd() const { return int(vpos.size()); }
    int rt_node_of_dual(int d) const { return d; }
    int rt_node_of_primal(int p) const { return nd() + p; }

    int edge_between(int a, int b) const {
        auto it = eindex_.find(key(a, b));
        return it == eindex_.end() ? -1 : it->second;
    }

    void index_edges() {
        eindex_.clear();
        vedges_build();
        for (const auto& e : edges) eindex_[key(e.w, e.b)] = e.id;
        build_rt();
    }

  private:
    static long long key(int a, int b) {
        if (a > b) std::swap(a, b);
        return (long long)a << 32 | (unsigned)b;
    }
    void vedges_build() {
        vedges.assign(vpos.size(), {});
        for (const auto& e : edges) {
            vedges[size_t(e.w)].push_back(e.id);
            vedges[size_t(e.b)].push_back(e.id);
        }
    }
    void build_rt() {
        rt_edges.clear();
        rt_adj.assign(vpos.size() + ppos.size(), {});
        std::map<long long, int> seen;
        auto add = [&](int d, int p, double ang) {
            long long k = (long long)d << 32 | (unsigned)p;
            auto it = seen.find(k);
            if (it != seen.end()) {
                require(same_direction(rt_edges[size_t(it->second)].angle, ang, 1e-7),
                        "dual: inconsistent rhombic-complex edge direction");
                return;
            }
            seen[k] = int(rt_edges.size());
            rt_adj[size_t(rt_node_of_dual(d))].push_back(int(rt_edges.size()));
            rt_adj[size_t(rt_node_of_primal(p))].push_back(int(rt_edges.size()));
            rt_edges.push_back({d, p, ang});
        };
        for (const auto& e : edges) {
            add(e.w, e.rho.x, e.rho.beta);
            add(e.w, e.rho.y, e.rho.alpha);
            add(e.b, e.rho.x, e.rho.alpha);  // x -> b has direction e^{i alpha}
            add(e.b, e.rho.y, e.rho.beta);
        }
    }
    std::map<long long, int> eindex_;
};

inline double critical_weight(double theta) {
    require(theta > kGeomTol && theta <= kPi / 2 + kGeomTol,
            "critical_weight: rhombus angle theta outside (0, pi/2]");
    return 2.0 * std::sin(theta);
}

namespace detail {

inline IsoradialDual build_dual(const FaceComplex& fc) {
    IsoradialDual d;
    d.ppos = fc.primal;
    for (const auto& f : fc.faces) {
        d.vpos.push_back(f.circumcenter);
        d.vcolor.push_back(f.color);
        d.hyp_black.push_back(f.hyp_black);
        d.hyp_white.push_back(f.hyp_white);
    }

    // primal edge -> incident (face, position) pairs
    auto pkey = [](int a, int b) {
        if (a > b) std::swap(a, b);
        return (long long)a << 32 | (unsigned)b;
    };
    std::map<long long, std::vector<std::pair<int, int>>> inc;
    for (int f = 0; f < int(fc.faces.size()); ++f) {
        const auto& bd = fc.faces[size_t(f)].boundary;
        for (int i = 0; i < int(bd.size()); ++i)
            inc[pkey(bd[size_t(i)], bd[size_t((i + 1) % bd.size())])].emplace_back(f, i);
    }

    for (auto& [k, fs] : inc) {
        require(fs.size() <= 2, "dual: primal edge incident to more than two faces");
        if (fs.size() != 2) continue;
        int f0 = fs[0].first, f1 = fs[1].first;
        require(fc.faces[size_t(f0)].color != fc.faces[size_t(f1)].color,
                "dual: adjacent faces share a color (dual not bipartite)");
        DualEdge e;
        e.id = int(d.edges.size());
        e.w = fc.faces[size_t(f0)].color == VColor::white ? f0 : f1;
        e.b = e.w == f0 ? f1 : f0;
        int pa = int(k >> 32), pb = int(k & 0xffffffffll);
        Vec2 w = d.vpos[size_t(e.w)], b = d.vpos[size_t(e.b)];
        if (near(w, b)) {
            e.kind = EdgeKind::hypotenuse;
            // x starts the white face's cclw traversal of the shared edge
            const auto& bd = fc.faces[size_t(e.w)].boundary;
            int x = -1, y = -1;
            for (int i = 0; i < int(bd.size()); ++i) {
                int u = bd[size_t(i)], v = bd[size_t((i + 1) % bd.size())];
                if ((u == pa && v == pb) || (u == pb && v == pa)) { x = u; y = v; }
            }
            require(x != -1, "dual: shared edge missing from face boundary");
            e.rho.x = x;
            e.rho.y = y;
        } else {
            e.kind = EdgeKind::leg;
            // pick x so that (w, x, b, y) is cclw
            e.rho.x = cross(b - w, d.ppos[size_t(pa)] - w) < 0 ? pa : pb;
            e.rho.y = e.rho.x == pa ? pb : pa;
        }
        Vec2 vx = d.ppos[size_t(e.rho.x)] - w, vy = d.ppos[size_t(e.rho.y)] - w;
        require(near(vx.norm(), 1.0, 1e-7) && near(vy.norm(), 1.0, 1e-7) &&
                    near((d.ppos[size_t(e.rho.x)] - b).norm(), 1.0, 1e-7) &&
                    near((d.ppos[size_t(e.rho.y)] - b).norm(), 1.0, 1e-7),
                "dual: face circumradius differs from 1");
        e.rho.beta = angle_of(vx);
        e.rho.alpha = angle_of(vy);
        double two_theta = wrap_pi(e.rho.alpha - e.rho.beta);
        if (two_theta < 0) two_theta += 2 * kPi;  // degenerate case lands on pi
        require(two_theta > kGeomTol && two_theta < kPi + kGeomTol,
                "dual: rhombus angle outside (0, pi]");
        e.theta = two_theta / 2;
        e.nu = critical_weight(e.theta);
        d.edges.push_back(e);
    }

    // rotation cycles around interior primal vertices
    std::vector<char> pb_interior(fc.primal.size(), 1);
    for (const auto& [k, fs] : inc)
        if (fs.size() == 1) {
            pb_interior[size_t(k >> 32)] = 0;
            pb_interior[size_t(k & 0xffffffffll)] = 0;
        }
    d.index_edges();
    std::map<long long, int> edge_of_pedge;
    {
        int i = 0;
        for (auto& [k, fs] : inc) {
            if (fs.size() == 2) edge_of_pedge[k] = i++;
        }
        // dual edge ids were assigned in the same (sorted) order
    }
    for (int p = 0; p < int(fc.primal.size()); ++p) {
        if (!pb_interior[size_t(p)]) continue;
        // gather incident faces with the two primal edges of each at p
        int f0 = -1;
        for (int f = 0; f < int(fc.faces.size()) && f0 < 0; ++f)
            for (int u : fc.faces[size_t(f)].boundary)
                if (u == p) { f0 = f; break; }
        if (f0 < 0) continue;  // isolated primal vertex
        DualFaceCycle cyc;
        cyc.primal_vertex = p;
        int face = f0, enter = -1;
        do {
            cyc.faces.push_back(face);
            const auto& bd = fc.faces[size_t(face)].boundary;
            int n = int(bd.size());
            int at = 0;
            while (bd[size_t(at)] != p) ++at;
            int prev = bd[size_t((at + n - 1) % n)], next = bd[size_t((at + 1) % n)];
            long long k1 = pkey(prev, p), k2 = pkey(p, next);
            long long exit_k = (enter == -1) ? k2 : (edge_of_pedge.count(k1) && edge_of_pedge[k1] != enter ? k1 : k2);
            require(edge_of_pedge.count(exit_k), "dual: interior rotation crossed a boundary edge");
            int exit = edge_of_pedge[exit_k];
            cyc.edges.push_back(exit);
            const auto& de = d.edges[size_t(exit)];
            face = de.w == face ? de.b : de.w;
            enter = exit;
        } while (face != f0);
        // normalize to cclw around p by the rotation of crossed edge directions
        double total = 0;
        auto dir_of = [&](int eid) {
            const auto& de = d.edges[size_t(eid)];
            int q = de.rho.x == p ? de.rho.y : de.rho.x;
            return fc.primal[size_t(q)] - fc.primal[size_t(p)];
        };
        for (size_t i = 0; i < cyc.edges.size(); ++i)
            total += turn(dir_of(cyc.edges[i]), dir_of(cyc.edges[(i + 1) % cyc.edges.size()]));
        if (total < 0) {
            // keep edges[i] joining faces[i] -> faces[i+1] after the reversal
            std::reverse(cyc.faces.begin(), cyc.faces.end());
            std::reverse(cyc.edges.begin(), cyc.edges.end());
            std::rotate(cyc.edges.begin(), cyc.edges.begin() + 1, cyc.edges.end());
        }
        d.cycles.push_back(std::move(cyc));
    }
    return d;
}

}  // namespace detail

inline FaceComplex face_complex(const TriangulatedPatch& t) {
    FaceComplex fc;
    for (const auto& v : t.verts) fc.primal.push_back(v.pos);
    for (const auto& f : t.faces) {
        FaceComplex::Face g;
        g.circumcenter = (t.vpos(f.a) + t.vpos(f.b)) * 0.5;
        g.color = f.color;
        g.boundary = {f.center, f.a, f.b};
        bool a_black = t.base.vertices[size_t(f.a)].color == VColor::black;
        g.hyp_black = a_black ? f.a : f.b;
        g.hyp_white = a_black ? f.b : f.a;
        fc.faces.push_back(g);
    }
    return fc;
}

inline IsoradialDual dual_graph(const TriangulatedPatch& t) {
    return detail::build_dual(face_complex(t));
}

// --- triangular lattice / honeycomb dual ------------------------------------
// Triangles at side sqrt(3) so every circumradius is 1. Faces are indexed by
// (i, j, up/down); the dual graph is the honeycomb lattice.

struct HoneycombPatch {
    IsoradialDual dual;
    int cols = 0, rows = 0;
    int face_id(int i, int j, bool up) const { return 2 * (j * cols + i) + (up ? 0 : 1); }
    static Vec2 basis_u() { return {std::sqrt(3.0), 0.0}; }
    static Vec2 basis_v() { return {std::sqrt(3.0) / 2.0, 1.5}; }
};

inline FaceComplex honeycomb_face_complex(int cols, int rows) {
    require(cols > 0 && rows > 0, "honeycomb: non-positive dimensions");
    FaceComplex fc;
    Vec2 U = HoneycombPatch::basis_u(), V = HoneycombPatch::basis_v();
    auto vid = [&](int i, int j) { return j * (cols + 1) + i; };
    for (int j = 0; j <= rows; ++j)
        for (int i = 0; i <= cols; ++i) fc.primal.push_back(double(i) * U + double(j) * V);
    for (int j = 0; j < rows; ++j)
        for (int i = 0; i < cols; ++i) {
            FaceComplex::Face up;
            up.boundary = {vid(i, j), vid(i + 1, j), vid(i, j + 1)};
            up.color = VColor::white;
            up.circumcenter =
                (fc.primal[size_t(vid(i, j))] + fc.primal[size_t(vid(i + 1, j))] +
                 fc.primal[size_t(vid(i, j + 1))]) /
                3.0;
            fc.faces.push_back(up);
            FaceComplex::Face dn;
            dn.boundary = {vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)};
            dn.color = VColor::black;
            dn.circumcenter =
                (fc.primal[size_t(vid(i + 1, j))] + fc.primal[size_t(vid(i + 1, j + 1))] +
                 fc.primal[size_t(vid(i, j + 1))]) /
                3.0;
            fc.faces.push_back(dn);
        }
    return fc;
}

inline HoneycombPatch honeycomb_patch(int cols, int rows) {
    HoneycombPatch h;
    h.cols = cols;
    h.rows = rows;
    h.dual = detail::build_dual(honeycomb_face_complex(cols, rows));
    return h;
}

}  // namespace isodimer
