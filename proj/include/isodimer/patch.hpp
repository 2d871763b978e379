#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include <json.hpp>

#include "isodimer/core.hpp"

namespace isodimer {

enum class VColor { black, white };

inline VColor other(VColor c) { return c == VColor::black ? VColor::white : VColor::black; }

struct PatchVertex {
    int id = -1;
    Vec2 pos;
    VColor color = VColor::white;
};

// Rhombus given by its 4 vertex ids in cclw order; all sides have length 2
// (hypotenuse convention of the right triangles it splits into).
struct Rhombus {
    int id = -1;
    std::array<int, 4> v{};
};

struct PatchEdge {
    int id = -1;
    int a = -1, b = -1;                      // a < b
    std::vector<std::pair<int, int>> sides;  // (rhombus id, side index), 1 or 2 entries
};

struct DirectedEdge {
    int from = -1, to = -1;
};

// Finite simply connected piece of a rhombus tiling. Combinatorics
// (incidence lists) are authoritative; coordinates are only checked against
// them.
class RhombusPatch {
  public:
    std::vector<PatchVertex> vertices;  // index == id
    std::vector<Rhombus> rhombi;        // index == id

    const std::vector<PatchEdge>& edges() const { return edges_; }
    const std::vector<DirectedEdge>& boundary() const { return boundary_; }
    bool simply_connected() const { return simply_connected_; }

    Vec2 vpos(int v) const { return vertices[size_t(v)].pos; }
    Vec2 center(int r) const {
        const auto& q = rhombi[size_t(r)].v;
        return (vpos(q[0]) + vpos(q[2])) * 0.5;
    }

    // (rhombus, side) -> edge id; side i joins v[i] -> v[i+1].
    int side_edge(int r, int side) const { return side_edge_[size_t(r)][size_t(side)]; }
    int edge_between(int a, int b) const {
        auto it = edge_index_.find(key(a, b));
        return it == edge_index_.end() ? -1 : it->second;
    }
    // Rhombi adjacent across side (r, i), if any.
    int neighbor(int r, int side) const {
        const auto& e = edges_[size_t(side_edge(r, side))];
        for (auto [rr, ss] : e.sides)
            if (rr != r) return rr;
        return -1;
    }

    // Recompute derived structure and check every invariant. Throws
    // DomainError with the violated precondition named.
    void finalize() {
        require(!vertices.empty() && !rhombi.empty(), "patch: empty vertex or rhombus list");
        for (size_t i = 0; i < vertices.size(); ++i)
            require(vertices[i].id == int(i), "patch: vertex ids must be 0..n-1 in order");
        for (size_t i = 0; i < rhombi.size(); ++i)
            require(rhombi[i].id == int(i), "patch: rhombus ids must be 0..n-1 in order");
        for (size_t i = 0; i < vertices.size(); ++i)
            for (size_t j = i + 1; j < vertices.size(); ++j)
                require(!near(vertices[i].pos, vertices[j].pos),
                        "patch: two vertices coincide (overlapping rhombi?)");

        build_edges();
        check_geometry();
        check_bipartite();
        build_boundary();
        check_connected();
    }

    static Vec2 lex_smallest(const std::vector<Vec2>& pts) {
        Vec2 best = pts.front();
        for (const auto& p : pts)
            if (p.x < best.x - kGeomTol || (p.x < best.x + kGeomTol && p.y < best.y - kGeomTol))
                best = p;
        return best;
    }

  private:
    static long long key(int a, int b) {
        if (a > b) std::swap(a, b);
        return (long long)a << 32 | (unsigned)b;
    }

    void build_edges() {
        edges_.clear();
        edge_index_.clear();
        side_edge_.assign(rhombi.size(), {-1, -1, -1, -1});
        for (const auto& r : rhombi) {
            for (int i = 0; i < 4; ++i) {
                int a = r.v[size_t(i)], b = r.v[size_t((i + 1) % 4)];
                require(a != b && a >= 0 && b >= 0 && a < int(vertices.size()) && b < int(vertices.size()),
                        "patch: rhombus references invalid vertex ids");
                auto [it, fresh] = edge_index_.try_emplace(key(a, b), int(edges_.size()));
                if (fresh) edges_.push_back({it->second, std::min(a, b), std::max(a, b), {}});
                auto& e = edges_[size_t(it->second)];
                require(e.sides.size() < 2, "patch: edge shared by more than two rhombi");
                e.sides.emplace_back(r.id, i);
                side_edge_[size_t(r.id)][size_t(i)] = it->second;
            }
        }
    }

    void check_geometry() const {
        for (const auto& r : rhombi) {
            Vec2 p[4];
            for (int i = 0; i < 4; ++i) p[i] = vpos(r.v[size_t(i)]);
            for (int i = 0; i < 4; ++i)
                require(near((p[(i + 1) % 4] - p[i]).norm(), 2.0),
                        "patch: rhombus side length differs from 2");
            require(near(p[2] - p[1], p[3] - p[0]), "patch: rhombus is not a parallelogram");
            double area = cross(p[1] - p[0], p[3] - p[0]);
            require(area > kGeomTol, "patch: rhombus not in cclw order or has angle outside (0, pi)");
        }
    }

    void check_bipartite() const {
        for (const auto& r : rhombi)
            for (int i = 0; i < 4; ++i)
                require(vertices[size_t(r.v[size_t(i)])].color !=
                            vertices[size_t(r.v[size_t((i + 1) % 4)])].color,
                        "patch: vertex coloring is not bipartite on a rhombus 4-cycle");
    }

    void build_boundary() {
        // Boundary edges are those with a single incident rhombus, directed so
        // the patch interior stays on the left (cclw outer cycle).
        std::map<int, int> next;  // from-vertex -> to-vertex
        int nb = 0;
        for (const auto& e : edges_) {
            if (e.sides.size() != 1) continue;
            auto [r, i] = e.sides.front();
            int from = rhombi[size_t(r)].v[size_t(i)];
            int to = rhombi[size_t(r)].v[size_t((i + 1) % 4)];
            require(!next.count(from), "patch: boundary is not a simple cycle");
            next[from] = to;
            ++nb;
        }
        boundary_.clear();
        require(nb > 0, "patch: no boundary edges");
        int start = next.begin()->first, cur = start;
        do {
            auto it = next.find(cur);
            require(it != next.end(), "patch: boundary walk broke (non-manifold patch)");
            boundary_.push_back({cur, it->second});
            cur = it->second;
        } while (cur != start && int(boundary_.size()) <= nb);
        simply_connected_ = (int(boundary_.size()) == nb);
    }

    void check_connected() const {
        std::vector<char> seen(rhombi.size(), 0);
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        size_t n = 1;
        while (!q.empty()) {
            int r = q.front();
            q.pop();
            for (int i = 0; i < 4; ++i) {
                int s = neighbor(r, i);
                if (s >= 0 && !seen[size_t(s)]) {
                    seen[size_t(s)] = 1;
                    ++n;
                    q.push(s);
                }
            }
        }
        require(n == rhombi.size(), "patch: not edge-connected");
    }

    std::vector<PatchEdge> edges_;
    std::map<long long, int> edge_index_;
    std::vector<std::array<int, 4>> side_edge_;
    std::vector<DirectedEdge> boundary_;
    bool simply_connected_ = false;
};

namespace detail {

// Deterministic coloring: BFS over patch edges, lexicographically smallest
// vertex white.
inline void color_by_bfs(RhombusPatch& p) {
    std::map<long long, std::vector<int>> adj;  // naive: vertex -> neighbors
    auto addv = [&](int a, int b) { adj[a].push_back(b); adj[b].push_back(a); };
    for (const auto& r : p.rhombi)
        for (int i = 0; i < 4; ++i) addv(r.v[size_t(i)], r.v[size_t((i + 1) % 4)]);
    int seed = 0;
    for (size_t i = 1; i < p.vertices.size(); ++i) {
        Vec2 a = p.vertices[i].pos, b = p.vertices[size_t(seed)].pos;
        if (a.x < b.x - kGeomTol || (a.x < b.x + kGeomTol && a.y < b.y - kGeomTol)) seed = int(i);
    }
    std::vector<int> mark(p.vertices.size(), -1);
    std::queue<int> q;
    mark[size_t(seed)] = 1;  // white
    q.push(seed);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int u : adj[v]) {
            if (mark[size_t(u)] == -1) {
                mark[size_t(u)] = 1 - mark[size_t(v)];
                q.push(u);
            } else {
                require(mark[size_t(u)] != mark[size_t(v)], "patch: vertex graph is not bipartite");
            }
        }
    }
    for (auto& v : p.vertices) {
        require(mark[size_t(v.id)] != -1, "patch: disconnected vertex");
        v.color = mark[size_t(v.id)] == 1 ? VColor::white : VColor::black;
    }
}

struct PatchBuilder {
    std::vector<Vec2> pts;
    std::vector<std::array<int, 4>> quads;

    int vertex(Vec2 p) {
        for (size_t i = 0; i < pts.size(); ++i)
            if (near(pts[i], p)) return int(i);
        pts.push_back(p);
        return int(pts.size()) - 1;
    }
    void rhombus(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
        quads.push_back({vertex(a), vertex(b), vertex(c), vertex(d)});
    }
    // Parallelogram spanned by side vectors s, t at corner p (cclw if cross(s,t) > 0).
    void span(Vec2 p, Vec2 s, Vec2 t) {
        if (cross(s, t) > 0)
            rhombus(p, p + s, p + s + t, p + t);
        else
            rhombus(p, p + t, p + s + t, p + s);
    }

    RhombusPatch build() const {
        RhombusPatch p;
        for (size_t i = 0; i < pts.size(); ++i)
            p.vertices.push_back({int(i), pts[i], VColor::white});
        for (size_t i = 0; i < quads.size(); ++i)
            p.rhombi.push_back({int(i), quads[i]});
        color_by_bfs(p);
        p.finalize();
        return p;
    }
};

}  // namespace detail

// --- region generators -----------------------------------------------------

inline RhombusPatch single_rhombus(double half_angle) {
    require(half_angle > kGeomTol && half_angle < kPi - kGeomTol,
            "single_rhombus: half angle outside (0, pi)");
    detail::PatchBuilder b;
    double c = std::cos(half_angle), s = std::sin(half_angle);
    b.rhombus({0, 0}, {2 * c, -2 * s}, {4 * c, 0}, {2 * c, 2 * s});
    return b.build();
}

inline RhombusPatch square_grid(int m, int n) {
    require(m > 0 && n > 0, "square_grid: non-positive dimensions");
    detail::PatchBuilder b;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < m; ++i)
            b.span({2.0 * i, 2.0 * j}, {2, 0}, {0, 2});
    return b.build();
}

// Triangular-lattice step vectors at side length 2 (the scale of lozenge
// regions and of h2).
inline Vec2 tri_u() { return {2.0, 0.0}; }
inline Vec2 tri_v() { return {1.0, std::sqrt(3.0)}; }
inline Vec2 tri_w() { return {-1.0, std::sqrt(3.0)}; }

// Hexagon with side counts a, b, c tiled by its "empty box" lozenge tiling:
// an a*b floor and two walls of a*c and b*c lozenges.
inline RhombusPatch lozenge_hexagon(int a, int b, int c) {
    require(a > 0 && b > 0 && c > 0, "lozenge_hexagon: non-positive dimensions");
    Vec2 u = tri_u(), v = tri_v(), w = tri_w();
    detail::PatchBuilder bd;
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) bd.span(double(i) * u + double(j) * v, u, v);
    for (int i = 0; i < a; ++i)
        for (int k = 0; k < c; ++k) bd.span(double(i) * u + double(b) * v + double(k) * w, u, w);
    for (int j = 0; j < b; ++j)
        for (int k = 0; k < c; ++k) bd.span(double(j) * v + double(k) * w, v, w);
    return bd.build();
}

// --- JSON file format -------------------------------------------------------
// {"vertices":[{"id","x","y","color"}], "rhombi":[[v0,v1,v2,v3]]}

inline nlohmann::ordered_json patch_to_json(const RhombusPatch& p) {
    nlohmann::ordered_json j;
    j["vertices"] = nlohmann::ordered_json::array();
    for (const auto& v : p.vertices) {
        nlohmann::ordered_json jv;
        jv["id"] = v.id;
        jv["x"] = v.pos.x;
        jv["y"] = v.pos.y;
        jv["color"] = v.color == VColor::black ? "black" : "white";
        j["vertices"].push_back(jv);
    }
    j["rhombi"] = nlohmann::ordered_json::array();
    for (const auto& r : p.rhombi) j["rhombi"].push_back({r.v[0], r.v[1], r.v[2], r.v[3]});
    return j;
}

inline RhombusPatch patch_from_json(const nlohmann::json& j) {
    RhombusPatch p;
    require(j.contains("vertices") && j.contains("rhombi"), "patch file: missing vertices/rhombi");
    std::vector<PatchVertex> vs;
    for (const auto& jv : j.at("vertices")) {
        PatchVertex v;
        v.id = jv.at("id").get<int>();
        v.pos = {jv.at("x").get<double>(), jv.at("y").get<double>()};
        std::string c = jv.at("color").get<std::string>();
        require(c == "black" || c == "white", "patch file: color must be black or white");
        v.color = c == "black" ? VColor::black : VColor::white;
        vs.push_back(v);
    }
    std::sort(vs.begin(), vs.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    p.vertices = vs;
    int i = 0;
    for (const auto& jr : j.at("rhombi")) {
        require(jr.is_array() && jr.size() == 4, "patch file: rhombus must list 4 vertex ids");
        p.rhombi.push_back({i++, {jr[0].get<int>(), jr[1].get<int>(), jr[2].get<int>(), jr[3].get<int>()}});
    }
    p.finalize();
    return p;
}

inline RhombusPatch patch_from_file(const std::string& path) {
    std::ifstream in(path);
    require(bool(in), "cannot open patch file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw DomainError("malformed patch file " + path + ": " + e.what());
    }
    return patch_from_json(j);
}

inline void patch_to_file(const RhombusPatch& p, const std::string& path) {
    std::ofstream out(path);
    require(bool(out), "cannot write patch file: " + path);
    out << patch_to_json(p).dump(2) << "\n";
}

// RegionSpec strings used by the CLI and tests: "rhombus:<half_angle>",
// "hex:a,b,c", "grid:m,n", or a file path.
inline RhombusPatch build_patch(const std::string& spec) {
    auto colon = spec.find(':');
    auto nums = [&](int expect) {
        std::vector<double> out;
        std::string rest = spec.substr(colon + 1);
        size_t pos = 0;
        while (pos < rest.size()) {
            size_t next = rest.find(',', pos);
            if (next == std::string::npos) next = rest.size();
            try {
                out.push_back(std::stod(rest.substr(pos, next - pos)));
            } catch (...) {
                throw DomainError("malformed region spec: " + spec);
            }
            pos = next + 1;
        }
        require(int(out.size()) == expect, "region spec: wrong number of parameters: " + spec);
        return out;
    };
    if (spec.rfind("rhombus:", 0) == 0) return single_rhombus(nums(1)[0]);
    if (spec.rfind("hex:", 0) == 0) {
        auto v = nums(3);
        return lozenge_hexagon(int(v[0]), int(v[1]), int(v[2]));
    }
    if (spec.rfind("grid:", 0) == 0) {
        auto v = nums(2);
        return square_grid(int(v[0]), int(v[1]));
    }
    return patch_from_file(spec);
}

}  // namespace isodimer
