#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <vector>

#include <json.hpp>

#include "isodimer/dual.hpp"

namespace isodimer {

// A perfect matching of a dual graph, i.e. a quadri-tiling of the underlying
// patch. Stored as a sorted list of dual edge ids.
struct DimerConfig {
    std::vector<int> matched;

    bool contains(int edge) const {
        return std::binary_search(matched.begin(), matched.end(), edge);
    }
};

inline void validate_matching(const IsoradialDual& d, const DimerConfig& m) {
    std::vector<int> cover(d.nd(), 0);
    for (int e : m.matched) {
        require(e >= 0 && e < int(d.edges.size()), "matching: bad edge id");
        ++cover[size_t(d.edges[size_t(e)].w)];
        ++cover[size_t(d.edges[size_t(e)].b)];
    }
    for (int c : cover) require(c == 1, "matching: vertex not covered exactly once");
}

// All perfect matchings of a finite graph by backtracking, always branching
// on an uncovered vertex of least remaining degree. Results are sorted
// edge-id lists, in lexicographic order.
inline std::vector<std::vector<int>> enumerate_perfect_matchings(
    int nverts, const std::vector<std::pair<int, int>>& edge_list) {
    std::vector<std::vector<int>> at;
    at.resize(size_t(nverts));
    for (int e = 0; e < int(edge_list.size()); ++e) {
        at[size_t(edge_list[size_t(e)].first)].push_back(e);
        at[size_t(edge_list[size_t(e)].second)].push_back(e);
    }
    std::vector<std::vector<int>> out;
    std::vector<char> used(size_t(nverts), 0);
    std::vector<int> cur;
    int remaining = nverts;

    auto recurse = [&](auto&& self) -> void {
        if (remaining == 0) {
            out.push_back(cur);
            return;
        }
        int pick = -1, best = INT32_MAX;
        for (int v = 0; v < nverts; ++v) {
            if (used[size_t(v)]) continue;
            int deg = 0;
            for (int e : at[size_t(v)]) {
                auto [a, b] = edge_list[size_t(e)];
                if (!used[size_t(a)] && !used[size_t(b)]) ++deg;
            }
            if (deg < best) { best = deg; pick = v; }
        }
        if (best == 0) return;  // dead end
        for (int e : at[size_t(pick)]) {
            auto [a, b] = edge_list[size_t(e)];
            if (used[size_t(a)] || used[size_t(b)]) continue;
            used[size_t(a)] = used[size_t(b)] = 1;
            remaining -= 2;
            cur.push_back(e);
            self(self);
            cur.pop_back();
            remaining += 2;
            used[size_t(a)] = used[size_t(b)] = 0;
        }
    };
    if (nverts % 2 == 0) recurse(recurse);
    for (auto& m : out) std::sort(m.begin(), m.end());
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<DimerConfig> enumerate_matchings(const IsoradialDual& d) {
    std::vector<std::pair<int, int>> el;
    el.reserve(d.edges.size());
    for (const auto& e : d.edges) el.emplace_back(e.w, e.b);
    std::vector<DimerConfig> out;
    for (auto& m : enumerate_perfect_matchings(d.nd(), el)) out.push_back({std::move(m)});
    return out;
}

// --- quadri-tiles ------------------------------------------------------------

struct QuadriTile {
    int edge = -1;             // dual edge the tile corresponds to
    int face_w = -1, face_b = -1;
    EdgeKind glue = EdgeKind::leg;  // leg-glued (half rhombus) or hypotenuse-glued
};

inline std::vector<QuadriTile> matching_to_tiling(const IsoradialDual& d, const DimerConfig& m) {
    validate_matching(d, m);
    std::vector<QuadriTile> tiles;
    for (int eid : m.matched) {
        const auto& e = d.edges[size_t(eid)];
        tiles.push_back({eid, e.w, e.b, e.kind});
    }
    return tiles;
}

// Lemma-1 reconstruction: draw the separating edge of every tile and read the
// rhombi off the black (right-angle) vertices. Returns the underlying patch;
// throws on tiles that do not respect the gluing rules.
inline RhombusPatch underlying_tiling(const TriangulatedPatch& t,
                                      const std::vector<QuadriTile>& tiles) {
    std::vector<int> used(t.faces.size(), 0);
    for (const auto& q : tiles) {
        const TriFace& fa = t.faces[size_t(q.face_w)];
        const TriFace& fb = t.faces[size_t(q.face_b)];
        ++used[size_t(q.face_w)];
        ++used[size_t(q.face_b)];
        if (q.glue == EdgeKind::leg) {
            require(fa.center == fb.center,
                    "underlying_tiling: leg-glued tile matches black vertex to white corner");
        } else {
            bool share_hyp = (fa.a == fb.b && fa.b == fb.a) || (fa.a == fb.a && fa.b == fb.b);
            require(share_hyp, "underlying_tiling: hypotenuse-glued tile without shared hypotenuse");
        }
    }
    for (int u : used) require(u == 1, "underlying_tiling: tiles do not partition the faces");

    // group faces by their right-angle vertex and order them cclw
    std::map<int, std::vector<int>> by_center;
    for (const auto& f : t.faces) by_center[f.center].push_back(f.id);
    RhombusPatch p;
    p.vertices.assign(t.base.vertices.begin(), t.base.vertices.end());
    for (auto& [c, fs] : by_center) {
        require(fs.size() == 4, "underlying_tiling: black vertex without exactly 4 triangles");
        Vec2 o = t.vpos(c);
        std::sort(fs.begin(), fs.end(), [&](int x, int y) {
            Vec2 cx = (t.vpos(t.faces[size_t(x)].a) + t.vpos(t.faces[size_t(x)].b)) * 0.5;
            Vec2 cy = (t.vpos(t.faces[size_t(y)].a) + t.vpos(t.faces[size_t(y)].b)) * 0.5;
            return angle_of(cx - o) < angle_of(cy - o);
        });
        for (int i = 0; i < 4; ++i)
            require(t.faces[size_t(fs[size_t(i)])].b == t.faces[size_t(fs[size_t((i + 1) % 4)])].a,
                    "underlying_tiling: triangles around a black vertex do not close a rhombus");
        Rhombus r;
        r.id = int(p.rhombi.size());
        for (int i = 0; i < 4; ++i) r.v[size_t(i)] = t.faces[size_t(fs[size_t(i)])].a;
        p.rhombi.push_back(r);
    }
    p.finalize();
    return p;
}

inline bool same_rhombus_set(const RhombusPatch& a, const RhombusPatch& b) {
    auto canon = [](const RhombusPatch& p) {
        std::vector<std::array<double, 8>> out;
        for (const auto& r : p.rhombi) {
            std::array<double, 8> q;
            int best = 0;
            for (int i = 1; i < 4; ++i) {
                Vec2 vi = p.vpos(r.v[size_t(i)]), vb = p.vpos(r.v[size_t(best)]);
                if (vi.x < vb.x - kGeomTol || (vi.x < vb.x + kGeomTol && vi.y < vb.y - kGeomTol))
                    best = i;
            }
            for (int i = 0; i < 4; ++i) {
                Vec2 v = p.vpos(r.v[size_t((best + i) % 4)]);
                q[size_t(2 * i)] = std::round(v.x * 1e6) / 1e6;
                q[size_t(2 * i + 1)] = std::round(v.y * 1e6) / 1e6;
            }
            out.push_back(q);
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    auto ca = canon(a), cb = canon(b);
    if (ca.size() != cb.size()) return false;
    for (size_t i = 0; i < ca.size(); ++i)
        for (int j = 0; j < 8; ++j)
            if (std::abs(ca[i][size_t(j)] - cb[i][size_t(j)]) > 1e-5) return false;
    return true;
}

// --- matching file format -----------------------------------------------------
// {"patch": <patch object or path>, "matched_edges": [[faceA,faceB], ...]}

inline nlohmann::ordered_json matching_to_json(const RhombusPatch& p, const IsoradialDual& d,
                                               const DimerConfig& m) {
    nlohmann::ordered_json j;
    j["patch"] = patch_to_json(p);
    j["matched_edges"] = nlohmann::ordered_json::array();
    for (int eid : m.matched)
        j["matched_edges"].push_back({d.edges[size_t(eid)].w, d.edges[size_t(eid)].b});
    return j;
}

struct LoadedMatching {
    RhombusPatch patch;
    TriangulatedPatch tri;
    IsoradialDual dual;
    DimerConfig config;
};

inline LoadedMatching matching_from_json(const nlohmann::json& j) {
    LoadedMatching out;
    require(j.contains("patch") && j.contains("matched_edges"),
            "matching file: missing patch/matched_edges");
    if (j.at("patch").is_string())
        out.patch = patch_from_file(j.at("patch").get<std::string>());
    else
        out.patch = patch_from_json(j.at("patch"));
    out.tri = add_diagonals(out.patch);
    out.dual = dual_graph(out.tri);
    for (const auto& pr : j.at("matched_edges")) {
        require(pr.is_array() && pr.size() == 2, "matching file: matched edge must be a face pair");
        int e = out.dual.edge_between(pr[0].get<int>(), pr[1].get<int>());
        require(e >= 0, "matching file: face pair is not a dual edge");
        out.config.matched.push_back(e);
    }
    std::sort(out.config.matched.begin(), out.config.matched.end());
    validate_matching(out.dual, out.config);
    return out;
}

inline LoadedMatching matching_from_file(const std::string& path) {
    std::ifstream in(path);
    require(bool(in), "cannot open matching file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw DomainError("malformed matching file " + path + ": " + e.what());
    }
    return matching_from_json(j);
}

}  // namespace isodimer
