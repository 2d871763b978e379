#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "isodimer/patch.hpp"

namespace isodimer {

// Maximal straight path of rhombi; consecutive rhombi share an edge parallel
// to the transversal direction.
struct TrainTrack {
    std::vector<int> rhombi;
    std::vector<int> crossing_edges;  // patch edge ids, rhombi.size() + 1 of them
    Vec2 transversal;                 // unit, canonicalized to the upper half plane
    bool oriented = false;
};

namespace detail {

inline Vec2 canonical_dir(Vec2 d) {
    d = d / d.norm();
    if (d.y < -kGeomTol || (std::abs(d.y) <= kGeomTol && d.x < 0)) d = Vec2{0, 0} - d;
    return d;
}

// side pair 0 = sides {0, 2}, pair 1 = sides {1, 3}
inline int pair_of_side(int side) { return side % 2; }

}  // namespace detail

inline std::vector<TrainTrack> train_tracks(const RhombusPatch& p) {
    std::vector<TrainTrack> out;
    std::set<std::pair<int, int>> used;  // (rhombus, pair)
    for (const auto& r0 : p.rhombi) {
        for (int pair = 0; pair < 2; ++pair) {
            if (used.count({r0.id, pair})) continue;
            // walk backwards through side `pair`, then forward through pair+2
            TrainTrack t;
            auto walk = [&](int start, int side) {
                std::vector<std::pair<int, int>> chain;  // (rhombus, exit side)
                int r = start, s = side;
                while (true) {
                    int nxt = p.neighbor(r, s);
                    if (nxt < 0) break;
                    // enter nxt through the shared edge; exit across the opposite side
                    int eid = p.side_edge(r, s);
                    int enter_side = -1;
                    for (int i = 0; i < 4; ++i)
                        if (p.side_edge(nxt, i) == eid) enter_side = i;
                    r = nxt;
                    s = (enter_side + 2) % 4;
                    chain.emplace_back(r, s);
                    require(int(chain.size()) <= int(p.rhombi.size()),
                            "train_tracks: a track repeats a rhombus");
                }
                return chain;
            };
            auto back = walk(r0.id, pair);
            auto fwd = walk(r0.id, pair + 2);
            t.rhombi.clear();
            for (auto it = back.rbegin(); it != back.rend(); ++it) t.rhombi.push_back(it->first);
            t.rhombi.push_back(r0.id);
            for (auto& [r, s] : fwd) t.rhombi.push_back(r);
            // crossing edges along the chain: entry edge of the first rhombus,
            // each shared edge, exit edge of the last
            t.crossing_edges.clear();
            if (t.rhombi.size() == 1) {
                t.crossing_edges.push_back(p.side_edge(r0.id, pair));
                t.crossing_edges.push_back(p.side_edge(r0.id, pair + 2));
            } else {
                auto shared_side = [&](int a, int bb) {
                    for (int i = 0; i < 4; ++i)
                        if (p.neighbor(a, i) == bb) return i;
                    throw DomainError("train_tracks: broken chain");
                };
                int s0 = shared_side(t.rhombi[0], t.rhombi[1]);
                t.crossing_edges.push_back(p.side_edge(t.rhombi[0], (s0 + 2) % 4));
                for (size_t k = 0; k + 1 < t.rhombi.size(); ++k)
                    t.crossing_edges.push_back(
                        p.side_edge(t.rhombi[k], shared_side(t.rhombi[k], t.rhombi[k + 1])));
                int sl = shared_side(t.rhombi.back(), t.rhombi[t.rhombi.size() - 2]);
                t.crossing_edges.push_back(p.side_edge(t.rhombi.back(), (sl + 2) % 4));
            }
            // transversal = direction of the crossing edges
            {
                const auto& e = p.edges()[size_t(t.crossing_edges.front())];
                t.transversal = detail::canonical_dir(p.vpos(e.b) - p.vpos(e.a));
            }
            // mark both (rhombus, pair) slots used
            for (size_t k = 0; k < t.rhombi.size(); ++k) {
                int r = t.rhombi[k];
                int e = t.crossing_edges[k];
                for (int i = 0; i < 4; ++i)
                    if (p.side_edge(r, i) == e) used.insert({r, detail::pair_of_side(i)});
            }
            if (t.rhombi.front() > t.rhombi.back()) {
                std::reverse(t.rhombi.begin(), t.rhombi.end());
                std::reverse(t.crossing_edges.begin(), t.crossing_edges.end());
            }
            out.push_back(std::move(t));
        }
    }
    return out;
}

// Exterior angle sum along the cclw boundary from edge i to edge j.
inline double turning_angle(const std::vector<DirectedEdge>& boundary, const RhombusPatch& p,
                            int i, int j) {
    int m = int(boundary.size());
    require(i >= 0 && i < m && j >= 0 && j < m, "turning_angle: index out of range");
    auto dir = [&](int k) {
        const auto& e = boundary[size_t(k % m)];
        return p.vpos(e.to) - p.vpos(e.from);
    };
    double sum = 0;
    for (int a = i; a != j; a = (a + 1) % m) sum += turn(dir(a), dir(a + 1));
    return sum;
}

inline double full_turning(const RhombusPatch& p) {
    double sum = 0;
    int m = int(p.boundary().size());
    for (int a = 0; a < m; ++a) {
        Vec2 d1 = p.vpos(p.boundary()[size_t(a)].to) - p.vpos(p.boundary()[size_t(a)].from);
        Vec2 d2 = p.vpos(p.boundary()[size_t((a + 1) % m)].to) -
                  p.vpos(p.boundary()[size_t((a + 1) % m)].from);
        sum += turn(d1, d2);
    }
    return sum;
}

// --- sub-patch plumbing -------------------------------------------------------

inline RhombusPatch induced_patch(const RhombusPatch& ambient, const std::vector<int>& ids) {
    require(!ids.empty(), "induced_patch: empty rhombus set");
    std::vector<int> vmap(ambient.vertices.size(), -1);
    RhombusPatch out;
    std::vector<int> sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    for (int r : sorted)
        for (int v : ambient.rhombi[size_t(r)].v)
            if (vmap[size_t(v)] < 0) {
                vmap[size_t(v)] = int(out.vertices.size());
                PatchVertex pv = ambient.vertices[size_t(v)];
                pv.id = vmap[size_t(v)];
                out.vertices.push_back(pv);
            }
    for (int r : sorted) {
        Rhombus nr;
        nr.id = int(out.rhombi.size());
        for (int i = 0; i < 4; ++i) nr.v[size_t(i)] = vmap[size_t(ambient.rhombi[size_t(r)].v[size_t(i)])];
        out.rhombi.push_back(nr);
    }
    out.finalize();
    return out;
}

// Match a standalone patch against an ambient patch by rhombus geometry
// (up to a common translation); returns ambient rhombus ids.
inline std::vector<int> locate_subpatch(const RhombusPatch& sub, const RhombusPatch& ambient) {
    auto centers = [](const RhombusPatch& p) {
        std::vector<Vec2> c;
        for (const auto& r : p.rhombi) c.push_back(p.center(r.id));
        return c;
    };
    auto cs = centers(sub), ca = centers(ambient);
    for (const Vec2& anchor : ca) {
        Vec2 shift = anchor - cs[0];
        std::vector<int> ids;
        for (const Vec2& c : cs) {
            int hit = -1;
            for (int r = 0; r < int(ca.size()); ++r)
                if (near(ca[size_t(r)], c + shift, 1e-7)) hit = r;
            if (hit < 0) break;
            ids.push_back(hit);
        }
        if (ids.size() == cs.size()) return ids;
    }
    throw DomainError("locate_subpatch: patch is not a sub-patch of the ambient tiling");
}

namespace detail {

inline void check_simply_connected_subset(const RhombusPatch& ambient, const std::set<int>& q) {
    induced_patch(ambient, std::vector<int>(q.begin(), q.end()));  // throws if disconnected
    // Euler characteristic of the induced complex must be 1 (disk)
    std::set<int> vs;
    std::set<int> es;
    for (int r : q) {
        for (int v : ambient.rhombi[size_t(r)].v) vs.insert(v);
        for (int i = 0; i < 4; ++i) es.insert(ambient.side_edge(r, i));
    }
    require(int(vs.size()) - int(es.size()) + int(q.size()) == 1,
            "sub-patch is not simply connected");
}

// A crossing edge of the track lies on the boundary of the sub-patch q when
// exactly one of its incident rhombi belongs to q (ambient-boundary edges of
// q rhombi included).
inline int crossings_with_boundary(const RhombusPatch& ambient, const TrainTrack& t,
                                   const std::set<int>& q) {
    int n = 0;
    for (int e : t.crossing_edges) {
        int inside = 0;
        for (auto [r, s] : ambient.edges()[size_t(e)].sides) inside += q.count(r) ? 1 : 0;
        if (inside == 1) ++n;
    }
    return n;
}

}  // namespace detail

// Lemma-6 completion: absorb the pockets cut off by track portions that leave
// and re-enter the sub-patch, until every ambient track crossing it does so
// exactly twice. Input and output are ambient rhombus id sets.
inline std::vector<int> make_track_convex_ids(const RhombusPatch& ambient,
                                              const std::vector<int>& subset) {
    std::set<int> q(subset.begin(), subset.end());
    detail::check_simply_connected_subset(ambient, q);
    auto tracks = train_tracks(ambient);
    // edge -> track index
    std::vector<int> track_of_edge(ambient.edges().size(), -1);
    for (int ti = 0; ti < int(tracks.size()); ++ti)
        for (int e : tracks[size_t(ti)].crossing_edges) track_of_edge[size_t(e)] = ti;

    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& t : tracks) {
            // inside/outside pattern of the track's rhombi
            const auto& chain = t.rhombi;
            if (detail::crossings_with_boundary(ambient, t, q) <= 2) continue;
            // outside runs strictly between inside rhombi
            int n = int(chain.size());
            int first_in = -1, last_in = -1;
            for (int k = 0; k < n; ++k)
                if (q.count(chain[size_t(k)])) {
                    if (first_in < 0) first_in = k;
                    last_in = k;
                }
            if (first_in < 0) continue;
            for (int k = first_in; k <= last_in; ++k) {
                if (q.count(chain[size_t(k)])) continue;
                int start = k;
                while (k <= last_in && !q.count(chain[size_t(k)])) ++k;
                // portion [start, k) is outside, flanked by inside rhombi
                std::set<int> portion;
                for (int a = start; a < k; ++a) portion.insert(chain[size_t(a)]);
                // flood components of ambient \ (q u portion); absorb the
                // fully enclosed ones together with the portion
                std::set<int> blocked = q;
                blocked.insert(portion.begin(), portion.end());
                std::vector<int> comp(ambient.rhombi.size(), -1);
                int ncomp = 0;
                for (const auto& r : ambient.rhombi) {
                    if (blocked.count(r.id) || comp[size_t(r.id)] >= 0) continue;
                    std::vector<int> stack{r.id};
                    comp[size_t(r.id)] = ncomp;
                    std::vector<int> members{r.id};
                    bool enclosed = true;
                    while (!stack.empty()) {
                        int cur = stack.back();
                        stack.pop_back();
                        for (int i = 0; i < 4; ++i) {
                            int nb = ambient.neighbor(cur, i);
                            if (nb < 0) { enclosed = false; continue; }
                            if (blocked.count(nb) || comp[size_t(nb)] >= 0) continue;
                            comp[size_t(nb)] = ncomp;
                            members.push_back(nb);
                            stack.push_back(nb);
                        }
                    }
                    if (enclosed) {
                        for (int m : members) q.insert(m);
                        changed = true;
                    }
                    ++ncomp;
                }
                for (int m : portion) q.insert(m);
                changed = true;
            }
        }
    }
    // postcondition: every ambient track meeting q crosses its boundary twice
    for (const auto& t : tracks) {
        bool meets = false;
        for (int r : t.rhombi) meets = meets || q.count(r);
        if (!meets) continue;
        require(detail::crossings_with_boundary(ambient, t, q) == 2,
                "make_track_convex: ambient too small (a filled region leaves the ambient patch)");
    }
    detail::check_simply_connected_subset(ambient, q);
    return {q.begin(), q.end()};
}

inline RhombusPatch make_track_convex(const RhombusPatch& sub, const RhombusPatch& ambient) {
    return induced_patch(ambient, make_track_convex_ids(ambient, locate_subpatch(sub, ambient)));
}

// --- Lemma-7 completion to a weakly convex zonogon ----------------------------

struct ConvexZonogon {
    RhombusPatch patch;
    // boundary sides after merging collinear runs: side i has vector `vecs[i]`
    // and starts at vertex `starts[i]`
    std::vector<Vec2> vecs;
    std::vector<Vec2> starts;
};

namespace detail {

inline int count_track_crossings(const RhombusPatch& p) {
    auto tracks = train_tracks(p);
    int crossings = 0;
    for (size_t i = 0; i < tracks.size(); ++i)
        for (size_t j = i + 1; j < tracks.size(); ++j) {
            std::set<int> a(tracks[i].rhombi.begin(), tracks[i].rhombi.end());
            int shared = 0;
            for (int r : tracks[j].rhombi) shared += a.count(r) ? 1 : 0;
            require(shared <= 1, "tracks cross more than once");
            crossings += shared;
        }
    return crossings;
}

inline std::pair<std::vector<Vec2>, std::vector<Vec2>> merged_sides(const RhombusPatch& p) {
    const auto& bd = p.boundary();
    int m = int(bd.size());
    auto dir = [&](int k) {
        const auto& e = bd[size_t((k % m + m) % m)];
        return p.vpos(e.to) - p.vpos(e.from);
    };
    // rotate so that side 0 starts at a genuine corner
    int start = -1;
    for (int k = 0; k < m; ++k)
        if (std::abs(turn(dir(k - 1), dir(k))) > 1e-7) { start = k; break; }
    require(start >= 0, "degenerate boundary (all edges collinear)");
    std::vector<Vec2> vecs, starts;
    Vec2 cur{0, 0};
    Vec2 cur_start = p.vpos(bd[size_t(start)].from);
    for (int a = 0; a < m; ++a) {
        int k = (start + a) % m;
        cur += dir(k);
        bool corner = std::abs(turn(dir(k), dir(k + 1))) > 1e-7;
        if (corner) {
            vecs.push_back(cur);
            starts.push_back(cur_start);
            cur = {0, 0};
            cur_start = p.vpos(bd[size_t((k + 1) % m)].from);
        }
    }
    return {vecs, starts};
}

}  // namespace detail

inline ConvexZonogon complete_to_convex(const RhombusPatch& input) {
    require(input.simply_connected(), "complete_to_convex: patch is not simply connected");
    // each of the patch's own tracks crosses the boundary exactly twice by
    // maximality; verify anyway
    {
        std::set<int> all;
        for (const auto& r : input.rhombi) all.insert(r.id);
        for (const auto& t : train_tracks(input))
            require(detail::crossings_with_boundary(input, t, all) == 2,
                    "complete_to_convex: a track crosses the boundary more than twice");
    }
    RhombusPatch p = input;
    for (int guard = 0;; ++guard) {
        require(guard < 10000, "complete_to_convex: did not converge");
        const auto& bd = p.boundary();
        int m = int(bd.size());
        auto dir = [&](int k) {
            const auto& e = bd[size_t(k % m)];
            return p.vpos(e.to) - p.vpos(e.from);
        };
        int j = -1;
        for (int k = 0; k < m; ++k)
            if (turn(dir(k), dir(k + 1)) < -1e-9) { j = k; break; }
        if (j < 0) break;
        // fill the reflex notch with the rhombus of directions e_j, e_{j+1}
        const auto& ej = bd[size_t(j)];
        const auto& ej1 = bd[size_t((j + 1) % m)];
        Vec2 xj = p.vpos(ej.from), yj = p.vpos(ej.to), yj1 = p.vpos(ej1.to);
        Vec2 u = xj + (yj1 - yj);
        int uid = -1;
        for (const auto& v : p.vertices)
            if (near(v.pos, u, 1e-7)) uid = v.id;
        if (uid < 0) {
            PatchVertex nv;
            nv.id = int(p.vertices.size());
            nv.pos = u;
            nv.color = other(p.vertices[size_t(ej.from)].color);
            p.vertices.push_back(nv);
            uid = nv.id;
        }
        Rhombus nr;
        nr.id = int(p.rhombi.size());
        nr.v = {ej.from, ej.to, ej1.to, uid};
        // boundary runs cclw, the notch is outside, so (x_j, y_j, y_{j+1}, u) is cw
        std::swap(nr.v[1], nr.v[3]);
        p.rhombi.push_back(nr);
        p.finalize();
    }
    ConvexZonogon z;
    auto [vecs, starts] = detail::merged_sides(p);
    z.patch = std::move(p);
    z.vecs = vecs;
    z.starts = starts;
    int n2 = int(vecs.size());
    require(n2 % 2 == 0, "zonogon: odd number of sides");
    for (int i = 0; i < n2 / 2; ++i)
        require(near(vecs[size_t(i)], Vec2{0, 0} - vecs[size_t(i + n2 / 2)], 1e-7),
                "zonogon: opposite boundary sides are not parallel of equal length");
    return z;
}

// --- Theorem lem8: periodic embedding ------------------------------------------

struct PeriodicEmbedding {
    RhombusPatch domain;
    Vec2 t1, t2;
};

inline PeriodicEmbedding periodic_embedding(const ConvexZonogon& z) {
    int n = int(z.vecs.size()) / 2;
    require(n >= 2, "periodic_embedding: malformed zonogon");
    std::vector<Vec2> s(z.vecs.begin(), z.vecs.begin() + n);
    PeriodicEmbedding out;
    if (n == 2) {
        out.domain = z.patch;
        out.t1 = s[0];
        out.t2 = s[1];
        return out;
    }
    if (n == 3) {
        out.domain = z.patch;
        out.t1 = s[0] + s[1];
        out.t2 = s[1] + s[2];
        return out;
    }
    // staircase strips along sides n-1, n-2, ..., 3 (k = 1..n-3)
    detail::PatchBuilder b;
    for (const auto& r : z.patch.rhombi) {
        Vec2 q[4];
        for (int i = 0; i < 4; ++i) q[i] = z.patch.vpos(r.v[size_t(i)]);
        b.rhombus(q[0], q[1], q[2], q[3]);
    }
    auto unit_of = [](Vec2 v) { return v / v.norm(); };
    for (int k = 1; k <= n - 3; ++k) {
        int side = n - k - 1;  // 0-based index of e_{n-k}
        Vec2 base = z.starts[size_t(side)];
        Vec2 T = z.vecs[size_t(side)];
        Vec2 tu = unit_of(T) * 2.0;
        int tcount = int(std::lround(T.norm() / 2.0));
        Vec2 offset{0, 0};
        for (int g = 1; g <= n - k - 2; ++g) {
            for (int el = g; el >= 1; --el) {
                Vec2 S = z.vecs[size_t(el - 1)];
                Vec2 su = unit_of(S) * 2.0;
                int scount = int(std::lround(S.norm() / 2.0));
                for (int a = 0; a < tcount; ++a)
                    for (int c = 0; c < scount; ++c)
                        b.span(base + offset + double(a) * tu + double(c) * su, tu, su);
                offset += S;
            }
        }
    }
    out.domain = b.build();
    Vec2 g1{0, 0};
    g1 = Vec2{0, 0} - s[size_t(n - 1)];
    for (int g = 1; g <= n - 3; ++g)
        for (int el = 1; el <= g; ++el) g1 += s[size_t(el - 1)];
    Vec2 g2{0, 0};
    for (int el = 1; el <= n - 2; ++el) g2 += s[size_t(el - 1)];
    Vec2 g3 = s[size_t(n - 2)];
    out.t1 = g1 + g2;
    out.t2 = g2 + g3;
    // the super-hexagon tiles the plane, so the domain area must match the
    // lattice cell area
    double area = 0;
    for (const auto& r : out.domain.rhombi) {
        Vec2 q0 = out.domain.vpos(r.v[0]);
        area += std::abs(cross(out.domain.vpos(r.v[1]) - q0, out.domain.vpos(r.v[3]) - q0));
    }
    require(near(area, std::abs(cross(out.t1, out.t2)), 1e-6 * area),
            "periodic_embedding: fundamental domain area does not match the lattice cell");
    return out;
}

inline PeriodicEmbedding embed_in_periodic(const RhombusPatch& sub, const RhombusPatch& ambient) {
    auto convex = make_track_convex(sub, ambient);
    return periodic_embedding(complete_to_convex(convex));
}

inline PeriodicEmbedding embed_in_periodic(const RhombusPatch& sub) {
    return periodic_embedding(complete_to_convex(sub));
}

}  // namespace isodimer
