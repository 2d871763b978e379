#pragma once

#include <map>
#include <random>

#include "isodimer/moves.hpp"

namespace isodimer {

// Metropolis-Hastings over the elementary moves, targeting the Boltzmann
// distribution with weight prod_{e in M} nu(e) (or the supplied per-edge
// weights). The proposal is uniform over the current move list, so the
// acceptance ratio carries the |moves(M)| / |moves(M')| correction. With
// custom weights the chain keeps the patch fixed and uses quadri-tile moves
// only; with critical weights lozenge flips are proposed as well.
struct McmcOptions {
    std::vector<double> edge_weights;  // empty = critical weights
    bool track_states = false;         // tally canonical state keys (small regions only)
};

struct McmcResult {
    QuadriState state;
    std::vector<double> edge_occupation;       // fixed-patch runs: per-edge match frequency
    std::map<StateKey, long long> state_counts;
    long long steps = 0;
};

namespace detail {
inline double config_weight(const QuadriState& s, const std::vector<double>& w) {
    double out = 1.0;
    for (int e : s.config.matched)
        out *= w.empty() ? s.dual.edges[size_t(e)].nu : w[size_t(e)];
    return out;
}
}  // namespace detail

inline McmcResult sample_mcmc(const TriangulatedPatch& tri, long long steps, unsigned long long seed,
                              const McmcOptions& opt = {}) {
    QuadriState s;
    s.base = tri.base;
    s.tri = tri;
    s.dual = dual_graph(tri);
    const bool fixed_patch = !opt.edge_weights.empty();
    if (fixed_patch)
        require(opt.edge_weights.size() == s.dual.edges.size(),
                "sample_mcmc: weight vector length mismatch");
    for (double w : opt.edge_weights) require(w > 0, "sample_mcmc: weights must be positive");
    s.config = initial_config(s.tri, s.dual);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    McmcResult res;
    res.edge_occupation.assign(s.dual.edges.size(), 0.0);
    auto moves_of = [&](const QuadriState& st) {
        auto mv = elementary_moves(st);
        if (fixed_patch)
            mv.erase(std::remove_if(mv.begin(), mv.end(),
                                    [](const Move& m) { return m.kind == MoveKind::lozenge_flip; }),
                     mv.end());
        return mv;
    };

    auto moves = moves_of(s);
    double logw = std::log(detail::config_weight(s, opt.edge_weights));
    bool patch_dirty = false;  // edge ids stop meaning anything after a lozenge flip
    for (long long step = 0; step < steps; ++step) {
        if (!moves.empty()) {
            size_t pick = std::min(size_t(double(moves.size()) * unif(rng)), moves.size() - 1);
            QuadriState ns = apply_move(s, moves[pick]);
            auto nmoves = moves_of(ns);
            double nlogw = std::log(detail::config_weight(ns, opt.edge_weights));
            double accept = std::exp(nlogw - logw) * double(moves.size()) / double(nmoves.size());
            if (unif(rng) < accept) {
                if (moves[pick].kind == MoveKind::lozenge_flip) patch_dirty = true;
                s = std::move(ns);
                moves = std::move(nmoves);
                logw = nlogw;
            }
        }
        if (!patch_dirty)
            for (int e : s.config.matched) res.edge_occupation[size_t(e)] += 1.0;
        if (opt.track_states) ++res.state_counts[canonical_key(s)];
    }
    if (steps > 0)
        for (auto& v : res.edge_occupation) v /= double(steps);
    res.state = std::move(s);
    res.steps = steps;
    return res;
}

}  // namespace isodimer
