#include <catch2/catch_amalgamated.hpp>

#include "isodimer/mcmc.hpp"

using namespace isodimer;

namespace {
QuadriState state_of(const RhombusPatch& p, const DimerConfig& m) {
    return QuadriState::make(p, m);
}
}  // namespace

TEST_CASE("enumerate matchings of small duals") {
    SECTION("single rhombus dual is a 4-cycle with 2 matchings") {
        auto d = dual_graph(add_diagonals(single_rhombus(kPi / 4)));
        REQUIRE(enumerate_matchings(d).size() == 2);
    }
    SECTION("hexagon(1,1,1) with diagonals has 9 matchings") {
        auto d = dual_graph(add_diagonals(lozenge_hexagon(1, 1, 1)));
        auto ms = enumerate_matchings(d);
        REQUIRE(ms.size() == 9);
        // lexicographic order, no duplicates
        for (size_t i = 1; i < ms.size(); ++i) REQUIRE(ms[i - 1].matched < ms[i].matched);
    }
    SECTION("graph with an isolated vertex has none") {
        REQUIRE(enumerate_perfect_matchings(3, {{0, 1}}).empty());
    }
}

TEST_CASE("matching_to_tiling and underlying_tiling round trip") {
    for (auto p : {single_rhombus(kPi / 4), square_grid(2, 2), lozenge_hexagon(1, 1, 1)}) {
        auto t = add_diagonals(p);
        auto d = dual_graph(t);
        for (const auto& m : enumerate_matchings(d)) {
            auto tiles = matching_to_tiling(d, m);
            REQUIRE(tiles.size() == d.nd() / size_t(2));
            auto back = underlying_tiling(t, tiles);
            REQUIRE(same_rhombus_set(back, p));
        }
    }
}

TEST_CASE("hypotenuse-glued tile spans two rhombi") {
    // a 2x1 strip admits no matching through its hypotenuse edge (parity),
    // the 2x2 grid does: the ring configuration uses all four
    auto t = add_diagonals(square_grid(2, 2));
    auto d = dual_graph(t);
    bool found = false;
    for (const auto& m : enumerate_matchings(d))
        for (const auto& tile : matching_to_tiling(d, m))
            if (tile.glue == EdgeKind::hypotenuse) {
                found = true;
                REQUIRE(t.faces[size_t(tile.face_w)].rhombus !=
                        t.faces[size_t(tile.face_b)].rhombus);
            }
    REQUIRE(found);
}

TEST_CASE("height1 on the single square rhombus") {
    auto t = add_diagonals(single_rhombus(kPi / 4));
    auto d = dual_graph(t);
    auto ms = enumerate_matchings(d);
    REQUIRE(ms.size() == 2);
    int base = 0;
    auto h0 = height1(t, d, ms[0], base);
    auto h1f = height1(t, d, ms[1], base);
    REQUIRE(h0.at(base) == 0);
    // the two matchings must differ somewhere in height
    bool differ = false;
    for (auto [v, val] : h0.values) differ = differ || val != h1f.at(v);
    REQUIRE(differ);
    // edge rule: every oriented step is +1 or -2
    for (const auto& pe : t.pedges) {
        int diff = h0.at(pe.to) - h0.at(pe.from);
        REQUIRE((diff == 1 || diff == -2));
    }
}

TEST_CASE("Lemma 3 steps: +-1 on tile boundaries, -+2 across tiles") {
    auto p = lozenge_hexagon(1, 1, 1);
    auto t = add_diagonals(p);
    auto d = dual_graph(t);
    for (const auto& m : enumerate_matchings(d)) {
        auto h = height1(t, d, m, 0);
        for (const auto& tile : matching_to_tiling(d, m)) {
            const auto& fa = t.faces[size_t(tile.face_w)];
            const auto& fb = t.faces[size_t(tile.face_b)];
            std::map<std::pair<int, int>, int> count;
            for (const auto& f : {fa, fb})
                for (auto [u, v] : {std::pair{f.center, f.a}, {f.a, f.b}, {f.b, f.center}}) {
                    auto k = std::minmax(u, v);
                    count[{k.first, k.second}]++;
                }
            for (auto& [k, c] : count) {
                int step = std::abs(h.at(k.second) - h.at(k.first));
                if (c == 2)  // the edge the tile is glued across
                    REQUIRE(step == 2);
                else
                    REQUIRE(step == 1);
            }
        }
    }
}

TEST_CASE("height1 bijection: exhaustive round trip") {
    for (auto p : {single_rhombus(kPi / 4), square_grid(2, 2), lozenge_hexagon(1, 1, 1),
                   lozenge_hexagon(2, 1, 1)}) {
        auto t = add_diagonals(p);
        auto d = dual_graph(t);
        for (const auto& m : enumerate_matchings(d)) {
            auto h = height1(t, d, m, 0);
            auto back = tiling_from_height1(h, t, d);
            REQUIRE(back.matched == m.matched);
        }
    }
}

TEST_CASE("tiling_from_height1 rejects illegal steps") {
    auto t = add_diagonals(single_rhombus(kPi / 4));
    auto d = dual_graph(t);
    auto h = height1(t, d, enumerate_matchings(d)[0], 0);
    auto bad = h;
    bad.values[t.pedges[0].to] = bad.at(t.pedges[0].from) + 3;
    REQUIRE_THROWS_AS(tiling_from_height1(bad, t, d), DomainError);
}

TEST_CASE("height2 on lozenge tilings") {
    SECTION("single lattice lozenge: corner pattern h, h+1, h+2, h+1 and center h+1") {
        detail::PatchBuilder b;
        b.span({0, 0}, tri_u(), tri_v());
        auto p = b.build();
        auto h = height2(p, 0);
        std::vector<int> vals;
        for (int i = 0; i < 4; ++i) vals.push_back(h.at(p.rhombi[0].v[size_t(i)]));
        std::sort(vals.begin(), vals.end());
        int lo = vals[0];
        REQUIRE(vals == std::vector<int>{lo, lo + 1, lo + 1, lo + 2});
        REQUIRE(h.at(int(p.vertices.size()) + 0) == lo + 1);
        REQUIRE(h.at(h.base_vertex) == 0);
    }
    SECTION("hexagon(1,1,1): the two tilings differ by 3 exactly at the center") {
        auto region = lozenge_hexagon(1, 1, 1);
        auto tilings = enumerate_lozenge_tilings(region);
        REQUIRE(tilings.size() == 2);
        // identify vertices by position; base = same lex-smallest corner
        auto& A = tilings[0];
        auto& B = tilings[1];
        REQUIRE(A.vertices.size() == 7);
        auto hA = height2(A, 0);
        // find matching base in B
        int baseB = -1;
        for (const auto& v : B.vertices)
            if (near(v.pos, A.vertices[0].pos)) baseB = v.id;
        REQUIRE(baseB >= 0);
        auto hB = height2(B, baseB);
        int ndiff = 0;
        for (const auto& va : A.vertices)
            for (const auto& vb : B.vertices)
                if (near(va.pos, vb.pos) && hA.at(va.id) != hB.at(vb.id)) {
                    ++ndiff;
                    REQUIRE(std::abs(hA.at(va.id) - hB.at(vb.id)) == 3);
                }
        REQUIRE(ndiff == 1);
    }
    SECTION("non-lattice patch is rejected") {
        REQUIRE_THROWS_AS(height2(single_rhombus(0.9), 0), DomainError);
    }
}

TEST_CASE("elementary moves on the single rhombus") {
    auto p = single_rhombus(kPi / 4);
    auto d = dual_graph(add_diagonals(p));
    for (const auto& m : enumerate_matchings(d)) {
        auto s = state_of(p, m);
        auto moves = elementary_moves(s);
        REQUIRE(moves.size() == 1);
        REQUIRE(moves[0].kind == MoveKind::quadri_flip);
        // involution
        auto s2 = apply_move(s, moves[0]);
        REQUIRE(s2.config.matched != s.config.matched);
        auto s3 = apply_move(s2, moves[0]);
        REQUIRE(s3.config.matched == s.config.matched);
    }
}

TEST_CASE("stale move is rejected") {
    // take a quadri flip valid in the all-cut configuration of hexagon(1,1,1)
    // and apply it to the all-hypotenuse configuration, where its rhombus
    // 4-cycle no longer alternates
    auto p = lozenge_hexagon(1, 1, 1);
    auto t = add_diagonals(p);
    auto d = dual_graph(t);
    auto s0 = state_of(p, initial_config(t, d));
    Move flip;
    bool got = false;
    for (const auto& mv : elementary_moves(s0))
        if (!got && mv.kind == MoveKind::quadri_flip && mv.support.size() == 4) {
            flip = mv;
            got = true;
        }
    REQUIRE(got);
    for (const auto& m : enumerate_matchings(d)) {
        bool has_hyp = false;
        for (int e : m.matched) has_hyp = has_hyp || d.edges[size_t(e)].kind == EdgeKind::hypotenuse;
        if (!has_hyp) continue;
        auto s = state_of(p, m);
        REQUIRE_THROWS_AS(apply_move(s, flip), DomainError);
    }
}

TEST_CASE("lozenge flip on hexagon(1,1,1) switches the underlying tiling") {
    auto p = lozenge_hexagon(1, 1, 1);
    auto t = add_diagonals(p);
    auto d = dual_graph(t);
    auto s = state_of(p, initial_config(t, d));
    auto moves = elementary_moves(s);
    int nloz = 0;
    for (const auto& mv : moves) nloz += mv.kind == MoveKind::lozenge_flip;
    REQUIRE(nloz == 8);  // one hexagon, 8 re-cut choices
    for (const auto& mv : moves) {
        if (mv.kind != MoveKind::lozenge_flip) continue;
        auto ns = apply_move(s, mv);
        REQUIRE(!same_rhombus_set(ns.base, p));
        REQUIRE(ns.base.rhombi.size() == 3);
        break;
    }
}

TEST_CASE("configuration with hypotenuse tiles blocking every hexagon has no lozenge flip") {
    auto p = lozenge_hexagon(1, 1, 1);
    auto t = add_diagonals(p);
    auto d = dual_graph(t);
    // the all-hypotenuse configuration: 3 hyp edges + 3 outer legs
    for (const auto& m : enumerate_matchings(d)) {
        bool has_hyp = false;
        for (int e : m.matched) has_hyp = has_hyp || d.edges[size_t(e)].kind == EdgeKind::hypotenuse;
        if (!has_hyp) continue;
        auto s = state_of(p, m);
        for (const auto& mv : elementary_moves(s)) REQUIRE(mv.kind != MoveKind::lozenge_flip);
    }
}

TEST_CASE("move orbit equals region enumeration on hexagon(1,1,1)") {
    auto region = lozenge_hexagon(1, 1, 1);
    auto all = enumerate_region_quadri_tilings(region);
    REQUIRE(all.size() == 18);  // 2 lozenge tilings x 9 matchings
    auto t = add_diagonals(region);
    auto d = dual_graph(t);
    auto orbit = move_orbit(state_of(region, initial_config(t, d)));
    REQUIRE(orbit == all);
}

TEST_CASE("mcmc: single square rhombus edge frequencies 1/2") {
    auto t = add_diagonals(single_rhombus(kPi / 4));
    auto d = dual_graph(t);
    McmcOptions opt;
    opt.edge_weights.assign(d.edges.size(), std::sqrt(2.0));
    auto res = sample_mcmc(t, 100000, 12345, opt);
    for (double f : res.edge_occupation)
        REQUIRE_THAT(f, Catch::Matchers::WithinAbs(0.5, 0.02));
}

TEST_CASE("mcmc: single 60-degree lozenge, short-diagonal cut has probability 3/4") {
    auto t = add_diagonals(single_rhombus(kPi / 6));
    auto d = dual_graph(t);
    auto res = sample_mcmc(t, 100000, 777);  // critical weights
    // matched edges crossing the long half-diagonals have nu = sqrt(3);
    // that configuration (the short-diagonal cut) has weight 3 of Z = 4
    double f_long = 0;
    for (const auto& e : d.edges)
        if (std::abs(e.nu - std::sqrt(3.0)) < 1e-9) f_long = res.edge_occupation[size_t(e.id)];
    REQUIRE_THAT(f_long, Catch::Matchers::WithinAbs(0.75, 0.02));
}

TEST_CASE("mcmc with zero steps returns the canonical initial configuration") {
    auto t = add_diagonals(lozenge_hexagon(1, 1, 1));
    auto d = dual_graph(t);
    auto res = sample_mcmc(t, 0, 1);
    REQUIRE(res.state.config.matched == initial_config(t, d).matched);
}
