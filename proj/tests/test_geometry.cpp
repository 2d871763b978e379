#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "isodimer/dual.hpp"
#include "isodimer/heights.hpp"
#include "isodimer/patch.hpp"
#include "isodimer/triangulate.hpp"

using namespace isodimer;

TEST_CASE("single rhombus generator") {
    auto p = single_rhombus(kPi / 4);
    REQUIRE(p.vertices.size() == 4);
    REQUIRE(p.rhombi.size() == 1);
    // a square of side 2: both diagonals have length 2*sqrt(2)
    REQUIRE_THAT((p.vpos(p.rhombi[0].v[0]) - p.vpos(p.rhombi[0].v[2])).norm(),
                 Catch::Matchers::WithinAbs(2 * std::sqrt(2.0), 1e-12));
    REQUIRE(p.simply_connected());
    REQUIRE(p.boundary().size() == 4);
    REQUIRE_THROWS_AS(single_rhombus(0.0), DomainError);
    REQUIRE_THROWS_AS(single_rhombus(kPi), DomainError);
}

TEST_CASE("square grid counts") {
    auto p = square_grid(2, 2);
    REQUIRE(p.vertices.size() == 9);
    REQUIRE(p.rhombi.size() == 4);
    REQUIRE(p.edges().size() == 12);
    REQUIRE_THROWS_AS(square_grid(0, 2), DomainError);
}

TEST_CASE("lozenge hexagon 1,1,1") {
    auto p = lozenge_hexagon(1, 1, 1);
    REQUIRE(p.vertices.size() == 7);
    REQUIRE(p.rhombi.size() == 3);
    REQUIRE(p.simply_connected());
    for (const auto& r : p.rhombi)
        for (int i = 0; i < 4; ++i)
            REQUIRE_THAT((p.vpos(r.v[size_t(i)]) - p.vpos(r.v[size_t((i + 1) % 4)])).norm(),
                         Catch::Matchers::WithinAbs(2.0, 1e-12));
}

TEST_CASE("vertex coloring is bipartite and lex-smallest is white") {
    for (auto p : {single_rhombus(1.1), square_grid(3, 2), lozenge_hexagon(2, 1, 1)}) {
        int smallest = 0;
        for (int v = 1; v < int(p.vertices.size()); ++v) {
            Vec2 a = p.vertices[size_t(v)].pos, b = p.vertices[size_t(smallest)].pos;
            if (a.x < b.x - 1e-12 || (std::abs(a.x - b.x) < 1e-12 && a.y < b.y)) smallest = v;
        }
        REQUIRE(p.vertices[size_t(smallest)].color == VColor::white);
    }
}

TEST_CASE("add_diagonals: faces, colors, Lemma 2 rule") {
    SECTION("single square rhombus") {
        auto t = add_diagonals(single_rhombus(kPi / 4));
        REQUIRE(t.faces.size() == 4);
        int black = 0;
        for (const auto& f : t.faces) black += f.color == VColor::black;
        REQUIRE(black == 2);
        REQUIRE(t.verts[size_t(t.center_of(0))].color == VColor::black);
    }
    SECTION("2x2 grid: 16 faces, 8 black") {
        auto t = add_diagonals(square_grid(2, 2));
        REQUIRE(t.faces.size() == 16);
        int black = 0;
        for (const auto& f : t.faces) black += f.color == VColor::black;
        REQUIRE(black == 8);
    }
    SECTION("hexagon: adjacent faces differ in color") {
        auto t = add_diagonals(lozenge_hexagon(1, 1, 1));
        REQUIRE(t.faces.size() == 12);
        for (const auto& e : t.pedges)
            if (e.faces[1] != -1)
                REQUIRE(t.faces[size_t(e.faces[0])].color != t.faces[size_t(e.faces[1])].color);
    }
    SECTION("Lemma 2 rule: black face hypotenuse runs white to black") {
        auto t = add_diagonals(lozenge_hexagon(1, 1, 1));
        for (const auto& f : t.faces) {
            auto ca = t.base.vertices[size_t(f.a)].color;
            if (f.color == VColor::black)
                REQUIRE(ca == VColor::white);
            else
                REQUIRE(ca == VColor::black);
        }
    }
}

TEST_CASE("dual graph of a single square rhombus") {
    auto t = add_diagonals(single_rhombus(kPi / 4));
    auto d = dual_graph(t);
    REQUIRE(d.nd() == 4);
    REQUIRE(d.edges.size() == 4);
    for (const auto& e : d.edges) {
        REQUIRE(e.kind == EdgeKind::leg);
        REQUIRE_THAT(e.nu, Catch::Matchers::WithinAbs(std::sqrt(2.0), 1e-12));
        // dual edge length equals nu for leg edges
        REQUIRE_THAT((d.vpos[size_t(e.w)] - d.vpos[size_t(e.b)]).norm(),
                     Catch::Matchers::WithinAbs(e.nu, 1e-12));
    }
}

TEST_CASE("dual graph of a single 60-degree lozenge") {
    auto t = add_diagonals(single_rhombus(kPi / 6));  // half angle pi/6 -> 60 degree rhombus
    auto d = dual_graph(t);
    REQUIRE(d.edges.size() == 4);
    std::vector<double> nus;
    for (const auto& e : d.edges) nus.push_back(e.nu);
    std::sort(nus.begin(), nus.end());
    REQUIRE_THAT(nus[0], Catch::Matchers::WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(nus[1], Catch::Matchers::WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(nus[2], Catch::Matchers::WithinAbs(std::sqrt(3.0), 1e-12));
    REQUIRE_THAT(nus[3], Catch::Matchers::WithinAbs(std::sqrt(3.0), 1e-12));
}

TEST_CASE("two squares sharing a side: degenerate dual edge") {
    auto t = add_diagonals(square_grid(2, 1));
    auto d = dual_graph(t);
    int hyp = 0;
    for (const auto& e : d.edges)
        if (e.kind == EdgeKind::hypotenuse) {
            ++hyp;
            REQUIRE_THAT((d.vpos[size_t(e.w)] - d.vpos[size_t(e.b)]).norm(),
                         Catch::Matchers::WithinAbs(0.0, 1e-12));
            REQUIRE_THAT(e.nu, Catch::Matchers::WithinAbs(2.0, 1e-12));
        }
    REQUIRE(hyp == 1);
}

TEST_CASE("critical weight values") {
    REQUIRE_THAT(critical_weight(kPi / 4), Catch::Matchers::WithinAbs(std::sqrt(2.0), 1e-15));
    REQUIRE_THAT(critical_weight(kPi / 2), Catch::Matchers::WithinAbs(2.0, 1e-15));
    REQUIRE_THAT(critical_weight(kPi / 6), Catch::Matchers::WithinAbs(1.0, 1e-15));
    REQUIRE_THROWS_AS(critical_weight(0.0), DomainError);
}

TEST_CASE("dual invariants on generated patches") {
    for (auto p : {single_rhombus(0.7), square_grid(3, 3), lozenge_hexagon(2, 2, 1)}) {
        auto t = add_diagonals(p);
        auto d = dual_graph(t);
        for (const auto& e : d.edges) {
            // unit rhombus side lengths = all circumradii are 1
            Vec2 w = d.vpos[size_t(e.w)], b = d.vpos[size_t(e.b)];
            Vec2 x = d.ppos[size_t(e.rho.x)], y = d.ppos[size_t(e.rho.y)];
            REQUIRE_THAT((x - w).norm(), Catch::Matchers::WithinAbs(1.0, 1e-9));
            REQUIRE_THAT((y - w).norm(), Catch::Matchers::WithinAbs(1.0, 1e-9));
            REQUIRE_THAT((x - b).norm(), Catch::Matchers::WithinAbs(1.0, 1e-9));
            REQUIRE_THAT((y - b).norm(), Catch::Matchers::WithinAbs(1.0, 1e-9));
            // nu(e) = length of the crossed primal edge; the dual edge itself
            // is the other diagonal of the unit rhombus
            REQUIRE_THAT((x - y).norm(), Catch::Matchers::WithinAbs(e.nu, 1e-9));
            REQUIRE_THAT((w - b).norm(),
                         Catch::Matchers::WithinAbs(2.0 * std::cos(e.theta), 1e-9));
        }
        // every dual face cycle has even length and alternating colors
        for (const auto& cyc : d.cycles) {
            REQUIRE(cyc.faces.size() % 2 == 0);
            for (size_t i = 0; i < cyc.faces.size(); ++i)
                REQUIRE(d.vcolor[size_t(cyc.faces[i])] !=
                        d.vcolor[size_t(cyc.faces[(i + 1) % cyc.faces.size()])]);
        }
    }
}

TEST_CASE("honeycomb patch is isoradial with nu = sqrt(3)") {
    auto h = honeycomb_patch(3, 3);
    REQUIRE(h.dual.nd() == 18);
    for (const auto& e : h.dual.edges) {
        REQUIRE_THAT(e.nu, Catch::Matchers::WithinAbs(std::sqrt(3.0), 1e-9));
        REQUIRE_THAT(e.theta, Catch::Matchers::WithinAbs(kPi / 3, 1e-9));
    }
}

TEST_CASE("patch JSON round trip") {
    auto p = lozenge_hexagon(1, 2, 1);
    auto j = patch_to_json(p);
    auto q = patch_from_json(j);
    REQUIRE(q.vertices.size() == p.vertices.size());
    REQUIRE(q.rhombi.size() == p.rhombi.size());
    for (size_t i = 0; i < p.vertices.size(); ++i) {
        REQUIRE(near(q.vertices[i].pos, p.vertices[i].pos));
        REQUIRE(q.vertices[i].color == p.vertices[i].color);
    }
    // reader tolerates extra keys
    j["extra"] = 42;
    j["vertices"][0]["note"] = "hi";
    REQUIRE_NOTHROW(patch_from_json(j));
}

TEST_CASE("build_patch region specs") {
    REQUIRE(build_patch("rhombus:0.785398163").rhombi.size() == 1);
    REQUIRE(build_patch("hex:1,1,1").rhombi.size() == 3);
    REQUIRE(build_patch("grid:2,3").rhombi.size() == 6);
    REQUIRE_THROWS_AS(build_patch("hex:0,1,1"), DomainError);
    REQUIRE_THROWS_AS(build_patch("/nonexistent/file.json"), DomainError);
}
