#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ghostlat/lattice.hpp"
#include "ghostlat/rng.hpp"

using namespace ghostlat;

TEST_CASE("critical coupling constant") {
    CHECK(critical_coupling() == doctest::Approx(kBetaC).epsilon(1e-15));
    // ln(1+sqrt 2)/2 satisfies exp(2b) = 1+sqrt 2
    CHECK(std::exp(2.0 * kBetaC) == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("rect contains with open sides") {
    Rect closed(0, 0, 2, 1);
    CHECK(closed.contains(0, 0, 1e-9));
    CHECK(closed.contains(2, 1, 1e-9));
    CHECK_FALSE(closed.contains(2.1, 0.5, 1e-9));

    Rect half(1, 1, 2, 2, false, false, true, false);  // x1 open
    CHECK(half.contains(1, 1.5, 1e-9));
    CHECK_FALSE(half.contains(2, 1.5, 1e-9));

    // negative eps = strict interior
    CHECK_FALSE(closed.contains(0, 0.5, -1e-6));
    CHECK(closed.contains(0.5, 0.5, -1e-6));
}

TEST_CASE("build on a rectangle: counts and order") {
    GhostGraph g = GhostGraph::build(Rect(0, 0, 3, 2), 1.0, 0.5);
    // 4 x 3 vertices, 3*3 + 4*2 = 17 internal edges, 12 external
    CHECK(g.vertex_count() == 12);
    CHECK(g.internal_edge_count() == 17);
    CHECK(g.edge_count() == 17 + 12);
    CHECK(g.ghost() == 12);
    CHECK(g.total_vertices() == 13);

    // row-major, x fastest: index = iy*W + ix
    for (int v = 0; v < 12; ++v) {
        CHECK(g.grid_x(v) == v % 4);
        CHECK(g.grid_y(v) == v / 4);
    }
    CHECK(g.vertex_at(2, 1).value() == 6);
    CHECK_FALSE(g.vertex_at(4, 0).has_value());
    CHECK(g.vertex_near(2.4, 1.4) == 6);

    // every vertex of this small box touches the boundary except none exist inside
    GhostGraph big = GhostGraph::build(Rect(0, 0, 4, 4), 1.0, 0.0);
    int interior = 0;
    for (int v = 0; v < big.vertex_count(); ++v)
        if (!big.on_boundary(v)) ++interior;
    CHECK(interior == 9);  // the 3x3 core of a 5x5 box
}

TEST_CASE("build respects spacing and external couplings") {
    GhostGraph g = GhostGraph::build(Rect(0, 0, 1, 1), 0.5, 0.3);
    CHECK(g.vertex_count() == 9);
    CHECK(g.external_coupling() ==
          doctest::Approx(std::pow(0.5, 15.0 / 8.0) * 0.3).epsilon(1e-15));
    for (auto& e : g.edges()) {
        if (e.internal)
            CHECK(e.coupling == doctest::Approx(kBetaC));
        else
            CHECK(e.coupling == doctest::Approx(g.external_coupling()));
    }
    CHECK(g.validate().empty());
    CHECK_THROWS_AS(GhostGraph::build(Rect(0, 0, 1, 1), 1.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(GhostGraph::build(Rect(0, 0, 1, 1), 1.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(GhostGraph::build(Rect(0.2, 0.2, 0.8, 0.8), 1.0, 0.0),
                    std::invalid_argument);
}

TEST_CASE("serialize and parse round-trip") {
    GhostGraph g = GhostGraph::from_cells({{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 1}}, 0.5, 0.7);
    GhostGraph h = GhostGraph::parse(g.serialize());
    CHECK(h.vertex_count() == g.vertex_count());
    CHECK(h.edge_count() == g.edge_count());
    CHECK(h.spacing() == g.spacing());
    CHECK(h.field() == g.field());
    CHECK(h.hash() == g.hash());
    CHECK(h.validate().empty());
    CHECK_THROWS_AS(GhostGraph::parse("not a graph"), std::invalid_argument);
    CHECK_THROWS_AS(GhostGraph::parse("ghostgraph 1\na 1\nh 0\n"), std::invalid_argument);
}

TEST_CASE("validate flags corrupted graphs") {
    GhostGraph g = GhostGraph::build(Rect(0, 0, 1, 1), 1.0, 0.2);
    std::string text = g.serialize();
    // tamper with the first internal coupling
    auto pos = text.find("0.440");
    REQUIRE(pos != std::string::npos);
    std::string bad = text;
    bad.replace(pos, 5, "0.441");
    CHECK_FALSE(GhostGraph::parse(bad).validate().empty());
    CHECK(GhostGraph::parse(text).validate().empty());
}

TEST_CASE("boundary conditions and quotient map") {
    GhostGraph g = GhostGraph::build(Rect(0, 0, 3, 3), 1.0, 0.0);
    BoundaryCondition fr = BoundaryCondition::free_bc(g);
    BoundaryCondition wi = BoundaryCondition::wired_bc(g);
    CHECK(fr.is_free(g));
    CHECK_FALSE(fr.is_wired(g));
    CHECK(wi.is_wired(g));

    QuotientMap qf = quotient_by_boundary(g, fr);
    CHECK(qf.quotient_vertices == g.total_vertices());
    QuotientMap qw = quotient_by_boundary(g, wi);
    // 12 boundary vertices + ghost collapse to one
    CHECK(qw.quotient_vertices == g.total_vertices() - 12);

    BoundaryCondition bad;
    bad.blocks.push_back({5});  // interior vertex of the 4x4 box
    CHECK_THROWS_AS(quotient_by_boundary(g, bad), std::invalid_argument);
}

TEST_CASE("cluster count under quotients") {
    GhostGraph g = GhostGraph::build(Rect(0, 0, 1, 1), 1.0, 0.1);
    QuotientMap q = quotient_by_boundary(g, BoundaryCondition::free_bc(g));
    BondConfig none(g.edge_count(), 0);
    CHECK(cluster_count(g, none, q) == g.total_vertices());
    BondConfig all(g.edge_count(), 1);
    CHECK(cluster_count(g, all, q) == 1);
}

TEST_CASE("reference frame rectangles") {
    RectFrame f;  // the reference picture
    Rect T = f.T(), R = f.R(), S = f.S(), Q1 = f.Q1(), Q8 = f.Q8();
    CHECK(T.x0 == 0); CHECK(T.y0 == 0); CHECK(T.x1 == 10); CHECK(T.y1 == 3);
    CHECK(R.x0 == 2); CHECK(R.y0 == 0); CHECK(R.x1 == 8); CHECK(R.y1 == 3);
    CHECK(S.x0 == 1); CHECK(S.y0 == 1); CHECK(S.x1 == 9); CHECK(S.y1 == 2);
    CHECK(Q1.x0 == 1); CHECK(Q1.x1 == 2); CHECK(Q1.open_x1);
    CHECK(Q8.x0 == 8); CHECK(Q8.x1 == 9); CHECK(Q8.open_x0);

    RectFrame shifted(5, -2);
    CHECK(shifted.T().x0 == 5);
    CHECK(shifted.T().y1 == 1);

    RectFrame rotated(0, 0, 1);  // quarter turn: x spans become y spans
    Rect Tr = rotated.T();
    CHECK(Tr.x1 - Tr.x0 == doctest::Approx(3.0));
    CHECK(Tr.y1 - Tr.y0 == doctest::Approx(10.0));
    Rect Q1r = rotated.Q1();
    CHECK((Q1r.open_y0 || Q1r.open_y1));  // the open side turned with it

    RectFrame probe(0, 0, 0, 3.0, 3.0);
    CHECK(probe.T().x1 - probe.T().x0 == doctest::Approx(9.0));
    CHECK(probe.S().x1 - probe.S().x0 == doctest::Approx(3.0));

    CHECK_THROWS_AS(RectFrame(0, 0, 0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(RectFrame(0, 0, 0, 1.0, 2.0), std::invalid_argument);
}

TEST_CASE("union-find basics") {
    UnionFind uf(6);
    CHECK(uf.components() == 6);
    CHECK(uf.unite(0, 1));
    CHECK(uf.unite(1, 2));
    CHECK_FALSE(uf.unite(0, 2));
    CHECK(uf.connected(0, 2));
    CHECK_FALSE(uf.connected(0, 3));
    CHECK(uf.components() == 4);
}

TEST_CASE("rng streams are deterministic and distinct") {
    RngStream a(42, 7), b(42, 7), c(42, 8);
    for (int i = 0; i < 100; ++i) CHECK(a.bits() == b.bits());
    bool differs = false;
    RngStream a2(42, 7);
    for (int i = 0; i < 100; ++i)
        if (a2.bits() != c.bits()) differs = true;
    CHECK(differs);

    RngStream s(1, 2);
    RngStream s0 = s.substream(0), s1 = s.substream(1);
    bool sub_differs = false;
    for (int i = 0; i < 100; ++i)
        if (s0.bits() != s1.bits()) sub_differs = true;
    CHECK(sub_differs);

    RngStream u(9, 0);
    for (int i = 0; i < 1000; ++i) {
        double x = u.u01();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
        CHECK(u.below(10) < 10);
    }
}
