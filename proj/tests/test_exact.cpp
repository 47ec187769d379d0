#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ghostlat/corpus.hpp"
#include "ghostlat/exact.hpp"

using namespace ghostlat;
using namespace ghostlat::exact;

namespace {

// Two adjacent sites, one internal edge.
GhostGraph pair_graph(double h) { return corpus_graph("1x2", 1.0, h); }

bool edge0_open(const BondConfig& w) { return w[0] != 0; }

}  // namespace

TEST_CASE("pair graph without field: closed forms") {
    GhostGraph g = pair_graph(0.0);
    // <sigma_0 sigma_1> = tanh(beta_c) = sqrt(2) - 1
    SpinMoments m = spin_moments(g);
    CHECK(m.two[0][1] == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-14));
    CHECK(m.one[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(ising_correlation(g, {0, 1}) == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-14));

    // single-edge FK at q=2: P(open) = 2p / (2p + 4(1-p)) with p = 2 - sqrt(2)
    const double p = 1.0 - std::exp(-2.0 * kBetaC);
    const double want = 2.0 * p / (2.0 * p + 4.0 * (1.0 - p));
    CHECK(rc_event_probability(g, BoundaryCondition::free_bc(g), edge0_open) ==
          doctest::Approx(want).epsilon(1e-14));

    // sourceless trace: P(empty) = 1 / cosh(beta_c)
    double p_empty = current_trace_probability(
        g, {}, [](const BondConfig& w) { return w[0] == 0; });
    CHECK(p_empty == doctest::Approx(1.0 / std::cosh(kBetaC)).epsilon(1e-14));

    // sources {0,1}: the trace must contain the edge
    double p_edge = current_trace_probability(g, {0, 1}, edge0_open);
    CHECK(p_edge == doctest::Approx(1.0).epsilon(1e-14));

    // no external edges: x never reaches the ghost in the double current
    CHECK(double_current_disconnection(g, 0, 1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("pair graph with field: closed forms") {
    const double h = 0.7;
    GhostGraph g = pair_graph(h);
    const double J = h;  // a = 1
    const double e2b = std::exp(2.0 * kBetaC);
    // Z-normalised moments from the 4-state sum
    const double corr = (e2b * std::cosh(2.0 * J) - 1.0) / (e2b * std::cosh(2.0 * J) + 1.0);
    const double mag = e2b * std::sinh(2.0 * J) / (e2b * std::cosh(2.0 * J) + 1.0);
    SpinMoments m = spin_moments(g);
    CHECK(m.two[0][1] == doctest::Approx(corr).epsilon(1e-14));
    CHECK(m.one[0] == doctest::Approx(mag).epsilon(1e-14));
    CHECK(m.one[1] == doctest::Approx(mag).epsilon(1e-14));
    CHECK(truncated_correlation_exact(g, 0, 1) ==
          doctest::Approx(corr - mag * mag).epsilon(1e-13));
}

TEST_CASE("spacing enters only through the external coupling") {
    GhostGraph g = corpus_graph("1x2", 0.5, 0.4);
    const double J = std::pow(0.5, 15.0 / 8.0) * 0.4;
    const double e2b = std::exp(2.0 * kBetaC);
    const double mag = e2b * std::sinh(2.0 * J) / (e2b * std::cosh(2.0 * J) + 1.0);
    SpinMoments m = spin_moments(g);
    CHECK(m.one[0] == doctest::Approx(mag).epsilon(1e-13));
}

TEST_CASE("laws are normalised probability vectors") {
    GhostGraph g = corpus_graph("2x2", 1.0, 0.3);
    Caps caps;
    MaskSpace s = MaskSpace::build(g, caps);
    CycleSpace c = CycleSpace::build(s);

    for (auto& law : {loop_law(s, c), trace_law(s, c, {}), trace_law(s, c, {0, 3})}) {
        double total = 0.0;
        for (double p : law) {
            CHECK(p >= -1e-15);
            total += p;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }

    QuotientMap q = quotient_by_boundary(g, BoundaryCondition::free_bc(g));
    std::vector<double> w = rc_weights(s, q);
    for (double x : w) CHECK(x > 0.0);
}

TEST_CASE("identity suite on a corpus subset") {
    for (const char* name : {"1x2", "2x2", "L"}) {
        for (double h : {0.0, 0.7}) {
            GhostGraph g = corpus_graph(name, 1.0, h);
            for (Identity id : {Identity::ES, Identity::SWITCHING, Identity::UEG,
                                Identity::SECH, Identity::FINITE_ENERGY}) {
                INFO(name << " h=" << h << " " << identity_name(id));
                CHECK(verify_identity(g, id) <= 1e-10);
            }
            CHECK(verify_identity(g, Identity::PARITY) <= 1e-12);
            CHECK(verify_identity(g, Identity::GHS_MONOTONE) <= 1e-12);
        }
    }
}

TEST_CASE("capacity guards") {
    // 5x4 box: 20 vertices, 31 internal + 20 external edges
    GhostGraph big = GhostGraph::build(Rect(0, 0, 4, 3), 1.0, 0.2);
    CHECK_THROWS_AS(spin_moments(big), capacity_error);
    CHECK_THROWS_AS((void)MaskSpace::build(big, Caps{}), capacity_error);

    Caps tight;
    tight.max_cycle_dim = 1;
    GhostGraph sq = corpus_graph("2x3", 1.0, 0.0);
    CHECK_THROWS_AS(loop_event_probability(sq, [](const BondConfig&) { return true; }, tight),
                    capacity_error);
}

TEST_CASE("unpairable sources raise zero-measure errors") {
    // two isolated sites, no field: no positive edge joins them
    GhostGraph g = GhostGraph::from_cells({{0, 0}, {2, 0}}, 1.0, 0.0);
    MaskSpace s = MaskSpace::build(g, Caps{});
    CycleSpace c = CycleSpace::build(s);
    CHECK_THROWS_AS((void)trace_law(s, c, {0, 1}), zero_measure_error);
    CHECK_THROWS_AS((void)source_parity_rep(s, c, {0}), std::invalid_argument);
}

TEST_CASE("corpus inventory") {
    auto names = corpus_names();
    CHECK(names.size() == 5);
    for (auto& n : names) {
        GhostGraph g = corpus_graph(n, 1.0, 0.1);
        CHECK(g.validate().empty());
        CHECK(g.internal_edge_count() <= 10);
    }
    CHECK(corpus_graph("L", 1.0, 0.0).vertex_count() == 8);
    CHECK(corpus_graph("L", 1.0, 0.0).internal_edge_count() == 10);
    CHECK_THROWS_AS(corpus_graph("nope", 1.0, 0.0), std::invalid_argument);
}
