#pragma once
// Monte Carlo samplers: Edwards-Sokal composite chain for FK configurations,
// uniform even subgraphs by fundamental-cycle coin flips, and the sech
// augmentation mapping loop O(1) samples to sourceless current traces.

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ghostlat/lattice.hpp"
#include "ghostlat/rng.hpp"

namespace ghostlat {

using SpinConfig = std::vector<std::int8_t>;

struct ChainState {
    SpinConfig spins;
    std::uint64_t sweeps = 0;
    std::uint64_t updates = 0;
};

enum class SampleBc { Free, Wired };

// Single-site heat-bath dynamics targeting the free or plus-boundary Ising
// measure; the ghost acts as a fixed +1 neighbor through the external field.
class SpinSampler {
public:
    SpinSampler(const GhostGraph& g, SampleBc bc) : g_(&g), wired_(bc == SampleBc::Wired) {
        const int n = g.vertex_count();
        state_.spins.assign(n, 1);
        pinned_.assign(n, 0);
        if (wired_)
            for (int v : g.boundary_vertices()) pinned_[v] = 1;
        neighbors_.assign(n, {});
        for (auto& e : g.edges())
            if (e.internal) {
                neighbors_[e.u].push_back(e.v);
                neighbors_[e.v].push_back(e.u);
            }
        const double hterm = g.external_coupling();
        for (int s = -4; s <= 4; ++s)
            p_plus_[s + 4] = 1.0 / (1.0 + std::exp(-2.0 * (kBetaC * s + hterm)));
    }

    const ChainState& state() const { return state_; }
    ChainState& state() { return state_; }

    double conditional_plus(int v, const SpinConfig& spins) const {
        int s = 0;
        for (int o : neighbors_[v]) s += spins[o];
        return p_plus_[s + 4];
    }

    void sweep(RngStream& rng) {
        auto& spins = state_.spins;
        for (int v = 0; v < (int)spins.size(); ++v) {
            if (pinned_[v]) continue;
            int s = 0;
            for (int o : neighbors_[v]) s += spins[o];
            spins[v] = rng.u01() < p_plus_[s + 4] ? 1 : -1;
            ++state_.updates;
        }
        ++state_.sweeps;
    }

    // Conditional Edwards-Sokal bond draw given the current spins.
    BondConfig draw_bonds(RngStream& rng) const { return bonds_given_spins(state_.spins, *g_, rng); }

    static BondConfig bonds_given_spins(const SpinConfig& spins, const GhostGraph& g,
                                        RngStream& rng) {
        BondConfig w(g.edge_count(), 0);
        const double p_int = 1.0 - std::exp(-2.0 * kBetaC);
        const double p_ext = 1.0 - std::exp(-2.0 * g.external_coupling());
        for (int e = 0; e < g.edge_count(); ++e) {
            const Edge& ed = g.edge(e);
            int su = spins[ed.u];
            int sv = ed.v == g.ghost() ? 1 : spins[ed.v];
            if (su != sv) continue;
            double p = ed.internal ? p_int : p_ext;
            if (p > 0.0 && rng.u01() < p) w[e] = 1;
        }
        return w;
    }

private:
    const GhostGraph* g_;
    bool wired_;
    ChainState state_;
    std::vector<std::uint8_t> pinned_;
    std::vector<std::vector<int>> neighbors_;
    double p_plus_[9] = {};
};

inline void spin_heatbath_sweep(ChainState& state, const GhostGraph& g, RngStream& rng) {
    SpinSampler s(g, SampleBc::Free);
    s.state() = std::move(state);
    s.sweep(rng);
    state = std::move(s.state());
}

inline BondConfig bonds_given_spins(const SpinConfig& spins, const GhostGraph& g,
                                    RngStream& rng) {
    return SpinSampler::bonds_given_spins(spins, g, rng);
}

inline int default_burnin(const GhostGraph& g) {
    long w = std::lround(g.domain().width() / g.spacing());
    long h = std::lround(g.domain().height() / g.spacing());
    return 10 * (int)std::max({w, h, 1l});
}

// Streaming FK sampler: burn in once, then one bond sample per thinning step.
class FkChain {
public:
    FkChain(const GhostGraph& g, SampleBc bc, RngStream rng)
        : g_(&g), sampler_(g, bc), rng_(std::move(rng)) {}

    void burn(int sweeps) {
        for (int i = 0; i < sweeps; ++i) sampler_.sweep(rng_);
    }
    BondConfig next(int thin = 1) {
        for (int i = 0; i < thin; ++i) sampler_.sweep(rng_);
        return sampler_.draw_bonds(rng_);
    }
    const SpinConfig& spins() const { return sampler_.state().spins; }
    SpinSampler& sampler() { return sampler_; }
    RngStream& rng() { return rng_; }

private:
    const GhostGraph* g_;
    SpinSampler sampler_;
    RngStream rng_;
};

inline BondConfig sample_fk(const GhostGraph& g, SampleBc bc, int sweeps, RngStream& rng) {
    if (sweeps <= 0) throw std::invalid_argument("sweep budget must be positive");
    SpinSampler sampler(g, bc);
    for (int i = 0; i < sweeps; ++i) sampler.sweep(rng);
    return sampler.draw_bonds(rng);
}

// Uniform even subgraph of the open graph of omega: spanning forest by BFS
// from the lowest-indexed vertex of each component, one fair coin per open
// non-forest edge, output the symmetric difference of the chosen fundamental
// cycles.  `forced_forest` edges (open, acyclic) are placed in the forest
// first; this mirrors the spanning-forest choice in the loop-persistence
// argument and does not change the output law.
inline BondConfig uniform_even_subgraph(const BondConfig& omega, const GhostGraph& g,
                                        RngStream& rng,
                                        std::span<const int> forced_forest = {}) {
    const int nv = g.total_vertices();
    std::vector<int> parent_edge(nv, -1), parent_vertex(nv, -1), depth(nv, 0), comp(nv, -1);
    std::vector<std::uint8_t> in_forest(g.edge_count(), 0);
    UnionFind uf(nv);
    for (int e : forced_forest) {
        if (!omega[e]) throw std::invalid_argument("forced forest edge is not open");
        if (!uf.unite(g.edge(e).u, g.edge(e).v))
            throw std::invalid_argument("forced forest edges contain a cycle");
        in_forest[e] = 1;
    }
    std::vector<std::vector<GhostGraph::Neighbor>> adj(nv);
    for (int e = 0; e < g.edge_count(); ++e)
        if (omega[e] && (in_forest[e] || uf.unite(g.edge(e).u, g.edge(e).v))) {
            in_forest[e] = 1;
            adj[g.edge(e).u].push_back({e, g.edge(e).v});
            adj[g.edge(e).v].push_back({e, g.edge(e).u});
        }
    int ncomp = 0;
    for (int root = 0; root < nv; ++root) {
        if (comp[root] != -1) continue;
        comp[root] = ncomp++;
        std::vector<int> queue{root};
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            int v = queue[qi];
            for (auto [e, o] : adj[v])
                if (comp[o] == -1) {
                    comp[o] = comp[v];
                    parent_edge[o] = e;
                    parent_vertex[o] = v;
                    depth[o] = depth[v] + 1;
                    queue.push_back(o);
                }
        }
    }
    BondConfig out(g.edge_count(), 0);
    auto toggle_path = [&](int u, int v) {
        while (depth[u] > depth[v]) { out[parent_edge[u]] ^= 1; u = parent_vertex[u]; }
        while (depth[v] > depth[u]) { out[parent_edge[v]] ^= 1; v = parent_vertex[v]; }
        while (u != v) {
            out[parent_edge[u]] ^= 1; u = parent_vertex[u];
            out[parent_edge[v]] ^= 1; v = parent_vertex[v];
        }
    };
    for (int e = 0; e < g.edge_count(); ++e) {
        if (!omega[e] || in_forest[e]) continue;
        if (rng.bernoulli(0.5)) {
            out[e] ^= 1;
            toggle_path(g.edge(e).u, g.edge(e).v);
        }
    }
    return out;
}

// Add each edge outside F independently with probability 1 - sech(J_e).
inline BondConfig sech_augment(const BondConfig& f, const GhostGraph& g, RngStream& rng) {
    BondConfig out = f;
    const double q_int = 1.0 - 1.0 / std::cosh(kBetaC);
    const double q_ext = 1.0 - 1.0 / std::cosh(g.external_coupling());
    for (int e = 0; e < g.edge_count(); ++e) {
        if (out[e]) continue;
        double q = g.edge(e).internal ? q_int : q_ext;
        if (q > 0.0 && rng.u01() < q) out[e] = 1;
    }
    return out;
}

// Open-edge trace of the sourceless current measure:
// FK sample -> uniform even subgraph -> sech augmentation.
inline BondConfig sample_current_trace(const GhostGraph& g, int sweeps, RngStream& rng) {
    BondConfig omega = sample_fk(g, SampleBc::Free, sweeps, rng);
    BondConfig f = uniform_even_subgraph(omega, g, rng);
    return sech_augment(f, g, rng);
}

struct CovarianceEstimate {
    double value = 0.0;
    double standard_error = 0.0;
};

// Covariance estimator from independent spin chains (free boundary).
inline CovarianceEstimate estimate_truncated_correlation(const GhostGraph& g, int x, int y,
                                                         int chains, int sweeps,
                                                         RngStream& rng) {
    if (chains < 2) throw std::invalid_argument("need at least 2 chains");
    if (sweeps <= 0) throw std::invalid_argument("sweep budget must be positive");
    const int burn = default_burnin(g);
    std::vector<double> per_chain(chains);
    for (int c = 0; c < chains; ++c) {
        RngStream sub = rng.substream(c);
        SpinSampler sampler(g, SampleBc::Free);
        for (int i = 0; i < burn; ++i) sampler.sweep(sub);
        double sx = 0, sy = 0, sxy = 0;
        for (int i = 0; i < sweeps; ++i) {
            sampler.sweep(sub);
            const auto& sp = sampler.state().spins;
            sx += sp[x];
            sy += sp[y];
            sxy += sp[x] * sp[y];
        }
        per_chain[c] = sxy / sweeps - (sx / sweeps) * (sy / sweeps);
    }
    CovarianceEstimate est;
    for (double v : per_chain) est.value += v;
    est.value /= chains;
    double var = 0.0;
    for (double v : per_chain) var += (v - est.value) * (v - est.value);
    est.standard_error = std::sqrt(var / (chains - 1.0) / chains);
    return est;
}

}  // namespace ghostlat
