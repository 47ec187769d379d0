#pragma once
// Exact computation, by complete enumeration on small graphs, of the Ising,
// random-cluster, loop O(1) and random-current (trace) measures, and of the
// couplings between them.  Everything here is ground truth for the samplers.
//
// Current traces use the parity collapse: summing the factorial weights
// J^n/n! over odd n gives sinh(J), over even n >= 2 gives cosh(J)-1, so the
// joint law of (trace, sources) is a finite sum over edge-parity vectors.
// A truncated factorial sum (n <= 40) is kept as an independent cross-check.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghostlat/lattice.hpp"

namespace ghostlat::exact {

struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct zero_measure_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Caps {
    int max_spin_vertices = 16;  // 2^V spin enumeration
    int max_edges = 24;          // 2^E bond enumeration
    int max_cycle_dim = 20;      // even-subgraph enumeration
};

using Mask = std::uint32_t;

// The enumeration works over edges with positive coupling only; a zero-J
// edge is closed with probability one in every representation.
struct MaskSpace {
    const GhostGraph* g = nullptr;
    std::vector<int> edge_ids;   // positive-coupling edges, in graph order
    std::vector<double> coupling;
    std::vector<int> eu, ev;
    int np = 0;

    static MaskSpace build(const GhostGraph& g, const Caps& caps) {
        MaskSpace s;
        s.g = &g;
        for (int e = 0; e < g.edge_count(); ++e)
            if (g.edge(e).coupling > 0.0) {
                s.edge_ids.push_back(e);
                s.coupling.push_back(g.edge(e).coupling);
                s.eu.push_back(g.edge(e).u);
                s.ev.push_back(g.edge(e).v);
            }
        s.np = (int)s.edge_ids.size();
        if (s.np > caps.max_edges)
            throw capacity_error("edge count " + std::to_string(s.np) +
                                 " exceeds enumeration cap");
        return s;
    }

    BondConfig to_bond(Mask m) const {
        BondConfig w(g->edge_count(), 0);
        for (int i = 0; i < np; ++i)
            if (m >> i & 1) w[edge_ids[i]] = 1;
        return w;
    }
};

// Component count of the open subgraph over all of V-bar (plus quotient).
inline int mask_components(const MaskSpace& s, Mask m, const std::vector<int>* rep,
                           int nrep) {
    UnionFind uf(rep ? nrep : s.g->total_vertices());
    for (int i = 0; i < s.np; ++i)
        if (m >> i & 1) {
            int a = s.eu[i], b = s.ev[i];
            if (rep) { a = (*rep)[a]; b = (*rep)[b]; }
            uf.unite(a, b);
        }
    return uf.components();
}

// Bitmask of vertices lying in the ghost's open cluster.
inline std::uint32_t ghost_reach(const MaskSpace& s, Mask m) {
    UnionFind uf(s.g->total_vertices());
    for (int i = 0; i < s.np; ++i)
        if (m >> i & 1) uf.unite(s.eu[i], s.ev[i]);
    int gr = uf.find(s.g->ghost());
    std::uint32_t out = 0;
    for (int v = 0; v < s.g->total_vertices(); ++v)
        if (uf.find(v) == gr) out |= 1u << v;
    return out;
}

// ---------------------------------------------------------------------------
// Spin enumeration

struct SpinMoments {
    std::vector<double> one;               // <sigma_x>
    std::vector<std::vector<double>> two;  // <sigma_x sigma_y>
};

inline SpinMoments spin_moments(const GhostGraph& g, const Caps& caps = {}) {
    const int n = g.vertex_count();
    if (n > caps.max_spin_vertices)
        throw capacity_error("vertex count exceeds spin enumeration cap");
    SpinMoments m;
    m.one.assign(n, 0.0);
    m.two.assign(n, std::vector<double>(n, 0.0));
    double z = 0.0;
    std::vector<int> spin(n);
    for (std::uint32_t state = 0; state < (1u << n); ++state) {
        double energy = 0.0;
        for (int v = 0; v < n; ++v) spin[v] = (state >> v & 1) ? 1 : -1;
        for (auto& e : g.edges()) {
            int sv = e.v == g.ghost() ? 1 : spin[e.v];  // ghost fixed to +1
            energy += e.coupling * spin[e.u] * sv;
        }
        double w = std::exp(energy);
        z += w;
        for (int v = 0; v < n; ++v) {
            m.one[v] += w * spin[v];
            for (int u = v; u < n; ++u) m.two[v][u] += w * spin[v] * spin[u];
        }
    }
    for (int v = 0; v < n; ++v) {
        m.one[v] /= z;
        for (int u = v; u < n; ++u) {
            m.two[v][u] /= z;
            m.two[u][v] = m.two[v][u];
        }
    }
    return m;
}

// <prod_{x in A} sigma_x> under the free-boundary Ising measure.
inline double ising_correlation(const GhostGraph& g, const std::vector<int>& A,
                                const Caps& caps = {}) {
    const int n = g.vertex_count();
    if (n > caps.max_spin_vertices)
        throw capacity_error("vertex count exceeds spin enumeration cap");
    for (int v : A)
        if (v < 0 || v >= n) throw std::invalid_argument("correlation vertex out of range");
    double z = 0.0, num = 0.0;
    std::vector<int> spin(n);
    for (std::uint32_t state = 0; state < (1u << n); ++state) {
        double energy = 0.0;
        for (int v = 0; v < n; ++v) spin[v] = (state >> v & 1) ? 1 : -1;
        for (auto& e : g.edges()) {
            int sv = e.v == g.ghost() ? 1 : spin[e.v];
            energy += e.coupling * spin[e.u] * sv;
        }
        double w = std::exp(energy);
        int prod = 1;
        for (int v : A) prod *= spin[v];
        z += w;
        num += w * prod;
    }
    return num / z;
}

inline double truncated_correlation_exact(const GhostGraph& g, int x, int y,
                                          const Caps& caps = {}) {
    SpinMoments m = spin_moments(g, caps);
    return m.two[x][y] - m.one[x] * m.one[y];
}

// ---------------------------------------------------------------------------
// Random-cluster enumeration

// Unnormalised FK weight of each configuration (indexed by positive-edge mask).
inline std::vector<double> rc_weights(const MaskSpace& s, const QuotientMap& q) {
    std::vector<double> w((std::size_t)1 << s.np);
    std::vector<double> open_f(s.np), closed_f(s.np);
    for (int i = 0; i < s.np; ++i) {
        open_f[i] = 1.0 - std::exp(-2.0 * s.coupling[i]);
        closed_f[i] = std::exp(-2.0 * s.coupling[i]);
    }
    for (Mask m = 0; m < (Mask)w.size(); ++m) {
        double prod = 1.0;
        for (int i = 0; i < s.np; ++i) prod *= (m >> i & 1) ? open_f[i] : closed_f[i];
        int kappa = mask_components(s, m, &q.rep, q.quotient_vertices);
        w[m] = prod * std::ldexp(1.0, kappa);
    }
    return w;
}

inline double rc_event_probability(const GhostGraph& g, const BoundaryCondition& bc,
                                   const std::function<bool(const BondConfig&)>& event,
                                   const Caps& caps = {}) {
    MaskSpace s = MaskSpace::build(g, caps);
    QuotientMap q = quotient_by_boundary(g, bc);
    std::vector<double> w = rc_weights(s, q);
    double z = 0.0, num = 0.0;
    for (Mask m = 0; m < (Mask)w.size(); ++m) {
        z += w[m];
        if (event(s.to_bond(m))) num += w[m];
    }
    return num / z;
}

// ---------------------------------------------------------------------------
// Cycle space over the positive-coupling subgraph

struct CycleSpace {
    std::vector<Mask> basis;          // fundamental cycles (positive-edge masks)
    std::vector<int> parent_edge;     // forest structure, -1 at roots
    std::vector<int> parent_vertex;
    std::vector<int> depth;
    std::vector<int> component;
    int components = 0;

    static CycleSpace build(const MaskSpace& s) {
        CycleSpace c;
        const int nv = s.g->total_vertices();
        c.parent_edge.assign(nv, -1);
        c.parent_vertex.assign(nv, -1);
        c.depth.assign(nv, 0);
        c.component.assign(nv, -1);
        std::vector<std::vector<std::pair<int, int>>> adj(nv);  // (pos idx, other)
        for (int i = 0; i < s.np; ++i) {
            adj[s.eu[i]].push_back({i, s.ev[i]});
            adj[s.ev[i]].push_back({i, s.eu[i]});
        }
        std::vector<bool> in_forest(s.np, false);
        for (int root = 0; root < nv; ++root) {
            if (c.component[root] != -1) continue;
            c.component[root] = c.components;
            std::vector<int> queue{root};
            for (std::size_t qi = 0; qi < queue.size(); ++qi) {
                int v = queue[qi];
                for (auto [ei, o] : adj[v]) {
                    if (c.component[o] != -1) continue;
                    c.component[o] = c.components;
                    c.parent_edge[o] = ei;
                    c.parent_vertex[o] = v;
                    c.depth[o] = c.depth[v] + 1;
                    in_forest[ei] = true;
                    queue.push_back(o);
                }
            }
            ++c.components;
        }
        for (int i = 0; i < s.np; ++i)
            if (!in_forest[i]) c.basis.push_back((Mask(1) << i) ^ c.forest_path(s.eu[i], s.ev[i]));
        return c;
    }

    // XOR mask of forest edges on the path between u and v (same component).
    Mask forest_path(int u, int v) const {
        Mask m = 0;
        while (depth[u] > depth[v]) { m ^= Mask(1) << parent_edge[u]; u = parent_vertex[u]; }
        while (depth[v] > depth[u]) { m ^= Mask(1) << parent_edge[v]; v = parent_vertex[v]; }
        while (u != v) {
            m ^= Mask(1) << parent_edge[u]; u = parent_vertex[u];
            m ^= Mask(1) << parent_edge[v]; v = parent_vertex[v];
        }
        return m;
    }

    // Enumerate all XOR combinations of the basis, starting from `base`.
    template <typename F>
    void for_each_coset(Mask base, F&& fn) const {
        const int d = (int)basis.size();
        Mask cur = base;
        fn(cur);
        if (d == 0) return;
        // Gray-code walk over the 2^d combinations
        for (std::uint64_t k = 1; k < (std::uint64_t(1) << d); ++k) {
            int bit = 0;
            while (!(k >> bit & 1)) ++bit;
            cur ^= basis[bit];
            fn(cur);
        }
    }
};

// A parity vector with the requested source set, or zero-measure error.
inline Mask source_parity_rep(const MaskSpace&, const CycleSpace& c,
                              const std::vector<int>& sources) {
    if (sources.size() % 2 != 0)
        throw std::invalid_argument("source set must have even size");
    std::vector<std::vector<int>> per_comp(c.components);
    for (int v : sources) per_comp[c.component[v]].push_back(v);
    Mask m = 0;
    for (auto& lst : per_comp) {
        if (lst.size() % 2 != 0)
            throw zero_measure_error("sources not pairable in the positive-coupling graph");
        for (std::size_t i = 0; i + 1 < lst.size(); i += 2)
            m ^= c.forest_path(lst[i], lst[i + 1]);
    }
    return m;
}

// ---------------------------------------------------------------------------
// Loop O(1) model

inline double loop_event_probability(const GhostGraph& g,
                                     const std::function<bool(const BondConfig&)>& event,
                                     const Caps& caps = {}) {
    MaskSpace s = MaskSpace::build(g, caps);
    CycleSpace c = CycleSpace::build(s);
    if ((int)c.basis.size() > caps.max_cycle_dim)
        throw capacity_error("cycle-space dimension exceeds cap");
    std::vector<double> t(s.np);
    for (int i = 0; i < s.np; ++i) t[i] = std::tanh(s.coupling[i]);
    double z = 0.0, num = 0.0;
    c.for_each_coset(0, [&](Mask f) {
        double w = 1.0;
        for (int i = 0; i < s.np; ++i)
            if (f >> i & 1) w *= t[i];
        z += w;
        if (event(s.to_bond(f))) num += w;
    });
    return num / z;
}

// Full loop law as a dense vector over positive-edge masks.
inline std::vector<double> loop_law(const MaskSpace& s, const CycleSpace& c) {
    std::vector<double> law((std::size_t)1 << s.np, 0.0);
    std::vector<double> t(s.np);
    for (int i = 0; i < s.np; ++i) t[i] = std::tanh(s.coupling[i]);
    double z = 0.0;
    c.for_each_coset(0, [&](Mask f) {
        double w = 1.0;
        for (int i = 0; i < s.np; ++i)
            if (f >> i & 1) w *= t[i];
        law[f] += w;
        z += w;
    });
    for (auto& p : law) p /= z;
    return law;
}

// ---------------------------------------------------------------------------
// Random-current trace law

namespace detail {

inline void zeta_transform(std::vector<double>& f, int n) {
    for (int i = 0; i < n; ++i)
        for (std::size_t m = 0; m < f.size(); ++m)
            if (m >> i & 1) f[m] += f[m ^ (std::size_t(1) << i)];
}

inline void mobius_transform(std::vector<double>& f, int n) {
    for (int i = 0; i < n; ++i)
        for (std::size_t m = 0; m < f.size(); ++m)
            if (m >> i & 1) f[m] -= f[m ^ (std::size_t(1) << i)];
}

inline double odd_weight(double j, bool truncated) {
    if (!truncated) return std::sinh(j);
    double sum = 0.0, term = j;  // J^1/1!
    for (int n = 1; n <= 39; n += 2) {
        sum += term;
        term *= j * j / ((n + 1.0) * (n + 2.0));
    }
    return sum;
}

inline double even_weight(double j, bool truncated) {
    if (!truncated) return std::cosh(j) - 1.0;
    double sum = 0.0, term = j * j / 2.0;  // J^2/2!
    for (int n = 2; n <= 40; n += 2) {
        sum += term;
        term *= j * j / ((n + 1.0) * (n + 2.0));
    }
    return sum;
}

}  // namespace detail

// Normalised law of the open-edge trace of P^A, over positive-edge masks.
inline std::vector<double> trace_law(const MaskSpace& s, const CycleSpace& c,
                                     const std::vector<int>& sources,
                                     bool truncated = false) {
    Mask p0 = source_parity_rep(s, c, sources);
    std::vector<double> odd(s.np), evp(s.np);
    for (int i = 0; i < s.np; ++i) {
        odd[i] = detail::odd_weight(s.coupling[i], truncated);
        evp[i] = detail::even_weight(s.coupling[i], truncated);
    }
    // W(tau) = prod_{e in tau} evp_e * sum_{p in coset, p <= tau} prod odd/evp
    std::vector<double> f((std::size_t)1 << s.np, 0.0);
    c.for_each_coset(p0, [&](Mask p) {
        double w = 1.0;
        for (int i = 0; i < s.np; ++i)
            if (p >> i & 1) w *= odd[i] / evp[i];
        f[p] += w;
    });
    detail::zeta_transform(f, s.np);
    double z = 0.0;
    for (std::size_t m = 0; m < f.size(); ++m) {
        double w = 1.0;
        for (int i = 0; i < s.np; ++i)
            if (m >> i & 1) w *= evp[i];
        f[m] *= w;
        z += f[m];
    }
    if (!(z > 0.0)) throw zero_measure_error("trace law has zero total mass");
    for (auto& p : f) p /= z;
    return f;
}

inline double current_trace_probability(const GhostGraph& g, const std::vector<int>& sources,
                                        const std::function<bool(const BondConfig&)>& event,
                                        const Caps& caps = {}) {
    MaskSpace s = MaskSpace::build(g, caps);
    CycleSpace c = CycleSpace::build(s);
    std::vector<double> law = trace_law(s, c, sources);
    double p = 0.0;
    for (Mask m = 0; m < (Mask)law.size(); ++m)
        if (law[m] > 0.0 && event(s.to_bond(m))) p += law[m];
    return p;
}

// P^{xy, empty}(x not connected to ghost in the union of the two traces).
inline double double_current_disconnection(const GhostGraph& g, int x, int y,
                                           const Caps& caps = {}) {
    MaskSpace s = MaskSpace::build(g, caps);
    CycleSpace c = CycleSpace::build(s);
    std::vector<double> pxy = trace_law(s, c, {x, y});
    std::vector<double> pem = trace_law(s, c, {});
    // distribution of the union of two independent traces via OR-convolution
    detail::zeta_transform(pxy, s.np);
    detail::zeta_transform(pem, s.np);
    for (std::size_t m = 0; m < pxy.size(); ++m) pxy[m] *= pem[m];
    detail::mobius_transform(pxy, s.np);
    double p = 0.0;
    for (Mask m = 0; m < (Mask)pxy.size(); ++m)
        if (pxy[m] != 0.0 && !(ghost_reach(s, m) >> x & 1)) p += pxy[m];
    return p;
}

// ---------------------------------------------------------------------------
// Identity verification

enum class Identity { ES, SWITCHING, UEG, SECH, GHS_MONOTONE, FINITE_ENERGY, PARITY };

inline const char* identity_name(Identity id) {
    switch (id) {
        case Identity::ES: return "ES";
        case Identity::SWITCHING: return "SWITCHING";
        case Identity::UEG: return "UEG";
        case Identity::SECH: return "SECH";
        case Identity::GHS_MONOTONE: return "GHS-MONOTONE";
        case Identity::FINITE_ENERGY: return "FINITE-ENERGY";
        case Identity::PARITY: return "PARITY";
    }
    return "?";
}

inline GhostGraph with_field(const GhostGraph& g, double h) {
    std::vector<std::pair<long, long>> cells;
    for (int v = 0; v < g.vertex_count(); ++v)
        cells.emplace_back(g.grid_x(v), g.grid_y(v));
    return GhostGraph::from_cells(cells, g.spacing(), h, g.domain());
}

namespace detail {

inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    double tv = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
    return 0.5 * tv;
}

inline double identity_es(const GhostGraph& g, const Caps& caps) {
    MaskSpace s = MaskSpace::build(g, caps);
    QuotientMap q = quotient_by_boundary(g, BoundaryCondition::free_bc(g));
    std::vector<double> w = rc_weights(s, q);
    const int n = g.vertex_count();
    std::vector<std::vector<double>> conn(n, std::vector<double>(n, 0.0));
    double z = 0.0;
    for (Mask m = 0; m < (Mask)w.size(); ++m) {
        z += w[m];
        UnionFind uf(g.total_vertices());
        for (int i = 0; i < s.np; ++i)
            if (m >> i & 1) uf.unite(s.eu[i], s.ev[i]);
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (uf.connected(a, b)) conn[a][b] += w[m];
    }
    SpinMoments sm = spin_moments(g, caps);
    double dev = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            dev = std::max(dev, std::abs(sm.two[a][b] - conn[a][b] / z));
    return dev;
}

inline double identity_switching(const GhostGraph& g, const Caps& caps) {
    SpinMoments sm = spin_moments(g, caps);
    const int n = g.vertex_count();
    double dev = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            double cov = sm.two[a][b] - sm.one[a] * sm.one[b];
            double disc = double_current_disconnection(g, a, b, caps);
            dev = std::max(dev, std::abs(cov - sm.two[a][b] * disc));
        }
    return dev;
}

inline double identity_ueg(const GhostGraph& g, const Caps& caps) {
    MaskSpace s = MaskSpace::build(g, caps);
    CycleSpace c = CycleSpace::build(s);
    if ((int)c.basis.size() > caps.max_cycle_dim)
        throw capacity_error("cycle-space dimension exceeds cap");
    QuotientMap q = quotient_by_boundary(g, BoundaryCondition::free_bc(g));
    std::vector<double> w = rc_weights(s, q);
    double z = 0.0;
    for (double x : w) z += x;
    for (auto& x : w) x /= z;
    // cyclomatic number of each open subgraph
    const int nv = g.total_vertices();
    std::vector<std::uint8_t> cyc((std::size_t)1 << s.np);
    for (Mask m = 0; m < (Mask)cyc.size(); ++m) {
        int kappa = mask_components(s, m, nullptr, 0);
        cyc[m] = (std::uint8_t)(__builtin_popcount(m) - nv + kappa);
    }
    // mixture over omega of the uniform even subgraph law
    std::vector<double> mix((std::size_t)1 << s.np, 0.0);
    c.for_each_coset(0, [&](Mask f) {
        Mask comp = (Mask)(((std::size_t(1) << s.np) - 1) ^ f);
        double acc = 0.0;
        for (Mask sub = comp;; sub = (sub - 1) & comp) {
            Mask omega = f | sub;
            acc += w[omega] * std::ldexp(1.0, -(int)cyc[omega]);
            if (sub == 0) break;
        }
        mix[f] += acc;
    });
    return total_variation(mix, loop_law(s, c));
}

inline double identity_sech(const GhostGraph& g, const Caps& caps) {
    MaskSpace s = MaskSpace::build(g, caps);
    CycleSpace c = CycleSpace::build(s);
    if ((int)c.basis.size() > caps.max_cycle_dim)
        throw capacity_error("cycle-space dimension exceeds cap");
    std::vector<double> ll = loop_law(s, c);
    std::vector<double> add(s.np), keep(s.np);
    for (int i = 0; i < s.np; ++i) {
        add[i] = 1.0 - 1.0 / std::cosh(s.coupling[i]);
        keep[i] = 1.0 - add[i];
    }
    std::vector<double> mix((std::size_t)1 << s.np, 0.0);
    c.for_each_coset(0, [&](Mask f) {
        if (ll[f] == 0.0 && f != 0) return;
        Mask comp = (Mask)(((std::size_t(1) << s.np) - 1) ^ f);
        for (Mask sub = comp;; sub = (sub - 1) & comp) {
            double w = ll[f];
            for (int i = 0; i < s.np; ++i)
                if (comp >> i & 1) w *= (sub >> i & 1) ? add[i] : keep[i];
            mix[f | sub] += w;
            if (sub == 0) break;
        }
    });
    return total_variation(mix, trace_law(s, c, {}));
}

inline double identity_ghs(const GhostGraph& g, const Caps& caps) {
    const double step = 0.05;
    const int n = g.vertex_count();
    double worst = -1e300;
    std::vector<std::vector<double>> prev;
    for (int k = 0; k <= 20; ++k) {
        GhostGraph gh = with_field(g, k * step);
        SpinMoments sm = spin_moments(gh, caps);
        std::vector<std::vector<double>> cov(n, std::vector<double>(n, 0.0));
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                cov[a][b] = sm.two[a][b] - sm.one[a] * sm.one[b];
        if (k > 0)
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b)
                    worst = std::max(worst, (cov[a][b] - prev[a][b]) / step);
        prev = std::move(cov);
    }
    return std::max(worst, 0.0);
}

inline double finite_energy_violation(const GhostGraph& g, const BoundaryCondition& bc,
                                      const Caps& caps) {
    MaskSpace s = MaskSpace::build(g, caps);
    QuotientMap q = quotient_by_boundary(g, bc);
    std::vector<double> w = rc_weights(s, q);
    double worst = 0.0;
    for (int i = 0; i < s.np; ++i) {
        if (g.edge(s.edge_ids[i]).internal) continue;
        double p = 1.0 - std::exp(-2.0 * s.coupling[i]);
        for (Mask rest = 0; rest < (Mask)w.size(); ++rest) {
            if (rest >> i & 1) continue;
            double w0 = w[rest], w1 = w[rest | (Mask(1) << i)];
            double cond = w1 / (w0 + w1);
            worst = std::max(worst, std::max(cond - p, p / 2.0 - cond));
        }
    }
    return worst;
}

inline double identity_parity(const GhostGraph& g, const Caps& caps) {
    MaskSpace s = MaskSpace::build(g, caps);
    CycleSpace c = CycleSpace::build(s);
    double dev = 0.0;
    auto compare = [&](const std::vector<int>& src) {
        std::vector<double> a = trace_law(s, c, src, false);
        std::vector<double> b = trace_law(s, c, src, true);
        for (std::size_t m = 0; m < a.size(); ++m)
            dev = std::max(dev, std::abs(a[m] - b[m]));
    };
    compare({});
    const int n = g.vertex_count();
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) compare({a, b});
    return dev;
}

}  // namespace detail

// Maximum absolute deviation of the requested identity on g. Zero means the
// identity holds exactly (up to roundoff).
inline double verify_identity(const GhostGraph& g, Identity which, const Caps& caps = {}) {
    switch (which) {
        case Identity::ES: return detail::identity_es(g, caps);
        case Identity::SWITCHING: return detail::identity_switching(g, caps);
        case Identity::UEG: return detail::identity_ueg(g, caps);
        case Identity::SECH: return detail::identity_sech(g, caps);
        case Identity::GHS_MONOTONE: return detail::identity_ghs(g, caps);
        case Identity::FINITE_ENERGY: {
            double a = detail::finite_energy_violation(g, BoundaryCondition::free_bc(g), caps);
            double b = detail::finite_energy_violation(g, BoundaryCondition::wired_bc(g), caps);
            return std::max(a, b);
        }
        case Identity::PARITY: return detail::identity_parity(g, caps);
    }
    throw std::invalid_argument("unknown identity");
}

}  // namespace ghostlat::exact
