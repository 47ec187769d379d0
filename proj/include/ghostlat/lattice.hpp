#pragma once
// Ghost-augmented lattice graphs: the finite subgraph of a*Z^2 inside a
// rectangle, plus a ghost vertex wired to every lattice site.  All other
// modules consume these graphs read-only.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ghostlat {

inline constexpr double kBetaC = 0.44068679350977151262;  // ln(1+sqrt(2))/2
inline constexpr double kFieldExponent = 15.0 / 8.0;

inline double critical_coupling() { return 0.5 * std::log(1.0 + std::sqrt(2.0)); }

// Axis-aligned rectangle; sides may be open (exclusive) to encode the
// half-open Q1/Q8 boxes.
struct Rect {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    bool open_x0 = false, open_y0 = false, open_x1 = false, open_y1 = false;

    Rect() = default;
    Rect(double ax0, double ay0, double ax1, double ay1,
         bool ox0 = false, bool oy0 = false, bool ox1 = false, bool oy1 = false)
        : x0(ax0), y0(ay0), x1(ax1), y1(ay1),
          open_x0(ox0), open_y0(oy0), open_x1(ox1), open_y1(oy1) {}

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }

    bool contains(double px, double py, double eps) const {
        bool lo_x = open_x0 ? (px > x0 + eps) : (px > x0 - eps);
        bool hi_x = open_x1 ? (px < x1 - eps) : (px < x1 + eps);
        bool lo_y = open_y0 ? (py > y0 + eps) : (py > y0 - eps);
        bool hi_y = open_y1 ? (py < y1 - eps) : (py < y1 + eps);
        return lo_x && hi_x && lo_y && hi_y;
    }
};

struct Edge {
    int u = 0, v = 0;       // vertex indices; external edges have v == ghost
    double coupling = 0.0;  // beta_c for internal, a^{15/8} h for external
    bool internal = true;
};

// A {closed,open} assignment over all edges of the ghost graph.
using BondConfig = std::vector<std::uint8_t>;

// Finite subgraph of a*Z^2 inside a rectangle plus the ghost vertex.
// Immutable after construction; vertex order is row-major (x fastest),
// ghost last, internal edges before external edges.
class GhostGraph {
public:
    static GhostGraph build(const Rect& domain, double spacing, double field) {
        if (!(spacing > 0.0 && spacing <= 1.0))
            throw std::invalid_argument("spacing must lie in (0,1]");
        if (!(field >= 0.0)) throw std::invalid_argument("field must be >= 0");
        const double eps = spacing * 1e-9;
        long ix0 = (long)std::ceil((domain.x0 - eps) / spacing);
        long ix1 = (long)std::floor((domain.x1 + eps) / spacing);
        long iy0 = (long)std::ceil((domain.y0 - eps) / spacing);
        long iy1 = (long)std::floor((domain.y1 + eps) / spacing);
        if (ix1 < ix0 || iy1 < iy0)
            throw std::invalid_argument("domain contains no lattice vertex");
        std::vector<std::pair<long, long>> cells;
        for (long iy = iy0; iy <= iy1; ++iy)
            for (long ix = ix0; ix <= ix1; ++ix) cells.emplace_back(ix, iy);
        return from_cells(cells, spacing, field, domain);
    }

    // Arbitrary vertex set (grid indices); used for the small-graph corpus.
    static GhostGraph from_cells(std::vector<std::pair<long, long>> cells,
                                 double spacing, double field,
                                 std::optional<Rect> domain = std::nullopt) {
        if (cells.empty()) throw std::invalid_argument("empty vertex set");
        GhostGraph g;
        g.a_ = spacing;
        g.h_ = field;
        std::sort(cells.begin(), cells.end(), [](auto& p, auto& q) {
            return p.second != q.second ? p.second < q.second : p.first < q.first;
        });
        cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
        g.cells_ = std::move(cells);
        if (domain) {
            g.domain_ = *domain;
        } else {
            long x0 = g.cells_[0].first, x1 = x0, y0 = g.cells_[0].second, y1 = y0;
            for (auto& [ix, iy] : g.cells_) {
                x0 = std::min(x0, ix); x1 = std::max(x1, ix);
                y0 = std::min(y0, iy); y1 = std::max(y1, iy);
            }
            g.domain_ = Rect(x0 * spacing, y0 * spacing, x1 * spacing, y1 * spacing);
        }
        std::map<std::pair<long, long>, int> index;
        for (int i = 0; i < (int)g.cells_.size(); ++i) index[g.cells_[i]] = i;
        const double ext = std::pow(spacing, kFieldExponent) * field;
        for (int i = 0; i < (int)g.cells_.size(); ++i) {
            auto [ix, iy] = g.cells_[i];
            auto right = index.find({ix + 1, iy});
            if (right != index.end())
                g.edges_.push_back({i, right->second, kBetaC, true});
            auto up = index.find({ix, iy + 1});
            if (up != index.end())
                g.edges_.push_back({i, up->second, kBetaC, true});
        }
        g.internal_count_ = (int)g.edges_.size();
        const int ghost = (int)g.cells_.size();
        for (int i = 0; i < ghost; ++i) g.edges_.push_back({i, ghost, ext, false});
        g.boundary_.assign(ghost, false);
        const long d[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (int i = 0; i < ghost; ++i) {
            auto [ix, iy] = g.cells_[i];
            for (auto& dd : d)
                if (!index.count({ix + dd[0], iy + dd[1]})) { g.boundary_[i] = true; break; }
        }
        g.build_adjacency();
        return g;
    }

    double spacing() const { return a_; }
    double field() const { return h_; }
    const Rect& domain() const { return domain_; }
    int vertex_count() const { return (int)cells_.size(); }      // lattice only
    int ghost() const { return (int)cells_.size(); }
    int total_vertices() const { return (int)cells_.size() + 1; }
    int internal_edge_count() const { return internal_count_; }
    int edge_count() const { return (int)edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_[e]; }
    double external_coupling() const { return std::pow(a_, kFieldExponent) * h_; }
    bool on_boundary(int v) const { return boundary_[v]; }

    double x(int v) const { return cells_[v].first * a_; }
    double y(int v) const { return cells_[v].second * a_; }
    long grid_x(int v) const { return cells_[v].first; }
    long grid_y(int v) const { return cells_[v].second; }

    std::optional<int> vertex_at(long ix, long iy) const {
        auto it = std::lower_bound(cells_.begin(), cells_.end(), std::make_pair(ix, iy),
                                   [](auto& p, auto& q) {
                                       return p.second != q.second ? p.second < q.second
                                                                  : p.first < q.first;
                                   });
        if (it == cells_.end() || *it != std::make_pair(ix, iy)) return std::nullopt;
        return (int)(it - cells_.begin());
    }

    // Nearest lattice vertex to a continuum point.
    int vertex_near(double px, double py) const {
        auto v = vertex_at(std::lround(px / a_), std::lround(py / a_));
        if (!v) throw std::invalid_argument("no lattice vertex at requested point");
        return *v;
    }

    struct Neighbor { int edge; int other; };
    const std::vector<Neighbor>& incident(int v) const { return adjacency_[v]; }

    std::vector<int> boundary_vertices() const {
        std::vector<int> out;
        for (int i = 0; i < vertex_count(); ++i)
            if (boundary_[i]) out.push_back(i);
        return out;
    }

    // Plain-text adjacency format used by golden files and `verify --corpus`.
    std::string serialize() const {
        std::ostringstream os;
        os.precision(17);
        os << "ghostgraph 1\n";
        os << "a " << a_ << "\nh " << h_ << "\n";
        os << "domain " << domain_.x0 << " " << domain_.y0 << " "
           << domain_.x1 << " " << domain_.y1 << "\n";
        os << "vertices " << cells_.size() << "\n";
        for (auto& [ix, iy] : cells_) os << ix << " " << iy << "\n";
        os << "edges " << edges_.size() << "\n";
        for (auto& e : edges_)
            os << e.u << " " << e.v << " " << e.coupling << " "
               << (e.internal ? 1 : 0) << "\n";
        return os.str();
    }

    static GhostGraph parse(const std::string& text) {
        std::istringstream is(text);
        std::string tag;
        int version = 0;
        is >> tag >> version;
        if (tag != "ghostgraph" || version != 1)
            throw std::invalid_argument("not a ghostgraph file");
        double a = 0, h = 0;
        Rect dom;
        std::size_t nv = 0, ne = 0;
        is >> tag >> a >> tag >> h;
        is >> tag >> dom.x0 >> dom.y0 >> dom.x1 >> dom.y1;
        is >> tag >> nv;
        std::vector<std::pair<long, long>> cells(nv);
        for (auto& c : cells) is >> c.first >> c.second;
        is >> tag >> ne;
        std::vector<Edge> edges(ne);
        for (auto& e : edges) {
            int internal = 0;
            is >> e.u >> e.v >> e.coupling >> internal;
            e.internal = internal != 0;
        }
        if (!is) throw std::invalid_argument("truncated ghostgraph file");
        GhostGraph g = from_cells(cells, a, h, dom);
        if (g.edges_.size() != edges.size())
            throw std::invalid_argument("edge list does not match vertex set");
        g.edges_ = std::move(edges);  // keep file couplings; validate() checks them
        g.build_adjacency();
        return g;
    }

    // Structural invariants: couplings, external-edge count, edge endpoints.
    // Returns an empty string when valid, else a diagnostic.
    std::string validate() const {
        const double ext = external_coupling();
        int next = 0;
        std::vector<int> ext_per_vertex(vertex_count(), 0);
        for (auto& e : edges_) {
            if (e.internal) {
                if (std::abs(e.coupling - kBetaC) > 1e-12)
                    return "internal coupling differs from beta_c";
                long dx = std::labs(grid_x(e.u) - grid_x(e.v));
                long dy = std::labs(grid_y(e.u) - grid_y(e.v));
                if (dx + dy != 1) return "internal edge is not nearest-neighbor";
            } else {
                if (std::abs(e.coupling - ext) > 1e-12)
                    return "external coupling differs from a^{15/8} h";
                if (e.v != ghost()) return "external edge not incident to ghost";
                ++ext_per_vertex[e.u];
                ++next;
            }
        }
        if (next != vertex_count()) return "external edge count != vertex count";
        for (int c : ext_per_vertex)
            if (c != 1) return "vertex without exactly one external edge";
        return {};
    }

    std::uint64_t hash() const {
        std::uint64_t x = 1469598103934665603ull;
        for (char c : serialize()) {
            x ^= (unsigned char)c;
            x *= 1099511628211ull;
        }
        return x;
    }

private:
    void build_adjacency() {
        adjacency_.assign(total_vertices(), {});
        for (int e = 0; e < (int)edges_.size(); ++e) {
            adjacency_[edges_[e].u].push_back({e, edges_[e].v});
            adjacency_[edges_[e].v].push_back({e, edges_[e].u});
        }
    }

    double a_ = 1.0, h_ = 0.0;
    Rect domain_;
    std::vector<std::pair<long, long>> cells_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Neighbor>> adjacency_;
    std::vector<bool> boundary_;
    int internal_count_ = 0;
};

// Partition of the boundary-plus-ghost vertex set.
struct BoundaryCondition {
    std::vector<std::vector<int>> blocks;

    static BoundaryCondition free_bc(const GhostGraph& g) {
        BoundaryCondition bc;
        for (int v : g.boundary_vertices()) bc.blocks.push_back({v});
        bc.blocks.push_back({g.ghost()});
        return bc;
    }
    static BoundaryCondition wired_bc(const GhostGraph& g) {
        BoundaryCondition bc;
        std::vector<int> all = g.boundary_vertices();
        all.push_back(g.ghost());
        bc.blocks.push_back(std::move(all));
        return bc;
    }
    bool is_free(const GhostGraph& g) const {
        for (auto& b : blocks)
            if (b.size() != 1) return false;
        return (int)blocks.size() == (int)g.boundary_vertices().size() + 1;
    }
    bool is_wired(const GhostGraph&) const { return blocks.size() == 1; }
};

// Vertex -> representative map after identifying each boundary block.
struct QuotientMap {
    std::vector<int> rep;    // size = total_vertices()
    int quotient_vertices = 0;
};

inline QuotientMap quotient_by_boundary(const GhostGraph& g, const BoundaryCondition& bc) {
    std::vector<bool> is_bdry(g.total_vertices(), false);
    for (int v : g.boundary_vertices()) is_bdry[v] = true;
    is_bdry[g.ghost()] = true;
    std::vector<int> block_of(g.total_vertices(), -1);
    for (int b = 0; b < (int)bc.blocks.size(); ++b)
        for (int v : bc.blocks[b]) {
            if (v < 0 || v >= g.total_vertices() || !is_bdry[v])
                throw std::invalid_argument("boundary condition names a non-boundary vertex");
            if (block_of[v] != -1)
                throw std::invalid_argument("boundary blocks are not disjoint");
            block_of[v] = b;
        }
    for (int v = 0; v < g.total_vertices(); ++v)
        if (is_bdry[v] && block_of[v] == -1)
            throw std::invalid_argument("boundary condition does not cover the boundary");
    QuotientMap q;
    q.rep.assign(g.total_vertices(), -1);
    int next = 0;
    std::vector<int> block_rep(bc.blocks.size(), -1);
    for (int v = 0; v < g.total_vertices(); ++v) {
        if (block_of[v] >= 0) {
            if (block_rep[block_of[v]] == -1) block_rep[block_of[v]] = next++;
            q.rep[v] = block_rep[block_of[v]];
        } else {
            q.rep[v] = next++;
        }
    }
    q.quotient_vertices = next;
    return q;
}

// The reference T/R/S/Q1/Q8 geometry of the crossing events, placed by a
// translation plus a quarter-turn rotation.  `margin` is the gap between S
// and the sides of T; margin 1 is the reference picture.  A wider margin
// keeps every event relation intact but gives the annulus T\S a bounded
// aspect ratio, so dual circuits have observable probability.
class RectFrame {
public:
    RectFrame(double tx = 0, double ty = 0, int quarter_turns = 0, double margin = 1.0,
              double s_length = 8.0)
        : tx_(tx), ty_(ty), rot_(((quarter_turns % 4) + 4) % 4), m_(margin), len_(s_length) {
        if (!(margin > 0)) throw std::invalid_argument("frame margin must be positive");
        if (!(s_length >= 3)) throw std::invalid_argument("frame S length must be >= 3");
    }

    Rect T() const { return place(Rect(1 - m_, 1 - m_, 1 + len_ + m_, 2 + m_)); }
    Rect R() const { return place(Rect(2, 1 - m_, len_, 2 + m_)); }
    Rect S() const { return place(Rect(1, 1, 1 + len_, 2)); }
    Rect Q1() const { return place(Rect(1, 1, 2, 2, false, false, true, false)); }
    Rect Q8() const {
        return place(Rect(len_, 1, 1 + len_, 2, true, false, false, false));
    }

    double tx() const { return tx_; }
    double ty() const { return ty_; }
    int rotation() const { return rot_; }
    double margin() const { return m_; }
    double s_length() const { return len_; }

private:
    Rect place(Rect r) const {
        // rotate the corner points about the origin, then translate
        double xs[2] = {r.x0, r.x1}, ys[2] = {r.y0, r.y1};
        bool ox[2] = {r.open_x0, r.open_x1}, oy[2] = {r.open_y0, r.open_y1};
        for (int k = 0; k < rot_; ++k) {
            double nxs[2] = {-ys[1], -ys[0]};
            double nys[2] = {xs[0], xs[1]};
            bool nox[2] = {oy[1], oy[0]};
            bool noy[2] = {ox[0], ox[1]};
            std::copy(nxs, nxs + 2, xs);
            std::copy(nys, nys + 2, ys);
            std::copy(nox, nox + 2, ox);
            std::copy(noy, noy + 2, oy);
        }
        return Rect(xs[0] + tx_, ys[0] + ty_, xs[1] + tx_, ys[1] + ty_,
                    ox[0], oy[0], ox[1], oy[1]);
    }

    double tx_, ty_;
    int rot_;
    double m_ = 1.0;
    double len_ = 8.0;
};

// Plain union-find; deterministic smallest-index representatives on demand.
class UnionFind {
public:
    explicit UnionFind(int n) : parent_(n), rank_(n, 0), count_(n) {
        for (int i = 0; i < n; ++i) parent_[i] = i;
    }
    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    bool unite(int x, int y) {
        int px = find(x), py = find(y);
        if (px == py) return false;
        if (rank_[px] < rank_[py]) std::swap(px, py);
        parent_[py] = px;
        if (rank_[px] == rank_[py]) ++rank_[px];
        --count_;
        return true;
    }
    bool connected(int x, int y) { return find(x) == find(y); }
    int components() const { return count_; }

private:
    std::vector<int> parent_;
    std::vector<int> rank_;
    int count_;
};

// Number of connected components of the open subgraph after boundary
// identification; isolated vertices count.
inline int cluster_count(const GhostGraph& g, const BondConfig& omega, const QuotientMap& q) {
    UnionFind uf(q.quotient_vertices);
    for (int e = 0; e < g.edge_count(); ++e)
        if (omega[e]) uf.unite(q.rep[g.edge(e).u], q.rep[g.edge(e).v]);
    return uf.components();
}

}  // namespace ghostlat
