#pragma once
// Named small graphs used by the verification suite: tiny rectangles plus an
// L-shaped domain, each at configurable spacing and field.

#include <stdexcept>
#include <string>
#include <vector>

#include "ghostlat/lattice.hpp"

namespace ghostlat {

inline const std::vector<std::string>& corpus_names() {
    static const std::vector<std::string> names = {"1x2", "1x3", "2x2", "2x3", "L"};
    return names;
}

// Graph on a * Z^2 restricted to the named vertex footprint.  "WxH" means a
// W-by-H block of vertices; "L" is the union of a 3x2 and a 2x3 block
// sharing their lower-left 2x2 corner (8 vertices, 10 internal edges).
inline GhostGraph corpus_graph(const std::string& name, double spacing, double field) {
    std::vector<std::pair<long, long>> cells;
    auto block = [&](long w, long h) {
        for (long y = 0; y < h; ++y)
            for (long x = 0; x < w; ++x) cells.emplace_back(x, y);
    };
    if (name == "1x2") block(2, 1);
    else if (name == "1x3") block(3, 1);
    else if (name == "2x2") block(2, 2);
    else if (name == "2x3") block(3, 2);
    else if (name == "L") {
        block(3, 2);
        cells.emplace_back(0, 2);
        cells.emplace_back(1, 2);
    } else
        throw std::invalid_argument("unknown corpus graph: " + name);
    return GhostGraph::from_cells(cells, spacing, field);
}

}  // namespace ghostlat
