#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace torwave {

enum class GridTopology { torus, box };

// Real field values sampled on an n x n grid. values[i * n + j] is the
// sample at (x1, x2) = (i, j) * spacing relative to the grid origin; on the
// torus spacing = 1/n and both axes wrap.
struct FieldGrid {
    int n = 0;
    GridTopology topology = GridTopology::torus;
    double spacing = 0.0;
    std::vector<double> values;

    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * n + j]; }
    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * n + j]; }

    void validate() const {
        if (n < 2 || values.size() != static_cast<std::size_t>(n) * n)
            throw std::invalid_argument("FieldGrid: inconsistent dimensions");
        if (!(spacing > 0))
            throw std::invalid_argument("FieldGrid: spacing must be positive");
    }
};

// Pointwise sampler on the unit torus, f evaluated at (i/n, j/n).
template <typename F>
FieldGrid sample_torus_grid(F&& f, int n) {
    FieldGrid g;
    g.n = n;
    g.topology = GridTopology::torus;
    g.spacing = 1.0 / n;
    g.values.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g.at(i, j) = f(static_cast<double>(i) / n, static_cast<double>(j) / n);
    return g;
}

// Pointwise sampler on the square box [c1 - side/2, c1 + side/2] x same in y,
// m samples per side including both ends.
template <typename F>
FieldGrid sample_box_grid(F&& f, double c1, double c2, double side, int m) {
    if (m < 2) throw std::invalid_argument("sample_box_grid: need at least 2 samples per side");
    FieldGrid g;
    g.n = m;
    g.topology = GridTopology::box;
    g.spacing = side / (m - 1);
    g.values.resize(static_cast<std::size_t>(m) * m);
    const double x0 = c1 - side / 2, y0 = c2 - side / 2;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            g.at(i, j) = f(x0 + i * g.spacing, y0 + j * g.spacing);
    return g;
}

} // namespace torwave
