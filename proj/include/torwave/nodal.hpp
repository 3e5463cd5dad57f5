#pragma once

// Nodal domains and nodal length of a sampled field.
//
// Components of {v > 0} and {v < 0} are labeled under 4-connectivity with
// union-find; grid samples that are exactly zero join the positive phase.
// A 2x2 plaquette whose corners alternate in sign (+-/-+) leaves both
// diagonals disconnected under plain 4-connectivity; it is resolved by the
// sign of the bilinear interpolant at the cell center (the corner average):
// a positive center bridges the positive diagonal, a negative one the
// negative diagonal, and an exactly zero center bridges neither (the zero
// set crosses itself there). Torus grids wrap both axes.
//
// Nodal length uses marching squares with linear interpolation along edges,
// resolving the two ambiguous cell configurations with the same center rule.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "torwave/errors.hpp"
#include "torwave/grid.hpp"

namespace torwave {

struct NodalReport {
    long long count = 0;             // all components (both signs)
    long long count_in_box = 0;      // box topology: components off the boundary ring
    long long boundary_touching = 0; // box topology: the rest
    double length = 0.0;             // filled by nodal_length-aware callers
    int small_component_warnings = 0;
};

namespace detail {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<std::uint32_t>(i);
    }
    std::uint32_t find(std::uint32_t v) {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]]; // path halving
            v = parent_[v];
        }
        return v;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) parent_[b] = a;
        else parent_[a] = b;
    }

private:
    std::vector<std::uint32_t> parent_;
};

inline bool positive_phase(double v) { return v >= 0.0; } // exact zeros -> positive

// 0 bridges neither diagonal.
inline int saddle_center_sign(double a, double b, double c, double d) {
    const double center = (a + b + c + d) * 0.25;
    if (center > 0.0) return 1;
    if (center < 0.0) return -1;
    return 0;
}

} // namespace detail

// Count nodal domains of the sampled field. For box grids the components
// that touch the outermost sample ring are reported separately; the open-box
// count keeps only the fully interior ones. min_area (same units as
// spacing^2) flags suspiciously small components for the resolution screen.
inline NodalReport count_components(const FieldGrid& grid, double min_area = 0.0) {
    grid.validate();
    const int n = grid.n;
    const bool torus = grid.topology == GridTopology::torus;
    const std::size_t cells = static_cast<std::size_t>(n) * n;
    for (double v : grid.values)
        if (!std::isfinite(v))
            throw std::invalid_argument("count_components: non-finite grid value");

    detail::UnionFind uf(cells);
    auto id = [n](int i, int j) {
        return static_cast<std::uint32_t>(static_cast<std::size_t>(i) * n + j);
    };
    auto pos = [&grid](int i, int j) { return detail::positive_phase(grid.at(i, j)); };

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const bool p = pos(i, j);
            if (i + 1 < n) {
                if (pos(i + 1, j) == p) uf.unite(id(i, j), id(i + 1, j));
            } else if (torus) {
                if (pos(0, j) == p) uf.unite(id(i, j), id(0, j));
            }
            if (j + 1 < n) {
                if (pos(i, j + 1) == p) uf.unite(id(i, j), id(i, j + 1));
            } else if (torus) {
                if (pos(i, 0) == p) uf.unite(id(i, j), id(i, 0));
            }
        }
    }
    // Saddle plaquettes.
    const int ilim = torus ? n : n - 1;
    for (int i = 0; i < ilim; ++i) {
        for (int j = 0; j < ilim; ++j) {
            const int i1 = (i + 1) % n, j1 = (j + 1) % n;
            const double a = grid.at(i, j), b = grid.at(i1, j);
            const double c = grid.at(i, j1), d = grid.at(i1, j1);
            const bool pa = detail::positive_phase(a), pb = detail::positive_phase(b);
            const bool pc = detail::positive_phase(c), pd = detail::positive_phase(d);
            if (pa != pd || pb != pc || pa == pb) continue;
            const int cs = detail::saddle_center_sign(a, b, c, d);
            if (cs > 0) {
                if (pa) uf.unite(id(i, j), id(i1, j1));
                else uf.unite(id(i1, j), id(i, j1));
            } else if (cs < 0) {
                if (!pa) uf.unite(id(i, j), id(i1, j1));
                else uf.unite(id(i1, j), id(i, j1));
            }
        }
    }

    std::vector<std::uint32_t> root(cells);
    for (std::size_t v = 0; v < cells; ++v) root[v] = uf.find(static_cast<std::uint32_t>(v));

    // Component tallies: cell counts and boundary contact.
    std::vector<std::uint32_t> comp_cells(cells, 0);
    std::vector<std::uint8_t> touches(cells, 0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const std::uint32_t r = root[id(i, j)];
            ++comp_cells[r];
            if (!torus && (i == 0 || j == 0 || i == n - 1 || j == n - 1)) touches[r] = 1;
        }
    }
    NodalReport report;
    const double cell_area = grid.spacing * grid.spacing;
    for (std::size_t v = 0; v < cells; ++v) {
        if (root[v] != v) continue;
        ++report.count;
        if (!torus) {
            if (touches[v]) ++report.boundary_touching;
            else ++report.count_in_box;
        }
        if (min_area > 0.0 && comp_cells[v] * cell_area < min_area)
            ++report.small_component_warnings;
    }
    return report;
}

struct Segment {
    double x1, y1, x2, y2; // grid sample units
    double length() const { return std::hypot(x2 - x1, y2 - y1); }
};

// Marching squares on the zero level, linear interpolation along edges.
inline std::vector<Segment> marching_segments(const FieldGrid& grid) {
    grid.validate();
    const int n = grid.n;
    const bool torus = grid.topology == GridTopology::torus;
    std::vector<Segment> segs;
    const int lim = torus ? n : n - 1;
    auto cut = [](double u, double v) { return u / (u - v); }; // zero crossing in [0,1]
    for (int i = 0; i < lim; ++i) {
        for (int j = 0; j < lim; ++j) {
            const int i1 = (i + 1) % n, j1 = (j + 1) % n;
            const double a = grid.at(i, j);   // (i, j)
            const double b = grid.at(i1, j);  // (i+1, j)
            const double c = grid.at(i, j1);  // (i, j+1)
            const double d = grid.at(i1, j1); // (i+1, j+1)
            const bool pa = detail::positive_phase(a), pb = detail::positive_phase(b);
            const bool pc = detail::positive_phase(c), pd = detail::positive_phase(d);
            const int config = (pa ? 1 : 0) | (pb ? 2 : 0) | (pc ? 4 : 0) | (pd ? 8 : 0);
            if (config == 0 || config == 15) continue;
            const double x = i, y = j;
            // Edge crossing coordinates (valid only when the edge changes phase).
            const double ex_b = x + (pa != pb ? cut(a, b) : 0);   // bottom  (a-b), y = j
            const double ex_t = x + (pc != pd ? cut(c, d) : 0);   // top     (c-d), y = j+1
            const double ey_l = y + (pa != pc ? cut(a, c) : 0);   // left    (a-c), x = i
            const double ey_r = y + (pb != pd ? cut(b, d) : 0);   // right   (b-d), x = i+1
            auto emit = [&](double px1, double py1, double px2, double py2) {
                segs.push_back({px1, py1, px2, py2});
            };
            switch (config) {
                case 1: case 14: emit(ex_b, y, x, ey_l); break;          // corner a
                case 2: case 13: emit(ex_b, y, x + 1, ey_r); break;      // corner b
                case 4: case 11: emit(x, ey_l, ex_t, y + 1); break;      // corner c
                case 8: case 7:  emit(x + 1, ey_r, ex_t, y + 1); break;  // corner d
                case 3: case 12: emit(x, ey_l, x + 1, ey_r); break;      // horizontal pair
                case 5: case 10: emit(ex_b, y, ex_t, y + 1); break;      // vertical pair
                case 6: case 9: {
                    // Saddle: a/d vs b/c alternate.
                    const int cs = detail::saddle_center_sign(a, b, c, d);
                    const bool diag_ad_connected = (config == 9 && cs > 0) ||
                                                   (config == 6 && cs < 0);
                    if (cs == 0) {
                        // Zero set crosses itself at the cell center.
                        const double cx = x + 0.5, cy = y + 0.5;
                        emit(ex_b, y, cx, cy);
                        emit(ex_t, y + 1, cx, cy);
                        emit(x, ey_l, cx, cy);
                        emit(x + 1, ey_r, cx, cy);
                    } else if (diag_ad_connected) {
                        // Contours wrap around corners b and c.
                        emit(ex_b, y, x + 1, ey_r);
                        emit(x, ey_l, ex_t, y + 1);
                    } else {
                        // Contours wrap around corners a and d.
                        emit(ex_b, y, x, ey_l);
                        emit(x + 1, ey_r, ex_t, y + 1);
                    }
                    break;
                }
                default: break;
            }
        }
    }
    return segs;
}

// Total zero-set length in physical units.
inline double nodal_length(const FieldGrid& grid) {
    double total = 0.0;
    for (const auto& s : marching_segments(grid)) total += s.length();
    return total * grid.spacing;
}

// Count components fully inside the open box around `center` with the given
// side; `resolution` samples per side must give at least 4 samples per
// wavelength of a field with wavenumber parameter lambda (wavelength
// 1/lambda). The evaluator is an arbitrary (x, y) -> value callable.
template <typename F>
NodalReport count_in_box(F&& evaluator, std::array<double, 2> center, double side,
                         int resolution, double lambda) {
    if (!(side > 0)) throw std::invalid_argument("count_in_box: side must be positive");
    if (resolution < 2)
        throw std::invalid_argument("count_in_box: resolution too small");
    const double samples_per_wavelength =
        static_cast<double>(resolution - 1) / (side * lambda);
    if (samples_per_wavelength < 4.0)
        throw ResolutionError("count_in_box: fewer than 4 samples per wavelength");
    FieldGrid g = sample_box_grid(evaluator, center[0], center[1], side, resolution);
    NodalReport r = count_components(g);
    r.length = nodal_length(g);
    return r;
}

struct LadderStep {
    int spw = 0;  // samples per wavelength
    int n = 0;    // grid side
    long long count = 0;
    double length = 0.0;
};

struct RefineOutcome {
    NodalReport report;
    bool stable = false;
    std::vector<LadderStep> ladder;
};

// Doubles the sampling rate until two consecutive rungs agree: component
// counts exactly equal, or (when tol > 0) nodal length within tol relative.
// Flagged unstable past max_spw, returning the finest rung. grid_at(N) must
// return the field sampled at N points per period (or per box side).
inline RefineOutcome refine_until_stable(const std::function<FieldGrid(int)>& grid_at,
                                         double lambda, int m0, double tol,
                                         int max_spw = 64, double min_area = 0.0) {
    if (m0 < 4)
        throw std::invalid_argument("refine_until_stable: need at least 4 samples per wavelength");
    if (!(lambda > 0))
        throw std::invalid_argument("refine_until_stable: lambda must be positive");
    RefineOutcome out;
    bool have_prev = false;
    long long prev_count = 0;
    double prev_length = 0.0;
    for (int m = m0; m <= max_spw; m *= 2) {
        const int n = static_cast<int>(std::ceil(m * lambda));
        FieldGrid g = grid_at(n);
        NodalReport r = count_components(g, min_area);
        r.length = nodal_length(g);
        out.ladder.push_back({m, n, r.count, r.length});
        out.report = r;
        if (have_prev) {
            const bool counts_agree = r.count == prev_count;
            const bool length_agrees =
                tol > 0.0 &&
                std::abs(r.length - prev_length) <= tol * std::max(1e-300, prev_length);
            if (counts_agree || length_agrees) {
                out.stable = true;
                return out;
            }
        }
        prev_count = r.count;
        prev_length = r.length;
        have_prev = true;
    }
    out.stable = false; // ladder exhausted without two agreeing rungs
    return out;
}

// 4 pi N / E; zero count gives zero.
inline double pleijel_ratio(double energy, long long count) {
    if (!(energy > 0)) throw std::invalid_argument("pleijel_ratio: E must be positive");
    return 4.0 * std::numbers::pi * static_cast<double>(count) / energy;
}

// Faber-Krahn floor for the area of a nodal domain of a toral eigenfunction,
// with the safety factor 1/2 used by the resolution screen.
inline double nodal_area_floor(double energy) {
    const double j0 = 2.4048255576957728; // first zero of J_0
    return 0.5 * j0 * j0 /
           (16.0 * std::numbers::pi * std::numbers::pi * std::numbers::pi * energy);
}

} // namespace torwave
