#pragma once

// Independent reference implementations used only by tests. These share the
// spec of their production counterparts but not the algorithms: discrepancy
// by quadratic enumeration of candidate arcs, component counting by
// breadth-first flood fill.

#include <cmath>
#include <deque>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "torwave/grid.hpp"

namespace oracles {

// Sample grid of cos(2 pi x) cos(2 pi y) built from a cosine table that
// carries the exact antisymmetries of the function (c[n/2 - i] = -c[i]
// bitwise). The degenerate saddle centers at the four zero-line crossings
// then cancel exactly, as they do for the function itself. n must be even;
// n = 2 (mod 4) keeps every sample off the zero set.
inline torwave::FieldGrid checkerboard_grid(int n) {
    const int half = n / 2;
    std::vector<double> c(n);
    for (int i = 0; 2 * i <= half; ++i)
        c[i] = std::cos(2.0 * std::numbers::pi * i / n);
    if (half % 2 == 0) c[half / 2] = 0.0; // cos(pi/2) exactly
    for (int i = 0; 2 * i <= half; ++i) c[half - i] = -c[i];
    for (int i = 1; i < half; ++i) c[n - i] = c[i];
    torwave::FieldGrid g;
    g.n = n;
    g.topology = torwave::GridTopology::torus;
    g.spacing = 1.0 / n;
    g.values.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g.at(i, j) = c[i] * c[j];
    return g;
}

// Quadratic brute force over candidate endpoints with explicit open/closed
// sides. Candidates are the atom positions plus the domain ends.
inline double brute_discrepancy(std::span<const double> angles) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double w = static_cast<double>(angles.size());
    const double mu = w / two_pi;
    std::vector<double> cand(angles.begin(), angles.end());
    cand.push_back(0.0);
    cand.push_back(two_pi);
    double best = 0.0;
    auto count_in = [&](double a, bool a_closed, double b, bool b_closed) {
        long long c = 0;
        for (double v : angles) {
            const bool left_ok = a_closed ? v >= a : v > a;
            const bool right_ok = b_closed ? v <= b : v < b;
            if (left_ok && right_ok) ++c;
        }
        return static_cast<double>(c);
    };
    for (double a : cand) {
        for (double b : cand) {
            if (a > b) continue;
            for (int ac = 0; ac < 2; ++ac)
                for (int bc = 0; bc < 2; ++bc) {
                    // a == b closed-closed is the limit of [a, b'] as b' -> a+
                    if (a == b && !(ac && bc)) continue;
                    const double dev =
                        (b - a) * mu - count_in(a, ac != 0, b, bc != 0);
                    best = std::max(best, std::abs(dev));
                }
        }
    }
    return best;
}

// Breadth-first flood fill with the same connectivity rules as the
// production union-find counter: 4-neighbors of equal sign (zeros positive),
// saddle plaquettes bridged along the diagonal matching the sign of the
// corner average, no bridge when the average is exactly zero.
inline long long bfs_count_components(const torwave::FieldGrid& grid) {
    const int n = grid.n;
    const bool torus = grid.topology == torwave::GridTopology::torus;
    auto pos = [&grid](int i, int j) { return grid.at(i, j) >= 0.0; };
    auto idx = [n](int i, int j) { return static_cast<std::size_t>(i) * n + j; };
    auto wrap = [n](int v) { return ((v % n) + n) % n; };

    // Diagonal step by (di, dj) in {-1, +1}^2 from (i, j); true when the
    // spanned plaquette is a saddle bridged along the move's diagonal.
    auto diagonal_ok = [&](int i, int j, int di, int dj) {
        int ci = di > 0 ? i : i - 1;
        int cj = dj > 0 ? j : j - 1;
        if (torus) {
            ci = wrap(ci);
            cj = wrap(cj);
        } else if (ci < 0 || cj < 0 || ci + 1 >= n || cj + 1 >= n) {
            return false;
        }
        const int ci1 = wrap(ci + 1), cj1 = wrap(cj + 1);
        const double a = grid.at(ci, cj), b = grid.at(ci1, cj);
        const double c = grid.at(ci, cj1), d = grid.at(ci1, cj1);
        const bool pa = a >= 0, pb = b >= 0, pc = c >= 0, pd = d >= 0;
        if (pa != pd || pb != pc || pa == pb) return false; // not a saddle
        const double center = 0.25 * (a + b + c + d);
        if (center == 0.0) return false; // exactly degenerate: no bridge
        const bool move_along_ad = di == dj;
        const bool ad_sign = pa; // sign of the a-d diagonal
        const bool bridged_positive = center > 0.0;
        // The bridge joins the diagonal whose sign matches the center.
        if (move_along_ad) return ad_sign == bridged_positive;
        return ad_sign != bridged_positive;
    };

    std::vector<char> visited(static_cast<std::size_t>(n) * n, 0);
    long long components = 0;
    std::deque<std::pair<int, int>> queue;
    for (int si = 0; si < n; ++si) {
        for (int sj = 0; sj < n; ++sj) {
            if (visited[idx(si, sj)]) continue;
            ++components;
            visited[idx(si, sj)] = 1;
            queue.push_back({si, sj});
            const bool phase = pos(si, sj);
            while (!queue.empty()) {
                auto [i, j] = queue.front();
                queue.pop_front();
                auto visit = [&](int i2, int j2) {
                    if (visited[idx(i2, j2)]) return;
                    if (pos(i2, j2) != phase) return;
                    visited[idx(i2, j2)] = 1;
                    queue.push_back({i2, j2});
                };
                // 4-neighborhood
                const int steps[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
                for (const auto& st : steps) {
                    int i2 = i + st[0], j2 = j + st[1];
                    if (torus) {
                        i2 = wrap(i2);
                        j2 = wrap(j2);
                    } else if (i2 < 0 || j2 < 0 || i2 >= n || j2 >= n) {
                        continue;
                    }
                    visit(i2, j2);
                }
                // diagonals through saddle bridges
                for (int di = -1; di <= 1; di += 2) {
                    for (int dj = -1; dj <= 1; dj += 2) {
                        if (!diagonal_ok(i, j, di, dj)) continue;
                        int i2 = i + di, j2 = j + dj;
                        if (torus) {
                            i2 = wrap(i2);
                            j2 = wrap(j2);
                        } else if (i2 < 0 || j2 < 0 || i2 >= n || j2 >= n) {
                            continue;
                        }
                        visit(i2, j2);
                    }
                }
            }
        }
    }
    return components;
}

} // namespace oracles
