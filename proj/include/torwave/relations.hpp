#pragma once

// Additive relations xi_1 + ... + xi_l = 0 among lattice points.
//
// Counts are over ordered tuples with repetition; a tuple is non-degenerate
// when no proper nonempty subset sums to zero. Two counters are provided:
// a meet-in-the-middle join of half-tuple sums, and an ordered depth-first
// enumeration with exact integer pruning. vanishing_sums() runs the join and
// cross-checks it against the enumeration whenever W^l is small enough.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "torwave/errors.hpp"
#include "torwave/lattice.hpp"

namespace torwave {

// Work budget. max_entries caps the half-tuple tables of the join,
// max_matches caps the number of matched tuples that get classified
// (and the node count of the depth-first route).
struct RelationBudget {
    std::uint64_t max_entries = 100'000'000;
    std::uint64_t max_matches = 100'000'000;
};

struct RelationCount {
    int ell = 0;
    std::uint64_t total_ordered = 0;
    std::uint64_t nondegenerate = 0;
    std::vector<std::vector<LatticePoint>> witnesses; // a few non-degenerate examples
};

namespace detail {

// Assumes the tuple sums to zero. Checks subsets containing position 0;
// the complement of a vanishing subset vanishes too, so this covers all.
inline bool has_vanishing_proper_subsum(std::span<const LatticePoint> tuple) {
    const int l = static_cast<int>(tuple.size());
    const std::uint32_t full = (1u << l) - 1u;
    for (std::uint32_t mask = 1; mask < full; mask += 2) {
        std::int64_t sx = 0, sy = 0;
        for (int i = 0; i < l; ++i) {
            if (mask & (1u << i)) {
                sx += tuple[i].x;
                sy += tuple[i].y;
            }
        }
        if (sx == 0 && sy == 0) return true;
    }
    return false;
}

inline double pow_u64(double base, int e) {
    double r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

} // namespace detail

// True iff some proper nonempty subset of the tuple sums to zero.
// The tuple itself must sum to zero.
inline bool is_degenerate(std::span<const LatticePoint> tuple) {
    if (tuple.size() < 2 || tuple.size() > 8)
        throw std::invalid_argument("is_degenerate: tuple length must be in [2, 8]");
    std::int64_t sx = 0, sy = 0;
    for (const auto& p : tuple) { sx += p.x; sy += p.y; }
    if (sx != 0 || sy != 0)
        throw std::invalid_argument("is_degenerate: tuple does not sum to zero");
    return detail::has_vanishing_proper_subsum(tuple);
}

namespace detail {

struct HalfRow {
    std::uint64_t key;    // packed (sx, sy) or packed (-sx, -sy)
    std::uint64_t packed; // up to 4 point indices, 16 bits each
};

inline std::uint64_t pack_sum(std::int64_t sx, std::int64_t sy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(static_cast<std::int32_t>(sx))) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(static_cast<std::int32_t>(sy)));
}

inline std::vector<HalfRow> half_table(const LatticePointSet& set, int h, bool negate) {
    const std::size_t w = set.size();
    std::vector<HalfRow> rows;
    std::size_t total = 1;
    for (int i = 0; i < h; ++i) total *= w;
    rows.reserve(total);
    std::array<std::uint32_t, 4> idx{};
    std::array<std::int64_t, 4> px{}, py{};
    int d = 0;
    std::int64_t sx = 0, sy = 0;
    // Odometer over ordered h-tuples.
    while (true) {
        if (d == h) {
            std::uint64_t packed = 0;
            for (int i = 0; i < h; ++i)
                packed |= static_cast<std::uint64_t>(idx[i]) << (16 * i);
            rows.push_back({negate ? pack_sum(-sx, -sy) : pack_sum(sx, sy), packed});
            --d;
            sx -= px[d];
            sy -= py[d];
            ++idx[d];
        } else if (idx[d] < w) {
            px[d] = set.points[idx[d]].x;
            py[d] = set.points[idx[d]].y;
            sx += px[d];
            sy += py[d];
            ++d;
            if (d < h) idx[d] = 0;
        } else {
            if (d == 0) break;
            --d;
            sx -= px[d];
            sy -= py[d];
            ++idx[d];
        }
    }
    std::sort(rows.begin(), rows.end(),
              [](const HalfRow& a, const HalfRow& b) { return a.key < b.key; });
    return rows;
}

} // namespace detail

// Join of sums of ceil(l/2)-tuples against negated sums of floor(l/2)-tuples.
inline RelationCount vanishing_sums_mitm(const LatticePointSet& set, int ell,
                                         const RelationBudget& budget = {}) {
    if (ell < 2 || ell > 8)
        throw std::invalid_argument("vanishing_sums: ell must be in [2, 8]");
    if (set.size() == 0) return {ell, 0, 0, {}};
    if (set.size() > 65535)
        throw BudgetError("vanishing_sums: point set too large for index packing");
    const int h1 = (ell + 1) / 2;
    const int h2 = ell - h1;
    const double w = static_cast<double>(set.size());
    if (detail::pow_u64(w, h1) + detail::pow_u64(w, h2) >
        static_cast<double>(budget.max_entries))
        throw BudgetError("vanishing_sums: half-tuple tables exceed max_entries");

    auto t1 = detail::half_table(set, h1, /*negate=*/false);
    auto t2 = detail::half_table(set, h2, /*negate=*/true);

    RelationCount out;
    out.ell = ell;
    std::uint64_t matches = 0;
    std::array<LatticePoint, 8> tuple{};
    std::size_t i = 0, j = 0;
    while (i < t1.size() && j < t2.size()) {
        if (t1[i].key < t2[j].key) { ++i; continue; }
        if (t2[j].key < t1[i].key) { ++j; continue; }
        const std::uint64_t key = t1[i].key;
        std::size_t i2 = i, j2 = j;
        while (i2 < t1.size() && t1[i2].key == key) ++i2;
        while (j2 < t2.size() && t2[j2].key == key) ++j2;
        matches += static_cast<std::uint64_t>(i2 - i) * (j2 - j);
        if (matches > budget.max_matches)
            throw BudgetError("vanishing_sums: matched tuples exceed max_matches");
        for (std::size_t a = i; a < i2; ++a) {
            for (std::size_t b = j; b < j2; ++b) {
                for (int t = 0; t < h1; ++t)
                    tuple[t] = set.points[(t1[a].packed >> (16 * t)) & 0xFFFF];
                for (int t = 0; t < h2; ++t)
                    tuple[h1 + t] = set.points[(t2[b].packed >> (16 * t)) & 0xFFFF];
                ++out.total_ordered;
                if (!detail::has_vanishing_proper_subsum({tuple.data(), static_cast<std::size_t>(ell)})) {
                    ++out.nondegenerate;
                    if (out.witnesses.size() < 8)
                        out.witnesses.emplace_back(tuple.begin(), tuple.begin() + ell);
                }
            }
        }
        i = i2;
        j = j2;
    }
    return out;
}

// Ordered depth-first enumeration; the last slot is resolved by membership
// lookup, earlier partial sums are pruned with |s|^2 <= (l-d)^2 E exactly.
inline RelationCount vanishing_sums_bruteforce(const LatticePointSet& set, int ell,
                                               const RelationBudget& budget = {}) {
    if (ell < 2 || ell > 8)
        throw std::invalid_argument("vanishing_sums: ell must be in [2, 8]");
    RelationCount out;
    out.ell = ell;
    if (set.size() == 0) return out;
    const std::size_t w = set.size();
    const __int128 E = set.energy.value;
    std::uint64_t work = 0;

    std::array<LatticePoint, 8> tuple{};
    std::array<std::size_t, 8> choice{};
    int d = 0;
    std::int64_t sx = 0, sy = 0;
    choice[0] = 0;
    while (d >= 0) {
        if (d == ell - 1) {
            const LatticePoint need{-sx, -sy};
            if (auto hit = set.index_of(need)) {
                tuple[d] = set.points[*hit];
                ++out.total_ordered;
                if (!detail::has_vanishing_proper_subsum({tuple.data(), static_cast<std::size_t>(ell)})) {
                    ++out.nondegenerate;
                    if (out.witnesses.size() < 8)
                        out.witnesses.emplace_back(tuple.begin(), tuple.begin() + ell);
                }
            }
            --d;
            if (d >= 0) {
                sx -= tuple[d].x;
                sy -= tuple[d].y;
                ++choice[d];
            }
            continue;
        }
        if (choice[d] >= w) {
            --d;
            if (d >= 0) {
                sx -= tuple[d].x;
                sy -= tuple[d].y;
                ++choice[d];
            }
            continue;
        }
        if (++work > budget.max_matches)
            throw BudgetError("vanishing_sums_bruteforce: node budget exceeded");
        const LatticePoint p = set.points[choice[d]];
        const std::int64_t nx = sx + p.x, ny = sy + p.y;
        const __int128 rem = ell - 1 - d;
        if (static_cast<__int128>(nx) * nx + static_cast<__int128>(ny) * ny >
            rem * rem * E) {
            ++choice[d];
            continue;
        }
        tuple[d] = p;
        sx = nx;
        sy = ny;
        ++d;
        choice[d] = 0;
    }
    return out;
}

// Meet-in-the-middle count, cross-checked against the depth-first route
// whenever W^l <= 10^8.
inline RelationCount vanishing_sums(const LatticePointSet& set, int ell,
                                    const RelationBudget& budget = {}) {
    RelationCount mitm = vanishing_sums_mitm(set, ell, budget);
    if (set.size() > 0 &&
        detail::pow_u64(static_cast<double>(set.size()), ell) <= 1e8) {
        RelationCount brute = vanishing_sums_bruteforce(set, ell, budget);
        if (brute.total_ordered != mitm.total_ordered ||
            brute.nondegenerate != mitm.nondegenerate)
            throw std::logic_error("vanishing_sums: dual counters disagree");
    }
    return mitm;
}

struct IndependenceQuery {
    double gamma = 0.4; // in (0, 1/2)
    int B = 4;          // check 2 < ell <= B
};

struct IndependenceEll {
    int ell = 0;
    RelationCount count;
    double threshold = 0; // W^{gamma * ell}
    bool pass = false;
};

struct IndependenceReport {
    bool holds = false;
    std::vector<IndependenceEll> per_ell;
};

// Property I(gamma, B): for every 2 < ell <= B the non-degenerate count is
// at most W^{gamma * ell}.
inline IndependenceReport check_independence(const LatticePointSet& set,
                                             const IndependenceQuery& query,
                                             const RelationBudget& budget = {}) {
    if (!(query.gamma > 0.0 && query.gamma < 0.5))
        throw std::invalid_argument("check_independence: gamma must be in (0, 1/2)");
    if (query.B <= 2 || query.B > 8)
        throw std::invalid_argument("check_independence: B must be in (2, 8]");
    IndependenceReport report;
    report.holds = true;
    for (int ell = 3; ell <= query.B; ++ell) {
        IndependenceEll row;
        row.ell = ell;
        row.count = vanishing_sums(set, ell, budget);
        row.threshold = std::pow(static_cast<double>(set.size()), query.gamma * ell);
        row.pass = static_cast<double>(row.count.nondegenerate) <= row.threshold;
        report.holds = report.holds && row.pass;
        report.per_ell.push_back(std::move(row));
    }
    return report;
}

// c(m) = (4m)^{3m} from the unit-equation solution bound.
inline double ess_c(int m) {
    if (m < 1) throw std::invalid_argument("ess_c: m >= 1 required");
    double r = 1.0;
    for (int i = 0; i < 3 * m; ++i) r *= 4.0 * m;
    return r;
}

// Natural log of exp(c(ell-1) (2r+1)) * W, kept in log space.
inline double ess_bound_log(int ell, int r, std::uint64_t point_count) {
    if (ell < 3) throw std::invalid_argument("ess_bound_log: ell >= 3 required");
    if (r < 1) throw std::invalid_argument("ess_bound_log: r >= 1 required");
    return ess_c(ell - 1) * (2.0 * r + 1.0) +
           std::log(static_cast<double>(point_count));
}

} // namespace torwave
