#pragma once

// Angular equidistribution diagnostics for the lattice angles psi_xi:
// the arc discrepancy Delta(E), arc partitions of the circle, and atomic
// spectral measures on the unit circle.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "torwave/fourier.hpp"
#include "torwave/lattice.hpp"

namespace torwave {

struct DiscrepancyReport {
    double delta = 0.0;            // sup over arcs [alpha, beta], 0 <= alpha < beta < 2 pi
    double normalized = 0.0;       // delta / W
    double log_power_envelope = 0.0; // W (log E)^(-kappa), kappa = (1/2) log(pi/2)
};

inline constexpr double kDiscrepancyKappa = 0.22579135264472741; // (1/2) log(pi/2)

// Exact supremum of | (beta-alpha)/(2 pi) W - #{psi in [alpha, beta]} |.
//
// The excess side is attained by closed arcs with both endpoints at atoms;
// the deficiency side by open arcs whose endpoints approach atoms (or the
// domain ends 0 and 2 pi) from inside. Both sides reduce to a running
// minimum over one sweep of the sorted candidate positions, so the result
// is an exact sweep rather than a sampled estimate.
inline double discrepancy_sup(std::span<const double> angles) {
    if (angles.empty())
        throw std::invalid_argument("discrepancy_sup: no atoms");
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> a(angles.begin(), angles.end());
    for (double v : a)
        if (!(v >= 0.0 && v < two_pi))
            throw std::invalid_argument("discrepancy_sup: angles must lie in [0, 2 pi)");
    std::sort(a.begin(), a.end());
    const double w = static_cast<double>(a.size());
    const double mu = w / two_pi;

    // Collapse duplicates into groups: position, multiplicity, prefix count.
    std::vector<double> pos;
    std::vector<double> count;  // multiplicity of the group
    std::vector<double> upto;   // atoms <= pos
    for (std::size_t i = 0; i < a.size();) {
        std::size_t j = i;
        while (j < a.size() && a[j] == a[i]) ++j;
        pos.push_back(a[i]);
        count.push_back(static_cast<double>(j - i));
        upto.push_back(static_cast<double>(j));
        i = j;
    }

    // Excess of closed arcs [pos_i, pos_j], i <= j:
    //   (upto_j - upto_i + count_i) - (pos_j - pos_i) mu
    // = (upto_j - pos_j mu) - ((upto_i - count_i) - pos_i mu).
    double excess = 0.0;
    double min_left = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < pos.size(); ++g) {
        min_left = std::min(min_left, (upto[g] - count[g]) - pos[g] * mu);
        excess = std::max(excess, (upto[g] - pos[g] * mu) - min_left);
    }

    // Deficiency of open arcs with endpoints at candidates {0} u atoms u {2 pi}:
    //   (q_j - q_i) mu - (#atoms < q_j - #atoms <= q_i)
    // = (q_j mu - below_j) - (q_i mu - upto_i),  maximized over i < j.
    std::vector<double> q, below_q, upto_q;
    auto push_candidate = [&](double position) {
        double below = 0, up = 0;
        for (std::size_t g = 0; g < pos.size(); ++g) {
            if (pos[g] < position) below = upto[g];
            if (pos[g] <= position) up = upto[g];
        }
        q.push_back(position);
        below_q.push_back(below);
        upto_q.push_back(up);
    };
    push_candidate(0.0);
    for (std::size_t g = 0; g < pos.size(); ++g)
        if (pos[g] != 0.0) push_candidate(pos[g]);
    push_candidate(two_pi);

    double deficiency = 0.0;
    double min_open = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < q.size(); ++j) {
        if (j > 0)
            deficiency = std::max(deficiency, (q[j] * mu - below_q[j]) - min_open);
        min_open = std::min(min_open, q[j] * mu - upto_q[j]);
    }
    return std::max(excess, deficiency);
}

inline DiscrepancyReport discrepancy(const LatticePointSet& set, double epsilon = 0.0) {
    if (set.size() == 0)
        throw std::invalid_argument("discrepancy: empty lattice point set");
    DiscrepancyReport r;
    r.delta = discrepancy_sup(set.angles);
    r.normalized = r.delta / static_cast<double>(set.size());
    const double logE = std::log(static_cast<double>(set.energy.value));
    r.log_power_envelope = logE > 0
        ? static_cast<double>(set.size()) * std::pow(logE, -kDiscrepancyKappa + epsilon)
        : std::numeric_limits<double>::quiet_NaN();
    return r;
}

// Partition of the circle into K equal half-open sectors
// [2 pi k / K, 2 pi (k+1) / K). Points in the upper half-plane are assigned
// by the sector formula and their antipodes are forced into the opposite
// sector k + K/2, which makes E^(k') = -E^(k) hold exactly.
struct ArcPartition {
    std::int64_t energy_value = 0;
    double lambda = 0.0;
    int K = 0;
    double R = 0.0;
    std::vector<int> arc_of;                            // per point index
    std::vector<std::vector<LatticePoint>> members;     // per arc, in angle order
    std::vector<std::optional<LatticePoint>> representative;
    std::vector<std::array<double, 2>> zeta;            // (R/lambda) xi^(k); {0,0} if empty
    double epsilon1 = 0.0;                              // max_k | |E^(k)|/W - 1/K |
    bool has_empty_arcs = false;
    bool sparse_warning = false;                        // K > 2W

    int antipodal_arc(int k) const { return (k + K / 2) % K; }
    std::size_t total_points() const {
        std::size_t s = 0;
        for (const auto& m : members) s += m.size();
        return s;
    }
};

inline ArcPartition partition_arcs(const LatticePointSet& set, int K, double R) {
    if (K < 2 || K % 2 != 0)
        throw std::invalid_argument("partition_arcs: K must be even and >= 2");
    if (!(R > 0))
        throw std::invalid_argument("partition_arcs: R must be positive");
    if (set.size() == 0)
        throw std::invalid_argument("partition_arcs: empty lattice point set");
    const double two_pi = 2.0 * std::numbers::pi;
    ArcPartition part;
    part.energy_value = set.energy.value;
    part.lambda = set.energy.lambda;
    part.K = K;
    part.R = R;
    part.arc_of.assign(set.size(), -1);
    part.members.assign(K, {});
    part.representative.assign(K, std::nullopt);
    part.zeta.assign(K, {0.0, 0.0});
    part.sparse_warning = static_cast<std::size_t>(K) > 2 * set.size();

    for (std::size_t i = 0; i < set.size(); ++i) {
        const double psi = set.angles[i];
        if (psi >= std::numbers::pi) continue;
        int k = static_cast<int>(std::floor(psi * K / two_pi));
        if (k >= K / 2) k = K / 2 - 1; // guards rounding at psi -> pi
        part.arc_of[i] = k;
        const std::size_t anti = set.antipode_index(i);
        part.arc_of[anti] = k + K / 2;
    }
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (part.arc_of[i] < 0)
            throw std::logic_error("partition_arcs: set not closed under negation");
        part.members[part.arc_of[i]].push_back(set.points[i]); // angle order preserved
    }
    for (int k = 0; k < K / 2; ++k) {
        if (part.members[k].empty()) continue;
        const LatticePoint rep = part.members[k].front();
        part.representative[k] = rep;
        part.representative[k + K / 2] = -rep;
    }
    const double scale = R / set.energy.lambda;
    for (int k = 0; k < K; ++k) {
        if (part.representative[k]) {
            part.zeta[k] = {scale * static_cast<double>(part.representative[k]->x),
                            scale * static_cast<double>(part.representative[k]->y)};
        } else {
            part.has_empty_arcs = true;
        }
    }
    const double w = static_cast<double>(set.size());
    for (int k = 0; k < K; ++k) {
        const double frac = static_cast<double>(part.members[k].size()) / w;
        part.epsilon1 = std::max(part.epsilon1, std::abs(frac - 1.0 / K));
    }
    return part;
}

struct SpectralMeasure {
    struct Atom {
        double angle = 0.0;
        double weight = 0.0;
    };
    std::vector<Atom> atoms;

    double total_weight() const {
        double s = 0;
        for (const auto& a : atoms) s += a.weight;
        return s;
    }
};

// rho = sum |a_xi|^2 delta_{xi / lambda}; rejects unnormalized input.
inline SpectralMeasure spectral_measure(const FourierCoefficients& coeffs) {
    double norm = coeffs.norm_sq();
    if (std::abs(norm - 1.0) > 1e-9)
        throw std::invalid_argument("spectral_measure: coefficients not normalized");
    SpectralMeasure m;
    m.atoms.reserve(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        m.atoms.push_back({detail::angle_of(coeffs.support[i]),
                           std::norm(coeffs.values[i])});
    std::sort(m.atoms.begin(), m.atoms.end(), [](const auto& a, const auto& b) {
        return a.angle < b.angle;
    });
    return m;
}

// max_{1 <= n <= n_max} | sum_atoms weight e^{i n angle} |; zero for the
// uniform measure, at most the total mass.
inline double uniformity_gap(const SpectralMeasure& measure, int n_max) {
    if (n_max < 1)
        throw std::invalid_argument("uniformity_gap: n_max >= 1 required");
    double worst = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        std::complex<double> s = 0;
        for (const auto& atom : measure.atoms)
            s += atom.weight * std::complex<double>(std::cos(n * atom.angle),
                                                    std::sin(n * atom.angle));
        worst = std::max(worst, std::abs(s));
    }
    return worst;
}

} // namespace torwave
