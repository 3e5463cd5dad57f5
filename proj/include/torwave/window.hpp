#pragma once

// Local windows of an eigenfunction. Around a base point x the rescaled
// restriction is F_x(y) = f(x + (R/lambda) y) on y in [-1/2, 1/2]^2; the
// arc-partition approximation replaces each frequency by its arc
// representative, phi_x(y) = K^{-1/2} sum_k c_k(x) e(zeta^(k) . y) with
// c_k(x) = sqrt(K) sum_{xi in arc k} a_xi e(xi . x). window_gap measures
// max |F - phi| over a fixed 64 x 64 sample of y, plus the analytic
// gradient differences for the C^1 norm.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "torwave/equidist.hpp"
#include "torwave/fourier.hpp"

namespace torwave {

struct LocalWindow {
    std::array<double, 2> x{};
    double R = 0.0;
    int K = 0;
    std::vector<std::complex<double>> c; // c[k], with c[k'] = conj(c[k]) exact

    int antipodal(int k) const { return (k + K / 2) % K; }
};

inline LocalWindow window_coefficients(const ToralEigenfunction& f,
                                       std::array<double, 2> x,
                                       const ArcPartition& partition) {
    if (partition.energy_value != f.energy.value)
        throw std::invalid_argument("window_coefficients: partition built for a different energy");
    const int K = partition.K;
    LocalWindow win;
    win.x = x;
    win.R = partition.R;
    win.K = K;
    win.c.assign(K, {0.0, 0.0});
    const double sqrtK = std::sqrt(static_cast<double>(K));
    // First half computed directly, second half mirrored by conjugation so
    // the symmetry c_{-k} = conj(c_k) holds exactly.
    for (int k = 0; k < K / 2; ++k) {
        std::complex<double> s = 0;
        for (const auto& xi : partition.members[k]) {
            auto idx = f.coeffs.find(xi);
            if (!idx) continue; // frequency not in the support
            const double phase = 2.0 * std::numbers::pi *
                (x[0] * static_cast<double>(xi.x) + x[1] * static_cast<double>(xi.y));
            s += f.coeffs.values[*idx] *
                 std::complex<double>(std::cos(phase), std::sin(phase));
        }
        win.c[k] = sqrtK * s;
        win.c[k + K / 2] = std::conj(win.c[k]);
    }
    return win;
}

// C^s distance between F_x and phi_x on the window, s in {0, 1}.
// Derivatives are the analytic ones of the trigonometric sums.
inline double window_gap(const ToralEigenfunction& f, std::array<double, 2> x,
                         const ArcPartition& partition, int s) {
    if (s < 0 || s > 1)
        throw std::invalid_argument("window_gap: s must be 0 or 1");
    const LocalWindow win = window_coefficients(f, x, partition);
    const int K = partition.K;
    const int M = 64;
    const double two_pi = 2.0 * std::numbers::pi;
    const double scale = partition.R / f.energy.lambda; // R / lambda

    // Separable phase tables: e(q . y) = e(q1 y1) e(q2 y2) per frequency.
    const std::size_t nf = f.coeffs.size();
    std::vector<std::complex<double>> base(nf); // a_xi e(xi . x)
    std::vector<double> q1(nf), q2(nf);
    for (std::size_t i = 0; i < nf; ++i) {
        const auto& xi = f.coeffs.support[i];
        const double phase = two_pi *
            (x[0] * static_cast<double>(xi.x) + x[1] * static_cast<double>(xi.y));
        base[i] = f.coeffs.values[i] *
                  std::complex<double>(std::cos(phase), std::sin(phase));
        q1[i] = scale * static_cast<double>(xi.x);
        q2[i] = scale * static_cast<double>(xi.y);
    }
    std::vector<double> ys(M);
    for (int i = 0; i < M; ++i) ys[i] = -0.5 + (i + 0.5) / M;
    auto phase_table = [&](const std::vector<double>& q) {
        std::vector<std::complex<double>> t(q.size() * M);
        for (std::size_t i = 0; i < q.size(); ++i)
            for (int m = 0; m < M; ++m)
                t[i * M + m] = std::polar(1.0, two_pi * q[i] * ys[m]);
        return t;
    };
    const auto e1 = phase_table(q1);
    const auto e2 = phase_table(q2);

    const double invSqrtK = 1.0 / std::sqrt(static_cast<double>(K));
    std::vector<std::complex<double>> wbase(K);
    std::vector<double> z1(K, 0.0), z2(K, 0.0);
    for (int k = 0; k < K; ++k) {
        wbase[k] = invSqrtK * win.c[k];
        z1[k] = partition.zeta[k][0];
        z2[k] = partition.zeta[k][1];
    }
    const auto f1 = phase_table(z1);
    const auto f2 = phase_table(z2);

    double gap = 0.0;
    for (int my = 0; my < M; ++my) {
        for (int mx = 0; mx < M; ++mx) {
            std::complex<double> F = 0, Fd1 = 0, Fd2 = 0;
            for (std::size_t i = 0; i < nf; ++i) {
                const std::complex<double> term = base[i] * e1[i * M + mx] * e2[i * M + my];
                F += term;
                if (s >= 1) {
                    Fd1 += term * std::complex<double>(0.0, two_pi * q1[i]);
                    Fd2 += term * std::complex<double>(0.0, two_pi * q2[i]);
                }
            }
            std::complex<double> P = 0, Pd1 = 0, Pd2 = 0;
            for (int k = 0; k < K; ++k) {
                if (!partition.representative[k]) continue;
                const std::complex<double> term = wbase[k] * f1[k * M + mx] * f2[k * M + my];
                P += term;
                if (s >= 1) {
                    Pd1 += term * std::complex<double>(0.0, two_pi * z1[k]);
                    Pd2 += term * std::complex<double>(0.0, two_pi * z2[k]);
                }
            }
            gap = std::max(gap, std::abs(F.real() - P.real()));
            if (s >= 1) {
                gap = std::max(gap, std::abs(Fd1.real() - Pd1.real()));
                gap = std::max(gap, std::abs(Fd2.real() - Pd2.real()));
            }
        }
    }
    return gap;
}

} // namespace torwave
