#pragma once

// Fast evaluation of f(x) = sum a_xi e(x . xi) on the grid { (i/N, j/N) }.
//
// The coefficients are placed on the integer frequency lattice mod N and an
// unnormalized backward complex-to-real FFT (FFTW) produces
//   out[i][j] = sum_{u,v} in[u][v] e^{+2 pi i (iu/N + jv/N)},
// which is exactly the trigonometric sum when N exceeds twice the circle
// radius (no aliasing). Only the half spectrum v <= N/2 is stored; the
// Hermitian pairs a_{-xi} = conj(a_xi) supply the rest, and the c2r
// transform makes the output real by construction. Plans use FFTW_ESTIMATE,
// which picks the algorithm deterministically.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include <fftw3.h>

#include "torwave/fourier.hpp"
#include "torwave/grid.hpp"

namespace torwave {

namespace detail {

struct FftwDeleter {
    void operator()(void* p) const { fftw_free(p); }
};

} // namespace detail

// Synthesis of an arbitrary Hermitian-closed spectrum. Every entry must have
// its conjugate partner present; |xi| components must stay below N/2.
inline FieldGrid synthesize_spectrum_grid(
    const std::vector<std::pair<LatticePoint, std::complex<double>>>& spectrum,
    int N) {
    if (N < 2) throw std::invalid_argument("synthesize_spectrum_grid: N too small");
    std::vector<std::pair<LatticePoint, std::complex<double>>> sorted = spectrum;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [pt, v] : sorted) {
        if (2 * pt.x >= N || 2 * pt.x <= -N || 2 * pt.y >= N || 2 * pt.y <= -N)
            throw std::invalid_argument(
                "synthesize_spectrum_grid: N <= 2|xi| aliases the spectrum");
        const LatticePoint mirror = -pt;
        auto it = std::lower_bound(sorted.begin(), sorted.end(), mirror,
                                   [](const auto& row, const LatticePoint& q) {
                                       return row.first < q;
                                   });
        if (it == sorted.end() || !(it->first == mirror) ||
            std::abs(it->second - std::conj(v)) > 1e-9)
            throw std::invalid_argument(
                "synthesize_spectrum_grid: spectrum is not Hermitian-closed");
    }

    const int half = N / 2 + 1;
    std::unique_ptr<fftw_complex, detail::FftwDeleter> in(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) *
                                               static_cast<std::size_t>(N) * half)));
    std::unique_ptr<double, detail::FftwDeleter> out(
        static_cast<double*>(fftw_malloc(sizeof(double) *
                                         static_cast<std::size_t>(N) * N)));
    if (!in || !out) throw std::bad_alloc();
    for (std::size_t k = 0; k < static_cast<std::size_t>(N) * half; ++k) {
        in.get()[k][0] = 0.0;
        in.get()[k][1] = 0.0;
    }
    // Entries with xi_2 >= 0 fill the stored half; their partners are implied.
    // For xi_2 = 0 both points of a pair land in the v = 0 column, whose row
    // conjugate symmetry then holds because the pair coefficients conjugate.
    for (const auto& [pt, v] : spectrum) {
        if (pt.y < 0) continue;
        const int u = static_cast<int>((pt.x % N + N) % N);
        const int vv = static_cast<int>(pt.y);
        fftw_complex& cell = in.get()[static_cast<std::size_t>(u) * half + vv];
        cell[0] += v.real();
        cell[1] += v.imag();
    }
    fftw_plan plan = fftw_plan_dft_c2r_2d(N, N, in.get(), out.get(), FFTW_ESTIMATE);
    if (!plan) throw std::runtime_error("synthesize_spectrum_grid: fftw plan failed");
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    in.reset();

    FieldGrid g;
    g.n = N;
    g.topology = GridTopology::torus;
    g.spacing = 1.0 / N;
    g.values.assign(out.get(), out.get() + static_cast<std::size_t>(N) * N);
    return g;
}

// Grid of a toral eigenfunction; requires N > 2 lambda (checked in integers).
inline FieldGrid synthesize_grid(const ToralEigenfunction& f, int N) {
    if (static_cast<std::int64_t>(N) * N <= 4 * f.energy.value)
        throw std::invalid_argument("synthesize_grid: need N > 2 sqrt(E)");
    std::vector<std::pair<LatticePoint, std::complex<double>>> spectrum;
    spectrum.reserve(f.coeffs.size());
    for (std::size_t i = 0; i < f.coeffs.size(); ++i)
        spectrum.push_back({f.coeffs.support[i], f.coeffs.values[i]});
    return synthesize_spectrum_grid(spectrum, N);
}

} // namespace torwave
