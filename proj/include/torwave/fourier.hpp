#pragma once

// Eigenfunctions of the flat torus as trigonometric polynomials
// f(x) = sum a_xi e(x . xi) over frequencies with |xi|^2 = E, where
// e(t) = exp(2 pi i t). Reality is carried by the Hermitian symmetry
// a_{-xi} = conj(a_xi); coefficients are normalized to sum |a_xi|^2 = 1.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "torwave/lattice.hpp"
#include "torwave/rng.hpp"

namespace torwave {

struct FourierCoefficients {
    std::vector<LatticePoint> support;          // lex-sorted, no duplicates
    std::vector<std::complex<double>> values;   // aligned with support

    std::size_t size() const { return support.size(); }

    std::optional<std::size_t> find(const LatticePoint& pt) const {
        auto it = std::lower_bound(support.begin(), support.end(), pt);
        if (it == support.end() || !(*it == pt)) return std::nullopt;
        return static_cast<std::size_t>(it - support.begin());
    }

    double norm_sq() const {
        double s = 0;
        for (const auto& v : values) s += std::norm(v);
        return s;
    }

    // Hermitian pairing and unit normalization, both to 1e-12.
    void validate() const {
        if (support.size() != values.size() || support.empty())
            throw std::invalid_argument("FourierCoefficients: empty or misaligned");
        for (std::size_t i = 1; i < support.size(); ++i)
            if (!(support[i - 1] < support[i]))
                throw std::invalid_argument("FourierCoefficients: support not sorted/unique");
        for (std::size_t i = 0; i < support.size(); ++i) {
            auto j = find(-support[i]);
            if (!j)
                throw std::invalid_argument("FourierCoefficients: missing conjugate partner");
            if (std::abs(values[*j] - std::conj(values[i])) > 1e-12)
                throw std::invalid_argument("FourierCoefficients: Hermitian symmetry violated");
        }
        if (std::abs(norm_sq() - 1.0) > 1e-12)
            throw std::invalid_argument("FourierCoefficients: sum |a|^2 != 1");
    }
};

inline FourierCoefficients coefficients_from_entries(
    std::vector<std::pair<LatticePoint, std::complex<double>>> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    FourierCoefficients c;
    c.support.reserve(entries.size());
    c.values.reserve(entries.size());
    for (auto& [pt, v] : entries) {
        c.support.push_back(pt);
        c.values.push_back(v);
    }
    c.validate();
    return c;
}

// a_xi = 1 / sqrt(W) on the full set.
inline FourierCoefficients uniform_coefficients(const LatticePointSet& set) {
    if (set.size() == 0)
        throw std::invalid_argument("uniform_coefficients: empty set");
    const double a = 1.0 / std::sqrt(static_cast<double>(set.size()));
    std::vector<std::pair<LatticePoint, std::complex<double>>> entries;
    entries.reserve(set.size());
    for (const auto& p : set.points) entries.push_back({p, {a, 0.0}});
    return coefficients_from_entries(std::move(entries));
}

// Equal moduli 1/sqrt(W), independent uniform phases on one representative
// per antipodal pair, conjugate on the other.
inline FourierCoefficients random_phase_coefficients(const LatticePointSet& set,
                                                     std::uint64_t seed,
                                                     std::uint64_t stream = 0) {
    if (set.size() == 0)
        throw std::invalid_argument("random_phase_coefficients: empty set");
    SplitMix64 rng(seed, stream);
    const double a = 1.0 / std::sqrt(static_cast<double>(set.size()));
    std::vector<std::pair<LatticePoint, std::complex<double>>> entries;
    entries.reserve(set.size());
    std::vector<LatticePoint> reps;
    for (const auto& p : set.points)
        if (-p < p) reps.push_back(p);
    std::sort(reps.begin(), reps.end()); // draw order fixed by lex order
    for (const auto& p : reps) {
        const double phi = 2.0 * std::numbers::pi * rng.next_double();
        const std::complex<double> v = std::polar(a, phi);
        entries.push_back({p, v});
        entries.push_back({-p, std::conj(v)});
    }
    return coefficients_from_entries(std::move(entries));
}

struct ToralEigenfunction {
    Energy energy;
    FourierCoefficients coeffs;
};

// Checks that every supported frequency lies on the circle of radius sqrt(E).
inline ToralEigenfunction make_eigenfunction(const Energy& energy,
                                             FourierCoefficients coeffs) {
    coeffs.validate();
    for (const auto& p : coeffs.support)
        if (p.norm() != energy.value)
            throw std::invalid_argument("make_eigenfunction: support off the circle |xi|^2 = E");
    return {energy, std::move(coeffs)};
}

inline ToralEigenfunction uniform_eigenfunction(std::int64_t E) {
    LatticePointSet set = enumerate_lattice_points(E);
    return make_eigenfunction(set.energy, uniform_coefficients(set));
}

// f(x), direct summation. The imaginary part must cancel to < 1e-10.
inline double evaluate_point(const FourierCoefficients& coeffs, double x1, double x2) {
    std::complex<double> s = 0;
    for (std::size_t i = 0; i < coeffs.support.size(); ++i) {
        const double phase = 2.0 * std::numbers::pi *
            (x1 * static_cast<double>(coeffs.support[i].x) +
             x2 * static_cast<double>(coeffs.support[i].y));
        s += coeffs.values[i] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    if (std::abs(s.imag()) >= 1e-10)
        throw std::logic_error("evaluate_point: imaginary residue above 1e-10");
    return s.real();
}

inline double evaluate_point(const ToralEigenfunction& f, double x1, double x2) {
    return evaluate_point(f.coeffs, x1, x2);
}

} // namespace torwave
