#pragma once

// Lattice points on the circle x^2 + y^2 = E.
//
// Two enumeration routes are kept side by side: a brute-force scan of one
// coordinate, and (for admissible E, i.e. odd E whose prime factors are all
// 1 mod 4) the multiplicative construction that expands products of Gaussian
// prime powers and multiplies by the four units. The admissible route is
// always verified against the brute-force route before a set is returned.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace torwave {

struct PrimePower {
    std::int64_t prime = 0;
    int exponent = 0;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct LatticePoint {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
    friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;

    LatticePoint operator-() const { return {-x, -y}; }
    std::int64_t norm() const { return x * x + y * y; }
};

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e > 0) {
        if (e & 1) r = mulmod_u64(r, b, m);
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull,
                            19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull,
                            19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

// Pollard rho, Brent cycle detection, deterministic parameter ladder.
inline std::uint64_t pollard_rho(std::uint64_t n) {
    if ((n & 1) == 0) return 2;
    for (std::uint64_t c = 1;; ++c) {
        auto step = [n, c](std::uint64_t v) {
            return (static_cast<std::uint64_t>(
                       (static_cast<unsigned __int128>(v) * v + c) % n));
        };
        std::uint64_t x = 2, y = 2, d = 1;
        while (d == 1) {
            x = step(x);
            y = step(step(y));
            std::uint64_t diff = x > y ? x - y : y - x;
            d = std::gcd(diff, n);
        }
        if (d != n) return d;
    }
}

inline std::int64_t isqrt64(std::int64_t n) {
    if (n < 0) throw std::invalid_argument("isqrt64: negative input");
    auto sq = [](std::int64_t v) {
        return static_cast<__int128>(v) * v;
    };
    auto x = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (x > 0 && sq(x) > n) --x;
    while (sq(x + 1) <= n) ++x;
    return x;
}

} // namespace detail

// Prime factorization, primes ascending. n = 1 gives an empty list.
// Trial division up to 10^6, Pollard rho for what remains.
inline std::vector<PrimePower> factorize(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("factorize: n must be >= 1");
    std::map<std::int64_t, int> acc;
    std::uint64_t m = static_cast<std::uint64_t>(n);
    for (std::uint64_t d = 2; d <= 1000000ull && d * d <= m; d == 2 ? d = 3 : d += 2) {
        while (m % d == 0) {
            ++acc[static_cast<std::int64_t>(d)];
            m /= d;
        }
    }
    // Recursive split of the > 10^12 remainder.
    std::vector<std::uint64_t> stack;
    if (m > 1) stack.push_back(m);
    while (!stack.empty()) {
        std::uint64_t v = stack.back();
        stack.pop_back();
        if (detail::is_prime_u64(v)) {
            ++acc[static_cast<std::int64_t>(v)];
            continue;
        }
        std::uint64_t f = detail::pollard_rho(v);
        stack.push_back(f);
        stack.push_back(v / f);
    }
    std::vector<PrimePower> out;
    out.reserve(acc.size());
    for (auto& [p, e] : acc) out.push_back({p, e});
    return out;
}

struct Energy {
    std::int64_t value = 1;
    std::vector<PrimePower> factors;
    double lambda = 1.0;
    bool admissible = false;

    static Energy of(std::int64_t n) {
        if (n < 1) throw std::invalid_argument("Energy: value must be >= 1");
        Energy e;
        e.value = n;
        e.factors = factorize(n);
        e.lambda = std::sqrt(static_cast<double>(n));
        e.admissible = (n % 2 == 1);
        for (const auto& f : e.factors) {
            if (f.prime % 4 != 1) e.admissible = false;
        }
        return e;
    }
};

struct GaussianPrimeSplit {
    std::int64_t p = 0;
    std::int64_t a = 0; // a > b >= 1, a^2 + b^2 = p
    std::int64_t b = 0;
    double theta = 0.0; // atan2(b, a), in (0, pi/4)
};

// Decomposition p = a^2 + b^2 for a prime p = 1 (mod 4), by Hermite-Serret:
// a square root s of -1 mod p (via a quadratic non-residue) starts a
// Euclidean remainder sequence; the first remainder below sqrt(p) is one leg.
inline GaussianPrimeSplit gaussian_split(std::int64_t p) {
    if (p < 5 || !detail::is_prime_u64(static_cast<std::uint64_t>(p)))
        throw std::invalid_argument("gaussian_split: p must be prime");
    if (p % 4 != 1)
        throw std::invalid_argument("gaussian_split: p must be 1 mod 4");
    const auto up = static_cast<std::uint64_t>(p);
    std::uint64_t s = 0;
    for (std::uint64_t d = 2;; ++d) {
        if (detail::powmod_u64(d, (up - 1) / 2, up) == up - 1) {
            s = detail::powmod_u64(d, (up - 1) / 4, up);
            break;
        }
    }
    if (detail::mulmod_u64(s, s, up) != up - 1)
        throw std::logic_error("gaussian_split: square root of -1 failed");
    if (s < up - s) s = up - s;
    std::uint64_t r0 = up, r1 = s;
    while (r1 * r1 > up) {
        std::uint64_t t = r0 % r1;
        r0 = r1;
        r1 = t;
    }
    auto x = static_cast<std::int64_t>(r1);
    std::int64_t y = detail::isqrt64(p - x * x);
    if (x * x + y * y != p)
        throw std::logic_error("gaussian_split: descent did not terminate on a representation");
    GaussianPrimeSplit out;
    out.p = p;
    out.a = std::max(x, y);
    out.b = std::min(x, y);
    out.theta = std::atan2(static_cast<double>(out.b), static_cast<double>(out.a));
    return out;
}

namespace detail {

inline double angle_of(const LatticePoint& pt) {
    double a = std::atan2(static_cast<double>(pt.y), static_cast<double>(pt.x));
    if (a < 0) a += 2.0 * std::numbers::pi;
    if (a >= 2.0 * std::numbers::pi) a = 0.0;
    return a;
}

} // namespace detail

// The set E_E = { (x, y) in Z^2 : x^2 + y^2 = E }, points sorted by angle.
struct LatticePointSet {
    Energy energy;
    std::vector<LatticePoint> points; // sorted by angle psi in [0, 2pi), then lex
    std::vector<double> angles;       // angles[i] = angle of points[i]

    std::size_t size() const { return points.size(); }

    std::optional<std::size_t> index_of(const LatticePoint& pt) const {
        auto it = std::lower_bound(lex_order.begin(), lex_order.end(), pt,
                                   [this](std::uint32_t i, const LatticePoint& q) {
                                       return points[i] < q;
                                   });
        if (it == lex_order.end() || !(points[*it] == pt)) return std::nullopt;
        return static_cast<std::size_t>(*it);
    }

    bool contains(const LatticePoint& pt) const { return index_of(pt).has_value(); }

    std::size_t antipode_index(std::size_t i) const {
        auto j = index_of(-points.at(i));
        if (!j) throw std::logic_error("LatticePointSet: antipode missing");
        return *j;
    }

    std::vector<std::uint32_t> lex_order; // indices into points, sorted by (x, y)
};

// Brute force over one coordinate; exact integer square detection.
inline std::vector<LatticePoint> lattice_points_bruteforce(std::int64_t E) {
    if (E < 1) throw std::invalid_argument("lattice_points_bruteforce: E >= 1 required");
    std::vector<LatticePoint> pts;
    const std::int64_t r = detail::isqrt64(E);
    for (std::int64_t x = -r; x <= r; ++x) {
        const std::int64_t y2 = E - x * x;
        const std::int64_t y = detail::isqrt64(y2);
        if (y * y != y2) continue;
        pts.push_back({x, y});
        if (y != 0) pts.push_back({x, -y});
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// Multiplicative construction for admissible E: expand
// prod_a pi_a^j conj(pi_a)^(e_a - j), 0 <= j <= e_a, times the units.
inline std::vector<LatticePoint> lattice_points_from_splits(const Energy& energy) {
    if (!energy.admissible)
        throw std::invalid_argument("lattice_points_from_splits: E not admissible");
    auto mul = [](LatticePoint u, LatticePoint v) -> LatticePoint {
        return {u.x * v.x - u.y * v.y, u.x * v.y + u.y * v.x};
    };
    std::vector<LatticePoint> acc = {{1, 0}};
    for (const auto& f : energy.factors) {
        const GaussianPrimeSplit s = gaussian_split(f.prime);
        const LatticePoint pi{s.a, s.b};
        const LatticePoint pibar{s.a, -s.b};
        std::vector<LatticePoint> powers; // pi^j * pibar^(e-j), j = 0..e
        for (int j = 0; j <= f.exponent; ++j) {
            LatticePoint v{1, 0};
            for (int t = 0; t < j; ++t) v = mul(v, pi);
            for (int t = j; t < f.exponent; ++t) v = mul(v, pibar);
            powers.push_back(v);
        }
        std::vector<LatticePoint> next;
        next.reserve(acc.size() * powers.size());
        for (const auto& u : acc)
            for (const auto& w : powers) next.push_back(mul(u, w));
        acc = std::move(next);
    }
    std::vector<LatticePoint> pts;
    pts.reserve(acc.size() * 4);
    for (const auto& u : acc) {
        pts.push_back(u);
        pts.push_back({-u.y, u.x});  // * i
        pts.push_back({-u.x, -u.y}); // * -1
        pts.push_back({u.y, -u.x});  // * -i
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// W = 4 * prod(1 + e_a), valid for admissible E only.
inline std::int64_t expected_point_count(const Energy& energy) {
    if (!energy.admissible)
        throw std::invalid_argument("expected_point_count: E not admissible");
    std::int64_t w = 4;
    for (const auto& f : energy.factors) w *= (f.exponent + 1);
    return w;
}

inline LatticePointSet enumerate_lattice_points(const Energy& energy) {
    std::vector<LatticePoint> pts = lattice_points_bruteforce(energy.value);
    if (energy.admissible) {
        std::vector<LatticePoint> viaSplits = lattice_points_from_splits(energy);
        if (viaSplits != pts)
            throw std::logic_error("enumerate_lattice_points: split construction disagrees with brute force");
        if (static_cast<std::int64_t>(pts.size()) != expected_point_count(energy))
            throw std::logic_error("enumerate_lattice_points: |E_E| != 4 prod(1+e_a)");
    }
    LatticePointSet set;
    set.energy = energy;
    set.points = std::move(pts);
    std::sort(set.points.begin(), set.points.end(),
              [](const LatticePoint& u, const LatticePoint& v) {
                  double au = detail::angle_of(u), av = detail::angle_of(v);
                  if (au != av) return au < av;
                  return u < v; // unreachable on a circle, keeps the order total
              });
    set.angles.reserve(set.points.size());
    for (const auto& p : set.points) set.angles.push_back(detail::angle_of(p));
    set.lex_order.resize(set.points.size());
    for (std::uint32_t i = 0; i < set.lex_order.size(); ++i) set.lex_order[i] = i;
    std::sort(set.lex_order.begin(), set.lex_order.end(),
              [&set](std::uint32_t i, std::uint32_t j) { return set.points[i] < set.points[j]; });
    return set;
}

inline LatticePointSet enumerate_lattice_points(std::int64_t E) {
    return enumerate_lattice_points(Energy::of(E));
}

// Sorted angles psi with xi = lambda e^{i psi}; errors on the empty set.
inline std::vector<double> point_angles(const LatticePointSet& set) {
    if (set.points.empty())
        throw std::invalid_argument("point_angles: empty lattice point set");
    return set.angles;
}

} // namespace torwave
