#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "oracles.hpp"
#include "torwave/fourier.hpp"
#include "torwave/gaussian.hpp"
#include "torwave/nodal.hpp"
#include "torwave/rng.hpp"
#include "torwave/synthesis.hpp"

using namespace torwave;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

FieldGrid strip_grid(int n_strips_half, int n) {
    // sqrt(2) sin(2 pi m x1): 2m vertical nodal circles, 2m domains
    return sample_torus_grid(
        [n_strips_half](double x, double) {
            return std::sqrt(2.0) * std::sin(kTwoPi * n_strips_half * x);
        },
        n);
}

FieldGrid random_grid(std::uint64_t seed, int n, GridTopology topo) {
    SplitMix64 rng(seed);
    FieldGrid g;
    g.n = n;
    g.topology = topo;
    g.spacing = 1.0 / n;
    g.values.resize(static_cast<std::size_t>(n) * n);
    for (auto& v : g.values) v = 2.0 * rng.next_double() - 1.0;
    return g;
}
} // namespace

TEST_CASE("count_components: sine strips") {
    for (int m = 1; m <= 5; ++m) {
        const auto g = strip_grid(m, 64 * m);
        CHECK(count_components(g).count == 2 * m);
    }
    // resolutions that hit the zeros exactly keep the count
    CHECK(count_components(strip_grid(3, 66)).count == 6);
    CHECK(count_components(strip_grid(3, 60)).count == 6);
}

TEST_CASE("count_components: checkerboard eigenfunction has 4 domains") {
    // cos(2 pi x1) cos(2 pi x2): zero set is the four circles x_i in {1/4, 3/4};
    // the crossings are degenerate saddles, bridged toward neither side. The
    // sample table carries the exact antisymmetry of the function, so the
    // degenerate centers cancel exactly (libm cosines alone leave ~1e-17
    // residues that would bridge a diagonal and merge two quadrants).
    CHECK(count_components(oracles::checkerboard_grid(66)).count == 4);
    CHECK(count_components(oracles::checkerboard_grid(34)).count == 4);
}

TEST_CASE("count_components: all one sign on the torus is a single domain") {
    const auto g = sample_torus_grid([](double, double) { return 1.0; }, 16);
    CHECK(count_components(g).count == 1);
    const auto h = sample_torus_grid([](double, double) { return -0.5; }, 16);
    CHECK(count_components(h).count == 1);
}

TEST_CASE("count_components: union-find equals BFS flood fill on random grids") {
    for (int t = 0; t < 100; ++t) {
        const auto topo = t % 2 ? GridTopology::torus : GridTopology::box;
        const auto g = random_grid(1000 + t, 48, topo);
        CHECK(count_components(g).count == oracles::bfs_count_components(g));
    }
}

TEST_CASE("count_components: equality with BFS on smooth random-wave grids") {
    const auto set = enumerate_lattice_points(325);
    const auto part = partition_arcs(set, 8, 2.0);
    const auto spec = RwmSpec::toral(set, part, 44);
    for (int s = 0; s < 10; ++s) {
        const auto grid = synthesize_spectrum_grid(
            toral_spectrum(spec, sample_realization(spec, s)), 96);
        CHECK(count_components(grid).count == oracles::bfs_count_components(grid));
    }
}

TEST_CASE("count_components: union-find equals BFS on integer grids with zeros") {
    // three-valued grids hit the exact-zero sample rule and the exactly
    // degenerate saddle centers in both implementations
    for (int t = 0; t < 60; ++t) {
        SplitMix64 rng(777 + t);
        FieldGrid g;
        g.n = 24;
        g.topology = t % 2 ? GridTopology::torus : GridTopology::box;
        g.spacing = 1.0 / g.n;
        g.values.resize(static_cast<std::size_t>(g.n) * g.n);
        for (auto& v : g.values)
            v = static_cast<double>(static_cast<int>(rng.next_u64() % 3)) - 1.0;
        CHECK(count_components(g).count == oracles::bfs_count_components(g));
    }
}

TEST_CASE("count_components and length: diagonal waves") {
    // sin(2 pi (x + y)): two diagonal strips, zero set is two closed
    // geodesics of length sqrt 2 each
    const auto g = sample_torus_grid(
        [](double x, double y) { return std::sin(kTwoPi * (x + y)); }, 128);
    CHECK(count_components(g).count == 2);
    CHECK(nodal_length(g) ==
          Catch::Approx(2.0 * std::sqrt(2.0)).epsilon(0.01));
}

TEST_CASE("count_components: sign flip symmetry") {
    for (int t = 0; t < 10; ++t) {
        auto g = random_grid(50 + t, 32, GridTopology::torus);
        const long long base = count_components(g).count;
        for (auto& v : g.values) v = -v;
        // zeros flip phase, but these grids have none
        CHECK(count_components(g).count == base);
    }
}

TEST_CASE("count_components: invariant under shifts and square symmetries") {
    const auto g = random_grid(77, 24, GridTopology::torus);
    const long long base = count_components(g).count;
    // cyclic shift
    FieldGrid shifted = g;
    for (int i = 0; i < 24; ++i)
        for (int j = 0; j < 24; ++j)
            shifted.at(i, j) = g.at((i + 7) % 24, (j + 11) % 24);
    CHECK(count_components(shifted).count == base);
    // transpose
    FieldGrid transposed = g;
    for (int i = 0; i < 24; ++i)
        for (int j = 0; j < 24; ++j) transposed.at(i, j) = g.at(j, i);
    CHECK(count_components(transposed).count == base);
    // reflection
    FieldGrid mirrored = g;
    for (int i = 0; i < 24; ++i)
        for (int j = 0; j < 24; ++j) mirrored.at(i, j) = g.at(23 - i, j);
    CHECK(count_components(mirrored).count == base);
}

TEST_CASE("nodal_length: sine strips have length 2m within 1%") {
    for (int m = 1; m <= 5; ++m) {
        const auto g = strip_grid(m, 64 * m);
        CHECK(nodal_length(g) == Catch::Approx(2.0 * m).epsilon(0.01));
    }
}

TEST_CASE("nodal_length: stable under refinement for smooth fields") {
    const auto f = uniform_eigenfunction(25);
    const double l1 = nodal_length(synthesize_grid(f, 320));
    const double l2 = nodal_length(synthesize_grid(f, 640));
    CHECK(std::abs(l2 - l1) / l1 < 0.01);
}

TEST_CASE("nodal_length: RWM mean length scales linearly in lambda") {
    // Kac-Rice for these eigenfunction ensembles: E[length] = pi lambda / sqrt 2.
    const double kr = std::numbers::pi / std::sqrt(2.0);
    for (std::int64_t e : {325LL, 1105LL}) {
        const auto set = enumerate_lattice_points(e);
        const auto part = partition_arcs(set, 8, 2.0);
        const auto spec = RwmSpec::toral(set, part, 91);
        double mean = 0;
        const int samples = 12;
        const int n = static_cast<int>(std::ceil(8 * set.energy.lambda));
        for (int s = 0; s < samples; ++s)
            mean += nodal_length(synthesize_spectrum_grid(
                toral_spectrum(spec, sample_realization(spec, s)), n));
        mean /= samples;
        CHECK(mean / set.energy.lambda == Catch::Approx(kr).epsilon(0.10));
    }
}

TEST_CASE("count_in_box: strips crossing the box are boundary-touching") {
    auto strips = [](double x, double) {
        return std::sqrt(2.0) * std::sin(6 * std::numbers::pi * x);
    };
    const auto rep = count_in_box(strips, {0.5, 0.5}, 0.5, 65, 3.0);
    CHECK(rep.count_in_box == 0);
    CHECK(rep.boundary_touching >= 1);
}

TEST_CASE("count_in_box: a bump strictly inside counts once") {
    auto bump = [](double x, double y) {
        const double r2 = (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5);
        return 0.02 - r2;
    };
    const auto rep = count_in_box(bump, {0.5, 0.5}, 1.0, 129, 8.0);
    CHECK(rep.count_in_box == 1);      // the positive disk
    CHECK(rep.boundary_touching == 1); // the negative surround
}

TEST_CASE("count_in_box: rejects resolutions under 4 samples per wavelength") {
    auto f = [](double x, double) { return std::sin(kTwoPi * 8 * x); };
    CHECK_THROWS_AS(count_in_box(f, {0.5, 0.5}, 1.0, 16, 8.0), ResolutionError);
    CHECK_NOTHROW(count_in_box(f, {0.5, 0.5}, 1.0, 65, 8.0));
}

TEST_CASE("count_in_box: contained components persist when the box grows") {
    const auto spec = RwmSpec::equispaced(32, 20.0, 12);
    const PlaneWaveField wave(spec, sample_realization(spec, 0));
    auto field = [&wave](double x, double y) { return wave.value(x - 0.5, y - 0.5); };
    // both grids share the sample lattice on the overlap (spacing 1/400)
    const auto small = count_in_box(field, {0.5, 0.5}, 0.5, 201, 20.0);
    const auto large = count_in_box(field, {0.5, 0.5}, 0.75, 301, 20.0);
    CHECK(large.count_in_box >= small.count_in_box);
}

TEST_CASE("count_in_box: box count is at most the torus count of the same field") {
    const auto set = enumerate_lattice_points(325);
    const auto part = partition_arcs(set, 8, 2.0);
    const auto spec = RwmSpec::toral(set, part, 5);
    const auto spectrum = toral_spectrum(spec, sample_realization(spec, 2));
    const auto torus_grid = synthesize_spectrum_grid(spectrum, 160);
    const long long torus_count = count_components(torus_grid).count;
    // evaluate the same field on a half-size box
    auto eval = [&spectrum](double x, double y) {
        std::complex<double> s = 0;
        for (const auto& [pt, a] : spectrum)
            s += a * std::polar(1.0, kTwoPi * (pt.x * x + pt.y * y));
        return s.real();
    };
    const auto box = count_in_box(eval, {0.5, 0.5}, 0.5, 160, set.energy.lambda);
    CHECK(box.count_in_box <= torus_count);
}

TEST_CASE("refine_until_stable: strips settle immediately") {
    auto grid_at = [](int n) { return strip_grid(3, n); };
    const auto out = refine_until_stable(grid_at, 3.0, 4, 0.01, 64);
    CHECK(out.stable);
    CHECK(out.report.count == 6);
    CHECK(out.ladder.size() == 2);
    CHECK(out.ladder.front().spw == 4);
}

TEST_CASE("refine_until_stable: E=325 ladder stabilizes and reports rungs") {
    const auto f = uniform_eigenfunction(325);
    const auto out = refine_until_stable(
        [&f](int n) { return synthesize_grid(f, n); }, f.energy.lambda, 4, 0.01,
        64, nodal_area_floor(325.0));
    CHECK(out.stable);
    CHECK(out.ladder.size() >= 2);
    CHECK(out.report.count > 50);
    CHECK(out.report.small_component_warnings == 0);
}

TEST_CASE("refine_until_stable: ladder exhaustion flags instability") {
    // a sampler that alternates between 2-strip and 6-strip fields across
    // rungs can never produce two agreeing counts
    auto grid_at = [](int n) {
        const int waves = (n / 12) % 2 == 0 ? 3 : 1;
        return sample_torus_grid(
            [waves](double x, double) {
                return std::sin(kTwoPi * waves * x + 0.4);
            },
            n);
    };
    const auto out = refine_until_stable(grid_at, 3.0, 4, 0.0, 8);
    CHECK_FALSE(out.stable);
    CHECK(out.ladder.size() == 2);
}

TEST_CASE("faber-krahn screen: undersized components trigger warnings") {
    // a single tiny positive dot in a negative sea
    FieldGrid g;
    g.n = 64;
    g.topology = GridTopology::torus;
    g.spacing = 1.0 / 64;
    g.values.assign(64 * 64, -1.0);
    g.at(10, 10) = 1.0;
    const auto rep = count_components(g, /*min_area=*/10.0 / (64.0 * 64.0));
    CHECK(rep.count == 2);
    CHECK(rep.small_component_warnings == 1);
}

TEST_CASE("count_components: rejects non-finite values") {
    FieldGrid g;
    g.n = 4;
    g.topology = GridTopology::torus;
    g.spacing = 0.25;
    g.values.assign(16, 1.0);
    g.values[5] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(count_components(g), std::invalid_argument);
}

TEST_CASE("pleijel_ratio: closed forms and flags") {
    // E = n^2, f = sqrt 2 sin(2 pi n x): ratio 8 pi / n in the lattice-E form
    CHECK(pleijel_ratio(100.0 * 100.0, 200) ==
          Catch::Approx(8 * std::numbers::pi / 100).margin(1e-12));
    CHECK(pleijel_ratio(25.0, 0) == 0.0);
    CHECK_THROWS_AS(pleijel_ratio(0.0, 3), std::invalid_argument);
}
