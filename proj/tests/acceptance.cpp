// Acceptance suite: one check per release criterion, each printing a single
// PASS/FAIL line with the measured values. Exits nonzero if any check fails.
//
// Criterion 10 shells out to the CLI named by the TORWAVE_CLI environment
// variable (ctest sets it to the built binary).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "torwave/torwave.hpp"

using namespace torwave;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// 1. Lattice enumeration ground truths and dual-route equality.
Outcome criterion_lattice() {
    const std::vector<std::pair<std::int64_t, std::size_t>> table{
        {1, 4}, {2, 4}, {5, 8}, {9, 4}, {25, 12},
        {65, 16}, {325, 24}, {1105, 32}, {4225, 36}};
    const double t0 = now_seconds();
    for (const auto& [e, w] : table) {
        const Energy en = Energy::of(e);
        const auto set = enumerate_lattice_points(en);
        if (set.size() != w)
            return {false, "E=" + std::to_string(e) + " gave W=" +
                               std::to_string(set.size()) + ", want " +
                               std::to_string(w)};
        const auto brute = lattice_points_bruteforce(e);
        if (std::set<LatticePoint>(brute.begin(), brute.end()) !=
            std::set<LatticePoint>(set.points.begin(), set.points.end()))
            return {false, "E=" + std::to_string(e) + " route mismatch"};
        if (en.admissible) {
            if (lattice_points_from_splits(en) != brute)
                return {false, "E=" + std::to_string(e) + " split-route mismatch"};
            if (static_cast<std::int64_t>(w) != expected_point_count(en))
                return {false, "E=" + std::to_string(e) + " W formula mismatch"};
        }
    }
    const double dt = now_seconds() - t0;
    if (dt >= 1.0)
        return {false, "enumeration took " + std::to_string(dt) + " s (budget 1 s)"};
    char buf[96];
    std::snprintf(buf, sizeof buf, "9 energies, dual routes equal, %.3f s", dt);
    return {true, buf};
}

// 2. Relation counts: ell=4 exhaustive law and ell=6 dual-algorithm equality.
Outcome criterion_relations() {
    const double t0 = now_seconds();
    long long checked = 0;
    for (std::int64_t e = 1; e <= 10000; e += 2) {
        const Energy en = Energy::of(e);
        if (!en.admissible) continue;
        const auto set = enumerate_lattice_points(en);
        if (set.size() == 0) continue;
        const auto c = vanishing_sums(set, 4);
        if (c.nondegenerate != 0)
            return {false, "E=" + std::to_string(e) + " has " +
                               std::to_string(c.nondegenerate) +
                               " nondegenerate 4-relations"};
        ++checked;
    }
    for (std::int64_t e : {325LL, 1105LL}) {
        const auto set = enumerate_lattice_points(e);
        const auto mitm = vanishing_sums_mitm(set, 6);
        const auto brute = vanishing_sums_bruteforce(set, 6);
        if (mitm.total_ordered != brute.total_ordered ||
            mitm.nondegenerate != brute.nondegenerate)
            return {false, "ell=6 dual counts disagree at E=" + std::to_string(e)};
    }
    const double dt = now_seconds() - t0;
    if (dt >= 120.0)
        return {false, "relations took " + std::to_string(dt) + " s (budget 120 s)"};
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "%lld admissible E <= 10^4 all rel4-free; ell=6 duals equal; %.1f s",
                  checked, dt);
    return {true, buf};
}

// 3. Nodal counting ground truths.
Outcome criterion_nodal_ground_truth() {
    for (int m = 1; m <= 5; ++m) {
        const auto g = sample_torus_grid(
            [m](double x, double) {
                return std::sqrt(2.0) * std::sin(2 * std::numbers::pi * m * x);
            },
            64 * m);
        const auto rep = count_components(g);
        if (rep.count != 2 * m)
            return {false, "strips n=" + std::to_string(m) + ": count " +
                               std::to_string(rep.count)};
        const double len = nodal_length(g);
        if (std::abs(len - 2.0 * m) > 0.01 * 2.0 * m)
            return {false, "strips n=" + std::to_string(m) + ": length " +
                               std::to_string(len)};
    }
    // cos cos sampled through an exactly antisymmetric table; the degenerate
    // saddle centers cancel exactly and bridge neither diagonal
    const auto rep = count_components(oracles::checkerboard_grid(66));
    if (rep.count != 4)
        return {false, "checkerboard count " + std::to_string(rep.count)};
    return {true, "strips 2n and lengths within 1% for n=1..5; checkerboard = 4"};
}

// 4. Union-find equals BFS flood fill on 100 seeded random grids.
Outcome criterion_dual_count() {
    for (int t = 0; t < 100; ++t) {
        SplitMix64 rng(31337 + t);
        FieldGrid g;
        g.n = 48;
        g.topology = t % 2 ? GridTopology::torus : GridTopology::box;
        g.spacing = 1.0 / g.n;
        g.values.resize(static_cast<std::size_t>(g.n) * g.n);
        for (auto& v : g.values) v = 2.0 * rng.next_double() - 1.0;
        const long long uf = count_components(g).count;
        const long long bfs = oracles::bfs_count_components(g);
        if (uf != bfs)
            return {false, "grid " + std::to_string(t) + ": union-find " +
                               std::to_string(uf) + " vs BFS " + std::to_string(bfs)};
    }
    return {true, "100 random grids, exact equality"};
}

// 5. RWM constant via Monte Carlo.
Outcome criterion_rwm_constant() {
    const double t0 = now_seconds();
    const auto res = montecarlo_nu(64, 60.0, 40, 2024);
    const double dt = now_seconds() - t0;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "estimate %.4f +- %.4f (sigma %.4f), %d samples, %.0f s",
                  res.mean, res.stderr_, consts::sigma_bs, res.samples, dt);
    if (!(res.mean >= 0.050 && res.mean <= 0.075)) return {false, buf};
    if (!(res.mean < consts::tangency_bound)) return {false, buf};
    if (!(res.mean < consts::pleijel_bound)) return {false, buf};
    if (dt >= 900.0) return {false, std::string(buf) + " (budget 900 s)"};
    return {true, buf};
}

// 6. Deterministic eigenfunction against the RWM band at E = 5^4 13^2.
Outcome criterion_deterministic_vs_rwm() {
    const auto f = uniform_eigenfunction(105625);
    const auto out = refine_until_stable(
        [&f](int n) { return synthesize_grid(f, n); }, f.energy.lambda, 4, 0.01,
        32, nodal_area_floor(105625.0));
    // ratio against the physical eigenvalue 4 pi^2 E
    const double ratio = pleijel_ratio(
        4.0 * std::numbers::pi * std::numbers::pi * 105625.0, out.report.count);
    char buf[160];
    std::snprintf(buf, sizeof buf, "N=%lld stable=%d ratio=%.4f (band 0.03..0.10)",
                  out.report.count, out.stable ? 1 : 0, ratio);
    if (!out.stable) return {false, buf};
    if (!(ratio >= 0.03 && ratio <= 0.10)) return {false, buf};
    if (!(ratio <= consts::pleijel_bound)) return {false, buf};
    return {true, buf};
}

// 7. Window approximation rate: the averaged C^1 gap drops by >= 1.5x from K=8 to K=16.
Outcome criterion_window_gap_trend() {
    const auto set = enumerate_lattice_points(105625);
    const auto f = make_eigenfunction(set.energy, uniform_coefficients(set));
    const auto p8 = partition_arcs(set, 8, 2.0);
    const auto p16 = partition_arcs(set, 16, 2.0);
    double g8 = 0, g16 = 0;
    SplitMix64 rng(515);
    for (int t = 0; t < 100; ++t) {
        const std::array<double, 2> x{rng.next_double(), rng.next_double()};
        g8 += window_gap(f, x, p8, 1);
        g16 += window_gap(f, x, p16, 1);
    }
    g8 /= 100;
    g16 /= 100;
    char buf[128];
    std::snprintf(buf, sizeof buf, "mean C^1 gap K=8: %.4f, K=16: %.4f, ratio %.3f",
                  g8, g16, g16 / g8);
    if (!(g16 <= g8 / 1.5)) return {false, buf};
    return {true, buf};
}

// 8. epsilon-Gaussian surrogate: Gaussian controls pass, E=5 windows fail.
Outcome criterion_gaussianity() {
    const auto spec = RwmSpec::equispaced(4, 2.0, 9001);
    const auto control = epsilon_gaussian_stat(sample_gaussian_controls(spec, 10000),
                                               spec.pairing);
    const auto set = enumerate_lattice_points(5);
    const auto f = make_eigenfunction(set.energy, uniform_coefficients(set));
    const auto part = partition_arcs(set, 4, 1.0);
    std::vector<int> pairing(4);
    for (int k = 0; k < 4; ++k) pairing[k] = part.antipodal_arc(k);
    const auto windows = epsilon_gaussian_stat(
        sample_window_coefficients(f, part, 10000, 9002), pairing);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "control (mom %.4f, ks %.4f) vs E=5 windows (mom %.4f, ks %.4f)",
                  control.moment_dev, control.ks_dev, windows.moment_dev,
                  windows.ks_dev);
    if (!(control.moment_dev < 0.02 && control.ks_dev < 0.02 && control.pass()))
        return {false, buf};
    if (windows.pass()) return {false, buf};
    return {true, buf};
}

// 9. Discrepancy: exact value on equispaced atoms, sweep equals brute force.
Outcome criterion_discrepancy() {
    for (int w : {4, 8, 16, 60}) {
        std::vector<double> angles;
        for (int k = 0; k < w; ++k)
            angles.push_back(2.0 * std::numbers::pi * k / w);
        if (std::abs(discrepancy_sup(angles) - 1.0) > 1e-12)
            return {false, "equispaced W=" + std::to_string(w) + " not exactly 1"};
    }
    for (std::int64_t e : {5LL, 25LL, 65LL, 325LL, 1105LL, 4225LL, 105625LL}) {
        const auto set = enumerate_lattice_points(e);
        const double sweep = discrepancy_sup(set.angles);
        const double brute = oracles::brute_discrepancy(set.angles);
        if (std::abs(sweep - brute) > 1e-9)
            return {false, "lattice E=" + std::to_string(e) + " sweep != brute"};
    }
    SplitMix64 rng(99);
    for (int t = 0; t < 40; ++t) {
        const int w = 1 + static_cast<int>(rng.next_u64() % 200);
        std::vector<double> angles;
        for (int i = 0; i < w; ++i)
            angles.push_back(2.0 * std::numbers::pi * rng.next_double());
        if (std::abs(discrepancy_sup(angles) -
                     oracles::brute_discrepancy(angles)) > 1e-9)
            return {false, "random set " + std::to_string(t) + " sweep != brute"};
    }
    return {true, "equispaced exactly 1; sweep == brute on lattice and 40 random sets (W <= 200)"};
}

// 10. CLI reproducibility: identical seeds give identical bytes.
Outcome criterion_reproducibility() {
    const char* cli = std::getenv("TORWAVE_CLI");
    if (!cli || !fs::exists(cli))
        return {false, "TORWAVE_CLI not set or missing (run via ctest)"};
    const fs::path base = fs::temp_directory_path() / "torwave-acceptance";
    std::error_code ec;
    fs::remove_all(base, ec);
    fs::create_directories(base);

    const fs::path cfg_path = base / "sweep.cfg";
    {
        std::ofstream cfg(cfg_path);
        cfg << "family = general-coefficients\n"
            << "energies = 65, 325\n"
            << "coefficients = random-phase\n"
            << "K = 4\n"
            << "R = 2\n"
            << "seed = 5\n"
            << "window_samples = 10000\n"
            << "nodal_max_spw = 8\n"
            << "render = 1\n"
            << "out = " << (base / "sweep").string() << "\n";
    }
    auto run = [&](const std::string& cmd) {
        const std::string full = std::string(cli) + " " + cmd + " > /dev/null 2>&1";
        return std::system(full.c_str()) == 0;
    };
    const std::string rwm_cmd =
        "rwm --K 32 --R 20 --samples 20 --seed 7 --svg --out " +
        (base / "rwm").string();
    const std::string sweep_cmd = "sweep --config " + cfg_path.string();

    std::map<std::string, std::string> first;
    for (int round = 0; round < 2; ++round) {
        fs::remove_all(base / "rwm", ec);
        fs::remove_all(base / "sweep", ec);
        if (!run(rwm_cmd)) return {false, "rwm run failed"};
        if (!run(sweep_cmd)) return {false, "sweep run failed"};
        std::map<std::string, std::string> snapshot;
        for (const auto& dir : {base / "rwm", base / "sweep"}) {
            for (const auto& entry : fs::recursive_directory_iterator(dir)) {
                if (!entry.is_regular_file()) continue;
                snapshot[entry.path().string()] = read_file(entry.path().string());
            }
        }
        if (snapshot.empty()) return {false, "no output files produced"};
        if (round == 0) {
            first = std::move(snapshot);
        } else {
            if (snapshot.size() != first.size())
                return {false, "file sets differ between runs"};
            for (const auto& [path, bytes] : snapshot) {
                auto it = first.find(path);
                if (it == first.end() || it->second != bytes)
                    return {false, "bytes differ: " + path};
            }
            char buf[96];
            std::snprintf(buf, sizeof buf,
                          "%zu files (CSV/JSON/SVG) bit-identical across reruns",
                          snapshot.size());
            return {true, buf};
        }
    }
    return {false, "unreachable"};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"lattice enumeration (dual routes, W table)", criterion_lattice},
        {"relations (ell=4 law to 10^4, ell=6 duals)", criterion_relations},
        {"nodal ground truths (strips, checkerboard)", criterion_nodal_ground_truth},
        {"dual-algorithm component counts", criterion_dual_count},
        {"RWM constant (K=64, R=60, 40 samples)", criterion_rwm_constant},
        {"deterministic eigenfunction vs RWM (E=105625)", criterion_deterministic_vs_rwm},
        {"window gap trend (K=8 -> K=16)", criterion_window_gap_trend},
        {"epsilon-Gaussian surrogate (control vs E=5)", criterion_gaussianity},
        {"discrepancy (exact value, sweep == brute)", criterion_discrepancy},
        {"CLI reproducibility (bit-identical outputs)", criterion_reproducibility},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%zu/10] %s  %s -- %s\n", i + 1, out.pass ? "PASS" : "FAIL",
                    criteria[i].first.c_str(), out.detail.c_str());
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    std::printf("ACCEPTANCE: %zu/10 criteria passed\n", criteria.size() - failures);
    return failures == 0 ? 0 : 1;
}
