#pragma once

// Experiment drivers: the Monte Carlo estimate of the nodal-domain density
// of the Gaussian ensemble, and the per-energy sweep that tabulates the
// equidistribution, relation, Gaussianity and nodal statistics side by side.
// All outputs are deterministic functions of (config, seed).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "torwave/equidist.hpp"
#include "torwave/errors.hpp"
#include "torwave/fourier.hpp"
#include "torwave/gaussian.hpp"
#include "torwave/lattice.hpp"
#include "torwave/nodal.hpp"
#include "torwave/relations.hpp"
#include "torwave/svg.hpp"
#include "torwave/synthesis.hpp"

namespace torwave {

inline constexpr const char* kVersion = "0.1.0";

namespace consts {

inline const double sigma_bs = (3.0 * std::sqrt(3.0) - 5.0) / std::numbers::pi;
inline const double nu_bar = sigma_bs / (4.0 * std::numbers::pi);
inline const double j0_bessel = 2.4048255576957728;
inline const double pleijel_bound = (2.0 / j0_bessel) * (2.0 / j0_bessel); // ~0.691
inline const double tangency_bound = 1.0 / (std::sqrt(2.0) * std::numbers::pi); // ~0.225

} // namespace consts

struct ResolutionPolicy {
    int m0 = 4;        // starting samples per wavelength
    int max_spw = 16;  // ladder cap
    double length_tol = 0.01;
};

struct MonteCarloResult {
    int K = 0;
    double R = 0.0;
    int samples = 0;
    std::uint64_t seed = 0;
    double mean = 0.0;    // mean of 4 pi N_contained / (2 pi R)^2
    double stderr_ = 0.0; // standard error of the mean
    double mean_contained = 0.0;
    double mean_boundary = 0.0;
    int unstable_samples = 0;
    std::vector<double> per_sample;
    std::vector<long long> contained;
    std::vector<long long> boundary;
};

namespace detail {

inline void validate_mc_params(int K, double R, int samples) {
    if (K < 32 || K % 2 != 0)
        throw std::invalid_argument("montecarlo_nu: K must be even and >= 32");
    if (!(R >= 20.0))
        throw std::invalid_argument("montecarlo_nu: R must be >= 20");
    if (samples < 20)
        throw std::invalid_argument("montecarlo_nu: need at least 20 samples");
}

} // namespace detail

// Monte Carlo body shared by the direction variants; the spec's directions
// must have modulus R. Per sample, the components contained in the open unit
// box are counted on a resolution ladder and the ratio
// 4 pi N / (2 pi R)^2 = N / (pi R^2) is averaged. The denominator is the
// squared physical wavenumber of e(zeta . y) with |zeta| = R, the
// normalization under which the limiting ratio is the percolation constant.
inline MonteCarloResult montecarlo_nu_spec(const RwmSpec& spec, double R,
                                           int samples,
                                           const ResolutionPolicy& policy = {}) {
    spec.validate();
    const int K = spec.K();
    detail::validate_mc_params(K, R, samples);
    const std::uint64_t seed = spec.seed;
    MonteCarloResult res;
    res.K = K;
    res.R = R;
    res.samples = samples;
    res.seed = seed;
    for (int s = 0; s < samples; ++s) {
        const GaussianRealization real = sample_realization(spec, static_cast<std::uint64_t>(s));
        const PlaneWaveField field(spec, real);
        const RefineOutcome outcome = refine_until_stable(
            [&field](int n) { return field.box_grid(n + 1); }, R, policy.m0,
            policy.length_tol, policy.max_spw);
        if (!outcome.stable) ++res.unstable_samples;
        res.contained.push_back(outcome.report.count_in_box);
        res.boundary.push_back(outcome.report.boundary_touching);
        res.per_sample.push_back(static_cast<double>(outcome.report.count_in_box) /
                                 (std::numbers::pi * R * R));
    }
    double sum = 0;
    for (double v : res.per_sample) sum += v;
    res.mean = sum / samples;
    double var = 0;
    for (double v : res.per_sample) var += (v - res.mean) * (v - res.mean);
    res.stderr_ = samples > 1 ? std::sqrt(var / (samples - 1) / samples) : 0.0;
    double c = 0, b = 0;
    for (auto v : res.contained) c += static_cast<double>(v);
    for (auto v : res.boundary) b += static_cast<double>(v);
    res.mean_contained = c / samples;
    res.mean_boundary = b / samples;
    return res;
}

// Equispaced directions: the exact uniform limiting measure on the circle.
inline MonteCarloResult montecarlo_nu(int K, double R, int samples,
                                      std::uint64_t seed,
                                      const ResolutionPolicy& policy = {}) {
    detail::validate_mc_params(K, R, samples);
    return montecarlo_nu_spec(RwmSpec::equispaced(K, R, seed), R, samples, policy);
}

// Toral variant: directions are the scaled arc representatives
// (R / lambda) xi^(k) of the lattice point set of E, so the ensemble carries
// the actual arithmetic angles instead of the uniform limit. Requires every
// arc to be populated (roughly K <= W / 2).
inline MonteCarloResult montecarlo_nu_toral(std::int64_t E, int K, double R,
                                            int samples, std::uint64_t seed,
                                            const ResolutionPolicy& policy = {}) {
    detail::validate_mc_params(K, R, samples);
    const LatticePointSet set = enumerate_lattice_points(E);
    const ArcPartition part = partition_arcs(set, K, R);
    RwmSpec spec;
    spec.seed = seed;
    spec.scale = R;
    spec.directions.resize(K);
    spec.pairing.resize(K);
    for (int k = 0; k < K; ++k) {
        if (!part.representative[k])
            throw std::invalid_argument(
                "montecarlo_nu_toral: empty arc (K too large for W = " +
                std::to_string(set.size()) + ")");
        spec.directions[k] = part.zeta[k];
        spec.pairing[k] = part.antipodal_arc(k);
    }
    spec.validate();
    return montecarlo_nu_spec(spec, R, samples, policy);
}

enum class ExperimentFamily { fixed_primes, sampled_e, general_coefficients };

inline std::string family_name(ExperimentFamily f) {
    switch (f) {
        case ExperimentFamily::fixed_primes: return "fixed-primes";
        case ExperimentFamily::sampled_e: return "sampled-E";
        case ExperimentFamily::general_coefficients: return "general-coefficients";
    }
    return "?";
}

struct ExperimentConfig {
    ExperimentFamily family = ExperimentFamily::fixed_primes;
    std::vector<std::int64_t> primes = {5, 13}; // fixed-primes
    int exponent_max = 3;                       // fixed-primes: j = 1..exponent_max
    std::vector<std::int64_t> energies;         // explicit E list (other families)
    int sample_count = 10;                      // sampled-E
    std::int64_t energy_limit = 100000;         // sampled-E
    int K = 8;
    double R = 2.0;
    std::uint64_t seed = 1;
    int window_samples = 10000;
    ResolutionPolicy nodal;
    std::vector<int> rel_ells = {4};
    RelationBudget budget;
    std::string coefficients = "uniform"; // uniform | random-phase
    std::string out = "sweep-out";
    bool render = false;

    std::map<std::string, std::string> as_flat_map() const {
        std::map<std::string, std::string> m;
        auto join = [](const auto& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i)
                s += (i ? "," : "") + std::to_string(v[i]);
            return s;
        };
        char rbuf[32];
        std::snprintf(rbuf, sizeof rbuf, "%.17g", R);
        m["family"] = family_name(family);
        m["primes"] = join(primes);
        m["exponent_max"] = std::to_string(exponent_max);
        m["energies"] = join(energies);
        m["sample_count"] = std::to_string(sample_count);
        m["energy_limit"] = std::to_string(energy_limit);
        m["K"] = std::to_string(K);
        m["R"] = rbuf;
        m["seed"] = std::to_string(seed);
        m["window_samples"] = std::to_string(window_samples);
        m["nodal_m0"] = std::to_string(nodal.m0);
        m["nodal_max_spw"] = std::to_string(nodal.max_spw);
        std::snprintf(rbuf, sizeof rbuf, "%.17g", nodal.length_tol);
        m["length_tol"] = rbuf;
        m["rel_ells"] = join(rel_ells);
        m["rel_budget"] = std::to_string(budget.max_entries);
        m["coefficients"] = coefficients;
        m["out"] = out;
        m["render"] = render ? "1" : "0";
        return m;
    }
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            if (!cur.empty()) parts.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            cur += ch;
        }
    }
    if (!cur.empty()) parts.push_back(cur);
    return parts;
}

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace detail

// Flat key = value text; '#' starts a comment.
inline ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        auto as_i64_list = [&] {
            std::vector<std::int64_t> v;
            for (const auto& p : detail::split_list(val)) v.push_back(std::stoll(p));
            return v;
        };
        if (key == "family") {
            if (val == "fixed-primes") cfg.family = ExperimentFamily::fixed_primes;
            else if (val == "sampled-E") cfg.family = ExperimentFamily::sampled_e;
            else if (val == "general-coefficients")
                cfg.family = ExperimentFamily::general_coefficients;
            else throw std::invalid_argument("config: unknown family " + val);
        } else if (key == "primes") cfg.primes = as_i64_list();
        else if (key == "exponent_max") cfg.exponent_max = std::stoi(val);
        else if (key == "energies") cfg.energies = as_i64_list();
        else if (key == "sample_count") cfg.sample_count = std::stoi(val);
        else if (key == "energy_limit") cfg.energy_limit = std::stoll(val);
        else if (key == "K") cfg.K = std::stoi(val);
        else if (key == "R") cfg.R = std::stod(val);
        else if (key == "seed") cfg.seed = std::stoull(val);
        else if (key == "window_samples") cfg.window_samples = std::stoi(val);
        else if (key == "nodal_m0") cfg.nodal.m0 = std::stoi(val);
        else if (key == "nodal_max_spw") cfg.nodal.max_spw = std::stoi(val);
        else if (key == "length_tol") cfg.nodal.length_tol = std::stod(val);
        else if (key == "rel_ells") {
            cfg.rel_ells.clear();
            for (const auto& p : detail::split_list(val)) cfg.rel_ells.push_back(std::stoi(p));
        } else if (key == "rel_budget") {
            cfg.budget.max_entries = std::stoull(val);
            cfg.budget.max_matches = std::stoull(val);
        } else if (key == "coefficients") cfg.coefficients = val;
        else if (key == "out") cfg.out = val;
        else if (key == "render") cfg.render = (val == "1" || val == "true");
        else throw std::invalid_argument("config: unknown key " + key);
    }
    return cfg;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("parse_config_file: cannot open " + path);
    return parse_config(f);
}

// FNV-1a over the canonical (sorted, normalized) key = value rendering.
// The output directory is not part of the identity of an experiment.
inline std::string config_hash(const ExperimentConfig& cfg) {
    std::uint64_t h = 1469598103934665603ull;
    auto flat = cfg.as_flat_map();
    flat.erase("out");
    for (const auto& [k, v] : flat) {
        for (char c : k + "=" + v + "\n") {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// Admissible energies below the limit, ascending.
inline std::vector<std::int64_t> admissible_energies_up_to(std::int64_t limit) {
    std::vector<std::int64_t> out;
    for (std::int64_t e = 1; e <= limit; e += 2)
        if (Energy::of(e).admissible) out.push_back(e);
    return out;
}

inline std::vector<std::int64_t> energies_for(const ExperimentConfig& cfg) {
    std::vector<std::int64_t> list;
    switch (cfg.family) {
        case ExperimentFamily::fixed_primes: {
            for (int j = 1; j <= cfg.exponent_max; ++j) {
                std::int64_t e = 1;
                for (std::int64_t p : cfg.primes)
                    for (int t = 0; t < j; ++t) e *= p;
                list.push_back(e);
            }
            break;
        }
        case ExperimentFamily::sampled_e: {
            if (!cfg.energies.empty()) {
                list = cfg.energies;
                break;
            }
            std::vector<std::int64_t> pool = admissible_energies_up_to(cfg.energy_limit);
            // Seeded Fisher-Yates; the draw is part of the reproducible run.
            SplitMix64 rng(cfg.seed, 0x5a3c0ffeeull);
            for (std::size_t i = pool.size(); i > 1; --i)
                std::swap(pool[i - 1], pool[rng.next_u64() % i]);
            const std::size_t take =
                std::min<std::size_t>(pool.size(), static_cast<std::size_t>(cfg.sample_count));
            list.assign(pool.begin(), pool.begin() + take);
            break;
        }
        case ExperimentFamily::general_coefficients:
            list = cfg.energies;
            break;
    }
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    for (std::int64_t e : list)
        if (!Energy::of(e).admissible)
            throw std::invalid_argument("run_sweep: non-admissible energy " + std::to_string(e) +
                                        " in family run");
    return list;
}

struct SweepRow {
    std::int64_t E = 0;
    std::int64_t W = 0;
    std::string family;
    double delta = 0, delta_over_w = 0, eps1 = 0;
    double spectral_gap = 0; // worst low-order exponential sum of rho_E
    std::map<int, RelationCount> relations;
    double moment_dev = 0, ks_dev = 0;
    bool gaussian_pass = false;
    long long nodal_count = 0;
    double nodal_length_ = 0;
    bool nodal_stable = false;
    double pleijel = 0;
    std::string status = "ok"; // per-row partial failures land here

    void record_failure(const std::string& what) {
        if (status == "ok") status = what;
        else status += "; " + what;
    }
};

struct SweepResult {
    ExperimentConfig config;
    std::string hash;
    std::vector<SweepRow> rows;
    std::vector<std::string> files;
};

inline SweepRow sweep_row(const ExperimentConfig& cfg, std::int64_t E) {
    SweepRow row;
    row.E = E;
    row.family = family_name(cfg.family);
    const LatticePointSet set = enumerate_lattice_points(E);
    row.W = static_cast<std::int64_t>(set.size());
    row.delta = discrepancy(set).delta;
    row.delta_over_w = row.delta / static_cast<double>(set.size());

    FourierCoefficients coeffs =
        (cfg.family == ExperimentFamily::general_coefficients ||
         cfg.coefficients == "random-phase")
            ? random_phase_coefficients(set, cfg.seed, static_cast<std::uint64_t>(E))
            : uniform_coefficients(set);
    const ToralEigenfunction f = make_eigenfunction(set.energy, std::move(coeffs));
    row.spectral_gap = uniformity_gap(spectral_measure(f.coeffs), 8);

    try {
        const ArcPartition part = partition_arcs(set, cfg.K, cfg.R);
        row.eps1 = part.epsilon1;
        const auto samples =
            sample_window_coefficients(f, part, cfg.window_samples, cfg.seed);
        const GaussianityReport g = epsilon_gaussian_stat(samples, [&] {
            std::vector<int> pairing(cfg.K);
            for (int k = 0; k < cfg.K; ++k) pairing[k] = part.antipodal_arc(k);
            return pairing;
        }());
        row.moment_dev = g.moment_dev;
        row.ks_dev = g.ks_dev;
        row.gaussian_pass = g.pass();
    } catch (const std::exception& e) {
        row.record_failure(std::string("gaussianity: ") + e.what());
    }

    for (int ell : cfg.rel_ells) {
        try {
            row.relations[ell] = vanishing_sums(set, ell, cfg.budget);
        } catch (const BudgetError& e) {
            row.record_failure(std::string("relations: ") + e.what());
        }
    }

    try {
        const RefineOutcome out = refine_until_stable(
            [&f](int n) { return synthesize_grid(f, n); }, set.energy.lambda,
            cfg.nodal.m0, cfg.nodal.length_tol, cfg.nodal.max_spw,
            nodal_area_floor(static_cast<double>(E)));
        row.nodal_count = out.report.count;
        row.nodal_length_ = out.report.length;
        row.nodal_stable = out.stable;
        // Ratio against the physical eigenvalue 4 pi^2 E of e(x . xi); this
        // is the normalization whose RWM limit is sigma.
        row.pleijel = pleijel_ratio(4.0 * std::numbers::pi * std::numbers::pi *
                                        static_cast<double>(E),
                                    out.report.count);
    } catch (const std::exception& e) {
        row.record_failure(std::string("nodal: ") + e.what());
    }
    return row;
}

inline std::string sweep_csv_header() {
    return "E,W,family,delta,delta_over_W,eps1,spectral_gap,"
           "rel4_total,rel4_nondeg,rel6_total,rel6_nondeg,"
           "moment_dev,ks_dev,gaussian_pass,"
           "nodal_count,nodal_length,nodal_stable,pleijel_ratio,status,"
           "config_hash,seed";
}

inline std::string sweep_csv_row(const SweepRow& row, const std::string& hash,
                                 std::uint64_t seed) {
    auto fmt = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    auto rel = [&row](int ell) -> std::pair<std::string, std::string> {
        auto it = row.relations.find(ell);
        if (it == row.relations.end()) return {"", ""};
        return {std::to_string(it->second.total_ordered),
                std::to_string(it->second.nondegenerate)};
    };
    const auto [r4t, r4n] = rel(4);
    const auto [r6t, r6n] = rel(6);
    std::string status = row.status; // keep the CSV structure intact
    for (char& c : status)
        if (c == ',' || c == '\n') c = ';';
    std::ostringstream os;
    os << row.E << ',' << row.W << ',' << row.family << ',' << fmt(row.delta) << ','
       << fmt(row.delta_over_w) << ',' << fmt(row.eps1) << ','
       << fmt(row.spectral_gap) << ',' << r4t << ',' << r4n
       << ',' << r6t << ',' << r6n << ',' << fmt(row.moment_dev) << ','
       << fmt(row.ks_dev) << ',' << (row.gaussian_pass ? 1 : 0) << ','
       << row.nodal_count << ',' << fmt(row.nodal_length_) << ','
       << (row.nodal_stable ? 1 : 0) << ',' << fmt(row.pleijel) << ',' << status
       << ',' << hash << ',' << seed;
    return os.str();
}

inline SweepResult run_sweep(const ExperimentConfig& cfg) {
    SweepResult result;
    result.config = cfg;
    result.hash = config_hash(cfg);
    for (std::int64_t E : energies_for(cfg)) // ascending
        result.rows.push_back(sweep_row(cfg, E));

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    if (ec) throw IoError("run_sweep: cannot create output directory " + cfg.out);

    const std::string csv_path = cfg.out + "/sweep.csv";
    {
        std::ofstream csv(csv_path, std::ios::binary);
        if (!csv) throw IoError("run_sweep: cannot open " + csv_path);
        csv << sweep_csv_header() << '\n';
        for (const auto& row : result.rows)
            csv << sweep_csv_row(row, result.hash, cfg.seed) << '\n';
        if (!csv) throw IoError("run_sweep: write failed for " + csv_path);
    }
    result.files.push_back("sweep.csv");

    if (cfg.render) {
        for (const auto& row : result.rows) {
            const LatticePointSet set = enumerate_lattice_points(row.E);
            FourierCoefficients coeffs =
                (cfg.family == ExperimentFamily::general_coefficients ||
                 cfg.coefficients == "random-phase")
                    ? random_phase_coefficients(set, cfg.seed, static_cast<std::uint64_t>(row.E))
                    : uniform_coefficients(set);
            const ToralEigenfunction f = make_eigenfunction(set.energy, std::move(coeffs));
            const int n = static_cast<int>(std::ceil(cfg.nodal.m0 * set.energy.lambda));
            const std::string name = "grid_" + std::to_string(row.E) + ".svg";
            render_svg(decimate_for_display(synthesize_grid(f, n)), cfg.out + "/" + name);
            result.files.push_back(name);
        }
    }

    nlohmann::json manifest;
    manifest["tool"] = "torwave";
    manifest["version"] = kVersion;
    manifest["config"] = cfg.as_flat_map();
    manifest["config_hash"] = result.hash;
    manifest["seed"] = cfg.seed;
    manifest["rows"] = result.rows.size();
    manifest["files"] = result.files;
    const std::string manifest_path = cfg.out + "/manifest.json";
    std::ofstream mf(manifest_path, std::ios::binary);
    if (!mf) throw IoError("run_sweep: cannot open " + manifest_path);
    mf << manifest.dump(2) << '\n';
    if (!mf) throw IoError("run_sweep: write failed for " + manifest_path);
    result.files.push_back("manifest.json");
    return result;
}

} // namespace torwave
