// torwave command line. Subcommands mirror the library layers:
//   points, discrepancy, relations, synth, nodal, rwm, sweep.
// Exit codes: 0 success, 2 work budget exceeded, 3 resolution unstable,
// 4 I/O failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "torwave/torwave.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitBudget = 2;
constexpr int kExitUnstable = 3;
constexpr int kExitIo = 4;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit(const json& j, bool as_json, const std::optional<std::string>& out_dir,
          const std::string& name) {
    if (out_dir) {
        std::error_code ec;
        fs::create_directories(*out_dir, ec);
        if (ec) throw torwave::IoError("cannot create directory " + *out_dir);
        const std::string path = *out_dir + "/" + name;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw torwave::IoError("cannot open " + path);
        f << j.dump(2) << '\n';
        if (!f) throw torwave::IoError("write failed for " + path);
    }
    if (as_json || !out_dir) std::cout << j.dump(2) << '\n';
}

json points_json(const torwave::LatticePointSet& set) {
    json j;
    j["E"] = set.energy.value;
    j["admissible"] = set.energy.admissible;
    json factors = json::array();
    for (const auto& f : set.energy.factors)
        factors.push_back({{"prime", f.prime}, {"exponent", f.exponent}});
    j["factors"] = factors;
    j["W"] = set.size();
    json pts = json::array();
    for (const auto& p : set.points) pts.push_back({p.x, p.y});
    j["points"] = pts;
    j["angles"] = set.angles;
    return j;
}

torwave::FourierCoefficients coefficients_from_file(const torwave::LatticePointSet& set,
                                                    const std::string& path) {
    std::ifstream f(path);
    if (!f) throw torwave::IoError("cannot open coefficient file " + path);
    std::vector<std::pair<torwave::LatticePoint, std::complex<double>>> entries;
    std::int64_t x, y;
    double re, im;
    while (f >> x >> y >> re >> im) entries.push_back({{x, y}, {re, im}});
    if (!f.eof()) throw torwave::IoError("malformed coefficient file " + path);
    for (const auto& [pt, v] : entries) {
        (void)v;
        if (!set.contains(pt))
            throw std::invalid_argument("coefficient frequency off the circle: (" +
                                        std::to_string(pt.x) + "," + std::to_string(pt.y) + ")");
    }
    return torwave::coefficients_from_entries(std::move(entries));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for nodal domains of toral eigenfunctions"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    bool as_json = false;
    std::optional<std::string> out_dir;
    std::uint64_t seed = 1;
    app.add_flag("--json", as_json, "print JSON to stdout");
    app.add_option("--out", out_dir, "output directory for generated files");
    app.add_option("--seed", seed, "RNG seed (default 1)");

    // points <E>
    std::int64_t e_points = 0;
    auto* cmd_points = app.add_subcommand("points", "lattice points on the circle |xi|^2 = E");
    cmd_points->add_option("E", e_points, "energy")->required();

    // discrepancy <E>
    std::int64_t e_disc = 0;
    auto* cmd_disc = app.add_subcommand("discrepancy", "angular discrepancy Delta(E)");
    cmd_disc->add_option("E", e_disc, "energy")->required();

    // relations <E> --ell L --budget N
    std::int64_t e_rel = 0;
    int rel_ell = 4;
    std::uint64_t rel_budget = 100000000ull;
    auto* cmd_rel = app.add_subcommand("relations", "vanishing sums of length ell");
    cmd_rel->add_option("E", e_rel, "energy")->required();
    cmd_rel->add_option("--ell", rel_ell, "tuple length (2..8), default 4");
    cmd_rel->add_option("--budget", rel_budget, "work budget (table entries / matches)");

    // synth <E> [--coeffs file] [--spw m] [--svg file]
    std::int64_t e_synth = 0;
    std::string synth_coeffs;
    int synth_spw = 8;
    std::string synth_svg;
    std::string synth_mode = "uniform";
    auto* cmd_synth = app.add_subcommand("synth", "synthesize an eigenfunction grid");
    cmd_synth->add_option("E", e_synth, "energy")->required();
    cmd_synth->add_option("--coeffs", synth_coeffs, "coefficient file: lines 'x y re im'");
    cmd_synth->add_option("--spw", synth_spw, "samples per wavelength (default 8)");
    cmd_synth->add_option("--svg", synth_svg, "write sign raster SVG to this file");
    cmd_synth->add_option("--mode", synth_mode, "uniform | random-phase (default uniform)");

    // nodal <E> [--spw m]
    std::int64_t e_nodal = 0;
    int nodal_m0 = 4;
    int nodal_max = 32;
    std::string nodal_mode = "uniform";
    auto* cmd_nodal = app.add_subcommand("nodal", "stable nodal count of an eigenfunction");
    cmd_nodal->add_option("E", e_nodal, "energy")->required();
    cmd_nodal->add_option("--spw", nodal_m0, "initial samples per wavelength (default 4)");
    cmd_nodal->add_option("--max-spw", nodal_max, "refinement cap (default 32)");
    cmd_nodal->add_option("--mode", nodal_mode, "uniform | random-phase");

    // rwm --K k --R r --samples n
    int rwm_k = 64;
    double rwm_r = 60.0;
    int rwm_samples = 40;
    bool rwm_svg = false;
    std::int64_t rwm_toral = 0;
    auto* cmd_rwm = app.add_subcommand("rwm", "Monte Carlo nodal density of the Gaussian ensemble");
    cmd_rwm->add_option("--K", rwm_k, "number of directions (even, >= 32)");
    cmd_rwm->add_option("--R", rwm_r, "scaled radius (>= 20)");
    cmd_rwm->add_option("--samples", rwm_samples, "number of realizations (>= 20)");
    cmd_rwm->add_option("--toral", rwm_toral,
                        "use scaled lattice directions of this energy instead of equispaced ones");
    cmd_rwm->add_flag("--svg", rwm_svg, "render the first realization (needs --out)");

    // sweep --config file
    std::string sweep_config;
    auto* cmd_sweep = app.add_subcommand("sweep", "experiment sweep from a config file");
    cmd_sweep->add_option("--config", sweep_config, "flat key = value config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_points) {
            const auto set = torwave::enumerate_lattice_points(e_points);
            emit(points_json(set), as_json, out_dir, "points_" + std::to_string(e_points) + ".json");
            return 0;
        }
        if (*cmd_disc) {
            const auto set = torwave::enumerate_lattice_points(e_disc);
            const auto rep = torwave::discrepancy(set);
            json j{{"E", e_disc},
                   {"W", set.size()},
                   {"delta", rep.delta},
                   {"delta_over_W", rep.normalized},
                   {"log_power_envelope", rep.log_power_envelope}};
            emit(j, as_json, out_dir, "discrepancy_" + std::to_string(e_disc) + ".json");
            return 0;
        }
        if (*cmd_rel) {
            const auto set = torwave::enumerate_lattice_points(e_rel);
            torwave::RelationBudget budget{rel_budget, rel_budget};
            const auto count = torwave::vanishing_sums(set, rel_ell, budget);
            json j{{"E", e_rel},
                   {"W", set.size()},
                   {"ell", rel_ell},
                   {"total_ordered", count.total_ordered},
                   {"nondegenerate", count.nondegenerate}};
            json wits = json::array();
            for (const auto& w : count.witnesses) {
                json t = json::array();
                for (const auto& p : w) t.push_back({p.x, p.y});
                wits.push_back(t);
            }
            j["witnesses"] = wits;
            emit(j, as_json, out_dir, "relations_" + std::to_string(e_rel) + ".json");
            return 0;
        }
        if (*cmd_synth) {
            const auto set = torwave::enumerate_lattice_points(e_synth);
            torwave::FourierCoefficients coeffs =
                !synth_coeffs.empty() ? coefficients_from_file(set, synth_coeffs)
                : synth_mode == "random-phase"
                    ? torwave::random_phase_coefficients(set, seed)
                    : torwave::uniform_coefficients(set);
            const auto f = torwave::make_eigenfunction(set.energy, std::move(coeffs));
            const int n = static_cast<int>(std::ceil(synth_spw * set.energy.lambda));
            const auto grid = torwave::synthesize_grid(f, n);
            double sumsq = 0;
            for (double v : grid.values) sumsq += v * v;
            const auto rep = torwave::count_components(grid);
            json j{{"E", e_synth},
                   {"N", n},
                   {"mean_square", sumsq / grid.values.size()},
                   {"components", rep.count},
                   {"nodal_length", torwave::nodal_length(grid)}};
            if (!synth_svg.empty()) {
                torwave::render_svg(grid, synth_svg);
                j["svg"] = synth_svg;
            }
            emit(j, as_json, out_dir, "synth_" + std::to_string(e_synth) + ".json");
            return 0;
        }
        if (*cmd_nodal) {
            const auto set = torwave::enumerate_lattice_points(e_nodal);
            torwave::FourierCoefficients coeffs =
                nodal_mode == "random-phase"
                    ? torwave::random_phase_coefficients(set, seed)
                    : torwave::uniform_coefficients(set);
            const auto f = torwave::make_eigenfunction(set.energy, std::move(coeffs));
            const auto outcome = torwave::refine_until_stable(
                [&f](int n) { return torwave::synthesize_grid(f, n); },
                set.energy.lambda, nodal_m0, 0.01, nodal_max,
                torwave::nodal_area_floor(static_cast<double>(e_nodal)));
            json ladder = json::array();
            for (const auto& step : outcome.ladder)
                ladder.push_back({{"spw", step.spw},
                                  {"N", step.n},
                                  {"count", step.count},
                                  {"length", step.length}});
            json j{{"E", e_nodal},
                   {"count", outcome.report.count},
                   {"length", outcome.report.length},
                   {"stable", outcome.stable},
                   {"pleijel_ratio",
                    torwave::pleijel_ratio(4.0 * std::numbers::pi * std::numbers::pi *
                                               static_cast<double>(e_nodal),
                                           outcome.report.count)},
                   {"small_component_warnings", outcome.report.small_component_warnings},
                   {"ladder", ladder}};
            emit(j, as_json, out_dir, "nodal_" + std::to_string(e_nodal) + ".json");
            return outcome.stable ? 0 : kExitUnstable;
        }
        if (*cmd_rwm) {
            const auto res =
                rwm_toral > 0
                    ? torwave::montecarlo_nu_toral(rwm_toral, rwm_k, rwm_r, rwm_samples, seed)
                    : torwave::montecarlo_nu(rwm_k, rwm_r, rwm_samples, seed);
            json j{{"K", res.K},
                   {"directions", rwm_toral > 0 ? "toral-E" + std::to_string(rwm_toral)
                                                : "equispaced"},
                   {"R", res.R},
                   {"samples", res.samples},
                   {"seed", res.seed},
                   {"sigma_estimate", res.mean},
                   {"normalization", "4 pi N / (2 pi R)^2"},
                   {"stderr", res.stderr_},
                   {"mean_contained", res.mean_contained},
                   {"mean_boundary_touching", res.mean_boundary},
                   {"unstable_samples", res.unstable_samples},
                   {"sigma_bogomolny_schmit", torwave::consts::sigma_bs},
                   {"pleijel_bound", torwave::consts::pleijel_bound},
                   {"tangency_bound", torwave::consts::tangency_bound}};
            if (out_dir) {
                std::error_code ec;
                fs::create_directories(*out_dir, ec);
                if (ec) throw torwave::IoError("cannot create directory " + *out_dir);
                const std::string csv_path = *out_dir + "/rwm_samples.csv";
                std::ofstream csv(csv_path, std::ios::binary);
                if (!csv) throw torwave::IoError("cannot open " + csv_path);
                csv << "sample,contained,boundary_touching,estimate\n";
                for (std::size_t i = 0; i < res.per_sample.size(); ++i)
                    csv << i << ',' << res.contained[i] << ',' << res.boundary[i] << ','
                        << fmt(res.per_sample[i]) << '\n';
                if (!csv) throw torwave::IoError("write failed for " + csv_path);
                if (rwm_svg) {
                    const auto spec = torwave::RwmSpec::equispaced(rwm_k, rwm_r, seed);
                    const auto real = torwave::sample_realization(spec, 0);
                    const torwave::PlaneWaveField field(spec, real);
                    const int m = static_cast<int>(std::ceil(4 * rwm_r)) + 1;
                    torwave::render_svg(field.box_grid(m), *out_dir + "/rwm_sample0.svg");
                }
            }
            emit(j, as_json, out_dir, "rwm.json");
            return 0;
        }
        if (*cmd_sweep) {
            auto cfg = torwave::parse_config_file(sweep_config);
            if (out_dir) cfg.out = *out_dir;
            if (app.count("--seed")) cfg.seed = seed;
            const auto result = torwave::run_sweep(cfg);
            json j{{"rows", result.rows.size()},
                   {"config_hash", result.hash},
                   {"out", cfg.out},
                   {"files", result.files}};
            std::cout << j.dump(2) << '\n';
            return 0;
        }
    } catch (const torwave::BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return kExitBudget;
    } catch (const torwave::ResolutionError& e) {
        std::cerr << "resolution failure: " << e.what() << '\n';
        return kExitUnstable;
    } catch (const torwave::IoError& e) {
        std::cerr << "i/o failure: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
