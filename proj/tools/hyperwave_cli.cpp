// Command-line front end: named experiments plus direct access to the
// solvers, the admissibility calculator and the inequality checks.

#include "hyperwave/cone_transform.hpp"
#include "hyperwave/experiments.hpp"
#include "hyperwave/quintic_solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace hyperwave;

namespace {

struct CommonFlags {
    std::string out;
    std::optional<std::uint64_t> seed;
    int jobs = 1;
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonFlags& flags, const std::string& out_help) {
    cmd->add_option("--out", flags.out, out_help);
    cmd->add_option("--seed", flags.seed, "random seed");
    cmd->add_option("--jobs", flags.jobs, "worker threads for independent cells")->check(CLI::PositiveNumber);
    cmd->add_option("--format", flags.format, "table format")->check(CLI::IsMember({"csv", "json"}));
}

// A path with a .csv or .json extension names the file itself; anything else
// is a directory that receives `fallback_name` in the chosen format.
struct OutputTarget {
    fs::path dir;
    std::string name;
    OutputFormat format;
};

OutputTarget output_target(const std::string& out, const std::string& fallback_name, OutputFormat format) {
    if (out.empty()) return {fs::path("."), fallback_name, format};
    const fs::path path(out);
    if (path.extension() == ".csv" || path.extension() == ".json") {
        const fs::path parent = path.parent_path().empty() ? fs::path(".") : path.parent_path();
        return {parent, path.stem().string(), parse_output_format(path.extension().string().substr(1))};
    }
    return {path, fallback_name, format};
}

void print_report(const RunReport& report) {
    for (const auto& c : report.checks) {
        std::printf("[%s] %s: %.6g (%s)\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.value, c.limit.c_str());
    }
    for (const auto& a : report.artifacts) std::printf("wrote %s\n", a.string().c_str());
    if (!report.message.empty()) std::fprintf(stderr, "%s: %s\n", report.experiment.c_str(), report.message.c_str());
    std::printf("%s finished with exit status %d in %.2f s\n", report.experiment.c_str(), report.exit_code,
                report.wall_seconds);
}

int run_command(const std::string& spec_path, const CommonFlags& flags, bool format_given, bool jobs_given) {
    ExperimentSpec spec = load_spec(spec_path);
    if (!flags.out.empty()) spec.output_dir = flags.out;
    if (flags.seed) spec.seed = *flags.seed;
    if (jobs_given) spec.jobs = flags.jobs;
    if (format_given) spec.format = parse_output_format(flags.format);
    const RunReport report = run_experiment(spec);
    print_report(report);
    return report.exit_code;
}

struct SimulateFlags {
    int n = 3;
    double p = 3.0;
    int zeta = -1;
    bool linear = false;
    double r_max = 20.0;
    int points = 2000;
    double t_final = 10.0;
    double amplitude = 1.0;
    double center = 0.0;
    double width = 1.0;
    std::string integrator = "verlet";
    int snapshots = 64;
};

int simulate_command(const SimulateFlags& f, const CommonFlags& common) {
    SimConfig cfg;
    cfg.n = f.n;
    cfg.p = f.p;
    cfg.zeta = f.zeta;
    cfg.linear = f.linear;
    cfg.r_max = f.r_max;
    cfg.num_points = f.points;
    cfg.t_final = f.t_final;
    cfg.initial_u = ProfileSpec::gaussian(f.amplitude, f.center, f.width);
    cfg.integrator = f.integrator == "rk4" ? Integrator::rk4 : Integrator::verlet;
    cfg.snapshot_count = f.snapshots;
    const Trajectory traj = simulate(validate(cfg));
    const auto target = output_target(common.out, "series", parse_output_format(common.format));
    const auto series = write_table(trajectory_table(traj, target.name), target.dir, target.format);
    const auto snaps = write_table(snapshot_table(traj, target.name + "_snapshots"), target.dir, target.format);
    nlohmann::ordered_json summary{{"status", to_string(traj.status)},
                                   {"status_time", traj.status_time},
                                   {"steps", traj.steps_taken},
                                   {"dt", traj.dt},
                                   {"initial_energy", traj.initial_energy()},
                                   {"relative_energy_drift", traj.relative_energy_drift()},
                                   {"series", series.string()},
                                   {"snapshots", snaps.string()}};
    std::cout << summary.dump(2) << '\n';
    return traj.status == RunStatus::completed ? 0 : 3;
}

int regions_command(int n, double sigma, const CommonFlags& common) {
    const RegionPolygon poly = region_polygon(sigma, n);
    const auto target = output_target(common.out, "region", parse_output_format(common.format));
    const auto path = write_table(region_table(poly, target.name), target.dir, target.format);
    std::printf("%s regime, %zu vertices, wrote %s\n", poly.regime.c_str(), poly.vertices.size(), path.string().c_str());
    return 0;
}

int minsigma_command(int n, double p, double tol) {
    std::cout << min_sigma_json(min_sigma(p, n, tol), p, n) << '\n';
    return 0;
}

struct TransformFlags {
    double t0 = -2.0;
    double tau = -0.5;
    double amplitude = 0.8;
    int points = 1201;
    int h2_points = 121;
};

int transform_command(const TransformFlags& f, const CommonFlags& common) {
    QuinticConfig cfg;
    cfg.r_max = 12.0;
    cfg.num_points = f.points;
    cfg.taper_start = 9.0;
    cfg.taper_width = 2.0;
    cfg.initial_u = QuinticProfile::gaussian(f.amplitude, 0.0, 1.0);
    cfg.dense_stride = 1;
    const SpaceTimeField field = simulate_spacetime(cfg, 2.0, 2.0);
    const double s_tau = slice_boundary(f.tau, f.t0);
    const GridPtr grid = make_grid(2, s_tau, f.h2_points);
    const StatePair v = pushforward(field, f.t0, f.tau, grid);
    Table table{"transform", {"s", "v", "v_tau"}, {}};
    for (int i = 0; i < grid->size(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        table.rows.push_back({grid->point(i), v.u[k], v.ut[k]});
    }
    const auto target = output_target(common.out, "transform", parse_output_format(common.format));
    table.name = target.name;
    const auto path = write_table(table, target.dir, target.format);
    nlohmann::ordered_json summary{{"t0", f.t0},
                                   {"tau", f.tau},
                                   {"slice_boundary", s_tau},
                                   {"J1", local_energy_J1(v, f.tau, f.t0)},
                                   {"J1_from_u", local_energy_J1_from_field(field, f.tau, f.t0)},
                                   {"table", path.string()}};
    std::cout << summary.dump(2) << '\n';
    return 0;
}

int lemmas_command(const std::string& lemma, int samples, const CommonFlags& common) {
    std::vector<LemmaId> ids;
    if (lemma == "all") {
        ids = {LemmaId::sphere, LemmaId::two_factor, LemmaId::three_factor};
    } else {
        ids = {parse_lemma_id(lemma)};
    }
    const std::uint64_t seed = common.seed.value_or(0);
    std::vector<LemmaCheckReport> reports;
    int violations = 0;
    for (LemmaId id : ids) {
        reports.push_back(randomized_check(id, samples, seed));
        violations += reports.back().violations;
    }
    const std::string text = lemma_report_json(reports);
    if (common.out.empty()) {
        std::cout << text << '\n';
    } else {
        const fs::path path(common.out);
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        std::ofstream(path) << text << '\n';
        for (const auto& r : reports) {
            std::printf("%s: %d samples, max ratio %.6g, %d violations\n", to_string(r.lemma).c_str(), r.samples,
                        r.max_ratio, r.violations);
        }
    }
    return violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial wave solvers on H^n and R^2, Strichartz admissibility and integral-bound checks"};
    app.require_subcommand(1);

    CommonFlags common;

    auto* list = app.add_subcommand("list", "print the experiment catalog as JSON");

    std::string spec_path;
    auto* run = app.add_subcommand("run", "run an experiment described by a TOML file");
    run->add_option("spec", spec_path, "experiment TOML file")->required();
    add_common(run, common, "output directory (overrides the file)");

    SimulateFlags sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "run the H^n solver from a gaussian profile");
    simulate_cmd->add_option("--n", sim.n, "dimension")->check(CLI::Range(2, 6));
    simulate_cmd->add_option("--p", sim.p, "nonlinearity exponent");
    simulate_cmd->add_option("--zeta", sim.zeta, "-1 defocusing, +1 focusing")->check(CLI::IsMember({-1, 1}));
    simulate_cmd->add_flag("--linear", sim.linear, "drop the nonlinearity");
    simulate_cmd->add_option("--r-max", sim.r_max, "radial truncation");
    simulate_cmd->add_option("--points", sim.points, "grid size");
    simulate_cmd->add_option("--t-final", sim.t_final, "final time");
    simulate_cmd->add_option("--amplitude", sim.amplitude, "gaussian amplitude");
    simulate_cmd->add_option("--center", sim.center, "gaussian center");
    simulate_cmd->add_option("--width", sim.width, "gaussian width");
    simulate_cmd->add_option("--integrator", sim.integrator, "time stepper")->check(CLI::IsMember({"verlet", "rk4"}));
    simulate_cmd->add_option("--snapshots", sim.snapshots, "stored time slices");
    add_common(simulate_cmd, common, "output directory or table file");

    int region_n = 3;
    double region_sigma = 0.5;
    auto* regions = app.add_subcommand("regions", "export the sigma-admissible polygon");
    regions->add_option("--n", region_n, "dimension")->check(CLI::Range(2, 6));
    regions->add_option("--sigma", region_sigma, "regularity")->check(CLI::Range(0.0, 1.0));
    add_common(regions, common, "output directory or table file");

    int ms_n = 3;
    double ms_p = 3.0, ms_tol = 1e-9;
    auto* minsigma = app.add_subcommand("minsigma", "minimal regularity with a witnessing pair, as JSON");
    minsigma->add_option("--n", ms_n, "dimension")->check(CLI::Range(2, 6));
    minsigma->add_option("--p", ms_p, "nonlinearity exponent")->required();
    minsigma->add_option("--tol", ms_tol, "bisection tolerance");

    TransformFlags tf;
    auto* transform = app.add_subcommand("transform", "push a quintic solution onto an H^2 slice");
    transform->add_option("--t0", tf.t0, "vertex time");
    transform->add_option("--tau", tf.tau, "slice");
    transform->add_option("--amplitude", tf.amplitude, "gaussian amplitude");
    transform->add_option("--points", tf.points, "Euclidean grid size");
    transform->add_option("--h2-points", tf.h2_points, "H^2 grid size");
    add_common(transform, common, "output directory or table file");

    std::string lemma = "all";
    int samples = 1000;
    auto* lemmas = app.add_subcommand("verify-lemmas", "randomized checks of the integral bounds");
    lemmas->add_option("--lemma", lemma, "sphere, two_factor, three_factor or all")
        ->check(CLI::IsMember({"all", "sphere", "two_factor", "three_factor"}));
    lemmas->add_option("--samples", samples, "samples per bound")->check(CLI::PositiveNumber);
    add_common(lemmas, common, "JSON report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*list) {
            std::cout << catalog_json() << '\n';
            return 0;
        }
        if (*run) {
            return run_command(spec_path, common, run->count("--format") > 0, run->count("--jobs") > 0);
        }
        if (*simulate_cmd) return simulate_command(sim, common);
        if (*regions) return regions_command(region_n, region_sigma, common);
        if (*minsigma) return minsigma_command(ms_n, ms_p, ms_tol);
        if (*transform) return transform_command(tf, common);
        if (*lemmas) return lemmas_command(lemma, samples, common);
    } catch (const std::logic_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
    return 2;
}
