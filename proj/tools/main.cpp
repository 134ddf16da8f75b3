// Command-line front end: one subcommand per library operation, JSON/CSV
// emission, deterministic seeds, exit code 0 on success, 2 on typed
// infeasibility outcomes, 1 on usage or input errors.
#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>

#include "cli_lib.hpp"

using namespace ringeq;
using namespace ringeq::cli;

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

int sweep_threads() {
    const char* env = std::getenv("RINGEQ_THREADS");
    if (!env) return 1;
    int n = std::atoi(env);
    return n > 0 ? n : 1;
}

int emit(const Options& opts, const std::string& command, const json& result,
         const CsvTable* csv, int exit_code, const std::string& summary) {
    std::cout << summary;
    json out{{"command", command}, {"config", opts.resolved()}, {"result", result}};
    if (opts.has("out")) write_atomic(opts.str("out"), out.dump(2) + "\n");
    if (opts.has("csv")) {
        if (csv)
            write_atomic(opts.str("csv"), csv->to_string());
        else
            throw std::runtime_error("this subcommand has no CSV output");
    }
    return exit_code;
}

PiecewiseForce field_from(const Options& opts) {
    Rational L = opts.rational("L");
    if (opts.has("M"))
        return PiecewiseForce::two_piece(L, opts.rational("M"), opts.rational("F1"),
                                         opts.rational("F2"));
    return PiecewiseForce::uniform(L, opts.rational_or("F", Rational(0)));
}

Configuration random_ordered(std::mt19937_64& rng, double L, long long N) {
    std::uniform_real_distribution<double> u(0.2, 1.0);
    std::vector<double> gaps(static_cast<std::size_t>(N));
    double total = 0.0;
    for (auto& g : gaps) {
        g = u(rng);
        total += g;
    }
    for (auto& g : gaps) g *= L / total;
    std::uniform_real_distribution<double> ua(0.0, gaps.back());
    double anchor = gaps.back() - ua(rng);
    return from_gaps(GapVector{RingGeometry{L}, anchor, gaps});
}

Configuration initial_configuration(const Options& opts, double L, long long N,
                                    std::mt19937_64& rng) {
    if (opts.has("init-file")) {
        std::ifstream in(opts.str("init-file"));
        if (!in)
            throw std::runtime_error("cannot open init file: " + opts.str("init-file"));
        json j;
        in >> j;
        return configuration_from_json(j);
    }
    std::string mode = opts.str_or("init", "random");
    if (mode == "equidistant") {
        std::vector<double> gaps(static_cast<std::size_t>(N),
                                 L / static_cast<double>(N));
        return from_gaps(GapVector{RingGeometry{L}, gaps[0], gaps});
    }
    if (mode == "random") return random_ordered(rng, L, N);
    throw std::runtime_error("init must be 'random', 'equidistant', or an init-file");
}

// ----------------------------------------------------------------------
// subcommand handlers

int run_exists(const Options& opts) {
    opts.validate_schema({"L", "M", "F1", "F2", "N", "a", "out", "csv", "seed"});
    InteractionLaw law(opts.real_or("a", 2.0));
    auto v = verdict(opts.rational("L"), opts.rational("M"), opts.rational("F1"),
                     opts.rational("F2"), opts.integer("N"), law);
    std::string summary = std::string("verdict: ") + to_string(v.kind);
    if (v.partition)
        summary += "  partition (" + std::to_string(v.partition->first) + ", " +
                   std::to_string(v.partition->second) + ")";
    if (v.asymptotic_regime) summary += "  [asymptotic regime]";
    summary += "\n";
    return emit(opts, "exists", to_json(v), nullptr,
                v.impossible() ? kExitInfeasible : kExitSuccess, summary);
}

int run_segment(const Options& opts) {
    opts.validate_schema({"length", "count", "force", "a", "out", "csv", "seed"});
    SegmentProblem problem{opts.real("length"),
                           static_cast<int>(opts.integer("count")),
                           opts.real("force"), InteractionLaw(opts.real_or("a", 2.0))};
    auto solution = solve_exact(problem);
    auto expansion = perturbative_deltas(problem);

    CsvTable csv;
    csv.kind = "segment";
    csv.columns = {"index", "gap", "deviation"};
    for (std::size_t k = 0; k < solution.gaps.size(); ++k)
        csv.rows.push_back({std::to_string(k + 1), format_double(solution.gaps[k]),
                            format_double(solution.deviations[k])});

    json result = to_json(solution);
    result["expansion_first"] = expansion.first;
    result["expansion_last"] = expansion.last;

    char line[160];
    std::snprintf(line, sizeof(line),
                  "segment: %zu gaps, first %.12g, last %.12g, balance residual %.3g\n",
                  solution.gaps.size(), solution.first_gap(), solution.last_gap(),
                  solution.residual_norm);
    return emit(opts, "segment", result, &csv, kExitSuccess, line);
}

int run_symmetric(const Options& opts) {
    opts.validate_schema({"L", "F", "N", "a", "target", "out", "csv", "seed"});
    SymmetricSpec spec{to_double(opts.rational("L")), to_double(opts.rational("F")),
                       opts.integer("N"), InteractionLaw(opts.real_or("a", 2.0)),
                       std::nullopt};
    if (opts.has("target")) spec.target = opts.real("target");
    auto build = construct_symmetric_detailed(spec);
    auto csv = csv_positions(build.config);
    char line[200];
    std::snprintf(line, sizeof(line),
                  "symmetric: N=%lld, overlap m=%.12g, shift b=%.12g, window %.6g, "
                  "relative residual %.3g\n",
                  spec.count, build.overlap, build.shift, build.window,
                  build.residual.relative_inf_norm());
    return emit(opts, "symmetric", to_json(build), &csv, kExitSuccess, line);
}

int run_glue_probe(const Options& opts) {
    opts.validate_schema({"M1", "M2", "F1", "F2", "N1", "N2", "a", "out", "csv",
                          "seed"});
    GlueInputs in{opts.rational("M1"),
                  opts.rational("M2"),
                  opts.rational("F1"),
                  opts.rational("F2"),
                  opts.integer("N1"),
                  opts.integer("N2"),
                  InteractionLaw(opts.real_or("a", 2.0))};
    auto report = glue_probe(in);
    char line[220];
    std::snprintf(line, sizeof(line),
                  "glue probe: gamma=%.6g, infeasibility=%.6g (rel %.3g), m_A=%.6g, "
                  "m_B=%.6g, indices 2M/a=(%.6g, %.6g)\n",
                  report.gamma, report.infeasibility, report.infeasibility_rel,
                  report.m_A, report.m_B, report.index1, report.index2);
    return emit(opts, "glue-probe", to_json(report), nullptr, kExitSuccess, line);
}

int run_newton(const Options& opts) {
    opts.validate_schema({"L", "M", "F", "F1", "F2", "N", "a", "init", "init-file",
                          "seed", "tol", "max-iter", "pin", "out", "csv"});
    InteractionLaw law(opts.real_or("a", 2.0));
    auto field = field_from(opts);
    std::mt19937_64 rng(static_cast<unsigned long long>(opts.integer_or("seed", 1)));
    auto init = initial_configuration(opts, field.circumference(),
                                      opts.integer("N"), rng);
    NewtonOptions nopts;
    nopts.tolerance_rel = opts.real_or("tol", 1e-12);
    nopts.max_iterations = static_cast<int>(opts.integer_or("max-iter", 200));
    nopts.pin_index = static_cast<std::size_t>(opts.integer_or("pin", 0));
    auto report = solve(init, field, law, nopts);
    auto csv = csv_positions(report.config);
    char line[160];
    std::snprintf(line, sizeof(line),
                  "newton: %s after %d iterations, relative residual %.3g\n",
                  to_string(report.status), report.iterations, report.residual_rel);
    return emit(opts, "newton", to_json(report), &csv,
                report.converged() ? kExitSuccess : kExitInfeasible, line);
}

int run_relax(const Options& opts) {
    opts.validate_schema({"L", "M", "F", "F1", "F2", "N", "a", "init", "init-file",
                          "seed", "mass", "damping", "dt", "max-time",
                          "settle-residual", "settle-velocity", "mode",
                          "sample-every", "out", "csv", "trajectory-csv"});
    InteractionLaw law(opts.real_or("a", 2.0));
    auto field = field_from(opts);
    std::mt19937_64 rng(static_cast<unsigned long long>(opts.integer_or("seed", 1)));
    auto init = initial_configuration(opts, field.circumference(),
                                      opts.integer("N"), rng);
    DynamicsParams params;
    params.mass = opts.real_or("mass", 1.0);
    params.damping = opts.real_or("damping", -1.0);
    params.dt = opts.real_or("dt", -1.0);
    params.max_time = opts.real_or("max-time", 1e4);
    params.settle_residual_rel = opts.real_or("settle-residual", 1e-10);
    params.settle_velocity = opts.real_or("settle-velocity", -1.0);
    params.sample_every = static_cast<int>(opts.integer_or("sample-every", 16));
    std::string mode = opts.str_or("mode", "kdk");
    if (mode == "overdamped")
        params.mode = DynamicsMode::Overdamped;
    else if (mode != "kdk")
        throw std::runtime_error("mode must be 'kdk' or 'overdamped'");

    auto [report, trajectory] = relax(init, field, law, params);
    if (opts.has("trajectory-csv"))
        write_atomic(opts.str("trajectory-csv"), csv_trajectory(trajectory).to_string());
    auto csv = csv_positions(report.config);
    char line[200];
    std::snprintf(line, sizeof(line),
                  "relax: %s at t=%.6g after %lld steps, relative residual %.3g, "
                  "partition (%d, %d)\n",
                  to_string(report.status), report.time, report.steps,
                  report.residual_rel, report.partition.empty() ? 0 : report.partition[0],
                  report.partition.size() > 1 ? report.partition[1] : 0);
    return emit(opts, "relax", to_json(report), &csv,
                report.settled() ? kExitSuccess : kExitInfeasible, line);
}

int run_sweep(const Options& opts) {
    opts.validate_schema({"family", "L", "F", "N", "a", "out", "csv", "seed"});
    std::string family = opts.str_or("family", "symmetric");
    if (family != "symmetric")
        throw std::runtime_error("only the symmetric sweep family is available");
    auto counts = parse_count_list(opts.str("N"));
    auto sweep = uniformity_sweep(opts.rational("L"), opts.rational("F"),
                                  InteractionLaw(opts.real_or("a", 2.0)), counts,
                                  sweep_threads());
    auto csv = csv_sweep(sweep);
    char line[120];
    std::snprintf(line, sizeof(line), "sweep: %zu rows, log-log slope %.4f\n",
                  sweep.rows.size(), sweep.slope);
    return emit(opts, "sweep", to_json(sweep), &csv, kExitSuccess, line);
}

int run_fine_scale(const Options& opts) {
    opts.validate_schema({"L", "M", "F", "F1", "F2", "N", "a", "init-file", "out",
                          "csv", "seed"});
    InteractionLaw law(opts.real_or("a", 2.0));
    Rational L = opts.rational("L");
    PiecewiseForce field = opts.has("M")
                               ? field_from(opts)
                               : PiecewiseForce::two_piece(
                                     L, L / Rational(2), opts.rational("F"),
                                     -opts.rational("F"));
    Configuration config = [&]() {
        if (opts.has("init-file")) {
            std::ifstream in(opts.str("init-file"));
            if (!in)
                throw std::runtime_error("cannot open init file: " +
                                         opts.str("init-file"));
            json j;
            in >> j;
            return configuration_from_json(j);
        }
        return construct_symmetric(SymmetricSpec{to_double(L),
                                                 std::abs(to_double(field.values()[0]
                                                              ? field.values()[0]
                                                              : Rational(0))),
                                                 opts.integer("N"), law,
                                                 std::nullopt});
    }();
    auto report = fine_scale_report(config, field, law);
    auto csv = csv_fine_scale(report);
    char line[160];
    std::snprintf(line, sizeof(line),
                  "fine-scale: max deviation %.6g, deviation sum %.3g, imprint "
                  "scale %.6g\n",
                  report.max_deviation, report.deviation_sum, report.imprint_scale);
    return emit(opts, "fine-scale", to_json(report), &csv, kExitSuccess, line);
}

int run_repair_gap(const Options& opts) {
    opts.validate_schema({"L", "M", "F1", "F2", "N1", "N2", "a", "out", "csv",
                          "seed"});
    InteractionLaw law(opts.real_or("a", 2.0));
    auto result = repair_gap_points(opts.rational("L"), opts.rational("M"),
                                    opts.rational("F1"), opts.rational("F2"),
                                    opts.integer("N1"), opts.integer("N2"), law);
    json out = json{{"override_at_split", result.override_at_split},
                    {"override_at_origin", result.override_at_origin},
                    {"residual", to_json(result.residual)},
                    {"configuration", to_json(result.config)}};
    auto csv = csv_positions(result.config);
    char line[160];
    std::snprintf(line, sizeof(line),
                  "repair-gap: overrides F(M)=%.9g, F(L)=%.9g, relative residual "
                  "%.3g\n",
                  result.override_at_split, result.override_at_origin,
                  result.residual.relative_inf_norm());
    return emit(opts, "repair-gap", out, &csv, kExitSuccess, line);
}

struct FlagSpec {
    std::string key;
    std::string help;
};

void attach_flags(CLI::App* cmd, Options& opts, const std::vector<FlagSpec>& flags) {
    for (const auto& flag : flags) {
        auto key = flag.key;
        cmd->add_option_function<std::string>(
            "--" + key,
            [&opts, key](const std::string& value) { opts.set_flag(key, value); },
            flag.help);
    }
    cmd->add_option_function<std::string>(
        "--config",
        [&opts](const std::string& path) { opts.load_config_file(path); },
        "JSON config file; flags override its keys");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"equilibria of power-law repelling particles on a circle"};
    app.require_subcommand(1);

    Options opts;
    std::string command;

    const std::vector<FlagSpec> common = {
        {"out", "write the JSON report here"},
        {"csv", "write the CSV table here"},
        {"seed", "random seed (default 1)"},
        {"a", "interaction exponent a > 1 (default 2)"},
    };
    auto with_common = [&](std::vector<FlagSpec> flags) {
        for (const auto& c : common) flags.push_back(c);
        return flags;
    };

    auto* exists = app.add_subcommand("exists", "exact existence verdict");
    attach_flags(exists, opts,
                 with_common({{"L", "circumference (rational)"},
                              {"M", "split point (rational)"},
                              {"F1", "force on (0, M] (rational)"},
                              {"F2", "force on (M, L] (rational)"},
                              {"N", "particle count"}}));
    exists->callback([&] { command = "exists"; });

    auto* segment = app.add_subcommand("segment", "pinned segment equilibrium");
    attach_flags(segment, opts,
                 with_common({{"length", "segment length"},
                              {"count", "point count including endpoints"},
                              {"force", "constant force, >= 0"}}));
    segment->callback([&] { command = "segment"; });

    auto* symmetric =
        app.add_subcommand("symmetric", "mirror-symmetric circle equilibrium");
    attach_flags(symmetric, opts,
                 with_common({{"L", "circumference (rational)"},
                              {"F", "force magnitude (rational)"},
                              {"N", "even particle count"},
                              {"target", "point some particle must hit exactly"}}));
    symmetric->callback([&] { command = "symmetric"; });

    auto* glue = app.add_subcommand("glue-probe", "asymmetric gluing diagnostics");
    attach_flags(glue, opts,
                 with_common({{"M1", "first arc length (rational)"},
                              {"M2", "second arc length (rational)"},
                              {"F1", "force on the first arc (rational, > 0)"},
                              {"F2", "force on the second arc (rational, < 0)"},
                              {"N1", "particles on the first arc"},
                              {"N2", "particles on the second arc"}}));
    glue->callback([&] { command = "glue-probe"; });

    auto* newton_cmd = app.add_subcommand("newton", "Newton solve of the residual");
    attach_flags(newton_cmd, opts,
                 with_common({{"L", "circumference (rational)"},
                              {"M", "split point for a two-piece field"},
                              {"F", "uniform force (single-piece field)"},
                              {"F1", "force on (0, M]"},
                              {"F2", "force on (M, L]"},
                              {"N", "particle count"},
                              {"init", "random | equidistant"},
                              {"init-file", "JSON report to take positions from"},
                              {"tol", "relative residual tolerance"},
                              {"max-iter", "iteration cap"},
                              {"pin", "pinned coordinate index"}}));
    newton_cmd->callback([&] { command = "newton"; });

    auto* relax_cmd = app.add_subcommand("relax", "damped relaxation dynamics");
    attach_flags(relax_cmd, opts,
                 with_common({{"L", "circumference (rational)"},
                              {"M", "split point for a two-piece field"},
                              {"F", "uniform force (single-piece field)"},
                              {"F1", "force on (0, M]"},
                              {"F2", "force on (M, L]"},
                              {"N", "particle count"},
                              {"init", "random | equidistant"},
                              {"init-file", "JSON report to take positions from"},
                              {"mass", "particle mass"},
                              {"damping", "damping coefficient (default: critical)"},
                              {"dt", "base time step (default: auto)"},
                              {"max-time", "integration horizon"},
                              {"settle-residual", "relative residual tolerance"},
                              {"settle-velocity", "velocity tolerance"},
                              {"mode", "kdk | overdamped"},
                              {"sample-every", "trajectory sampling stride"},
                              {"trajectory-csv", "write sampled trajectory here"}}));
    relax_cmd->callback([&] { command = "relax"; });

    auto* sweep_cmd = app.add_subcommand("sweep", "uniform gap-law N sweep");
    attach_flags(sweep_cmd, opts,
                 with_common({{"family", "sweep family (symmetric)"},
                              {"L", "circumference (rational)"},
                              {"F", "force magnitude (rational)"},
                              {"N", "count list: 16:4096:x2 or 8,16,32"}}));
    sweep_cmd->callback([&] { command = "sweep"; });

    auto* fine = app.add_subcommand("fine-scale", "per-particle deviation profile");
    attach_flags(fine, opts,
                 with_common({{"L", "circumference (rational)"},
                              {"M", "split point for a two-piece field"},
                              {"F", "force magnitude (rational)"},
                              {"F1", "force on (0, M]"},
                              {"F2", "force on (M, L]"},
                              {"N", "even particle count"},
                              {"init-file", "JSON report holding an equilibrium"}}));
    fine->callback([&] { command = "fine-scale"; });

    auto* repair = app.add_subcommand("repair-gap", "breakpoint force repair");
    attach_flags(repair, opts,
                 with_common({{"L", "circumference (rational)"},
                              {"M", "split point (rational)"},
                              {"F1", "force on (0, M]"},
                              {"F2", "force on (M, L]"},
                              {"N1", "particles on (0, M]"},
                              {"N2", "particles on (M, L]"}}));
    repair->callback([&] { command = "repair-gap"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        int code = app.exit(err);
        return code == 0 ? kExitSuccess : kExitError;
    }

    try {
        if (command == "exists") return run_exists(opts);
        if (command == "segment") return run_segment(opts);
        if (command == "symmetric") return run_symmetric(opts);
        if (command == "glue-probe") return run_glue_probe(opts);
        if (command == "newton") return run_newton(opts);
        if (command == "relax") return run_relax(opts);
        if (command == "sweep") return run_sweep(opts);
        if (command == "fine-scale") return run_fine_scale(opts);
        if (command == "repair-gap") return run_repair_gap(opts);
        std::cerr << "no subcommand selected\n";
        return kExitError;
    } catch (const ParityError& err) {
        std::cout << "infeasible: " << err.what() << "\n";
        return kExitInfeasible;
    } catch (const InfeasibleTarget& err) {
        std::cout << "infeasible: " << err.what()
                  << " (margin " << format_double(err.margin) << ")\n";
        return kExitInfeasible;
    } catch (const GluePreconditionError& err) {
        std::cout << "infeasible (" << err.condition << "): " << err.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitError;
    }
}
