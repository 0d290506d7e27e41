#include "gsgd/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <thread>
#include <vector>

#include "gsgd/csv.hpp"
#include "gsgd/diagnostics.hpp"

namespace gsgd::cli {

namespace fs = std::filesystem;

std::filesystem::path resolve_output_dir(const ExperimentConfig& config) {
    if (const char* env = std::getenv("GSGD_OUT"); env != nullptr && *env != '\0') {
        return fs::path(env);
    }
    return fs::path(config.output.directory);
}

namespace {

void write_run_files(const ExperimentConfig& config, const RunRecord& record,
                     const fs::path& dir) {
    fs::create_directories(dir);
    const int prec = config.output.csv_precision;

    CsvWriter run_csv({"k", "f", "m_norm", "eta", "theta"});
    for (const RunRow& row : record.rows) {
        run_csv.add_row({std::to_string(row.k), format_double(row.f, prec),
                         format_double(row.m_norm, prec), format_double(row.eta, prec),
                         format_double(row.theta, prec)});
    }
    run_csv.write_file((dir / "run.csv").string());

    CsvWriter probes_csv({"k", "stationarity", "lyapunov", "momentum_gap", "delta"});
    for (const ProbeRow& p : record.probes) {
        probes_csv.add_row({std::to_string(p.k), format_double(p.stationarity, prec),
                            format_double(p.lyapunov, prec), format_double(p.momentum_gap, prec),
                            format_double(p.delta, prec)});
    }
    probes_csv.write_file((dir / "probes.csv").string());

    std::ofstream echo(dir / "config.echo", std::ios::binary);
    echo << record.config_echo;
}

}  // namespace

int run_experiment(const ExperimentConfig& config, std::ostream& log) {
    RunRecord record;
    fs::path dir;
    try {
        const auto problem = build_problem(config.problem);
        record = run(*problem, config.method);
        record.config_echo = serialize_config(config);
        dir = resolve_output_dir(config);
        write_run_files(config, record, dir);
    } catch (const std::invalid_argument& e) {
        log << e.what() << "\n";
        return kExitConfigError;
    }

    if (record.diverged) {
        log << "run diverged after " << record.completed_steps << " steps; partial record in "
            << dir.string() << "\n";
        return kExitDiverged;
    }
    const ProbeRow& last = record.probes.back();
    log << "run complete: " << record.completed_steps << " steps, terminal f = "
        << format_double(record.rows.back().f, 6) << ", stationarity = "
        << format_double(last.stationarity, 6)
        << (last.stationarity_upper_bound ? " (sampled upper bound)" : "") << "\n";
    log << "artifacts: " << (dir / "run.csv").string() << ", " << (dir / "probes.csv").string()
        << ", " << (dir / "config.echo").string() << "\n";
    return kExitOk;
}

int cmd_run(const std::filesystem::path& config_path, std::ostream& log) {
    ExperimentConfig config;
    try {
        config = load_config(config_path.string());
    } catch (const std::exception& e) {
        log << e.what() << "\n";
        return kExitConfigError;
    }
    return run_experiment(config, log);
}

CounterexampleReport run_counterexample(double eps0, double eta0, std::size_t horizon) {
    if (!(eps0 > 0.0 && eps0 < 1.0 / 3.0)) {
        throw std::invalid_argument("counterexample: eps0 must lie in (0, 1/3)");
    }
    if (!(eta0 > 0.0 && eta0 <= 1.0 / 3.0)) {
        throw std::invalid_argument("counterexample: eta0 must lie in (0, 1/3]");
    }

    const auto problem = make_counterexample(KinkSide::plus);
    RealVector x{eps0, eps0};
    RealVector m{0.0, 0.0};

    CounterexampleReport report;
    report.max_abs_u = std::abs(x[0]);
    for (std::size_t k = 0; k < horizon; ++k) {
        const double eta = std::min(1.0 / 3.0, eta0 / std::sqrt(static_cast<double>(k) + 1.0));
        const RealVector g = problem->component_selection(0, x);
        // theta = 1: the momentum is replaced by the fresh selection each step
        momentum_average_inplace(m, g, 1.0);
        const RealVector d = sign_select(m, TiePolicy::diagonal);
        for (std::size_t i = 0; i < 2; ++i) x[i] -= eta * d[i];
        report.max_diag_gap = std::max(report.max_diag_gap, std::abs(x[0] - x[1]));
        report.max_abs_u = std::max(report.max_abs_u, std::abs(x[0]));
    }
    report.terminal_stationarity = stationarity_measure(*problem, x).value;
    const double du = x[0] + 10.0;
    const double dv = x[1] - 20.0;
    report.distance_to_stationary = std::sqrt(du * du + dv * dv);
    return report;
}

int cmd_counterexample(double eps0, double eta0, std::size_t horizon, std::ostream& out) {
    CounterexampleReport report;
    try {
        report = run_counterexample(eps0, eta0, horizon);
    } catch (const std::invalid_argument& e) {
        out << e.what() << "\n";
        return kExitConfigError;
    }
    out << "max |u_k - v_k|          = " << format_double(report.max_diag_gap, 17) << "\n";
    out << "max |u_k|                = " << format_double(report.max_abs_u, 6) << "\n";
    out << "terminal stationarity    = " << format_double(report.terminal_stationarity, 6) << "\n";
    out << "distance to (-10, 20)    = " << format_double(report.distance_to_stationary, 6) << "\n";
    const bool on_diagonal = report.max_diag_gap == 0.0;
    const bool bounded = report.max_abs_u <= 1.0;
    out << "trajectory on the diagonal segment: " << (on_diagonal && bounded ? "yes" : "NO")
        << "\n";
    return kExitOk;
}

int cmd_validate(const std::filesystem::path& config_path, std::ostream& out) {
    ExperimentConfig config;
    try {
        config = load_config(config_path.string());
    } catch (const std::exception& e) {
        out << e.what() << "\n";
        return kExitConfigError;
    }
    const std::size_t horizon = std::max<std::size_t>(config.method.horizon, 10000);
    const ScheduleValidation report = validate(config.method.schedule, horizon);
    for (const auto& check : report.checks) {
        out << (check.passed ? "[pass] " : "[flag] ") << check.name << ": " << check.note << "\n";
    }
    out << "ratio class: " << report.ratio_class;
    if (report.ratio_class == "to_tau") out << " (tau_hat = " << format_double(report.tau_hat, 6) << ")";
    out << "\n";
    if (!report.theta_diminishes) {
        out << "[flag] theta does not diminish - released-solver baseline\n";
    }
    return report.all_passed() ? kExitOk : kExitConfigError;
}

int cmd_sweep(const std::filesystem::path& config_path, std::ostream& log) {
    ExperimentConfig config;
    try {
        config = load_config(config_path.string());
        if (!config.sweep.has_value()) {
            throw ConfigError("sweep command needs a 'sweep' block");
        }
    } catch (const std::exception& e) {
        log << e.what() << "\n";
        return kExitConfigError;
    }

    struct Combo {
        std::uint64_t seed;
        double c;
    };
    std::vector<Combo> combos;
    for (std::uint64_t seed : config.sweep->seeds) {
        for (double c : config.sweep->c_values) combos.push_back({seed, c});
    }
    std::sort(combos.begin(), combos.end(), [](const Combo& a, const Combo& b) {
        return a.seed != b.seed ? a.seed < b.seed : a.c < b.c;
    });

    struct Result {
        double terminal_f = 0.0;
        double terminal_stationarity = 0.0;
        bool diverged = false;
    };
    std::vector<Result> results(combos.size());
    std::vector<std::string> errors(combos.size());

    const auto problem = build_problem(config.problem);
    std::atomic<std::size_t> next{0};
    const std::size_t workers =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), combos.size());
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (std::size_t idx = next.fetch_add(1); idx < combos.size();
                 idx = next.fetch_add(1)) {
                try {
                    GsgdConfig method = config.method;
                    method.seed = combos[idx].seed;
                    method.schedule.scale_c = config.method.schedule.scale_c * combos[idx].c;
                    const RunRecord record = run(*problem, method);
                    results[idx].diverged = record.diverged;
                    results[idx].terminal_f = problem->value(record.terminal_x);
                    results[idx].terminal_stationarity =
                        stationarity_measure(*problem, record.terminal_x).value;
                } catch (const std::exception& e) {
                    errors[idx] = e.what();
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    for (const std::string& err : errors) {
        if (!err.empty()) {
            log << err << "\n";
            return kExitConfigError;
        }
    }

    const fs::path dir = resolve_output_dir(config);
    fs::create_directories(dir);
    const int prec = config.output.csv_precision;
    CsvWriter sweep_csv({"seed", "c", "terminal_f", "terminal_stationarity", "diverged"});
    for (std::size_t i = 0; i < combos.size(); ++i) {
        sweep_csv.add_row({std::to_string(combos[i].seed), format_double(combos[i].c, prec),
                           format_double(results[i].terminal_f, prec),
                           format_double(results[i].terminal_stationarity, prec),
                           results[i].diverged ? "1" : "0"});
    }
    sweep_csv.write_file((dir / "sweep.csv").string());
    log << "sweep complete: " << combos.size() << " runs, results in "
        << (dir / "sweep.csv").string() << "\n";
    return kExitOk;
}

}  // namespace gsgd::cli
