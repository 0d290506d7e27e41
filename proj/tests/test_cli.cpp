#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gsgd/cli.hpp"
#include "gsgd/csv.hpp"

using namespace gsgd;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("gsgd_test_" + std::to_string(static_cast<unsigned long>(::getpid())) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

std::string write_config(const fs::path& dir, const std::string& out_dir,
                         std::size_t horizon = 200, const std::string& extra = "") {
    const std::string text = R"({
  "problem": {"kind": "l1_regression",
              "synthetic": {"rows": 10, "cols": 3, "data_seed": 5}},
  "method": {"name": "heavy_ball", "seed": 17, "horizon": )" + std::to_string(horizon) + R"(,
             "x0": [0.5, -0.5, 0.25]},
  "schedule": {"regime": "single", "tau": 1.0, "eta_rule": "power", "eta0": 0.05, "p": 0.5},
  "output": {"directory": ")" + out_dir + R"(", "probe_period": 50})" + extra + R"(
})";
    const fs::path cfg = dir / "config.json";
    std::ofstream(cfg) << text;
    return cfg.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("cmd_run: writes the three artifacts and reruns byte-identically") {
    TempDir tmp;
    const std::string cfg = write_config(tmp.path, (tmp.path / "out").string());
    std::ostringstream log;
    CHECK(cli::cmd_run(cfg, log) == cli::kExitOk);

    const fs::path out = tmp.path / "out";
    CHECK(fs::exists(out / "run.csv"));
    CHECK(fs::exists(out / "probes.csv"));
    CHECK(fs::exists(out / "config.echo"));

    const CsvTable run_table = read_csv((out / "run.csv").string());
    CHECK(run_table.header == std::vector<std::string>{"k", "f", "m_norm", "eta", "theta"});
    CHECK(run_table.rows.size() == 201);
    const CsvTable probes = read_csv((out / "probes.csv").string());
    CHECK(probes.header ==
          std::vector<std::string>{"k", "stationarity", "lyapunov", "momentum_gap", "delta"});
    CHECK(probes.rows.size() == 5);  // k = 0, 50, 100, 150 and the terminal 200

    const std::string first_run = slurp(out / "run.csv");
    const std::string first_probes = slurp(out / "probes.csv");
    std::ostringstream log2;
    CHECK(cli::cmd_run(cfg, log2) == cli::kExitOk);
    CHECK(slurp(out / "run.csv") == first_run);
    CHECK(slurp(out / "probes.csv") == first_probes);
}

TEST_CASE("cmd_run: K=0 writes a header plus one row") {
    TempDir tmp;
    const std::string cfg = write_config(tmp.path, (tmp.path / "out").string(), 0);
    std::ostringstream log;
    CHECK(cli::cmd_run(cfg, log) == cli::kExitOk);
    const CsvTable table = read_csv((tmp.path / "out" / "run.csv").string());
    CHECK(table.rows.size() == 1);
}

TEST_CASE("cmd_run: the echoed config reproduces the run byte-for-byte") {
    TempDir tmp;
    const std::string cfg = write_config(tmp.path, (tmp.path / "a").string());
    std::ostringstream log;
    CHECK(cli::cmd_run(cfg, log) == cli::kExitOk);

    // re-point the echoed config at a second directory and rerun from it
    ExperimentConfig echoed = load_config((tmp.path / "a" / "config.echo").string());
    echoed.output.directory = (tmp.path / "b").string();
    CHECK(cli::run_experiment(echoed, log) == cli::kExitOk);
    CHECK(slurp(tmp.path / "a" / "run.csv") == slurp(tmp.path / "b" / "run.csv"));
    CHECK(slurp(tmp.path / "a" / "probes.csv") == slurp(tmp.path / "b" / "probes.csv"));
}

TEST_CASE("cmd_run: divergence exits 2 with a flagged partial record") {
    TempDir tmp;
    const std::string text = R"({
  "problem": {"kind": "l1_regression", "A": [[1e9]], "b": [0.0]},
  "method": {"name": "heavy_ball", "seed": 1, "horizon": 100, "x0": [1.0]},
  "schedule": {"regime": "single", "tau": 1.0, "eta_rule": "power", "eta0": 1e9, "p": 0.5},
  "output": {"directory": ")" + (tmp.path / "out").string() + R"("}
})";
    const fs::path cfg = tmp.path / "diverge.json";
    std::ofstream(cfg) << text;
    std::ostringstream log;
    CHECK(cli::cmd_run(cfg, log) == cli::kExitDiverged);
    CHECK(log.str().find("diverged") != std::string::npos);
    CHECK(fs::exists(tmp.path / "out" / "run.csv"));  // partial record still written
}

TEST_CASE("cmd_run: malformed config exits 1") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "broken.json";
    std::ofstream(cfg) << "{\n  \"problem\": [,\n}";
    std::ostringstream log;
    CHECK(cli::cmd_run(cfg, log) == cli::kExitConfigError);
    CHECK(log.str().find("line") != std::string::npos);
}

TEST_CASE("GSGD_OUT overrides the configured output directory") {
    TempDir tmp;
    const std::string cfg = write_config(tmp.path, (tmp.path / "ignored").string(), 50);
    const fs::path forced = tmp.path / "forced";
    ::setenv("GSGD_OUT", forced.string().c_str(), 1);
    std::ostringstream log;
    const int rc = cli::cmd_run(cfg, log);
    ::unsetenv("GSGD_OUT");
    CHECK(rc == cli::kExitOk);
    CHECK(fs::exists(forced / "run.csv"));
    CHECK_FALSE(fs::exists(tmp.path / "ignored"));
}

TEST_CASE("csv numeric fidelity: re-read values equal the record bit-for-bit") {
    TempDir tmp;
    const std::string cfg_path = write_config(tmp.path, (tmp.path / "out").string(), 120);
    std::ostringstream log;
    CHECK(cli::cmd_run(cfg_path, log) == cli::kExitOk);

    const ExperimentConfig cfg = load_config(cfg_path);
    const auto problem = build_problem(cfg.problem);
    const RunRecord record = run(*problem, cfg.method);

    const CsvTable table = read_csv((tmp.path / "out" / "run.csv").string());
    REQUIRE(table.rows.size() == record.rows.size());
    for (std::size_t i = 0; i < record.rows.size(); ++i) {
        CHECK(parse_double(table.rows[i][1]) == record.rows[i].f);
        CHECK(parse_double(table.rows[i][2]) == record.rows[i].m_norm);
        CHECK(parse_double(table.rows[i][3]) == record.rows[i].eta);
        CHECK(parse_double(table.rows[i][4]) == record.rows[i].theta);
    }
}

TEST_CASE("cmd_counterexample: report matches the derived bounds") {
    std::ostringstream out;
    CHECK(cli::cmd_counterexample(0.2, 0.3, 10000, out) == cli::kExitOk);
    const cli::CounterexampleReport report = cli::run_counterexample(0.2, 0.3, 10000);
    CHECK(report.max_diag_gap == 0.0);
    CHECK(report.max_abs_u <= 1.0);
    CHECK(report.terminal_stationarity >= 0.4);
    CHECK(report.distance_to_stationary >= 20.0);

    std::ostringstream err;
    CHECK(cli::cmd_counterexample(0.5, 0.3, 10, err) == cli::kExitConfigError);
    CHECK(cli::cmd_counterexample(0.2, 0.4, 10, err) == cli::kExitConfigError);
}

TEST_CASE("cmd_validate: pass and flag lines") {
    TempDir tmp;
    const std::string cfg = write_config(tmp.path, (tmp.path / "out").string(), 20000);
    std::ostringstream out;
    CHECK(cli::cmd_validate(cfg, out) == cli::kExitOk);
    CHECK(out.str().find("[pass] sum_eta_diverges") != std::string::npos);
    CHECK(out.str().find("to_tau") != std::string::npos);

    // fixed-theta baseline flags but still exits 0
    const std::string fixed_cfg = R"({
  "problem": {"kind": "counterexample"},
  "method": {"name": "signsgd", "horizon": 1000},
  "schedule": {"regime": "fixed", "theta0": 0.9, "eta_rule": "power", "eta0": 0.1, "p": 0.5}
})";
    const fs::path fixed_path = tmp.path / "fixed.json";
    std::ofstream(fixed_path) << fixed_cfg;
    std::ostringstream out2;
    CHECK(cli::cmd_validate(fixed_path, out2) == cli::kExitOk);
    CHECK(out2.str().find("theta does not diminish") != std::string::npos);
}

TEST_CASE("cmd_sweep: cartesian product, sorted and deterministic") {
    TempDir tmp;
    const std::string extra = R"(,
  "sweep": {"seeds": [5, 3, 1, 2, 4], "c_values": [1.0, 0.5, 2.0]})";
    const std::string cfg = write_config(tmp.path, (tmp.path / "out").string(), 300, extra);
    std::ostringstream log;
    CHECK(cli::cmd_sweep(cfg, log) == cli::kExitOk);
    const CsvTable table = read_csv((tmp.path / "out" / "sweep.csv").string());
    CHECK(table.header == std::vector<std::string>{"seed", "c", "terminal_f",
                                                   "terminal_stationarity", "diverged"});
    CHECK(table.rows.size() == 15);
    // rows sorted by (seed, c)
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        const long s_prev = std::stol(table.rows[i - 1][0]);
        const long s_cur = std::stol(table.rows[i][0]);
        CHECK(s_prev <= s_cur);
        if (s_prev == s_cur) {
            CHECK(parse_double(table.rows[i - 1][1]) < parse_double(table.rows[i][1]));
        }
    }
    // distinct seeds produce distinct outcomes
    CHECK(table.rows[0][2] != table.rows[3][2]);

    const std::string first = slurp(tmp.path / "out" / "sweep.csv");
    std::ostringstream log2;
    CHECK(cli::cmd_sweep(cfg, log2) == cli::kExitOk);
    CHECK(slurp(tmp.path / "out" / "sweep.csv") == first);
}

TEST_CASE("cmd_sweep: per-run divergence is recorded, not fatal") {
    TempDir tmp;
    const std::string text = R"({
  "problem": {"kind": "l1_regression", "A": [[1e9]], "b": [0.0]},
  "method": {"name": "heavy_ball", "seed": 4, "horizon": 200, "x0": [1.0]},
  "schedule": {"regime": "single", "tau": 1.0, "eta_rule": "power", "eta0": 1e-12, "p": 0.5},
  "output": {"directory": ")" + (tmp.path / "out").string() + R"("},
  "sweep": {"seeds": [4], "c_values": [1.0, 1e18]}
})";
    const fs::path cfg = tmp.path / "sweep_div.json";
    std::ofstream(cfg) << text;
    std::ostringstream log;
    CHECK(cli::cmd_sweep(cfg, log) == cli::kExitOk);
    const CsvTable table = read_csv((tmp.path / "out" / "sweep.csv").string());
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0][4] == "0");  // c = 1 converges quietly
    CHECK(table.rows[1][4] == "1");  // c = 1e18 diverges, flagged only
}

TEST_CASE("cmd_sweep: a single (seed, c) run matches cmd_run's terminal state") {
    TempDir tmp;
    const std::string extra = R"(,
  "sweep": {"seeds": [17], "c_values": [1.0]})";
    const std::string cfg_path = write_config(tmp.path, (tmp.path / "out").string(), 200, extra);
    std::ostringstream log;
    CHECK(cli::cmd_sweep(cfg_path, log) == cli::kExitOk);

    const ExperimentConfig cfg = load_config(cfg_path);
    const auto problem = build_problem(cfg.problem);
    const RunRecord record = run(*problem, cfg.method);  // seed 17 is already the config seed

    const CsvTable table = read_csv((tmp.path / "out" / "sweep.csv").string());
    REQUIRE(table.rows.size() == 1);
    CHECK(parse_double(table.rows[0][2]) == problem->value(record.terminal_x));
    CHECK(table.rows[0][4] == "0");
}
