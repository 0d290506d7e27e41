#include "gsgd/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace gsgd {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError("config error at " + where + ": " + what);
}

void require_keys(const Json& obj, const std::string& where,
                  std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(where, "expected an object");
    for (const auto& item : obj.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
                return item.key() == k;
            }) == allowed.end()) {
            fail(where, "unknown key '" + item.key() + "'");
        }
    }
}

template <typename T>
T get_or(const Json& obj, const char* key, const T& fallback) {
    if (!obj.contains(key)) return fallback;
    return obj.at(key).get<T>();
}

Matrix parse_matrix(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array of rows");
    Matrix m;
    for (const auto& row : j) {
        if (!row.is_array()) fail(where, "expected nested arrays");
        m.push_back(row.get<RealVector>());
    }
    return m;
}

Json matrix_to_json(const Matrix& m) {
    Json j = Json::array();
    for (const auto& row : m) j.push_back(row);
    return j;
}

ProblemConfig parse_problem(const Json& j) {
    if (!j.is_object() || !j.contains("kind")) fail("problem", "missing 'kind'");
    ProblemConfig p;
    p.kind = problem_kind_from_string(j.at("kind").get<std::string>());
    switch (p.kind) {
        case ProblemKind::counterexample:
            require_keys(j, "problem", {"kind", "side", "kink_tol"});
            break;
        case ProblemKind::l1_regression:
            require_keys(j, "problem", {"kind", "side", "kink_tol", "A", "b", "synthetic"});
            break;
        case ProblemKind::relu_net:
            require_keys(j, "problem",
                         {"kind", "n_in", "n_hidden", "loss", "c_relu", "inputs", "labels",
                          "synthetic"});
            break;
    }
    p.side = kink_side_from_string(get_or<std::string>(j, "side", "plus"));
    p.kink_tol = get_or<double>(j, "kink_tol", 0.0);
    if (p.kink_tol < 0.0) fail("problem.kink_tol", "must be >= 0");

    if (j.contains("synthetic")) {
        const Json& s = j.at("synthetic");
        require_keys(s, "problem.synthetic", {"rows", "cols", "data_seed", "noise_std"});
        SyntheticRecipe r;
        r.rows = get_or<std::size_t>(s, "rows", r.rows);
        r.cols = get_or<std::size_t>(s, "cols", r.cols);
        r.data_seed = get_or<std::uint64_t>(s, "data_seed", r.data_seed);
        r.noise_std = get_or<double>(s, "noise_std", r.noise_std);
        p.synthetic = r;
    }
    if (j.contains("A")) p.a = parse_matrix(j.at("A"), "problem.A");
    if (j.contains("b")) p.b = j.at("b").get<RealVector>();
    if (j.contains("inputs")) p.inputs = parse_matrix(j.at("inputs"), "problem.inputs");
    if (j.contains("labels")) p.labels = j.at("labels").get<RealVector>();
    p.n_in = get_or<std::size_t>(j, "n_in", p.n_in);
    p.n_hidden = get_or<std::size_t>(j, "n_hidden", p.n_hidden);
    if (j.contains("loss")) p.loss = loss_kind_from_string(j.at("loss").get<std::string>());
    p.c_relu = get_or<double>(j, "c_relu", p.c_relu);

    switch (p.kind) {
        case ProblemKind::counterexample:
            break;
        case ProblemKind::l1_regression:
            if (!p.synthetic && !(p.a && p.b)) {
                fail("problem", "l1_regression needs either 'A'+'b' or 'synthetic'");
            }
            break;
        case ProblemKind::relu_net:
            if (!p.synthetic && !(p.inputs && p.labels)) {
                fail("problem", "relu_net needs either 'inputs'+'labels' or 'synthetic'");
            }
            break;
    }
    return p;
}

StepsizeSchedule parse_schedule(const Json& j) {
    require_keys(j, "schedule", {"regime", "tau", "theta0", "eta_rule", "eta0", "p", "c"});
    StepsizeSchedule s;
    if (!j.contains("regime")) fail("schedule", "missing 'regime'");
    s.regime = regime_from_string(j.at("regime").get<std::string>());
    s.tau = get_or<double>(j, "tau", s.tau);
    s.theta0 = get_or<double>(j, "theta0", s.theta0);
    s.eta_rule = eta_rule_from_string(get_or<std::string>(j, "eta_rule", "power"));
    s.eta0 = get_or<double>(j, "eta0", s.eta0);
    s.exponent = get_or<double>(j, "p", s.exponent);
    s.scale_c = get_or<double>(j, "c", s.scale_c);
    if (!(s.eta0 > 0.0)) fail("schedule.eta0", "must be > 0");
    if (!(s.scale_c > 0.0)) fail("schedule.c", "must be > 0");
    if (s.eta_rule == EtaRule::power && !(s.exponent > 0.0 && s.exponent <= 1.0)) {
        fail("schedule.p", "power exponent must lie in (0, 1]");
    }
    if (s.regime == Regime::single && !(s.tau > 0.0)) fail("schedule.tau", "must be > 0");
    if (s.regime == Regime::fixed && !(s.theta0 > 0.0 && s.theta0 <= 1.0)) {
        fail("schedule.theta0", "must lie in (0, 1]");
    }
    return s;
}

GsgdConfig parse_method(const Json& j, const Json& schedule) {
    require_keys(j, "method",
                 {"name", "alpha", "clip_level", "lion_tau_scale", "tie", "noise", "seed",
                  "horizon", "x0", "m0", "init_scale"});
    GsgdConfig m;
    if (!j.contains("name")) fail("method", "missing 'name'");
    m.method = method_from_string(j.at("name").get<std::string>());
    m.alpha = get_or<double>(j, "alpha", 0.0);
    if (m.alpha < 0.0) fail("method.alpha", "must be >= 0");
    m.clip_level = get_or<double>(j, "clip_level", m.clip_level);
    if (m.method == Method::clipped && !(m.clip_level > 0.0)) {
        fail("method.clip_level", "must be > 0");
    }
    m.lion_tau_scale = get_or<double>(j, "lion_tau_scale", m.lion_tau_scale);
    if (!(m.lion_tau_scale > 0.0)) fail("method.lion_tau_scale", "must be > 0");
    m.tie = tie_policy_from_string(get_or<std::string>(j, "tie", "zero"));
    if (j.contains("noise")) {
        const Json& n = j.at("noise");
        require_keys(n, "method.noise", {"model", "bound"});
        const std::string model = get_or<std::string>(n, "model", "none");
        if (model == "none") {
            m.noise.kind = NoiseModel::Kind::none;
        } else if (model == "uniform") {
            m.noise.kind = NoiseModel::Kind::uniform;
            m.noise.bound = get_or<double>(n, "bound", 0.0);
            if (m.noise.bound < 0.0) fail("method.noise.bound", "must be >= 0");
        } else {
            fail("method.noise.model", "unknown model '" + model + "'");
        }
    }
    m.seed = get_or<std::uint64_t>(j, "seed", 0);
    m.horizon = get_or<std::size_t>(j, "horizon", 0);
    if (j.contains("x0")) m.x0 = j.at("x0").get<RealVector>();
    if (j.contains("m0")) m.m0 = j.at("m0").get<RealVector>();
    m.init_scale = get_or<double>(j, "init_scale", m.init_scale);
    if (!(m.init_scale > 0.0)) fail("method.init_scale", "must be > 0");
    m.schedule = parse_schedule(schedule);
    return m;
}

OutputConfig parse_output(const Json& j) {
    require_keys(j, "output", {"directory", "probe_period", "csv_precision"});
    OutputConfig o;
    o.directory = get_or<std::string>(j, "directory", o.directory);
    o.probe_period = get_or<std::size_t>(j, "probe_period", o.probe_period);
    if (o.probe_period == 0) fail("output.probe_period", "must be >= 1");
    o.csv_precision = get_or<int>(j, "csv_precision", o.csv_precision);
    if (o.csv_precision < 1 || o.csv_precision > 17) {
        fail("output.csv_precision", "must lie in [1, 17]");
    }
    return o;
}

SweepConfig parse_sweep(const Json& j) {
    require_keys(j, "sweep", {"seeds", "c_values"});
    SweepConfig s;
    if (j.contains("seeds")) s.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("c_values")) s.c_values = j.at("c_values").get<std::vector<double>>();
    if (s.seeds.empty()) fail("sweep.seeds", "must list at least one seed");
    if (s.c_values.empty()) s.c_values = {1.0};
    return s;
}

std::size_t line_of_offset(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

}  // namespace

std::string to_string(ProblemKind k) {
    switch (k) {
        case ProblemKind::counterexample: return "counterexample";
        case ProblemKind::l1_regression: return "l1_regression";
        case ProblemKind::relu_net: return "relu_net";
    }
    return "counterexample";
}

ProblemKind problem_kind_from_string(const std::string& s) {
    if (s == "counterexample") return ProblemKind::counterexample;
    if (s == "l1_regression") return ProblemKind::l1_regression;
    if (s == "relu_net") return ProblemKind::relu_net;
    throw ConfigError("unknown problem kind: " + s);
}

ExperimentConfig parse_config(const std::string& json_text) {
    Json root;
    try {
        root = Json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        fail("line " + std::to_string(line_of_offset(json_text, e.byte)), e.what());
    }
    require_keys(root, "<root>", {"problem", "method", "schedule", "output", "sweep"});
    if (!root.contains("problem")) fail("<root>", "missing 'problem' block");
    if (!root.contains("method")) fail("<root>", "missing 'method' block");
    if (!root.contains("schedule")) fail("<root>", "missing 'schedule' block");

    ExperimentConfig cfg;
    try {
        cfg.problem = parse_problem(root.at("problem"));
        cfg.method = parse_method(root.at("method"), root.at("schedule"));
        if (root.contains("output")) cfg.output = parse_output(root.at("output"));
        if (root.contains("sweep")) cfg.sweep = parse_sweep(root.at("sweep"));
    } catch (const nlohmann::json::exception& e) {
        fail("<value>", e.what());
    }
    cfg.method.probe_period = cfg.output.probe_period;
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& config) {
    Json root;

    Json p;
    p["kind"] = to_string(config.problem.kind);
    if (config.problem.kind != ProblemKind::relu_net) {
        p["side"] = to_string(config.problem.side);
        p["kink_tol"] = config.problem.kink_tol;
    }
    if (config.problem.synthetic) {
        const SyntheticRecipe& r = *config.problem.synthetic;
        p["synthetic"] = {{"rows", r.rows}, {"cols", r.cols}, {"data_seed", r.data_seed},
                          {"noise_std", r.noise_std}};
    }
    if (config.problem.a) p["A"] = matrix_to_json(*config.problem.a);
    if (config.problem.b) p["b"] = *config.problem.b;
    if (config.problem.kind == ProblemKind::relu_net) {
        p["n_in"] = config.problem.n_in;
        p["n_hidden"] = config.problem.n_hidden;
        p["loss"] = to_string(config.problem.loss);
        p["c_relu"] = config.problem.c_relu;
        if (config.problem.inputs) p["inputs"] = matrix_to_json(*config.problem.inputs);
        if (config.problem.labels) p["labels"] = *config.problem.labels;
    }
    root["problem"] = p;

    Json m;
    m["name"] = to_string(config.method.method);
    m["alpha"] = config.method.alpha;
    m["clip_level"] = config.method.clip_level;
    m["lion_tau_scale"] = config.method.lion_tau_scale;
    m["tie"] = to_string(config.method.tie);
    if (config.method.noise.kind == NoiseModel::Kind::uniform) {
        m["noise"] = {{"model", "uniform"}, {"bound", config.method.noise.bound}};
    } else {
        m["noise"] = {{"model", "none"}};
    }
    m["seed"] = config.method.seed;
    m["horizon"] = config.method.horizon;
    if (config.method.x0) m["x0"] = *config.method.x0;
    if (config.method.m0) m["m0"] = *config.method.m0;
    m["init_scale"] = config.method.init_scale;
    root["method"] = m;

    const StepsizeSchedule& s = config.method.schedule;
    Json sj;
    sj["regime"] = to_string(s.regime);
    sj["tau"] = s.tau;
    sj["theta0"] = s.theta0;
    sj["eta_rule"] = to_string(s.eta_rule);
    sj["eta0"] = s.eta0;
    sj["p"] = s.exponent;
    sj["c"] = s.scale_c;
    root["schedule"] = sj;

    root["output"] = {{"directory", config.output.directory},
                      {"probe_period", config.output.probe_period},
                      {"csv_precision", config.output.csv_precision}};
    if (config.sweep) {
        root["sweep"] = {{"seeds", config.sweep->seeds}, {"c_values", config.sweep->c_values}};
    }
    return root.dump(2) + "\n";
}

std::unique_ptr<Problem> build_problem(const ProblemConfig& config) {
    switch (config.kind) {
        case ProblemKind::counterexample:
            return make_counterexample(config.side, config.kink_tol);
        case ProblemKind::l1_regression: {
            if (config.synthetic) {
                SyntheticData data = generate_synthetic(*config.synthetic);
                return make_l1_regression(std::move(data.a), std::move(data.b), config.side,
                                          config.kink_tol);
            }
            return make_l1_regression(*config.a, *config.b, config.side, config.kink_tol);
        }
        case ProblemKind::relu_net: {
            Matrix inputs;
            RealVector labels;
            if (config.synthetic) {
                SyntheticData data = generate_synthetic(
                    SyntheticRecipe{config.synthetic->rows, config.n_in,
                                    config.synthetic->data_seed, config.synthetic->noise_std});
                inputs = std::move(data.a);
                labels = std::move(data.b);
            } else {
                inputs = *config.inputs;
                labels = *config.labels;
            }
            return make_relu_net(config.n_in, config.n_hidden, std::move(inputs),
                                 std::move(labels), config.loss, config.c_relu);
        }
    }
    throw ConfigError("build_problem: unreachable");
}

}  // namespace gsgd
