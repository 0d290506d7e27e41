#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsgd/optimizer.hpp"
#include "gsgd/problems.hpp"
#include "gsgd/schedules.hpp"

namespace gsgd {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ProblemKind { counterexample, l1_regression, relu_net };

std::string to_string(ProblemKind k);
ProblemKind problem_kind_from_string(const std::string& s);

struct ProblemConfig {
    ProblemKind kind = ProblemKind::counterexample;
    KinkSide side = KinkSide::plus;
    double kink_tol = 0.0;

    // l1_regression: either inline data or a synthetic recipe
    std::optional<Matrix> a;
    std::optional<RealVector> b;
    std::optional<SyntheticRecipe> synthetic;

    // relu_net
    std::size_t n_in = 1;
    std::size_t n_hidden = 1;
    LossKind loss = LossKind::half_square;
    double c_relu = 0.0;
    std::optional<Matrix> inputs;
    std::optional<RealVector> labels;

    bool operator==(const ProblemConfig&) const = default;
};

struct OutputConfig {
    std::string directory = "out";
    std::size_t probe_period = 100;
    int csv_precision = 17;

    bool operator==(const OutputConfig&) const = default;
};

struct SweepConfig {
    std::vector<std::uint64_t> seeds;
    std::vector<double> c_values;

    bool operator==(const SweepConfig&) const = default;
};

struct ExperimentConfig {
    ProblemConfig problem;
    GsgdConfig method;  // schedule included
    OutputConfig output;
    std::optional<SweepConfig> sweep;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Parses the single-document JSON config. Unknown keys are errors; malformed
/// JSON raises a ConfigError with a line-numbered message.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// Canonical serialization; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

/// Instantiates the problem described by the config.
std::unique_ptr<Problem> build_problem(const ProblemConfig& config);

}  // namespace gsgd
