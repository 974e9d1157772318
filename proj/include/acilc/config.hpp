#pragma once

#include "acilc/learner.hpp"
#include "acilc/lti.hpp"
#include "acilc/numerics.hpp"
#include "acilc/trajectory.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace acilc {

struct TransferFunctionConfig {
    double gain = 1.0;  // multiplies the numerator
    std::vector<double> numerator;
    std::vector<double> denominator;
    double sample_time_s = 1e-3;
    std::vector<double> fixed_poles;   // denominator roots imposed by constrain_poles
    double minreal_tolerance = 0.0;    // 0 keeps every pole/zero

    // Applies fixed_poles, then minreal.
    TransferFunction build() const;
};

enum class Method { Noilc, Acilc, Both };
enum class BasisKind { Derivative, Identity };

struct AcilcConfig {
    double gamma = 0.5;
    LearnerSchedules schedules{{1.0, 1.0, 1.0}, {10.0, 0.985, 1.0}, {3.0, 0.96, 0.03}};
    LearnerScaling scaling;
    CostTiming cost_timing = CostTiming::PostAction;
    double td_error_clip = 0.5;
    bool initialize_from_noilc = false;  // constant policy at the NOILC fixed point
    bool evaluation_mode = false;
    bool store_errors = false;
};

struct ExperimentConfig {
    TransferFunctionConfig plant;
    TransferFunctionConfig controller;
    int horizon_samples = 2000;
    std::vector<SegmentSpec> reference;
    BasisKind basis = BasisKind::Derivative;
    Weighting weights;
    Method method = Method::Both;
    int num_trials = 40;
    std::vector<std::uint64_t> seeds{0};
    std::string output_dir = "runs";
    AcilcConfig acilc;

    // Dotted paths of every field the file left out.
    std::vector<std::string> defaulted;
};

// All validation problems of one file, one line each.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

std::vector<SegmentSpec> default_reference();

// `source` is a file path, or the name of a built-in preset ("paper_sec5").
ExperimentConfig load_config(const std::string& source);
ExperimentConfig parse_config(const std::string& yaml_text);
std::string preset_text(const std::string& name);

// Full echo in the loader's own format.
std::string config_to_yaml(const ExperimentConfig& cfg);

const char* method_name(Method m);

}  // namespace acilc
