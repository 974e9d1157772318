#pragma once

#include "acilc/config.hpp"
#include "acilc/learner.hpp"
#include "acilc/lti.hpp"
#include "acilc/noilc.hpp"
#include "acilc/trajectory.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace acilc {

struct TrialLog {
    std::string method;
    std::uint64_t seed = 0;
    std::vector<TrialRecord> records;
    Eigen::VectorXd final_upsilon;      // NOILC: last iterate; ACILC: final policy mean
    Eigen::VectorXd final_error;        // error of the last trial
    Eigen::VectorXd final_feedforward;  // Psi * upsilon of the last trial
    std::optional<double> convergence_margin;
};

struct RunSummary {
    std::string method;
    double final_cost = 0.0;
    double min_cost = 0.0;
    int convergence_trial = 0;  // first trial within 5% of the final cost
    Eigen::VectorXd final_upsilon;
    std::optional<double> convergence_margin;
    std::uint64_t seed = 0;
};

struct Comparison {
    RunSummary a;
    RunSummary b;
    double final_cost_ratio = 0.0;          // b / a
    Eigen::VectorXd upsilon_delta;          // b - a
    double feedforward_max_abs_diff = 0.0;  // max |f_b - f_a|
};

// Everything that is built once per experiment.
struct ExperimentSystem {
    TransferFunction plant;
    TransferFunction controller;
    LiftedSystem lifted;
    ReferenceProfile reference;
    BasisMatrix basis;
};

ExperimentSystem build_system(const ExperimentConfig& cfg);

// NOILC iteration v_{j+1} = Q v_j + L e_j from upsilon_0 = 0; the log uses the learner's
// CSV schema with zero learner columns.
TrialLog run_noilc(const ExperimentSystem& sys, const Weighting& W, const NoilcGains& gains, int num_trials);

MdpConfig make_mdp(const ExperimentConfig& cfg, const ExperimentSystem& sys);
AcilcOptions make_acilc_options(const ExperimentConfig& cfg, const Eigen::VectorXd& noilc_upsilon);

TrialLog run_acilc_seed(const ExperimentConfig& cfg, const ExperimentSystem& sys, std::uint64_t seed,
                        const Eigen::VectorXd& noilc_upsilon);

RunSummary summarize(const TrialLog& log);
Comparison compare_runs(const TrialLog& a, const TrialLog& b);

struct RunOptions {
    std::vector<std::uint64_t> seeds;      // replaces the config's seeds when non-empty
    std::optional<int> num_trials;
    std::optional<std::string> output_dir;
    bool write_files = true;
    unsigned max_parallel = 0;             // 0: hardware concurrency
};

struct ExperimentResult {
    ExperimentConfig config;  // with overrides applied
    std::vector<TrialLog> logs;
    std::vector<RunSummary> summaries;
    std::optional<NoilcGains> gains;
    std::vector<std::string> failures;   // one line per diverged seed
    std::vector<Comparison> comparisons; // NOILC vs each ACILC seed
    std::filesystem::path output_dir;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

std::string trial_csv(const TrialLog& log);
// Writes `path` plus e_final.csv, f_final.csv and upsilon_final.csv beside it.
void export_csv(const TrialLog& log, const std::filesystem::path& path);
// Reads a file written by export_csv; the sibling files are loaded when present.
TrialLog read_trial_csv(const std::filesystem::path& path);
std::string reference_csv(const ReferenceProfile& r);

std::string code_version();

}  // namespace acilc
