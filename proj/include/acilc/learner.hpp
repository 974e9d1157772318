#pragma once

#include "acilc/lti.hpp"
#include "acilc/numerics.hpp"
#include "acilc/trajectory.hpp"

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <vector>

namespace acilc {

struct DecaySchedule {
    double initial = 0.0;
    double rate = 1.0;
    double floor = 0.0;

    double value(int j) const;
    void validate(const char* name) const;
};

struct LearnerSchedules {
    DecaySchedule alpha_w;
    DecaySchedule alpha_theta;
    DecaySchedule sigma;  // standard deviation; the variance is sigma^2
};

struct MdpConfig {
    double gamma = 0.5;
    Weighting weights;
    BasisMatrix basis;

    int horizon() const { return basis.horizon(); }
    int m() const { return basis.size(); }
    void validate() const;
};

// How state features, actions and costs are scaled before they reach the
// learner. With every option off the learner is the plain form
// phi(x) = x, upsilon = action, raw cost.
struct LearnerScaling {
    enum class Mode { None, Auto, Explicit };

    bool constant_feature = true;
    Mode feature_mode = Mode::Auto;
    double feature_gain = 0.03;        // Auto: phi_i = gain * x_i / |x_0,i|
    Eigen::VectorXd feature_scale;     // Explicit (and resolved Auto)
    Mode action_mode = Mode::Auto;     // Auto: upsilon_i = a_i / ||psi_i||
    Eigen::VectorXd action_scale;
    Mode cost_mode = Mode::Auto;       // Auto: cost / cost of trial 0
    double cost_scale = 1.0;
};

enum class CostTiming {
    PostAction,  // c_j = J(v_{j+1}) with the error of the trial that used v_{j+1}
    PreAction,   // c_j = c(e_j, v_j, v_{j+1})
};

enum class InitialPolicy { Zero, Given };

struct AcilcOptions {
    LearnerScaling scaling;
    CostTiming cost_timing = CostTiming::PostAction;
    double td_error_clip = 0.5;  // 0 disables
    InitialPolicy initial_policy = InitialPolicy::Zero;
    Eigen::VectorXd initial_policy_upsilon;  // Given: constant policy mean in upsilon units
    Eigen::VectorXd initial_upsilon;         // upsilon_0; empty means zero
    bool evaluation_mode = false;            // sigma = 0, actor frozen
    bool store_errors = false;
};

struct CriticState {
    Eigen::VectorXd w;
    double alpha_w = 0.0;
};

struct ActorState {
    Eigen::MatrixXd theta;  // features x actions
    double alpha_theta = 0.0;
    double sigma2 = 0.0;
};

struct TrialRecord {
    int j = 0;
    Eigen::VectorXd upsilon;  // applied in trial j
    double e_norm = 0.0;
    double cost = 0.0;
    double delta = 0.0;       // TD error of the step that produced this trial
    double sigma2 = 0.0;
    double alpha_w = 0.0;
    double alpha_theta = 0.0;
    Eigen::VectorXd x;        // Psi^T e_j
    Eigen::VectorXd w;        // after the update of this step
    Eigen::MatrixXd theta;
    Eigen::VectorXd e;        // only with store_errors
};

struct AcilcResult {
    std::vector<TrialRecord> records;
    LearnerScaling scaling;       // resolved
    CriticState critic;
    ActorState actor;
    Eigen::VectorXd greedy_upsilon;  // policy mean at the last state
    double greedy_cost = 0.0;
    Eigen::VectorXd final_error;
};

class AcilcDivergence : public std::runtime_error {
public:
    AcilcDivergence(int trial, const std::string& what);
    int trial() const { return trial_; }

private:
    int trial_;
};

Eigen::VectorXd project_error(const BasisMatrix& psi, const Eigen::VectorXd& e);

double critic_value(const CriticState& critic, const Eigen::VectorXd& phi);
double td_error(double cost, double v_next, double v_now, double gamma);
CriticState critic_update(const CriticState& critic, double delta, const Eigen::VectorXd& phi);

Eigen::VectorXd policy_mean(const ActorState& actor, const Eigen::VectorXd& phi);
Eigen::VectorXd draw_action(const ActorState& actor, const Eigen::VectorXd& phi, SeededSampler& sampler);
// G(a, b) = phi(a) * (action(b) - mean(b)) / sigma2
Eigen::MatrixXd log_policy_gradient(const Eigen::VectorXd& action, const Eigen::VectorXd& mean,
                                    double sigma2, const Eigen::VectorXd& phi);
// Sum over components of log N(action_b; mean_b, sigma2).
double log_policy_density(const Eigen::VectorXd& action, const Eigen::VectorXd& mean, double sigma2);
ActorState actor_update(const ActorState& actor, double delta, const Eigen::MatrixXd& grad);

// Feature vector of a projected error under a resolved scaling.
Eigen::VectorXd features(const LearnerScaling& scaling, const Eigen::VectorXd& x);
int feature_count(const LearnerScaling& scaling, int m);

// Fills the Auto entries from the basis and trial-0 data.
LearnerScaling resolve_scaling(const LearnerScaling& s, const BasisMatrix& psi, const Eigen::VectorXd& x0,
                               double cost0);

AcilcResult run_acilc(const LiftedSystem& plant, const ReferenceProfile& r, const MdpConfig& mdp,
                      const LearnerSchedules& schedules, const AcilcOptions& options,
                      SeededSampler& sampler, int num_trials);

}  // namespace acilc
