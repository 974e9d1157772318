#include "acilc/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace acilc {

double DecaySchedule::value(int j) const {
    return std::max(floor, initial * std::pow(rate, static_cast<double>(j)));
}

void DecaySchedule::validate(const char* name) const {
    const std::string n(name);
    if (!(initial >= 0.0) || !std::isfinite(initial)) throw std::invalid_argument(n + ".initial must be nonnegative");
    if (!(rate > 0.0 && rate <= 1.0)) throw std::invalid_argument(n + ".rate must be in (0, 1]");
    if (!(floor >= 0.0) || !std::isfinite(floor)) throw std::invalid_argument(n + ".floor must be nonnegative");
}

void MdpConfig::validate() const {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must be in (0, 1]");
    if (basis.size() < 1) throw std::invalid_argument("basis must have at least one column");
    weights.validate();
}

AcilcDivergence::AcilcDivergence(int trial, const std::string& what)
    : std::runtime_error("ACILC diverged at trial " + std::to_string(trial) + ": " + what), trial_(trial) {}

Eigen::VectorXd project_error(const BasisMatrix& psi, const Eigen::VectorXd& e) {
    if (e.size() != psi.columns.rows()) throw std::invalid_argument("project_error: length mismatch");
    return psi.columns.transpose() * e;
}

double critic_value(const CriticState& critic, const Eigen::VectorXd& phi) {
    if (phi.size() != critic.w.size()) throw std::invalid_argument("critic_value: feature length mismatch");
    return critic.w.dot(phi);
}

double td_error(double cost, double v_next, double v_now, double gamma) {
    return cost + gamma * v_next - v_now;
}

CriticState critic_update(const CriticState& critic, double delta, const Eigen::VectorXd& phi) {
    if (phi.size() != critic.w.size()) throw std::invalid_argument("critic_update: feature length mismatch");
    CriticState next = critic;
    next.w += critic.alpha_w * delta * phi;
    return next;
}

Eigen::VectorXd policy_mean(const ActorState& actor, const Eigen::VectorXd& phi) {
    if (phi.size() != actor.theta.rows()) throw std::invalid_argument("policy_mean: feature length mismatch");
    return actor.theta.transpose() * phi;
}

Eigen::VectorXd draw_action(const ActorState& actor, const Eigen::VectorXd& phi, SeededSampler& sampler) {
    return gaussian_vector(sampler, policy_mean(actor, phi), actor.sigma2);
}

Eigen::MatrixXd log_policy_gradient(const Eigen::VectorXd& action, const Eigen::VectorXd& mean,
                                    double sigma2, const Eigen::VectorXd& phi) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("policy gradient undefined for sigma2 <= 0");
    if (action.size() != mean.size()) throw std::invalid_argument("log_policy_gradient: length mismatch");
    return phi * ((action - mean) / sigma2).transpose();
}

double log_policy_density(const Eigen::VectorXd& action, const Eigen::VectorXd& mean, double sigma2) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("density undefined for sigma2 <= 0");
    const double k = static_cast<double>(action.size());
    return -0.5 * (action - mean).squaredNorm() / sigma2 - 0.5 * k * std::log(2.0 * std::numbers::pi * sigma2);
}

ActorState actor_update(const ActorState& actor, double delta, const Eigen::MatrixXd& grad) {
    if (grad.rows() != actor.theta.rows() || grad.cols() != actor.theta.cols()) {
        throw std::invalid_argument("actor_update: gradient shape mismatch");
    }
    ActorState next = actor;
    next.theta -= actor.alpha_theta * delta * grad;
    return next;
}

int feature_count(const LearnerScaling& scaling, int m) {
    return m + (scaling.constant_feature ? 1 : 0);
}

Eigen::VectorXd features(const LearnerScaling& scaling, const Eigen::VectorXd& x) {
    const Eigen::Index m = x.size();
    Eigen::VectorXd phi(feature_count(scaling, static_cast<int>(m)));
    if (scaling.feature_scale.size() == m) {
        phi.head(m) = scaling.feature_scale.cwiseProduct(x);
    } else {
        phi.head(m) = x;
    }
    if (scaling.constant_feature) phi(m) = 1.0;
    return phi;
}

LearnerScaling resolve_scaling(const LearnerScaling& s, const BasisMatrix& psi, const Eigen::VectorXd& x0,
                               double cost0) {
    const Eigen::Index m = psi.columns.cols();
    LearnerScaling out = s;
    switch (s.feature_mode) {
        case LearnerScaling::Mode::None: out.feature_scale = Eigen::VectorXd::Ones(m); break;
        case LearnerScaling::Mode::Auto:
            out.feature_scale.resize(m);
            for (Eigen::Index i = 0; i < m; ++i) {
                const double a = std::abs(x0(i));
                out.feature_scale(i) = s.feature_gain / (a > 0.0 ? a : 1.0);
            }
            break;
        case LearnerScaling::Mode::Explicit:
            if (s.feature_scale.size() != m) throw std::invalid_argument("feature scaling needs one entry per basis column");
            break;
    }
    switch (s.action_mode) {
        case LearnerScaling::Mode::None: out.action_scale = Eigen::VectorXd::Ones(m); break;
        case LearnerScaling::Mode::Auto:
            out.action_scale.resize(m);
            for (Eigen::Index i = 0; i < m; ++i) {
                const double n = psi.columns.col(i).norm();
                out.action_scale(i) = n > 0.0 ? 1.0 / n : 1.0;
            }
            break;
        case LearnerScaling::Mode::Explicit:
            if (s.action_scale.size() != m) throw std::invalid_argument("action scaling needs one entry per basis column");
            break;
    }
    switch (s.cost_mode) {
        case LearnerScaling::Mode::None: out.cost_scale = 1.0; break;
        case LearnerScaling::Mode::Auto: out.cost_scale = cost0 > 0.0 ? 1.0 / cost0 : 1.0; break;
        case LearnerScaling::Mode::Explicit: break;
    }
    out.feature_mode = out.action_mode = out.cost_mode = LearnerScaling::Mode::Explicit;
    return out;
}

AcilcResult run_acilc(const LiftedSystem& plant, const ReferenceProfile& r, const MdpConfig& mdp,
                      const LearnerSchedules& schedules, const AcilcOptions& options,
                      SeededSampler& sampler, int num_trials) {
    mdp.validate();
    schedules.alpha_w.validate("alpha_w");
    schedules.alpha_theta.validate("alpha_theta");
    schedules.sigma.validate("sigma");
    const int n = plant.horizon;
    const int m = mdp.m();
    if (mdp.horizon() != n || r.samples.size() != n) {
        throw std::invalid_argument("run_acilc: reference, basis and plant horizons differ");
    }

    AcilcResult result;
    if (num_trials <= 0) return result;

    const Eigen::MatrixXd& psi = mdp.basis.columns;
    const Eigen::VectorXd Sr = plant.S.triangularView<Eigen::Lower>() * r.samples;
    const Eigen::MatrixXd G = plant.J.triangularView<Eigen::Lower>() * psi;
    auto error_of = [&](const Eigen::VectorXd& u) { return (Sr - G * u).eval(); };
    const Weighting& W = mdp.weights;

    Eigen::VectorXd upsilon = options.initial_upsilon.size() ? options.initial_upsilon : Eigen::VectorXd::Zero(m);
    if (upsilon.size() != m) throw std::invalid_argument("initial upsilon needs one entry per basis column");
    Eigen::VectorXd e = error_of(upsilon);
    Eigen::VectorXd x = psi.transpose() * e;
    const double cost0 = trial_cost(e, Eigen::VectorXd::Zero(m), upsilon, W);

    const LearnerScaling scaling = resolve_scaling(options.scaling, mdp.basis, x, cost0);
    result.scaling = scaling;
    const int nf = feature_count(scaling, m);

    CriticState critic{Eigen::VectorXd::Zero(nf), 0.0};
    ActorState actor{Eigen::MatrixXd::Zero(nf, m), 0.0, 0.0};
    if (options.initial_policy == InitialPolicy::Given) {
        if (!scaling.constant_feature) throw std::invalid_argument("a given initial policy needs the constant feature");
        if (options.initial_policy_upsilon.size() != m) throw std::invalid_argument("initial policy needs one entry per basis column");
        actor.theta.row(nf - 1) = options.initial_policy_upsilon.cwiseQuotient(scaling.action_scale).transpose();
    }

    auto record = [&](int j, double cost, double delta) {
        TrialRecord rec;
        rec.j = j;
        rec.upsilon = upsilon;
        rec.e_norm = e.norm();
        rec.cost = cost;
        rec.delta = delta;
        rec.sigma2 = actor.sigma2;
        rec.alpha_w = critic.alpha_w;
        rec.alpha_theta = actor.alpha_theta;
        rec.x = x;
        rec.w = critic.w;
        rec.theta = actor.theta;
        if (options.store_errors) rec.e = e;
        result.records.push_back(std::move(rec));
    };
    record(0, cost0, 0.0);

    for (int step = 0; step + 1 < num_trials; ++step) {
        critic.alpha_w = schedules.alpha_w.value(step);
        actor.alpha_theta = schedules.alpha_theta.value(step);
        const double sigma = options.evaluation_mode ? 0.0 : schedules.sigma.value(step);
        actor.sigma2 = sigma * sigma;

        const Eigen::VectorXd phi = features(scaling, x);
        const Eigen::VectorXd mean = policy_mean(actor, phi);
        const Eigen::VectorXd action = draw_action(actor, phi, sampler);
        const Eigen::VectorXd next_upsilon = scaling.action_scale.cwiseProduct(action);
        const Eigen::VectorXd next_e = error_of(next_upsilon);
        const Eigen::VectorXd next_x = psi.transpose() * next_e;

        const double logged_cost = trial_cost(next_e, upsilon, next_upsilon, W);
        const double cost = options.cost_timing == CostTiming::PostAction ? logged_cost
                                                                           : trial_cost(e, upsilon, next_upsilon, W);
        const Eigen::VectorXd next_phi = features(scaling, next_x);
        double delta = td_error(cost * scaling.cost_scale, critic_value(critic, next_phi),
                                critic_value(critic, phi), mdp.gamma);
        if (options.td_error_clip > 0.0) delta = std::clamp(delta, -options.td_error_clip, options.td_error_clip);

        critic = critic_update(critic, delta, phi);
        if (actor.sigma2 > 0.0) actor = actor_update(actor, delta, log_policy_gradient(action, mean, actor.sigma2, phi));

        upsilon = next_upsilon;
        e = next_e;
        x = next_x;
        if (!std::isfinite(delta) || !upsilon.allFinite() || !std::isfinite(e.squaredNorm()) ||
            !critic.w.allFinite() || !actor.theta.allFinite() || !std::isfinite(logged_cost)) {
            throw AcilcDivergence(step + 1, "non-finite learner state");
        }
        record(step + 1, logged_cost, delta);
    }

    result.critic = critic;
    result.actor = actor;
    result.greedy_upsilon = scaling.action_scale.cwiseProduct(policy_mean(actor, features(scaling, x)));
    result.greedy_cost = trial_cost(error_of(result.greedy_upsilon), upsilon, result.greedy_upsilon, W);
    result.final_error = e;
    return result;
}

}  // namespace acilc
