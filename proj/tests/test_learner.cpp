#include "acilc/learner.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace acilc;

namespace {

// N = m = 1, J = [2], S = [1], r = [1], Psi = [1].
struct ScalarToy {
    LiftedSystem plant;
    ReferenceProfile r;
    MdpConfig mdp;

    ScalarToy() {
        plant.S = Eigen::MatrixXd::Ones(1, 1);
        plant.J = Eigen::MatrixXd::Constant(1, 1, 2.0);
        plant.horizon = 1;
        plant.sample_time = 1.0;
        r.samples = Eigen::VectorXd::Ones(1);
        r.sample_time = 1.0;
        mdp.gamma = 0.5;
        mdp.weights = {WeightMatrix::scalar(1.0), WeightMatrix::scalar(0.0), WeightMatrix::scalar(0.0)};
        mdp.basis.columns = Eigen::MatrixXd::Ones(1, 1);
        mdp.basis.labels = {"unit"};
    }
};

AcilcOptions plain_options() {
    AcilcOptions o;
    o.scaling.feature_mode = LearnerScaling::Mode::None;
    o.scaling.action_mode = LearnerScaling::Mode::None;
    o.scaling.cost_mode = LearnerScaling::Mode::None;
    o.td_error_clip = 0.0;
    return o;
}

double slope(const std::vector<double>& y) {
    const double n = static_cast<double>(y.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double x = static_cast<double>(i);
        sx += x;
        sy += y[i];
        sxx += x * x;
        sxy += x * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("DecaySchedule") {
    const DecaySchedule s{3.0, 0.96, 0.03};
    CHECK(s.value(0) == 3.0);
    CHECK(s.value(1) == doctest::Approx(2.88));
    double prev = s.value(0);
    for (int j = 1; j < 2000; ++j) {
        const double v = s.value(j);
        CHECK(v <= prev);
        CHECK(v >= s.floor);
        prev = v;
    }
    CHECK(s.value(5000) == 0.03);
    CHECK_THROWS_AS((DecaySchedule{1.0, 1.5, 0.0}.validate("x")), std::invalid_argument);
    CHECK_THROWS_AS((DecaySchedule{1.0, 0.0, 0.0}.validate("x")), std::invalid_argument);
    CHECK_THROWS_AS((DecaySchedule{-1.0, 0.5, 0.0}.validate("x")), std::invalid_argument);
}

TEST_CASE("project_error") {
    BasisMatrix psi;
    psi.columns = Eigen::MatrixXd(3, 2);
    psi.columns << 1, 0, 2, 1, 0, 3;
    CHECK(project_error(psi, Eigen::Vector3d::Zero()).isZero(0.0));
    const Eigen::VectorXd x = project_error(psi, psi.columns.col(0));
    CHECK(x(0) == 5.0);
    CHECK(x(1) == 2.0);
    const auto id = identity_basis(4);
    const Eigen::Vector4d e(1, -2, 3, 0.5);
    CHECK(project_error(id, e) == Eigen::VectorXd(e));
    CHECK_THROWS_AS(project_error(psi, Eigen::Vector4d::Zero()), std::invalid_argument);
}

TEST_CASE("critic operations") {
    CHECK(critic_value({Eigen::Vector2d::Zero(), 0.1}, Eigen::Vector2d(3, 5)) == 0.0);
    CHECK(critic_value({Eigen::Vector2d(1, 0), 0.1}, Eigen::Vector2d(3, 5)) == 3.0);
    CHECK(td_error(0.0, 4.0, 4.0, 1.0) == 0.0);
    CHECK(td_error(5.0, 0.0, 0.0, 0.9) == 5.0);
    CHECK(td_error(1.0, 2.0, 3.0, 0.5) == 1.0 + 1.0 - 3.0);
    // An exact value of a constant-cost chain is a TD fixed point.
    CHECK(td_error(1.0, 2.0, 2.0, 0.5) == 0.0);

    const CriticState c{Eigen::Vector2d(0.4, -1.0), 0.1};
    CHECK(critic_update(c, 0.0, Eigen::Vector2d(1, 1)).w == c.w);
    const auto u = critic_update({Eigen::Vector2d::Zero(), 0.1}, 2.0, Eigen::Vector2d(1, 0));
    CHECK(u.w(0) == doctest::Approx(0.2));
    CHECK(u.w(1) == 0.0);
}

TEST_CASE("actor operations") {
    const double a = 1.5, b = -0.25;
    ActorState actor{Eigen::Matrix2d::Zero(), 0.1, 1.0};
    CHECK(policy_mean(actor, Eigen::Vector2d(a, b)).isZero(0.0));
    actor.theta = Eigen::Matrix2d::Identity();
    CHECK(policy_mean(actor, Eigen::Vector2d(a, b)) == Eigen::VectorXd(Eigen::Vector2d(a, b)));
    actor.theta << 0, 1, 1, 0;
    CHECK(policy_mean(actor, Eigen::Vector2d(a, b)) == Eigen::VectorXd(Eigen::Vector2d(b, a)));

    SUBCASE("log_policy_gradient examples") {
        const Eigen::Vector2d mu(0.3, -0.1);
        CHECK(log_policy_gradient(mu, mu, 0.7, Eigen::Vector2d(1, 2)).isZero(0.0));
        const double s2 = 0.49;
        Eigen::Matrix2d want;
        want << 0, 1, 0, 0;
        CHECK((log_policy_gradient(mu + Eigen::Vector2d(0, s2), mu, s2, Eigen::Vector2d(1, 0)) - want)
                  .cwiseAbs()
                  .maxCoeff() < 1e-15);
        CHECK_THROWS_AS(log_policy_gradient(mu, mu, 0.0, Eigen::Vector2d(1, 0)), std::invalid_argument);
    }
    SUBCASE("actor_update leaves theta alone without a signal") {
        const ActorState s{Eigen::Matrix2d::Constant(0.5), 0.2, 1.0};
        CHECK(actor_update(s, 0.0, Eigen::Matrix2d::Ones()).theta == s.theta);
        CHECK(actor_update(s, 1.3, Eigen::Matrix2d::Zero()).theta == s.theta);
        const auto u = actor_update(s, 2.0, Eigen::Matrix2d::Identity());
        CHECK(u.theta(0, 0) == doctest::Approx(0.5 - 0.4));
        CHECK(u.theta(0, 1) == 0.5);
    }
}

TEST_CASE("log_policy_gradient matches finite differences") {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.1, 2.0);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const int nf = 1 + t % 4, m = 1 + (t / 4) % 3;
        Eigen::MatrixXd theta(nf, m);
        for (Eigen::Index i = 0; i < theta.size(); ++i) theta(i) = g(rng);
        Eigen::VectorXd phi(nf), act(m);
        for (int i = 0; i < nf; ++i) phi(i) = g(rng);
        for (int i = 0; i < m; ++i) act(i) = g(rng);
        const double s2 = u(rng);
        const ActorState actor{theta, 0.0, s2};
        const Eigen::MatrixXd G = log_policy_gradient(act, policy_mean(actor, phi), s2, phi);
        for (int a = 0; a < nf; ++a) {
            for (int b = 0; b < m; ++b) {
                const double h = 1e-6 * std::max(1.0, std::abs(theta(a, b)));
                ActorState p = actor, q = actor;
                p.theta(a, b) += h;
                q.theta(a, b) -= h;
                const double fd = (log_policy_density(act, policy_mean(p, phi), s2) -
                                   log_policy_density(act, policy_mean(q, phi), s2)) /
                                  (2 * h);
                const double err = std::abs(fd - G(a, b)) / std::max(1.0, std::abs(G(a, b)));
                worst = std::max(worst, err);
            }
        }
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("draw_action") {
    const ActorState actor{Eigen::Matrix2d::Identity(), 0.0, 0.0};
    const Eigen::Vector2d x(0.4, -2.0);
    SeededSampler s(1);
    CHECK(draw_action(actor, x, s) == Eigen::VectorXd(x));

    ActorState noisy = actor;
    noisy.sigma2 = 0.25;
    SeededSampler a(7), b(7);
    for (int i = 0; i < 20; ++i) CHECK(draw_action(noisy, x, a) == draw_action(noisy, x, b));

    SeededSampler c(8);
    Eigen::Vector2d sum = Eigen::Vector2d::Zero();
    const int n = 10000;
    for (int i = 0; i < n; ++i) sum += draw_action(noisy, x, c);
    const Eigen::Vector2d mean = sum / n;
    const double sigma = 0.5;
    CHECK((mean - x).cwiseAbs().maxCoeff() <= 3.0 * sigma / 100.0);
}

TEST_CASE("features and scaling") {
    LearnerScaling s;
    s.constant_feature = true;
    s.feature_scale = Eigen::Vector2d(2.0, 0.5);
    const Eigen::VectorXd phi = features(s, Eigen::Vector2d(1, 4));
    CHECK(phi.size() == 3);
    CHECK(phi(0) == 2.0);
    CHECK(phi(1) == 2.0);
    CHECK(phi(2) == 1.0);
    CHECK(feature_count(s, 2) == 3);
    s.constant_feature = false;
    CHECK(feature_count(s, 2) == 2);

    BasisMatrix psi;
    psi.columns = Eigen::MatrixXd(2, 2);
    psi.columns << 3, 0, 4, 2;
    const auto r = resolve_scaling(LearnerScaling{}, psi, Eigen::Vector2d(-0.5, 0.0), 8.0);
    CHECK(r.feature_scale(0) == doctest::Approx(0.06));
    CHECK(r.feature_scale(1) == doctest::Approx(0.03));  // zero entries fall back to the gain
    CHECK(r.action_scale(0) == doctest::Approx(0.2));
    CHECK(r.action_scale(1) == doctest::Approx(0.5));
    CHECK(r.cost_scale == 0.125);
}

TEST_CASE("run_acilc on the scalar toy") {
    ScalarToy toy;
    const LearnerSchedules sched{{0.1, 1.0, 0.1}, {0.05, 0.99, 0.001}, {0.2, 0.98, 0.01}};

    SUBCASE("zero trials") {
        SeededSampler s(0);
        CHECK(run_acilc(toy.plant, toy.r, toy.mdp, sched, plain_options(), s, 0).records.empty());
    }

    SUBCASE("no exploration and a frozen zero policy repeat the baseline") {
        SeededSampler s(0);
        auto o = plain_options();
        o.evaluation_mode = true;
        const auto res = run_acilc(toy.plant, toy.r, toy.mdp, sched, o, s, 30);
        REQUIRE(res.records.size() == 30);
        for (const auto& rec : res.records) {
            CHECK(rec.cost == res.records[0].cost);
            CHECK(rec.upsilon(0) == 0.0);
            CHECK(rec.sigma2 == 0.0);
            CHECK(rec.theta.isZero(0.0));
        }
    }

    SUBCASE("critic converges under a frozen deterministic policy") {
        SeededSampler s(0);
        auto o = plain_options();
        o.evaluation_mode = true;
        o.initial_policy = InitialPolicy::Given;
        o.initial_policy_upsilon = Eigen::VectorXd::Constant(1, 0.25);
        const auto res = run_acilc(toy.plant, toy.r, toy.mdp, sched, o, s, 500);
        std::vector<double> mag;
        for (std::size_t i = 1; i < res.records.size(); ++i) mag.push_back(std::abs(res.records[i].delta));
        CHECK(slope(mag) < 0.0);
        CHECK(mag.back() < 1e-6 * mag.front());

        // Rollout oracle: every later trial has e = 0.5, cost 0.25.
        double rollout = 0.0, disc = 1.0;
        for (int k = 0; k < 2000; ++k, disc *= toy.mdp.gamma) rollout += disc * 0.25;
        const auto phi = features(res.scaling, res.records.back().x);
        const double v = critic_value(res.critic, phi);
        CHECK(std::abs(v - rollout) <= 0.05 * rollout);
    }

    SUBCASE("learning lowers the cost") {
        SeededSampler s(3);
        AcilcOptions o;  // default scaling
        const LearnerSchedules learn{{1.0, 1.0, 1.0}, {0.01, 0.99, 0.001}, {0.3, 0.98, 0.05}};
        const auto res = run_acilc(toy.plant, toy.r, toy.mdp, learn, o, s, 200);
        std::vector<double> costs;
        for (const auto& rec : res.records) costs.push_back(rec.cost);
        CHECK(slope(costs) < 0.0);
        double late = 0.0;
        for (int i = 150; i < 200; ++i) late += costs[static_cast<std::size_t>(i)] / 50.0;
        CHECK(late < 0.2 * costs[0]);
        // The optimum of the toy is upsilon = 0.5 (zero error).
        CHECK(std::abs(res.greedy_upsilon(0) - 0.5) < 0.05);
    }

    SUBCASE("determinism") {
        SeededSampler a(5), b(5);
        const auto ra = run_acilc(toy.plant, toy.r, toy.mdp, sched, AcilcOptions{}, a, 100);
        const auto rb = run_acilc(toy.plant, toy.r, toy.mdp, sched, AcilcOptions{}, b, 100);
        REQUIRE(ra.records.size() == rb.records.size());
        for (std::size_t i = 0; i < ra.records.size(); ++i) {
            CHECK(ra.records[i].cost == rb.records[i].cost);
            CHECK(ra.records[i].delta == rb.records[i].delta);
            CHECK(ra.records[i].upsilon == rb.records[i].upsilon);
            CHECK(ra.records[i].theta == rb.records[i].theta);
            CHECK(ra.records[i].w == rb.records[i].w);
        }
    }

    SUBCASE("bad gamma is rejected") {
        SeededSampler s(0);
        auto mdp = toy.mdp;
        mdp.gamma = 0.0;
        CHECK_THROWS_AS(run_acilc(toy.plant, toy.r, mdp, sched, AcilcOptions{}, s, 5), std::invalid_argument);
    }
}

TEST_CASE("run_acilc records are consistent with the trial data") {
    // Small multi-sample system: h = [0.5, 0.3, 0.1, 0, ...], two basis columns.
    const int n = 12;
    Eigen::VectorXd h = Eigen::VectorXd::Zero(n);
    h.head(3) << 0.5, 0.3, 0.1;
    LiftedSystem plant;
    plant.J = lifted_toeplitz(h);
    plant.S = Eigen::MatrixXd::Identity(n, n);
    plant.horizon = n;
    plant.sample_time = 1e-3;
    ReferenceProfile r{Eigen::VectorXd::LinSpaced(n, 0, 1), 1e-3, {}};
    MdpConfig mdp;
    mdp.gamma = 0.9;
    mdp.weights = {WeightMatrix::scalar(1.0), WeightMatrix::scalar(1e-3), WeightMatrix::scalar(0.0)};
    mdp.basis.columns = Eigen::MatrixXd(n, 2);
    mdp.basis.columns.col(0) = Eigen::VectorXd::Ones(n);
    mdp.basis.columns.col(1) = Eigen::VectorXd::LinSpaced(n, -1, 1);
    AcilcOptions o;
    o.store_errors = true;
    SeededSampler s(12);
    const LearnerSchedules sched{{1, 1, 1}, {1, 0.99, 0.1}, {0.5, 0.97, 0.05}};
    const auto res = run_acilc(plant, r, mdp, sched, o, s, 60);
    for (std::size_t j = 0; j < res.records.size(); ++j) {
        const auto& rec = res.records[j];
        const Eigen::VectorXd e = r.samples - plant.J * (mdp.basis.columns * rec.upsilon);
        CHECK((rec.e - e).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((rec.x - project_error(mdp.basis, rec.e)).cwiseAbs().maxCoeff() == 0.0);
        CHECK(rec.e_norm == rec.e.norm());
        const Eigen::VectorXd prev = j == 0 ? Eigen::VectorXd::Zero(2) : res.records[j - 1].upsilon;
        CHECK(rec.cost == trial_cost(rec.e, prev, rec.upsilon, mdp.weights));
    }
}
