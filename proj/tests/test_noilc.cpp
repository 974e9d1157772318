#include "acilc/io.hpp"
#include "acilc/noilc.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace acilc;

namespace {

Weighting scalar_weights(double we, double wv, double wdv) {
    return {WeightMatrix::scalar(we), WeightMatrix::scalar(wv), WeightMatrix::scalar(wdv)};
}

}  // namespace

TEST_CASE("synthesize_gains on the scalar toy") {
    const Eigen::MatrixXd J = Eigen::MatrixXd::Constant(1, 1, 2.0);
    const Eigen::MatrixXd Psi = Eigen::MatrixXd::Ones(1, 1);
    const auto g = synthesize_gains(J, Psi, scalar_weights(1, 0, 0));
    CHECK(g.Q(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.L(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g.convergence_margin == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));

    const Eigen::VectorXd v1 = noilc_update(g, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1));
    CHECK(v1(0) == doctest::Approx(0.5));
    // e_{j+1} = e_j - J Psi (v_{j+1} - v_j)
    CHECK(1.0 - 2.0 * v1(0) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("synthesize_gains with vanishing weights and identity basis") {
    std::mt19937_64 rng(11);
    auto inst = oracle::random_instance(rng, true, 8);
    const Eigen::Index n = inst.J.rows();
    const Weighting w{WeightMatrix::diagonal(inst.we), WeightMatrix::scalar(0.0), WeightMatrix::scalar(0.0)};
    const auto g = synthesize_gains(inst.J, inst.Psi, w);
    CHECK((g.Q - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((g.L * inst.J - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-8);
    // One step removes the error.
    const Eigen::VectorXd v = noilc_update(g, inst.vj, inst.ej);
    const Eigen::VectorXd e_next = inst.ej - inst.J * (v - inst.vj);
    CHECK(e_next.cwiseAbs().maxCoeff() < 1e-8 * (1.0 + inst.ej.cwiseAbs().maxCoeff()));
}

TEST_CASE("synthesize_gains rejects a singular inner matrix") {
    Eigen::MatrixXd J = Eigen::MatrixXd::Identity(4, 4);
    Eigen::MatrixXd Psi(4, 2);
    Psi << 1, 2, 1, 2, 1, 2, 1, 2;  // rank one
    CHECK_THROWS_AS(synthesize_gains(J, Psi, scalar_weights(1, 0, 0)), std::domain_error);
    try {
        synthesize_gains(J, Psi, scalar_weights(1, 0, 0));
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("W_upsilon") != std::string::npos);
    }
    // The prescribed remedy makes the problem well posed.
    CHECK_NOTHROW(synthesize_gains(J, Psi, scalar_weights(1, 1e-3, 0)));
    CHECK(numerical_rank(Psi) == 1);
}

TEST_CASE("noilc_update examples") {
    NoilcGains g{Eigen::Matrix2d::Identity(), Eigen::MatrixXd::Random(2, 5), 0.0};
    const Eigen::Vector2d v(0.3, -0.2);
    CHECK(noilc_update(g, v, Eigen::VectorXd::Zero(5)) == v);
    Eigen::VectorXd e = Eigen::VectorXd::LinSpaced(5, -1, 1);
    CHECK((noilc_update(g, Eigen::Vector2d::Zero(), e) - g.L * e).norm() == 0.0);
    CHECK_THROWS_AS(noilc_update(g, v, Eigen::VectorXd::Zero(4)), std::invalid_argument);
}

TEST_CASE("convergence_margin examples") {
    NoilcGains zero{Eigen::Matrix2d::Zero(), Eigen::MatrixXd::Zero(2, 3), 0.0};
    CHECK(convergence_margin(zero, Eigen::MatrixXd::Identity(3, 3), Eigen::MatrixXd::Ones(3, 2)) == 0.0);
}

TEST_CASE("noilc_update is the one-step minimizer (random instances)") {
    std::mt19937_64 rng(20240);
    for (int t = 0; t < 100; ++t) {
        const auto inst = oracle::random_instance(rng, t % 4 == 0);
        const auto g = synthesize_gains(inst.J, inst.Psi, inst.weights());
        const Eigen::VectorXd got = noilc_update(g, inst.vj, inst.ej);
        const Eigen::VectorXd want =
            oracle::brute_force_argmin(inst.J, inst.Psi, inst.we, inst.wv, inst.wdv, inst.vj, inst.ej);
        CHECK((got - want).norm() <= 1e-8 * std::max(1.0, want.norm()));
    }
}

TEST_CASE("one-step look-ahead agrees with a grid search on the scalar toy") {
    const Eigen::MatrixXd J = Eigen::MatrixXd::Constant(1, 1, 2.0);
    const Eigen::MatrixXd Psi = Eigen::MatrixXd::Ones(1, 1);
    const auto g = synthesize_gains(J, Psi, scalar_weights(1.0, 0.5, 0.25));
    const double vj = 0.1, ej = 1.0;
    const double got = noilc_update(g, Eigen::VectorXd::Constant(1, vj), Eigen::VectorXd::Constant(1, ej))(0);
    double best = 0.0, best_cost = std::numeric_limits<double>::infinity();
    for (int i = -200000; i <= 200000; ++i) {
        const double v = i * 1e-5;
        const double e = ej - 2.0 * (v - vj);
        const double c = e * e + 0.5 * v * v + 0.25 * (v - vj) * (v - vj);
        if (c < best_cost) {
            best_cost = c;
            best = v;
        }
    }
    CHECK(std::abs(got - best) <= 1e-5);
}

TEST_CASE("parameter error contracts and the iteration reaches its fixed point") {
    // sigma_max(Q - L G) < 1 makes v_j - v* shrink in the 2-norm at every
    // trial. The error norm itself is only checked on the preset system.
    std::mt19937_64 rng(77);
    int tested = 0;
    for (int t = 0; t < 50; ++t) {
        auto inst = oracle::random_instance(rng, false, 25);
        inst.wdv.setZero();
        const auto g = synthesize_gains(inst.J, inst.Psi, inst.weights());
        if (!(g.convergence_margin < 1.0)) continue;
        ++tested;
        const Eigen::VectorXd Sr = inst.ej;  // error at zero feedforward
        const Eigen::MatrixXd G = inst.J * inst.Psi;
        const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(G.cols(), G.cols()) - g.Q + g.L * G;
        const Eigen::VectorXd vstar = A.fullPivLu().solve(g.L * Sr);
        Eigen::VectorXd v = Eigen::VectorXd::Zero(inst.Psi.cols());
        Eigen::VectorXd e = Sr;
        for (int j = 0; j < 200; ++j) {
            const Eigen::VectorXd vn = noilc_update(g, v, e);
            CHECK((vn - vstar).norm() <= g.convergence_margin * (v - vstar).norm() + 1e-12 * (1.0 + vstar.norm()));
            v = vn;
            e = Sr - G * v;
        }
        // v solves v = Q v + L e(v).
        CHECK((v - (g.Q * v + g.L * e)).norm() <= 1e-9 * std::max(1.0, v.norm()));
    }
    CHECK(tested > 0);
}

TEST_CASE("preset gains") {
    const auto& cfg = fixture::preset();
    const auto& sys = fixture::preset_system();
    const auto g = synthesize_gains(sys.lifted.J, sys.basis.columns, cfg.weights);
    CHECK(g.Q.rows() == 2);
    CHECK(g.L.cols() == 2000);
    CHECK(g.convergence_margin >= 0.0);
    CHECK(g.convergence_margin < 1.0);
    CHECK(convergence_margin(g, sys.lifted.J, sys.basis.columns) == g.convergence_margin);
    CHECK(numerical_rank(sys.basis.columns) == 2);

    // Frozen values of the converged iteration on this system.
    const Eigen::VectorXd Sr = sys.lifted.S.triangularView<Eigen::Lower>() * sys.reference.samples;
    const Eigen::MatrixXd G = sys.lifted.J.triangularView<Eigen::Lower>() * sys.basis.columns;
    Eigen::VectorXd v = Eigen::Vector2d::Zero();
    Eigen::VectorXd e = Sr;
    CHECK(weighted_quadratic(e, cfg.weights.W_e) == doctest::Approx(6898.850491374835).epsilon(1e-9));
    for (int j = 0; j < 40; ++j) {
        v = noilc_update(g, v, e);
        e = Sr - G * v;
    }
    CHECK(v(0) == doctest::Approx(0.08564871394939683).epsilon(1e-8));
    CHECK(v(1) == doctest::Approx(-0.027810235048042243).epsilon(1e-7));
    CHECK(trial_cost(e, v, v, cfg.weights) == doctest::Approx(13.814294497067646).epsilon(1e-8));
}

TEST_CASE("export_gains_csv") {
    const auto dir = fixture::temp_dir("gains");
    NoilcGains g{Eigen::Matrix2d::Identity() * 0.5, Eigen::MatrixXd::Zero(2, 3), 0.25};
    g.L(1, 2) = 1.0 / 3.0;
    export_gains_csv(g, dir.string());
    const auto q = read_csv((dir / "Q.csv").string());
    const auto l = read_csv((dir / "L.csv").string());
    CHECK(q.header == std::vector<std::string>{"q_0", "q_1"});
    REQUIRE(q.rows.size() == 2);
    CHECK(q.rows[0][0] == 0.5);
    REQUIRE(l.rows.size() == 2);
    REQUIRE(l.rows[1].size() == 3);
    CHECK(l.rows[1][2] == 1.0 / 3.0);
}
