#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string>

namespace acilc {

// Symmetric weight stored as scalar * I, a diagonal, or a dense matrix.
class WeightMatrix {
public:
    enum class Kind { Scalar, Diagonal, Dense };

    WeightMatrix() = default;
    static WeightMatrix scalar(double s);
    static WeightMatrix diagonal(Eigen::VectorXd d);
    static WeightMatrix dense(Eigen::MatrixXd m);

    Kind kind() const { return kind_; }
    double scalar_value() const { return scalar_; }
    const Eigen::VectorXd& diagonal_values() const { return diag_; }
    const Eigen::MatrixXd& dense_values() const { return dense_; }

    // Fixed dimension, or -1 for the scalar form.
    Eigen::Index dimension() const;

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
    Eigen::MatrixXd to_dense(Eigen::Index n) const;

    double min_eigenvalue() const;  // scalar form: the scalar itself
    bool is_zero() const;

private:
    Kind kind_ = Kind::Scalar;
    double scalar_ = 0.0;
    Eigen::VectorXd diag_;
    Eigen::MatrixXd dense_;
};

struct Weighting {
    WeightMatrix W_e;
    WeightMatrix W_upsilon;
    WeightMatrix W_delta_upsilon;

    // Throws std::invalid_argument unless W_e > 0, W_upsilon >= 0, W_delta_upsilon >= 0.
    void validate() const;
};

// x^T W x, evaluated once (no extra squaring).
double weighted_quadratic(const Eigen::VectorXd& x, const WeightMatrix& W);

double trial_cost(const Eigen::VectorXd& e, const Eigen::VectorXd& upsilon,
                  const Eigen::VectorXd& upsilon_next, const Weighting& W);

double spectral_norm(const Eigen::MatrixXd& M);

// mt19937_64 with a Box-Muller transform. Uniforms use the top 53 bits,
// shifted half a unit so log() never sees zero.
class SeededSampler {
public:
    explicit SeededSampler(std::uint64_t seed);

    static constexpr const char* algorithm_id = "mt19937_64+box_muller";

    std::uint64_t seed() const { return seed_; }
    double uniform();
    double standard_normal();
    SeededSampler reseeded(std::uint64_t seed) const { return SeededSampler(seed); }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

Eigen::VectorXd gaussian_vector(SeededSampler& sampler, const Eigen::VectorXd& mean, double variance);

}  // namespace acilc
