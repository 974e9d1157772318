#include "acilc/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace acilc {

WeightMatrix WeightMatrix::scalar(double s) {
    if (!std::isfinite(s)) throw std::invalid_argument("weight must be finite");
    WeightMatrix w;
    w.kind_ = Kind::Scalar;
    w.scalar_ = s;
    return w;
}

WeightMatrix WeightMatrix::diagonal(Eigen::VectorXd d) {
    if (!d.allFinite()) throw std::invalid_argument("weight must be finite");
    WeightMatrix w;
    w.kind_ = Kind::Diagonal;
    w.diag_ = std::move(d);
    return w;
}

WeightMatrix WeightMatrix::dense(Eigen::MatrixXd m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("weight matrix must be square");
    if (!m.allFinite()) throw std::invalid_argument("weight must be finite");
    const double scale = m.size() ? std::max(1.0, m.cwiseAbs().maxCoeff()) : 1.0;
    if (m.size() && (m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw std::invalid_argument("weight matrix must be symmetric");
    }
    WeightMatrix w;
    w.kind_ = Kind::Dense;
    w.dense_ = 0.5 * (m + m.transpose());
    return w;
}

Eigen::Index WeightMatrix::dimension() const {
    switch (kind_) {
        case Kind::Scalar: return -1;
        case Kind::Diagonal: return diag_.size();
        case Kind::Dense: return dense_.rows();
    }
    return -1;
}

namespace {
void check_dim(const WeightMatrix& W, Eigen::Index n) {
    if (W.dimension() >= 0 && W.dimension() != n) {
        throw std::invalid_argument("weight dimension " + std::to_string(W.dimension()) +
                                    " does not match vector length " + std::to_string(n));
    }
}
}  // namespace

Eigen::VectorXd WeightMatrix::apply(const Eigen::VectorXd& x) const {
    check_dim(*this, x.size());
    switch (kind_) {
        case Kind::Scalar: return scalar_ * x;
        case Kind::Diagonal: return diag_.cwiseProduct(x);
        case Kind::Dense: return dense_ * x;
    }
    return {};
}

Eigen::MatrixXd WeightMatrix::apply(const Eigen::MatrixXd& x) const {
    check_dim(*this, x.rows());
    switch (kind_) {
        case Kind::Scalar: return scalar_ * x;
        case Kind::Diagonal: return diag_.asDiagonal() * x;
        case Kind::Dense: return dense_ * x;
    }
    return {};
}

Eigen::MatrixXd WeightMatrix::to_dense(Eigen::Index n) const {
    check_dim(*this, n);
    switch (kind_) {
        case Kind::Scalar: return scalar_ * Eigen::MatrixXd::Identity(n, n);
        case Kind::Diagonal: return diag_.asDiagonal();
        case Kind::Dense: return dense_;
    }
    return {};
}

double WeightMatrix::min_eigenvalue() const {
    switch (kind_) {
        case Kind::Scalar: return scalar_;
        case Kind::Diagonal: return diag_.size() ? diag_.minCoeff() : 0.0;
        case Kind::Dense: {
            if (dense_.rows() == 0) return 0.0;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_, Eigen::EigenvaluesOnly);
            return es.eigenvalues().minCoeff();
        }
    }
    return 0.0;
}

bool WeightMatrix::is_zero() const {
    switch (kind_) {
        case Kind::Scalar: return scalar_ == 0.0;
        case Kind::Diagonal: return diag_.isZero(0.0);
        case Kind::Dense: return dense_.isZero(0.0);
    }
    return true;
}

void Weighting::validate() const {
    if (!(W_e.min_eigenvalue() > 0.0)) throw std::invalid_argument("W_e must be positive definite");
    // Dense PSD checks allow round-off of the eigen solver.
    auto psd = [](const WeightMatrix& w) {
        const double tol = w.kind() == WeightMatrix::Kind::Dense
                               ? -1e-12 * std::max(1.0, w.dense_values().cwiseAbs().maxCoeff())
                               : 0.0;
        return w.min_eigenvalue() >= tol;
    };
    if (!psd(W_upsilon)) throw std::invalid_argument("W_upsilon must be positive semidefinite");
    if (!psd(W_delta_upsilon)) throw std::invalid_argument("W_delta_upsilon must be positive semidefinite");
}

double weighted_quadratic(const Eigen::VectorXd& x, const WeightMatrix& W) {
    return x.dot(W.apply(x));
}

double trial_cost(const Eigen::VectorXd& e, const Eigen::VectorXd& upsilon,
                  const Eigen::VectorXd& upsilon_next, const Weighting& W) {
    if (upsilon.size() != upsilon_next.size()) {
        throw std::invalid_argument("feedforward parameter vectors differ in length");
    }
    return weighted_quadratic(e, W.W_e) + weighted_quadratic(upsilon_next, W.W_upsilon) +
           weighted_quadratic(upsilon_next - upsilon, W.W_delta_upsilon);
}

double spectral_norm(const Eigen::MatrixXd& M) {
    if (M.hasNaN()) throw std::invalid_argument("spectral norm of a matrix with NaN entries");
    if (M.size() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    return svd.singularValues()(0);
}

SeededSampler::SeededSampler(std::uint64_t seed) : seed_(seed), engine_(seed) {}

double SeededSampler::uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double SeededSampler::standard_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

Eigen::VectorXd gaussian_vector(SeededSampler& sampler, const Eigen::VectorXd& mean, double variance) {
    if (!(variance >= 0.0)) throw std::invalid_argument("variance must be nonnegative");
    if (variance == 0.0) return mean;
    const double sigma = std::sqrt(variance);
    Eigen::VectorXd out(mean.size());
    for (Eigen::Index i = 0; i < mean.size(); ++i) out(i) = mean(i) + sigma * sampler.standard_normal();
    return out;
}

}  // namespace acilc
