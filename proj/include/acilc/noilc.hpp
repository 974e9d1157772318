#pragma once

#include "acilc/numerics.hpp"

#include <Eigen/Dense>

#include <string>

namespace acilc {

struct NoilcGains {
    Eigen::MatrixXd Q;  // m x m
    Eigen::MatrixXd L;  // m x N
    double convergence_margin = 0.0;
};

// Minimizer of ||e_{j+1}||_We + ||v||_Wv + ||v - v_j||_Wdv over v with
// e_{j+1} = e_j - J Psi (v - v_j):
//   M = Psi^T J^T We J Psi + Wv + Wdv
//   Q = M^{-1} (Psi^T J^T We J Psi + Wdv),  L = M^{-1} Psi^T J^T We
// M is Cholesky-factorized; an indefinite or numerically singular M throws
// std::domain_error.
NoilcGains synthesize_gains(const Eigen::MatrixXd& J, const Eigen::MatrixXd& Psi, const Weighting& W);

Eigen::VectorXd noilc_update(const NoilcGains& gains, const Eigen::VectorXd& upsilon,
                             const Eigen::VectorXd& e);

double convergence_margin(const NoilcGains& gains, const Eigen::MatrixXd& J, const Eigen::MatrixXd& Psi);

// Numerical rank with threshold 1e-10 * sigma_max.
int numerical_rank(const Eigen::MatrixXd& M);

// Q.csv holds the m x m block, L.csv one row per basis function.
void export_gains_csv(const NoilcGains& gains, const std::string& directory);

}  // namespace acilc
