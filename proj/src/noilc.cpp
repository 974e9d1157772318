#include "acilc/noilc.hpp"

#include "acilc/io.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include <limits>
#include <sstream>
#include <stdexcept>

namespace acilc {

int numerical_rank(const Eigen::MatrixXd& M) {
    if (M.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& s = svd.singularValues();
    if (s(0) == 0.0) return 0;
    return static_cast<int>((s.array() > 1e-10 * s(0)).count());
}

NoilcGains synthesize_gains(const Eigen::MatrixXd& J, const Eigen::MatrixXd& Psi, const Weighting& W) {
    const Eigen::Index n = J.rows();
    const Eigen::Index m = Psi.cols();
    if (J.cols() != n || Psi.rows() != n) throw std::invalid_argument("J must be N x N and Psi N x m");
    if (m < 1) throw std::invalid_argument("basis must have at least one column");
    W.validate();

    const Eigen::MatrixXd G = J * Psi;
    const Eigen::MatrixXd WeG = W.W_e.apply(G);
    const Eigen::MatrixXd H = G.transpose() * WeG;
    const Eigen::MatrixXd Wdv = W.W_delta_upsilon.to_dense(m);
    Eigen::MatrixXd M = H + W.W_upsilon.to_dense(m) + Wdv;
    M = 0.5 * (M + M.transpose());

    Eigen::LLT<Eigen::MatrixXd> llt(M);
    const double rcond = llt.info() == Eigen::Success ? llt.rcond() : 0.0;
    if (llt.info() != Eigen::Success || rcond < 64.0 * std::numeric_limits<double>::epsilon()) {
        std::ostringstream msg;
        msg << "NOILC inner matrix is not positive definite (rcond " << rcond << ", rank(Psi) = "
            << numerical_rank(Psi) << " of " << m << "); set W_upsilon positive definite";
        throw std::domain_error(msg.str());
    }

    NoilcGains gains;
    gains.Q = llt.solve(H + Wdv);
    gains.L = llt.solve(WeG.transpose());
    gains.convergence_margin = convergence_margin(gains, J, Psi);
    return gains;
}

Eigen::VectorXd noilc_update(const NoilcGains& gains, const Eigen::VectorXd& upsilon,
                             const Eigen::VectorXd& e) {
    if (upsilon.size() != gains.Q.cols() || e.size() != gains.L.cols()) {
        throw std::invalid_argument("noilc_update: dimension mismatch");
    }
    return gains.Q * upsilon + gains.L * e;
}

double convergence_margin(const NoilcGains& gains, const Eigen::MatrixXd& J, const Eigen::MatrixXd& Psi) {
    return spectral_norm(gains.Q - gains.L * (J * Psi));
}

void export_gains_csv(const NoilcGains& gains, const std::string& directory) {
    auto header = [](const char* prefix, Eigen::Index cols) {
        std::string h;
        for (Eigen::Index k = 0; k < cols; ++k) {
            if (k) h += ',';
            h += prefix + std::to_string(k);
        }
        return h + '\n';
    };
    const std::filesystem::path dir(directory);
    write_text_file(dir / "Q.csv", header("q_", gains.Q.cols()) + matrix_csv(gains.Q));
    write_text_file(dir / "L.csv", header("l_", gains.L.cols()) + matrix_csv(gains.L));
}

}  // namespace acilc
