#include "acilc/lti.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace acilc {

namespace {

std::vector<double> strip_leading_zeros(std::vector<double> c) {
    auto it = std::find_if(c.begin(), c.end(), [](double v) { return v != 0.0; });
    c.erase(c.begin(), it);
    return c;
}

void require_finite(const std::vector<double>& c, const char* what) {
    for (double v : c) {
        if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " has a non-finite coefficient");
    }
}

// Numerator padded with leading zeros to the denominator length.
std::vector<double> padded_numerator(const TransferFunction& tf) {
    std::vector<double> b(tf.denominator().size(), 0.0);
    const auto& num = tf.numerator();
    std::copy(num.begin(), num.end(), b.end() - static_cast<long>(num.size()));
    return b;
}

// Quotient of p / q, remainder discarded.
std::vector<double> poly_quotient(const std::vector<double>& p, const std::vector<double>& q) {
    if (q.size() > p.size()) return {0.0};
    std::vector<double> rem = p;
    std::vector<double> quot(p.size() - q.size() + 1, 0.0);
    for (std::size_t i = 0; i < quot.size(); ++i) {
        double c = rem[i] / q[0];
        quot[i] = c;
        for (std::size_t k = 0; k < q.size(); ++k) rem[i + k] -= c * q[k];
    }
    return quot;
}

}  // namespace

TransferFunction::TransferFunction(std::vector<double> numerator, std::vector<double> denominator,
                                   double sample_time)
    : ts_(sample_time) {
    if (!(sample_time > 0.0) || !std::isfinite(sample_time)) {
        throw std::invalid_argument("sample time must be positive and finite");
    }
    require_finite(numerator, "numerator");
    require_finite(denominator, "denominator");
    den_ = strip_leading_zeros(std::move(denominator));
    if (den_.empty()) throw std::invalid_argument("denominator must have a nonzero coefficient");
    num_ = strip_leading_zeros(std::move(numerator));
    if (num_.empty()) num_ = {0.0};
    if (num_.size() > den_.size()) {
        std::ostringstream msg;
        msg << "improper transfer function: numerator degree " << num_.size() - 1
            << " exceeds denominator degree " << den_.size() - 1;
        throw std::invalid_argument(msg.str());
    }
    const double lead = den_.front();
    for (double& v : den_) v /= lead;
    for (double& v : num_) v /= lead;
}

TransferFunction TransferFunction::gain(double k, double sample_time) {
    return TransferFunction({k}, {1.0}, sample_time);
}

int TransferFunction::relative_degree() const {
    const auto b = padded_numerator(*this);
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i] != 0.0) return static_cast<int>(i);
    }
    return -1;
}

Eigen::VectorXd TransferFunction::markov_parameters(int n) const {
    const auto b = padded_numerator(*this);
    const int order = this->order();
    Eigen::VectorXd h = Eigen::VectorXd::Zero(std::max(n, 0));
    for (int k = 0; k < n; ++k) {
        double v = k <= order ? b[static_cast<std::size_t>(k)] : 0.0;
        for (int i = 1; i <= std::min(k, order); ++i) v -= den_[static_cast<std::size_t>(i)] * h(k - i);
        h(k) = v;
    }
    return h;
}

StateSpaceModel tf_to_state_space(const TransferFunction& tf) {
    const int n = tf.order();
    const auto& a = tf.denominator();
    const auto b = padded_numerator(tf);

    StateSpaceModel ss;
    ss.sample_time = tf.sample_time();
    ss.D = b[0];
    ss.A = Eigen::MatrixXd::Zero(n, n);
    ss.B = Eigen::VectorXd::Zero(n);
    ss.C = Eigen::RowVectorXd::Zero(n);
    if (n == 0) return ss;
    for (int i = 0; i < n; ++i) {
        ss.A(0, i) = -a[static_cast<std::size_t>(i + 1)];
        ss.C(i) = b[static_cast<std::size_t>(i + 1)] - b[0] * a[static_cast<std::size_t>(i + 1)];
    }
    for (int i = 1; i < n; ++i) ss.A(i, i - 1) = 1.0;
    ss.B(0) = 1.0;
    return ss;
}

Eigen::VectorXd impulse_response(const StateSpaceModel& model, int horizon) {
    if (horizon < 1) throw std::invalid_argument("impulse response horizon must be at least 1");
    const int n = model.order();
    if (model.B.size() != n || model.C.size() != n || model.A.cols() != n) {
        throw std::invalid_argument("state-space dimensions are inconsistent");
    }
    Eigen::VectorXd h(horizon);
    h(0) = model.D;
    Eigen::VectorXd x = model.B;
    for (int k = 1; k < horizon; ++k) {
        h(k) = n == 0 ? 0.0 : model.C.dot(x);
        if (n > 0) x = model.A * x;
    }
    return h;
}

Eigen::MatrixXd lifted_toeplitz(const Eigen::VectorXd& h) {
    const Eigen::Index n = h.size();
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) T.col(k).tail(n - k) = h.head(n - k);
    return T;
}

ClosedLoopModel closed_loop_realization(const TransferFunction& P, const TransferFunction& C) {
    if (P.sample_time() != C.sample_time()) {
        throw std::invalid_argument("plant and controller sample times differ");
    }
    const StateSpaceModel p = tf_to_state_space(P);
    const StateSpaceModel c = tf_to_state_space(C);
    const double loop = 1.0 + p.D * c.D;
    if (std::abs(loop) < 1e-12) throw std::invalid_argument("ill-posed algebraic loop: 1 + Dp*Dc = 0");
    const double kappa = 1.0 / loop;
    const int np = p.order();
    const int nc = c.order();
    const int n = np + nc;

    // e = Ex x + Er r + Ef f
    Eigen::RowVectorXd Ex(n);
    Ex << -kappa * p.C, -kappa * p.D * c.C;
    const double Er = kappa;
    const double Ef = -kappa * p.D;

    // Input map of e into the stacked state, and of u's direct part.
    Eigen::VectorXd Be(n);
    Be << p.B * c.D, c.B;
    Eigen::VectorXd Bu = Eigen::VectorXd::Zero(n);
    Bu.head(np) = p.B;

    ClosedLoopModel cl;
    cl.A = Eigen::MatrixXd::Zero(n, n);
    cl.A.topLeftCorner(np, np) = p.A;
    cl.A.bottomRightCorner(nc, nc) = c.A;
    cl.A.topRightCorner(np, nc) += p.B * c.C;
    cl.A += Be * Ex;
    cl.B.resize(n, 2);
    cl.B.col(0) = Be * Er;
    cl.B.col(1) = Be * Ef + Bu;
    cl.C = Ex;
    cl.D << Er, Ef;
    return cl;
}

LiftedSystem closed_loop_maps(const TransferFunction& P, const TransferFunction& C, int horizon) {
    if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
    const ClosedLoopModel cl = closed_loop_realization(P, C);
    const int n = static_cast<int>(cl.A.rows());

    double rho = 0.0;
    if (n > 0) rho = cl.A.eigenvalues().cwiseAbs().maxCoeff();
    if (!(rho < 1.0 - 1e-9)) {
        std::ostringstream msg;
        msg << "closed loop is not internally stable: max |eigenvalue| = " << rho;
        throw std::domain_error(msg.str());
    }

    auto response = [&](int input, double sign) {
        StateSpaceModel m{cl.A, cl.B.col(input), cl.C, cl.D(input), P.sample_time()};
        return (sign * impulse_response(m, horizon)).eval();
    };

    LiftedSystem sys;
    sys.S = lifted_toeplitz(response(0, 1.0));
    sys.J = lifted_toeplitz(response(1, -1.0));
    sys.horizon = horizon;
    sys.sample_time = P.sample_time();
    sys.spectral_radius = rho;
    return sys;
}

Eigen::VectorXd simulate_trial(const LiftedSystem& sys, const Eigen::VectorXd& r,
                               const Eigen::VectorXd& f) {
    if (r.size() != sys.horizon || f.size() != sys.horizon) {
        throw std::invalid_argument("reference and feedforward must have length N");
    }
    Eigen::VectorXd e = sys.S.triangularView<Eigen::Lower>() * r;
    e.noalias() -= sys.J.triangularView<Eigen::Lower>() * f;
    return e;
}

std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& coeffs) {
    std::vector<double> c = strip_leading_zeros(coeffs);
    std::vector<std::complex<double>> roots;
    while (c.size() > 1 && c.back() == 0.0) {
        roots.emplace_back(0.0, 0.0);
        c.pop_back();
    }
    const int n = static_cast<int>(c.size()) - 1;
    if (n <= 0) return roots;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) companion(0, i) = -c[static_cast<std::size_t>(i + 1)] / c[0];
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    Eigen::VectorXcd ev = companion.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) roots.push_back(ev(i));
    return roots;
}

TransferFunction minreal(const TransferFunction& tf, double tol) {
    if (tol <= 0.0) return tf;
    auto snap = [](std::vector<std::complex<double>> roots) {
        // Repeated real roots come back from the eigen solver as near-real pairs.
        for (auto& z : roots) {
            if (std::abs(z.imag()) < 1e-6 * (1.0 + std::abs(z))) z = {z.real(), 0.0};
        }
        return roots;
    };
    auto zeros = snap(polynomial_roots(tf.numerator()));
    auto poles = snap(polynomial_roots(tf.denominator()));
    std::vector<bool> used(zeros.size(), false);

    std::vector<double> num = tf.numerator();
    std::vector<double> den = tf.denominator();
    for (const auto& p : poles) {
        if (p.imag() < 0.0) continue;  // handled with its conjugate
        std::size_t best = zeros.size();
        double best_dist = tol;
        for (std::size_t i = 0; i < zeros.size(); ++i) {
            if (used[i] || (zeros[i].imag() < 0.0) || ((zeros[i].imag() == 0.0) != (p.imag() == 0.0))) continue;
            const double d = std::abs(zeros[i] - p);
            if (d < best_dist) {
                best_dist = d;
                best = i;
            }
        }
        if (best == zeros.size()) continue;
        used[best] = true;
        const auto z = zeros[best];
        if (p.imag() == 0.0) {
            num = poly_quotient(num, {1.0, -z.real()});
            den = poly_quotient(den, {1.0, -p.real()});
        } else {
            for (std::size_t i = 0; i < zeros.size(); ++i) {
                if (!used[i] && std::abs(zeros[i] - std::conj(z)) < 1e-12 * (1.0 + std::abs(z))) {
                    used[i] = true;
                    break;
                }
            }
            num = poly_quotient(num, {1.0, -2.0 * z.real(), std::norm(z)});
            den = poly_quotient(den, {1.0, -2.0 * p.real(), std::norm(p)});
        }
    }
    return TransferFunction(num, den, tf.sample_time());
}

TransferFunction constrain_poles(const TransferFunction& tf, const std::vector<double>& roots) {
    if (roots.empty()) return tf;
    std::vector<double> a = tf.denominator();
    const int n = tf.order();
    std::vector<int> free;
    for (int i = 1; i <= n; ++i) {
        if (a[static_cast<std::size_t>(i)] != 0.0) free.push_back(i);
    }

    std::map<double, int> multiplicity;
    for (double r : roots) {
        if (!std::isfinite(r)) throw std::invalid_argument("fixed pole must be finite");
        ++multiplicity[r];
    }

    // Rows: d^l/dz^l a(z) at each root for l < multiplicity.
    std::vector<Eigen::RowVectorXd> rows;
    std::vector<double> rhs;
    for (const auto& [rho, mult] : multiplicity) {
        for (int l = 0; l < mult; ++l) {
            auto dpow = [&](int power) {
                if (power < l) return 0.0;
                double c = 1.0;
                for (int k = 0; k < l; ++k) c *= power - k;
                return c * std::pow(rho, power - l);
            };
            Eigen::RowVectorXd row(static_cast<Eigen::Index>(free.size()));
            for (std::size_t k = 0; k < free.size(); ++k) row(static_cast<Eigen::Index>(k)) = dpow(n - free[k]);
            double value = 0.0;
            for (int i = 0; i <= n; ++i) value += a[static_cast<std::size_t>(i)] * dpow(n - i);
            rows.push_back(row);
            rhs.push_back(-value);
        }
    }
    if (rows.size() > free.size()) {
        throw std::invalid_argument("more fixed poles than adjustable denominator coefficients");
    }

    Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(free.size()));
    Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
    Eigen::VectorXd unit(static_cast<Eigen::Index>(free.size()));
    for (std::size_t k = 0; k < free.size(); ++k) {
        unit(static_cast<Eigen::Index>(k)) = std::pow(10.0, std::floor(std::log10(std::abs(a[static_cast<std::size_t>(free[k])]))));
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        A.row(static_cast<Eigen::Index>(i)) = rows[i].cwiseProduct(unit.transpose());
        b(static_cast<Eigen::Index>(i)) = rhs[i];
    }
    const Eigen::VectorXd y = A.completeOrthogonalDecomposition().solve(b);
    for (std::size_t k = 0; k < free.size(); ++k) {
        a[static_cast<std::size_t>(free[k])] += unit(static_cast<Eigen::Index>(k)) * y(static_cast<Eigen::Index>(k));
    }
    return TransferFunction(tf.numerator(), a, tf.sample_time());
}

}  // namespace acilc
