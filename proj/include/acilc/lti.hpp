#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace acilc {

// Discrete-time SISO rational transfer function. Coefficients are stored in
// descending powers of z, denominator normalized to a leading 1.
class TransferFunction {
public:
    TransferFunction(std::vector<double> numerator, std::vector<double> denominator,
                     double sample_time);

    static TransferFunction gain(double k, double sample_time);

    const std::vector<double>& numerator() const { return num_; }
    const std::vector<double>& denominator() const { return den_; }
    double sample_time() const { return ts_; }
    int order() const { return static_cast<int>(den_.size()) - 1; }

    // Number of leading zero Markov parameters (input-output delay).
    int relative_degree() const;

    // First n Markov parameters by polynomial long division.
    Eigen::VectorXd markov_parameters(int n) const;

private:
    std::vector<double> num_;
    std::vector<double> den_;
    double ts_;
};

struct StateSpaceModel {
    Eigen::MatrixXd A;
    Eigen::VectorXd B;
    Eigen::RowVectorXd C;
    double D = 0.0;
    double sample_time = 0.0;

    int order() const { return static_cast<int>(A.rows()); }
};

// Lifted finite-horizon closed-loop maps: e = S r - J f.
struct LiftedSystem {
    Eigen::MatrixXd S;
    Eigen::MatrixXd J;
    int horizon = 0;
    double sample_time = 0.0;
    double spectral_radius = 0.0;  // of the closed-loop state matrix
};

// Controllable canonical form.
StateSpaceModel tf_to_state_space(const TransferFunction& tf);

Eigen::VectorXd impulse_response(const StateSpaceModel& model, int horizon);

Eigen::MatrixXd lifted_toeplitz(const Eigen::VectorXd& h);

// Closed loop e = r - y, u = C e + f, y = P u.
// Throws std::invalid_argument on sample-time mismatch or an ill-posed
// algebraic loop, std::domain_error if the loop is not internally stable.
LiftedSystem closed_loop_maps(const TransferFunction& P, const TransferFunction& C, int horizon);

// State-space realization of the closed loop with inputs [r, f] and output e.
struct ClosedLoopModel {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;  // n x 2, columns r and f
    Eigen::RowVectorXd C;
    Eigen::RowVector2d D;
};
ClosedLoopModel closed_loop_realization(const TransferFunction& P, const TransferFunction& C);

Eigen::VectorXd simulate_trial(const LiftedSystem& sys, const Eigen::VectorXd& r,
                               const Eigen::VectorXd& f);

// Polynomial roots (descending coefficients) via companion-matrix eigenvalues.
std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& coeffs);

// Cancel pole/zero pairs closer than tol. Each cancelled root is deflated out
// of its own polynomial, so the remaining coefficients change only by the
// division remainder.
TransferFunction minreal(const TransferFunction& tf, double tol);

// Smallest weighted change of the denominator coefficients that places the
// given real roots (repeated entries mean multiplicity). Coefficients that
// are exactly zero and the leading 1 are left untouched. Each free
// coefficient is weighted by its decimal order of magnitude, i.e. by the
// rounding unit of a value rounded to fixed significant digits.
TransferFunction constrain_poles(const TransferFunction& tf, const std::vector<double>& roots);

}  // namespace acilc
