#include "acilc/trajectory.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace acilc {

namespace {

int ceil_samples(double t, double ts) {
    const double k = t / ts;
    const double up = std::ceil(k - 1e-9);
    return static_cast<int>(std::max(0.0, up));
}

void validate(const SegmentSpec& s, std::size_t index) {
    auto bad = [&](const char* what) {
        std::ostringstream msg;
        msg << "segment " << index << ": " << what;
        throw std::invalid_argument(msg.str());
    };
    if (!std::isfinite(s.displacement)) bad("displacement must be finite");
    if (!(s.max_velocity > 0.0) || !std::isfinite(s.max_velocity)) bad("max velocity must be positive");
    if (!(s.max_acceleration > 0.0) || !std::isfinite(s.max_acceleration)) bad("max acceleration must be positive");
    if (!(s.max_jerk > 0.0) || !std::isfinite(s.max_jerk)) bad("max jerk must be positive");
    if (!(s.rest_duration >= 0.0) || !std::isfinite(s.rest_duration)) bad("rest duration must be nonnegative");
}

// Position of a unit-sign move at local time t.
double move_position(const MoveTiming& m, double ts, double t) {
    const double tj = m.jerk_samples * ts;
    const double ta = m.acceleration_samples * ts;
    const double tv = m.velocity_samples * ts;
    const std::array<double, 7> dur{tj, ta, tj, tv, tj, ta, tj};
    const std::array<double, 7> jerk{m.jerk, 0.0, -m.jerk, 0.0, -m.jerk, 0.0, m.jerk};
    double p = 0.0, v = 0.0, a = 0.0;
    for (std::size_t i = 0; i < 7; ++i) {
        const double tau = std::min(t, dur[i]);
        const double jk = jerk[i];
        p += v * tau + a * tau * tau / 2.0 + jk * tau * tau * tau / 6.0;
        v += a * tau + jk * tau * tau / 2.0;
        a += jk * tau;
        t -= tau;
        if (t <= 0.0) break;
    }
    return p;
}

}  // namespace

MoveTiming plan_move(const SegmentSpec& spec, double ts) {
    const double D = std::abs(spec.displacement);
    MoveTiming m;
    if (D == 0.0) return m;
    const double vmax = spec.max_velocity;
    const double amax = spec.max_acceleration;
    const double jmax = spec.max_jerk;

    double tj = amax / jmax;
    double ta = 0.0;
    if (vmax < amax * tj) {
        tj = std::sqrt(vmax / jmax);
    } else {
        ta = vmax / amax - tj;
    }
    const double vpeak = jmax * tj * (tj + ta);
    double tv = 0.0;
    if (D >= vpeak * (2.0 * tj + ta)) {
        tv = (D - vpeak * (2.0 * tj + ta)) / vpeak;
    } else {
        // Velocity limit not reached: shorten the acceleration phase first.
        tj = std::min(tj, amax / jmax);
        const double disc = tj * tj + 4.0 * D / (jmax * tj);
        ta = (-3.0 * tj + std::sqrt(disc)) / 2.0;
        if (ta < 0.0) {
            ta = 0.0;
            tj = std::cbrt(D / (2.0 * jmax));
        }
    }

    m.jerk_samples = std::max(1, ceil_samples(tj, ts));
    m.acceleration_samples = ceil_samples(ta, ts);
    m.velocity_samples = ceil_samples(tv, ts);
    const double tjr = m.jerk_samples * ts;
    const double tar = m.acceleration_samples * ts;
    const double tvr = m.velocity_samples * ts;
    m.jerk = D / ((tjr + tar) * tjr * (2.0 * tjr + tar + tvr));
    return m;
}

ReferenceProfile third_order_reference(const std::vector<SegmentSpec>& spec, double ts, int horizon) {
    if (!(ts > 0.0)) throw std::invalid_argument("sample time must be positive");
    if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
    for (std::size_t i = 0; i < spec.size(); ++i) validate(spec[i], i);

    std::vector<MoveTiming> plans;
    long total = 0;
    long last_move_end = 0;
    for (const auto& s : spec) {
        plans.push_back(plan_move(s, ts));
        total += plans.back().total_samples();
        last_move_end = total;
        total += std::lround(s.rest_duration / ts);
    }
    if (total > horizon || last_move_end > horizon - 1) {
        std::ostringstream msg;
        msg << "infeasible reference: segments need " << total * ts << " s but the horizon is "
            << horizon * ts << " s";
        throw std::invalid_argument(msg.str());
    }

    ReferenceProfile ref;
    ref.sample_time = ts;
    ref.segments = spec;
    ref.samples = Eigen::VectorXd::Zero(horizon);
    double start = 0.0;
    long offset = 0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const MoveTiming& m = plans[i];
        const double sign = spec[i].displacement < 0.0 ? -1.0 : 1.0;
        const long len = m.total_samples();
        for (long k = 0; k < len; ++k) {
            ref.samples(offset + k) = start + sign * move_position(m, ts, static_cast<double>(k) * ts);
        }
        start += spec[i].displacement;
        offset += len;
        ref.samples.tail(horizon - offset).setConstant(start);
        offset += std::lround(spec[i].rest_duration / ts);
    }
    return ref;
}

Eigen::VectorXd discrete_derivative(const Eigen::VectorXd& x, double ts, int order) {
    const Eigen::Index n = x.size();
    if (n < 3) throw std::invalid_argument("discrete derivative needs at least 3 samples");
    if (!(ts > 0.0)) throw std::invalid_argument("sample time must be positive");
    Eigen::VectorXd d(n);
    if (order == 1) {
        d.segment(1, n - 2) = (x.tail(n - 2) - x.head(n - 2)) / (2.0 * ts);
        d(0) = (x(1) - x(0)) / ts;
        d(n - 1) = (x(n - 1) - x(n - 2)) / ts;
    } else if (order == 2) {
        const double h2 = ts * ts;
        d.segment(1, n - 2) = (x.tail(n - 2) - 2.0 * x.segment(1, n - 2) + x.head(n - 2)) / h2;
        d(0) = (x(2) - 2.0 * x(1) + x(0)) / h2;
        d(n - 1) = (x(n - 1) - 2.0 * x(n - 2) + x(n - 3)) / h2;
    } else {
        throw std::invalid_argument("derivative order must be 1 or 2");
    }
    return d;
}

BasisMatrix build_basis(const ReferenceProfile& r) {
    const Eigen::Index n = r.samples.size();
    BasisMatrix psi;
    psi.columns.resize(n, 2);
    psi.columns.col(0) = discrete_derivative(r.samples, r.sample_time, 2);
    psi.columns.col(1) = discrete_derivative(r.samples, r.sample_time, 1);
    psi.labels = {"acceleration", "velocity"};
    psi.source_reference = reference_fingerprint(r.samples);
    return psi;
}

BasisMatrix identity_basis(int horizon) {
    if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
    BasisMatrix psi;
    psi.columns = Eigen::MatrixXd::Identity(horizon, horizon);
    psi.labels.reserve(static_cast<std::size_t>(horizon));
    for (int i = 0; i < horizon; ++i) psi.labels.push_back("sample_" + std::to_string(i));
    psi.source_reference = "identity";
    return psi;
}

std::string reference_fingerprint(const Eigen::VectorXd& samples) {
    std::uint64_t h = 1469598103934665603ULL;
    for (Eigen::Index i = 0; i < samples.size(); ++i) {
        std::uint64_t bits = 0;
        const double v = samples(i);
        std::memcpy(&bits, &v, sizeof bits);
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xFFU;
            h *= 1099511628211ULL;
        }
    }
    std::ostringstream out;
    out << "fnv1a64:" << std::hex << h;
    return out.str();
}

}  // namespace acilc
