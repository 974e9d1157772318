#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace acilc {

struct SegmentSpec {
    double displacement = 0.0;
    double max_velocity = 0.0;
    double max_acceleration = 0.0;
    double max_jerk = 0.0;
    double rest_duration = 0.0;
};

struct ReferenceProfile {
    Eigen::VectorXd samples;
    double sample_time = 0.0;
    std::vector<SegmentSpec> segments;
};

struct BasisMatrix {
    Eigen::MatrixXd columns;
    std::vector<std::string> labels;
    std::string source_reference;

    int size() const { return static_cast<int>(columns.cols()); }
    int horizon() const { return static_cast<int>(columns.rows()); }
};

// Switch durations of one seven-phase move after rounding to the sample grid.
struct MoveTiming {
    int jerk_samples = 0;          // each of the four constant-jerk phases
    int acceleration_samples = 0;  // each of the two constant-acceleration phases
    int velocity_samples = 0;      // constant-velocity phase
    double jerk = 0.0;             // recomputed so the displacement is exact

    int total_samples() const { return 4 * jerk_samples + 2 * acceleration_samples + velocity_samples; }
};

MoveTiming plan_move(const SegmentSpec& spec, double sample_time);

// Moves are executed back to back starting at t = 0, each followed by its
// rest; samples after the last segment hold the final position.
ReferenceProfile third_order_reference(const std::vector<SegmentSpec>& spec, double sample_time,
                                       int horizon);

// Central differences inside, one-sided differences at both ends.
Eigen::VectorXd discrete_derivative(const Eigen::VectorXd& x, double sample_time, int order);

// Columns [d^2 r/dt^2, dr/dt].
BasisMatrix build_basis(const ReferenceProfile& r);
BasisMatrix identity_basis(int horizon);

std::string reference_fingerprint(const Eigen::VectorXd& samples);

}  // namespace acilc
