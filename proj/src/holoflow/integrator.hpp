#pragma once

#include "holoflow/field.hpp"

namespace holoflow {

/// Polyline in the complex time plane, integrated segment by segment via the
/// arc-length substitution w(s) = z(t(s)), dw/ds = (dt/|dt|) F(w).
struct TimePath {
    std::vector<Complex> waypoints;

    TimePath() = default;
    explicit TimePath(std::vector<Complex> pts) : waypoints(std::move(pts)) { validate(); }

    void validate() const {
        if (waypoints.size() < 2)
            throw InvalidArgumentError("time path needs at least two waypoints");
        for (std::size_t i = 1; i < waypoints.size(); ++i)
            if (waypoints[i] == waypoints[i - 1])
                throw InvalidArgumentError("consecutive path waypoints must be distinct");
    }
};

struct IntegratorConfig {
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step_fraction = 0.1;    // of segment length
    double blowup_threshold = 1e12;    // solution norm declaring a singularity
    double min_step_fraction = 1e-14;  // of segment length
    int dense_samples_per_segment = 100;

    void validate() const {
        if (!(rtol >= 10.0 * 2.220446049250313e-16))
            throw InvalidArgumentError("rtol must be at least 10 * machine epsilon");
        if (!(atol > 0.0) || !(max_step_fraction > 0.0) || !(blowup_threshold > 0.0) ||
            !(min_step_fraction > 0.0) || dense_samples_per_segment < 1)
            throw InvalidArgumentError("integrator config values must be positive");
    }
};

enum class TrajStatus { Completed, Singularity, StepUnderflow };

const char* to_string(TrajStatus s);

struct TrajectorySample {
    Complex t;
    CVector z;
    double err_est = 0.0;  // embedded error of the step containing the sample
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    TrajStatus status = TrajStatus::Completed;
    std::string detail;
    Complex t_reached;
    int segments_completed = 0;
};

/// One accepted step of the segment solver, with endpoint derivatives for
/// Hermite dense output.
struct DenseStep {
    double s0 = 0.0, s1 = 0.0;
    CVector w0, w1, f0, f1;
    double err_abs = 0.0;
};

/// Dense solution of a single straight segment, parameterized by arc length
/// s in [0, length].
struct DenseSegment {
    Complex t_start;
    Complex direction;  // unit complex, dt/ds
    double length = 0.0;
    double s_reached = 0.0;
    TrajStatus status = TrajStatus::Completed;
    std::string detail;
    std::vector<DenseStep> steps;
    CVector w_start;

    /// Cubic Hermite interpolation; exact at step boundaries. Valid for
    /// s in [0, s_reached].
    CVector eval(double s) const;
    const CVector& end_state() const;
    double step_error_at(double s) const;
    Complex time_at(double s) const { return t_start + direction * s; }
};

DenseSegment integrate_segment(const VectorField& field, const CVector& w0, Complex t0,
                               Complex t1, const IntegratorConfig& cfg);

Trajectory integrate_path(const VectorField& field, const CVector& z0, const TimePath& path,
                          const IntegratorConfig& cfg);

/// Endpoint disagreement between the sigma-then-tau and tau-then-sigma
/// L-paths to sigma + i tau. Leg failures are reported in the statuses and
/// the defect is the distance between whatever endpoints were reached.
struct CommutativityDefect {
    double defect = 0.0;
    TrajStatus sigma_first_status = TrajStatus::Completed;
    TrajStatus tau_first_status = TrajStatus::Completed;
    Complex sigma_first_t_reached;
    Complex tau_first_t_reached;
    bool both_completed = false;
};

CommutativityDefect path_commutativity_defect(const VectorField& field, const CVector& z0,
                                              double sigma, double tau,
                                              const IntegratorConfig& cfg);

/// Fixed-step propagation of the 5th-order scheme, for convergence checks.
CVector integrate_segment_fixed(const VectorField& field, const CVector& w0, Complex t0,
                                Complex t1, int n_steps);

}  // namespace holoflow
