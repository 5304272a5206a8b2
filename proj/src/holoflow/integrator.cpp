#include <algorithm>
#include <cmath>

#include "holoflow/integrator.hpp"

namespace holoflow {

const char* to_string(TrajStatus s) {
    switch (s) {
        case TrajStatus::Completed: return "completed";
        case TrajStatus::Singularity: return "singularity";
        case TrajStatus::StepUnderflow: return "step-underflow";
    }
    return "?";
}

namespace {

// Dormand-Prince 5(4) tableau (Hairer, Norsett, Wanner I).
constexpr double a21 = 0.2;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 5.0;
constexpr double kAlpha = 0.7 / 5.0;  // PI controller exponents
constexpr double kBeta = 0.4 / 5.0;

bool finite(const CVector& v) {
    for (const Complex& c : v)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

struct SegmentStepper {
    const VectorField& field;
    Complex direction;
    double length;
    const IntegratorConfig& cfg;

    CVector rhs(const CVector& w) const {
        CVector f = field.evaluate(w);
        for (Complex& c : f) c *= direction;
        return f;
    }

    double scaled_norm(const CVector& v, const CVector& ref) const {
        double m = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            m = std::max(m, std::abs(v[i]) / (cfg.atol + cfg.rtol * std::abs(ref[i])));
        return m;
    }

    double initial_step(const CVector& w0, const CVector& f0, double max_step) const {
        const double d0 = scaled_norm(w0, w0);
        const double d1 = scaled_norm(f0, w0);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * length : 0.01 * (d0 / d1);
        h0 = std::min(h0, max_step);
        double d2 = 0.0;
        try {
            CVector probe(w0.size());
            for (std::size_t i = 0; i < w0.size(); ++i) probe[i] = w0[i] + h0 * f0[i];
            const CVector f1 = rhs(probe);
            CVector diff(w0.size());
            for (std::size_t i = 0; i < w0.size(); ++i) diff[i] = f1[i] - f0[i];
            d2 = scaled_norm(diff, w0) / h0;
        } catch (const PoleOrBranchError&) {
            return std::min(h0, max_step);
        }
        double h1;
        if (std::max(d1, d2) <= 1e-15)
            h1 = std::max(1e-6 * length, h0 * 1e-3);
        else
            h1 = std::pow(0.01 / std::max(d1, d2), 0.2);
        return std::min({100.0 * h0, h1, max_step});
    }
};

}  // namespace

CVector DenseSegment::eval(double s) const {
    if (steps.empty()) return w_start;
    if (s <= 0.0) return w_start;
    if (s >= steps.back().s1) return steps.back().w1;
    // first step whose s1 covers s
    std::size_t lo = 0, hi = steps.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (steps[mid].s1 < s)
            lo = mid + 1;
        else
            hi = mid;
    }
    const DenseStep& st = steps[lo];
    if (s == st.s0) return st.w0;
    if (s == st.s1) return st.w1;
    const double h = st.s1 - st.s0;
    const double theta = (s - st.s0) / h;
    const double c_w = theta * theta * (3.0 - 2.0 * theta);
    const double c_f = h * theta * (1.0 - theta);
    CVector out(st.w0.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = st.w0[i] + c_w * (st.w1[i] - st.w0[i]) +
                 c_f * ((1.0 - theta) * st.f0[i] - theta * st.f1[i]);
    return out;
}

const CVector& DenseSegment::end_state() const {
    return steps.empty() ? w_start : steps.back().w1;
}

double DenseSegment::step_error_at(double s) const {
    for (const DenseStep& st : steps)
        if (s <= st.s1) return st.err_abs;
    return steps.empty() ? 0.0 : steps.back().err_abs;
}

DenseSegment integrate_segment(const VectorField& field, const CVector& w0, Complex t0,
                               Complex t1, const IntegratorConfig& cfg) {
    cfg.validate();
    const Complex dt = t1 - t0;
    const double length = std::abs(dt);
    if (length == 0.0) throw InvalidArgumentError("zero-length path segment");

    DenseSegment seg;
    seg.t_start = t0;
    seg.direction = dt / length;
    seg.length = length;
    seg.w_start = w0;

    SegmentStepper stepper{field, seg.direction, length, cfg};
    const double max_step = cfg.max_step_fraction * length;
    const double min_step = cfg.min_step_fraction * length;
    const std::size_t n = w0.size();

    auto fail = [&seg](TrajStatus status, std::string detail) -> DenseSegment {
        seg.status = status;
        seg.detail = std::move(detail);
        return seg;
    };
    // A vanishing step at a hugely grown state is pole-driven, not a
    // tolerance problem; report it as the singularity it is.
    auto underflow_status = [&](const CVector& w, double s) -> DenseSegment {
        if (max_abs(w) > 1e-3 * cfg.blowup_threshold)
            return fail(TrajStatus::Singularity,
                        "step size underflow at solution norm " + std::to_string(max_abs(w)) +
                            " near s=" + std::to_string(s) + " (pole approach)");
        return fail(TrajStatus::StepUnderflow,
                    "step size fell below the minimum near s=" + std::to_string(s));
    };

    CVector w = w0;
    CVector k1;
    try {
        k1 = stepper.rhs(w);
    } catch (const PoleOrBranchError& e) {
        return fail(TrajStatus::Singularity, std::string("field evaluation: ") + e.what());
    }
    if (!finite(k1)) return fail(TrajStatus::Singularity, "field not finite at segment start");

    double s = 0.0;
    double h = stepper.initial_step(w, k1, max_step);
    h = std::max(h, min_step);
    double err_prev = 1.0;

    CVector k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), wtmp(n), wnew(n);

    while (s < length) {
        bool last = false;
        if (s + h >= length) {
            h = length - s;
            last = true;
        } else if (s + 1.01 * h >= length) {
            h = (length - s) * 0.5;  // avoid a tiny final sliver
        }

        bool rejected_nonfinite = false;
        try {
            for (std::size_t i = 0; i < n; ++i) wtmp[i] = w[i] + h * (a21 * k1[i]);
            k2 = stepper.rhs(wtmp);
            for (std::size_t i = 0; i < n; ++i) wtmp[i] = w[i] + h * (a31 * k1[i] + a32 * k2[i]);
            k3 = stepper.rhs(wtmp);
            for (std::size_t i = 0; i < n; ++i)
                wtmp[i] = w[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            k4 = stepper.rhs(wtmp);
            for (std::size_t i = 0; i < n; ++i)
                wtmp[i] = w[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            k5 = stepper.rhs(wtmp);
            for (std::size_t i = 0; i < n; ++i)
                wtmp[i] = w[i] +
                          h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            k6 = stepper.rhs(wtmp);
            for (std::size_t i = 0; i < n; ++i)
                wnew[i] = w[i] +
                          h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
            k7 = stepper.rhs(wnew);  // FSAL
        } catch (const PoleOrBranchError& e) {
            // shrink toward the obstruction; give up only at the minimum step
            if (h <= min_step * 1.0000001)
                return fail(TrajStatus::Singularity, std::string("field evaluation: ") + e.what());
            h = std::max(h * kFacMin, min_step);
            continue;
        }

        double err_norm = 0.0;
        double err_abs = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Complex err = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                     e6 * k6[i] + e7 * k7[i]);
            const double mag = std::abs(err);
            err_abs = std::max(err_abs, mag);
            const double scale =
                cfg.atol + cfg.rtol * std::max(std::abs(w[i]), std::abs(wnew[i]));
            err_norm = std::max(err_norm, mag / scale);
        }
        if (!std::isfinite(err_norm) || !finite(wnew)) {
            err_norm = 2.0;
            rejected_nonfinite = true;
        }

        if (err_norm > 1.0) {
            // rejected: shrink with the plain controller, never grow
            double fac = rejected_nonfinite
                             ? kFacMin
                             : std::max(kFacMin, kSafety * std::pow(err_norm, -0.2));
            fac = std::min(fac, 1.0);
            const double h_next = h * fac;
            if (h_next < min_step) return underflow_status(w, s);
            h = h_next;
            continue;
        }

        // accepted
        if (max_abs(wnew) > cfg.blowup_threshold)
            return fail(TrajStatus::Singularity,
                        "solution norm exceeded " + std::to_string(cfg.blowup_threshold) +
                            " near s=" + std::to_string(s + h));

        DenseStep st;
        st.s0 = s;
        st.s1 = last ? length : s + h;
        st.w0 = w;
        st.w1 = wnew;
        st.f0 = k1;
        st.f1 = k7;
        st.err_abs = err_abs;
        seg.steps.push_back(std::move(st));

        w = wnew;
        k1 = k7;
        s = last ? length : s + h;
        seg.s_reached = s;

        const double err_clamped = std::max(err_norm, 1e-10);
        double fac = kSafety * std::pow(err_clamped, -kAlpha) * std::pow(err_prev, kBeta);
        fac = std::clamp(fac, kFacMin, kFacMax);
        err_prev = std::max(err_norm, 1e-4);
        h = std::min(h * fac, max_step);
        if (h < min_step) {
            if (s >= length) break;
            return underflow_status(w, s);
        }
    }

    seg.status = TrajStatus::Completed;
    return seg;
}

Trajectory integrate_path(const VectorField& field, const CVector& z0, const TimePath& path,
                          const IntegratorConfig& cfg) {
    path.validate();
    cfg.validate();
    if (static_cast<int>(z0.size()) != field.dimension())
        throw InvalidArgumentError("initial value dimension mismatch");
    if (!finite(z0)) throw InvalidArgumentError("initial value must be finite");

    Trajectory traj;
    traj.samples.push_back({path.waypoints.front(), z0, 0.0});
    traj.t_reached = path.waypoints.front();

    CVector state = z0;
    for (std::size_t seg_idx = 0; seg_idx + 1 < path.waypoints.size(); ++seg_idx) {
        const Complex t0 = path.waypoints[seg_idx];
        const Complex t1 = path.waypoints[seg_idx + 1];
        DenseSegment seg = integrate_segment(field, state, t0, t1, cfg);

        const int m = cfg.dense_samples_per_segment;
        for (int i = 1; i <= m; ++i) {
            const double si = seg.length * static_cast<double>(i) / static_cast<double>(m);
            if (si > seg.s_reached) break;
            TrajectorySample sample;
            sample.t = (i == m && seg.status == TrajStatus::Completed) ? t1 : seg.time_at(si);
            sample.z = seg.eval(si);
            sample.err_est = seg.step_error_at(si);
            traj.samples.push_back(std::move(sample));
        }

        if (seg.status != TrajStatus::Completed) {
            // close the partial trajectory at the last reached state
            if (seg.s_reached > 0.0) {
                const double last_emitted =
                    seg.length * std::floor(seg.s_reached * m / seg.length) / m;
                if (seg.s_reached > last_emitted)
                    traj.samples.push_back({seg.time_at(seg.s_reached), seg.end_state(),
                                            seg.steps.empty() ? 0.0 : seg.steps.back().err_abs});
            }
            traj.status = seg.status;
            traj.detail = seg.detail;
            traj.t_reached = seg.time_at(seg.s_reached);
            traj.segments_completed = static_cast<int>(seg_idx);
            return traj;
        }

        state = seg.end_state();
        traj.t_reached = t1;
        traj.segments_completed = static_cast<int>(seg_idx) + 1;
    }

    // land exactly on the final waypoint
    traj.samples.back().t = path.waypoints.back();
    traj.status = TrajStatus::Completed;
    return traj;
}

CommutativityDefect path_commutativity_defect(const VectorField& field, const CVector& z0,
                                              double sigma, double tau,
                                              const IntegratorConfig& cfg) {
    if (sigma == 0.0 || tau == 0.0)
        throw InvalidArgumentError("commutativity defect needs nonzero sigma and tau");
    const Complex corner(sigma, tau);
    const Trajectory a =
        integrate_path(field, z0, TimePath({Complex(0, 0), Complex(sigma, 0), corner}), cfg);
    const Trajectory b =
        integrate_path(field, z0, TimePath({Complex(0, 0), Complex(0, tau), corner}), cfg);

    CommutativityDefect d;
    d.sigma_first_status = a.status;
    d.tau_first_status = b.status;
    d.sigma_first_t_reached = a.t_reached;
    d.tau_first_t_reached = b.t_reached;
    d.both_completed =
        a.status == TrajStatus::Completed && b.status == TrajStatus::Completed;
    d.defect = max_abs_diff(a.samples.back().z, b.samples.back().z);
    return d;
}

CVector integrate_segment_fixed(const VectorField& field, const CVector& w0, Complex t0,
                                Complex t1, int n_steps) {
    if (n_steps < 1) throw InvalidArgumentError("need at least one step");
    const Complex dt = t1 - t0;
    const double length = std::abs(dt);
    const Complex direction = dt / length;
    const double h = length / n_steps;
    const std::size_t n = w0.size();

    auto rhs = [&](const CVector& w) {
        CVector f = field.evaluate(w);
        for (Complex& c : f) c *= direction;
        return f;
    };

    CVector w = w0, wtmp(n);
    for (int step = 0; step < n_steps; ++step) {
        const CVector k1 = rhs(w);
        for (std::size_t i = 0; i < n; ++i) wtmp[i] = w[i] + h * (a21 * k1[i]);
        const CVector k2 = rhs(wtmp);
        for (std::size_t i = 0; i < n; ++i) wtmp[i] = w[i] + h * (a31 * k1[i] + a32 * k2[i]);
        const CVector k3 = rhs(wtmp);
        for (std::size_t i = 0; i < n; ++i)
            wtmp[i] = w[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        const CVector k4 = rhs(wtmp);
        for (std::size_t i = 0; i < n; ++i)
            wtmp[i] = w[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        const CVector k5 = rhs(wtmp);
        for (std::size_t i = 0; i < n; ++i)
            wtmp[i] =
                w[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        const CVector k6 = rhs(wtmp);
        for (std::size_t i = 0; i < n; ++i)
            w[i] = w[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    }
    return w;
}

}  // namespace holoflow
