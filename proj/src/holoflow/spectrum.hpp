#pragma once

#include "holoflow/integrator.hpp"
#include "holoflow/jacobian.hpp"

namespace holoflow {

enum class Window { Rect, Hann };

Window window_from_name(const std::string& name);
const char* to_string(Window w);

/// Two-sided power spectrum of an imaginary-time trajectory. Bin i carries
/// frequency (i - N/2) / tau_span in cycles per unit imaginary time; power
/// is |X_k|^2 / N per component so that summing over bins reproduces the
/// windowed signal energy (Parseval).
struct Spectrum {
    int n = 0;
    double tau_span = 0.0;
    int dimension = 0;
    std::string window_name;
    std::vector<double> frequency;                   // size n, strictly increasing
    std::vector<CVector> amplitudes;                 // [component][bin]
    std::vector<std::vector<double>> component_power;  // [component][bin]
    std::vector<double> total_power;                 // [bin], summed over components
    double signal_energy = 0.0;                      // windowed, mean-removed

    double nyquist() const { return static_cast<double>(n) / (2.0 * tau_span); }
    double total_power_sum() const;
};

/// Integration failed along the real anchor leg or the imaginary leg.
class SpectrumLegError : public Error {
public:
    SpectrumLegError(const std::string& msg, TrajStatus status, double tau_reached)
        : Error(msg), status(status), tau_reached(tau_reached) {}
    TrajStatus status;
    double tau_reached;  // imaginary time reached (0 if the real leg failed)
};

/// Flows z0 to (sigma_anchor, 0), then samples z along tau in [0, tau_span)
/// at n uniform points, removes the per-component mean, windows, and
/// transforms. n must be a power of two.
Spectrum imaginary_time_spectrum(const VectorField& field, const CVector& z0,
                                 double sigma_anchor, double tau_span, int n, Window window,
                                 const IntegratorConfig& cfg);

enum class Verdict { OnSim, OffSim, Equilibrium };
const char* to_string(Verdict v);

struct ClassificationReport {
    double f_lo = 0.0, f_hi = 0.0;  // band in |f|; the mirror [-f_hi, -f_lo] is implied
    double band_power = 0.0;
    double total_power = 0.0;
    double rho = 0.0;  // band / total
    double epsilon = 0.0;
    double power_floor = 0.0;
    Verdict verdict = Verdict::Equilibrium;
};

/// Total power below power_floor is an equilibrium; otherwise the verdict is
/// OnSim exactly when rho < epsilon.
ClassificationReport classify_sim_membership(const Spectrum& spectrum, double f_lo, double f_hi,
                                             double epsilon, double power_floor);

struct Band {
    double lo = 0.0;
    double hi = 0.0;
};

/// Band [0.5 min|lambda_fast|, 1.5 max|lambda_fast|] / (2 pi), where the fast
/// eigenvalues are all but the slow_dimension smallest-|Re| ones of the
/// Jacobian at the given point. Wide on purpose: nonlinear systems shift and
/// mix the fast line.
Band suggest_fast_band(const VectorField& field, const CVector& equilibrium_point,
                       int slow_dimension);

}  // namespace holoflow
