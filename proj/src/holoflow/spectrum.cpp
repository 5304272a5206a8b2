#include <algorithm>
#include <cmath>
#include <numbers>

#include "holoflow/fft.hpp"
#include "holoflow/spectrum.hpp"

namespace holoflow {

Window window_from_name(const std::string& name) {
    if (name == "rect") return Window::Rect;
    if (name == "hann") return Window::Hann;
    throw InvalidArgumentError("unknown window '" + name + "' (available: rect, hann)");
}

const char* to_string(Window w) { return w == Window::Rect ? "rect" : "hann"; }

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::OnSim: return "OnSIM";
        case Verdict::OffSim: return "OffSIM";
        case Verdict::Equilibrium: return "Equilibrium";
    }
    return "?";
}

double Spectrum::total_power_sum() const {
    double s = 0.0;
    for (double p : total_power) s += p;
    return s;
}

Spectrum imaginary_time_spectrum(const VectorField& field, const CVector& z0,
                                 double sigma_anchor, double tau_span, int n, Window window,
                                 const IntegratorConfig& cfg) {
    if (n < 2 || !is_power_of_two(static_cast<std::size_t>(n)))
        throw InvalidArgumentError("sample count must be a power of two, at least 2");
    if (!(tau_span > 0.0)) throw InvalidArgumentError("tau_span must be positive");

    CVector anchor = z0;
    if (sigma_anchor != 0.0) {
        const DenseSegment real_leg =
            integrate_segment(field, z0, Complex(0, 0), Complex(sigma_anchor, 0), cfg);
        if (real_leg.status != TrajStatus::Completed)
            throw SpectrumLegError("real-time anchor leg failed: " + real_leg.detail,
                                   real_leg.status, 0.0);
        anchor = real_leg.end_state();
    }

    const DenseSegment leg = integrate_segment(field, anchor, Complex(sigma_anchor, 0),
                                               Complex(sigma_anchor, tau_span), cfg);
    if (leg.status != TrajStatus::Completed)
        throw SpectrumLegError("imaginary-time leg failed after tau=" +
                                   std::to_string(leg.s_reached) + ": " + leg.detail,
                               leg.status, leg.s_reached);

    const int dim = field.dimension();
    const double dtau = tau_span / static_cast<double>(n);

    std::vector<CVector> samples(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        samples[static_cast<std::size_t>(j)] = leg.eval(dtau * static_cast<double>(j));

    Spectrum spec;
    spec.n = n;
    spec.tau_span = tau_span;
    spec.dimension = dim;
    spec.window_name = to_string(window);
    spec.frequency.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        spec.frequency[static_cast<std::size_t>(i)] =
            static_cast<double>(i - n / 2) / tau_span;
    spec.total_power.assign(static_cast<std::size_t>(n), 0.0);

    std::vector<double> win(static_cast<std::size_t>(n), 1.0);
    if (window == Window::Hann)
        for (int j = 0; j < n; ++j)
            win[static_cast<std::size_t>(j)] =
                0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(j) /
                                      static_cast<double>(n)));

    for (int c = 0; c < dim; ++c) {
        std::vector<Complex> signal(static_cast<std::size_t>(n));
        Complex mean(0.0, 0.0);
        for (int j = 0; j < n; ++j) mean += samples[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
        mean /= static_cast<double>(n);
        for (int j = 0; j < n; ++j)
            signal[static_cast<std::size_t>(j)] =
                (samples[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)] - mean) *
                win[static_cast<std::size_t>(j)];

        for (const Complex& y : signal) spec.signal_energy += std::norm(y);

        std::vector<Complex> amp = fft(signal);
        std::vector<double> power(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            power[static_cast<std::size_t>(i)] =
                std::norm(amp[static_cast<std::size_t>(i)]) / static_cast<double>(n);
            spec.total_power[static_cast<std::size_t>(i)] += power[static_cast<std::size_t>(i)];
        }
        spec.amplitudes.push_back(std::move(amp));
        spec.component_power.push_back(std::move(power));
    }
    return spec;
}

ClassificationReport classify_sim_membership(const Spectrum& spectrum, double f_lo, double f_hi,
                                             double epsilon, double power_floor) {
    if (!(0.0 < f_lo && f_lo < f_hi))
        throw InvalidArgumentError("fast band requires 0 < f_lo < f_hi");
    if (f_hi > spectrum.nyquist() * (1.0 + 1e-12))
        throw InvalidArgumentError("fast band upper edge exceeds the Nyquist frequency " +
                                   std::to_string(spectrum.nyquist()));
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw InvalidArgumentError("epsilon must lie in (0, 1)");
    if (!(power_floor > 0.0)) throw InvalidArgumentError("power_floor must be positive");

    ClassificationReport rep;
    rep.f_lo = f_lo;
    rep.f_hi = f_hi;
    rep.epsilon = epsilon;
    rep.power_floor = power_floor;

    int bins_in_band = 0;
    for (std::size_t i = 0; i < spectrum.frequency.size(); ++i) {
        const double f = std::abs(spectrum.frequency[i]);
        rep.total_power += spectrum.total_power[i];
        if (f >= f_lo && f <= f_hi) {
            rep.band_power += spectrum.total_power[i];
            ++bins_in_band;
        }
    }
    if (bins_in_band == 0)
        throw InvalidArgumentError("no spectrum bins fall inside the fast band [" +
                                   std::to_string(f_lo) + ", " + std::to_string(f_hi) + "]");

    if (rep.total_power < power_floor) {
        rep.verdict = Verdict::Equilibrium;
        rep.rho = 0.0;
        return rep;
    }
    rep.rho = rep.band_power / rep.total_power;
    rep.verdict = rep.rho < epsilon ? Verdict::OnSim : Verdict::OffSim;
    return rep;
}

Band suggest_fast_band(const VectorField& field, const CVector& equilibrium_point,
                       int slow_dimension) {
    const int n = field.dimension();
    if (slow_dimension < 0 || slow_dimension >= n)
        throw InvalidArgumentError(
            "slow_dimension must leave at least one fast mode (0 <= slow_dimension < dimension)");

    JacobianSpectrum spec = jacobian_spectrum(field, equilibrium_point);
    CVector eigen = spec.eigenvalues;
    std::sort(eigen.begin(), eigen.end(), [](const Complex& a, const Complex& b) {
        const double ra = std::abs(a.real()), rb = std::abs(b.real());
        if (ra != rb) return ra < rb;
        return std::abs(a.imag()) < std::abs(b.imag());
    });

    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = static_cast<std::size_t>(slow_dimension); i < eigen.size(); ++i) {
        const double mag = std::abs(eigen[i]);
        lo = std::min(lo, mag);
        hi = std::max(hi, mag);
    }
    const double two_pi = 2.0 * std::numbers::pi;
    return Band{0.5 * lo / two_pi, 1.5 * hi / two_pi};
}

}  // namespace holoflow
