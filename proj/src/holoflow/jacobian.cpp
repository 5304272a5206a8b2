#include <algorithm>
#include <cmath>
#include <numbers>

#include "holoflow/jacobian.hpp"

namespace holoflow {

CVector jacobian_matrix(const VectorField& field, const CVector& z) {
    const int n = field.dimension();
    CVector jac(static_cast<std::size_t>(n) * n);
    for (int k = 0; k < n; ++k) {
        const double h = 1e-6 * std::max(1.0, std::abs(z[static_cast<std::size_t>(k)]));
        CVector zp = z, zm = z;
        zp[static_cast<std::size_t>(k)] += h;
        zm[static_cast<std::size_t>(k)] -= h;
        const CVector fp = field.evaluate(zp);
        const CVector fm = field.evaluate(zm);
        for (int r = 0; r < n; ++r)
            jac[static_cast<std::size_t>(r) * n + k] =
                (fp[static_cast<std::size_t>(r)] - fm[static_cast<std::size_t>(r)]) / (2.0 * h);
    }
    return jac;
}

namespace {

CVector mat_mul(const CVector& a, const CVector& b, int n) {
    CVector c(static_cast<std::size_t>(n) * n, Complex(0.0, 0.0));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const Complex aik = a[static_cast<std::size_t>(i) * n + k];
            if (aik.real() == 0.0 && aik.imag() == 0.0) continue;
            for (int j = 0; j < n; ++j)
                c[static_cast<std::size_t>(i) * n + j] +=
                    aik * b[static_cast<std::size_t>(k) * n + j];
        }
    return c;
}

Complex trace(const CVector& a, int n) {
    Complex t(0.0, 0.0);
    for (int i = 0; i < n; ++i) t += a[static_cast<std::size_t>(i) * n + i];
    return t;
}

Complex horner(const CVector& coeffs, const Complex& x) {
    Complex acc(0.0, 0.0);
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

}  // namespace

CVector characteristic_polynomial(const CVector& matrix, int n) {
    // M_1 = A, c_{n-1} = -tr(M_1); M_{k+1} = A (M_k + c_{n-k} I),
    // c_{n-k-1} = -tr(M_{k+1}) / (k+1).
    CVector coeffs(static_cast<std::size_t>(n) + 1, Complex(0.0, 0.0));
    coeffs[static_cast<std::size_t>(n)] = Complex(1.0, 0.0);
    CVector m = matrix;
    for (int k = 1; k <= n; ++k) {
        const Complex c = -trace(m, n) / static_cast<double>(k);
        coeffs[static_cast<std::size_t>(n - k)] = c;
        if (k == n) break;
        for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i) * n + i] += c;
        m = mat_mul(matrix, m, n);
    }
    return coeffs;
}

CVector durand_kerner_roots(const CVector& monic_coefficients) {
    const int degree = static_cast<int>(monic_coefficients.size()) - 1;
    if (degree < 1) throw InvalidArgumentError("polynomial degree must be at least 1");

    double bound = 0.0;
    for (int i = 0; i < degree; ++i) bound = std::max(bound, std::abs(monic_coefficients[static_cast<std::size_t>(i)]));
    bound += 1.0;  // Cauchy bound on root magnitudes

    CVector roots(static_cast<std::size_t>(degree));
    const Complex seed(0.4, 0.9);
    Complex p(1.0, 0.0);
    for (int i = 0; i < degree; ++i) {
        p *= seed;
        roots[static_cast<std::size_t>(i)] = bound * p;
    }

    constexpr int kMaxIterations = 500;
    constexpr double kResidualTol = 1e-10;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        double max_residual = 0.0;
        for (int i = 0; i < degree; ++i) {
            const Complex ri = roots[static_cast<std::size_t>(i)];
            const Complex num = horner(monic_coefficients, ri);
            max_residual = std::max(max_residual, std::abs(num));
            Complex den(1.0, 0.0);
            for (int j = 0; j < degree; ++j)
                if (j != i) den *= ri - roots[static_cast<std::size_t>(j)];
            if (den.real() == 0.0 && den.imag() == 0.0) {
                // coincident iterates: nudge deterministically
                roots[static_cast<std::size_t>(i)] += Complex(1e-8, 1e-8) * bound;
                continue;
            }
            roots[static_cast<std::size_t>(i)] = ri - num / den;
        }
        if (max_residual < kResidualTol) return roots;
    }
    // final check: the loop updates after measuring, so re-verify
    double res = 0.0;
    for (const Complex& r : roots) res = std::max(res, std::abs(horner(monic_coefficients, r)));
    if (res < kResidualTol) return roots;
    throw NoConvergenceError("Durand-Kerner iteration did not reach residual 1e-10 in 500 steps");
}

JacobianSpectrum jacobian_spectrum(const VectorField& field, const CVector& z) {
    const int n = field.dimension();
    if (n > 6)
        throw InvalidArgumentError("jacobian_spectrum supports dimension <= 6, got " +
                                   std::to_string(n));
    if (static_cast<int>(z.size()) != n)
        throw InvalidArgumentError("point dimension mismatch in jacobian_spectrum");

    const CVector jac = jacobian_matrix(field, z);
    CVector eigenvalues;
    if (n == 1) {
        eigenvalues = {jac[0]};
    } else {
        eigenvalues = durand_kerner_roots(characteristic_polynomial(jac, n));
    }
    std::sort(eigenvalues.begin(), eigenvalues.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });

    JacobianSpectrum spec;
    spec.eigenvalues = eigenvalues;
    spec.frequencies.reserve(eigenvalues.size());
    for (const Complex& lambda : eigenvalues)
        spec.frequencies.push_back(lambda / (2.0 * std::numbers::pi));
    spec.point = z;
    return spec;
}

}  // namespace holoflow
