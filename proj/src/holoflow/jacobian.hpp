#pragma once

#include "holoflow/field.hpp"

namespace holoflow {

/// Eigenvalues of DF at a point, sorted by real part descending, with the
/// oscillation frequencies lambda/(2 pi) they induce along imaginary time.
struct JacobianSpectrum {
    CVector eigenvalues;
    CVector frequencies;
    CVector point;
};

/// Central-difference Jacobian, row-major n x n, step 1e-6 * max(1, |z_k|)
/// per coordinate.
CVector jacobian_matrix(const VectorField& field, const CVector& z);

/// Characteristic polynomial coefficients c[0..n] (monic, c[n] = 1) of a
/// row-major n x n complex matrix via the Faddeev-LeVerrier recursion.
CVector characteristic_polynomial(const CVector& matrix, int n);

/// All complex roots of a monic polynomial by Durand-Kerner iteration.
/// Converges when every |p(root)| < 1e-10; throws NoConvergenceError after
/// 500 iterations.
CVector durand_kerner_roots(const CVector& monic_coefficients);

/// Supported up to dimension 6.
JacobianSpectrum jacobian_spectrum(const VectorField& field, const CVector& z);

}  // namespace holoflow
