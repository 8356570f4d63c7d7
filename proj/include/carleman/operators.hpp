#pragma once

// Plane-wave symbols of the Maxwell operator M^i and its parametrix C^i for
// the de Rham complex grad -> curl -> div in R^3. On exp(i x.xi) every
// derivative becomes i*xi, so the factorisation C M = M C = diag(Delta - k^2)
// is a finite matrix identity that can be checked exactly.

#include "carleman/specialfn.hpp"

namespace carleman {

/// Conductive medium; all four parameters enter k^2 = (eps + i sigma/omega) mu omega^2.
struct MaterialParams {
  double epsilon = 1.0;
  double mu = 1.0;
  double sigma = 0.0;
  double omega = 1.0;

  void validate() const;
};

/// k with k^2 = (eps + i sigma/omega) mu omega^2 and Im k >= 0.
WaveNumber wavenumber_from_material(const MaterialParams& m);

/// Ranks k_i of the bundles in the complex: 1, 3, 3, 1 for i = 0..3, zero otherwise.
int bundle_rank(int i);

/// sigma(A^i)(xi): k_{i+1} x k_i. Zero-size for steps outside 0..2.
Eigen::MatrixXcd a_symbol(int i, const Vec3& xi);

/// sigma(A^{i*})(xi), the conjugate transpose of a_symbol (A^{0*} = -div,
/// A^{1*} = curl, A^{2*} = -grad).
Eigen::MatrixXcd a_adjoint_symbol(int i, const Vec3& xi);

struct SymbolMatrix {
  Eigen::MatrixXcd entries;
  int step = 1;
  Vec3 xi = Vec3::Zero();
  WaveNumber k;
};

/// sigma(M^i)(xi) = [[ik, A*], [A, -ik]].
SymbolMatrix maxwell_symbol(int step, const Vec3& xi, const WaveNumber& k);

/// sigma(C^i)(xi) = [[ik + (1/ik) A^{i-1} A^{i-1*}, A*], [A, -ik - (1/ik) A^{i+1*} A^{i+1}]].
SymbolMatrix parametrix_symbol(int step, const Vec3& xi, const WaveNumber& k);

/// Same operator written as [[(1/ik)(Delta^i - k^2 - A*A), A*], [A, -(1/ik)(Delta^{i+1} - k^2 - A A*)]].
SymbolMatrix parametrix_symbol_laplacian_form(int step, const Vec3& xi, const WaveNumber& k);

/// Symbol of the Laplacian Delta^i = A^{i*}A^i + A^{i-1}A^{i-1*} (|xi|^2 I for this complex).
Eigen::MatrixXcd laplacian_symbol(int i, const Vec3& xi);

/// max(|C M - (|xi|^2 - k^2) I|, |M C - (|xi|^2 - k^2) I|) in the max-entry norm.
double factorization_residual(int step, const Vec3& xi, const WaveNumber& k);

/// max-entry norm of sigma(A^{i+1}) sigma(A^i).
double complex_property_residual(int i, const Vec3& xi);

}  // namespace carleman
