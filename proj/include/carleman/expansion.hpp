#pragma once

// Expansion of the fundamental solution e(x - y) in the doubly orthogonal
// basis b_nu^(j)(x) = j_nu(k|x|) Y_nu^(j)(x/|x|), valid for |x| < |y|:
//   e(x - y) = sum_nu sum_j c_nu^(j)(y) b_nu^(j)(x).
// The basis is orthogonal in L2 of every ball centred at 0, so the
// coefficients c = (e(. - y), b)_{B(0,R)} / int_0^R |g_nu|^2 r^2 dr do not
// depend on R < |y|. The degree-nu slice of the series, pushed through the
// same operator matrix as the Maxwell kernel, gives Phi_nu, and
//   R_N(x, y) = K(x - y) - sum_{nu <= N} Phi_nu(x, y)
// is the Carleman kernel.

#include <iosfwd>
#include <string>
#include <vector>

#include "carleman/potentials.hpp"

namespace carleman {

enum class CoeffMethod { Quadrature, ClosedForm };

const char* to_string(CoeffMethod m);
/// "quadrature" or "closed_form"; throws std::invalid_argument otherwise.
CoeffMethod parse_coeff_method(const std::string& name);

// ---------------------------------------------------------------------------
// Basis

/// b_nu^(j) with gradient and Hessian for every nu <= max_degree, stored at
/// flat_index(nu, j). Exact at x = 0.
std::vector<ComplexJet> basis_jets(int max_degree, const Vec3& x, const WaveNumber& k);

/// b_nu^(j)(x) for every nu <= max_degree.
std::vector<cplx> basis_values(int max_degree, const Vec3& x, const WaveNumber& k);

/// b_nu^(j)(x) = g_nu(|x|) h_nu^(j)(x/|x|), the limit at x = 0.
cplx basis_b(const HarmonicIndex& idx, const Vec3& x, const WaveNumber& k);

/// int_0^R |j_nu(k r)|^2 r^2 dr.
double radial_norm_squared(int nu, double R, const WaveNumber& k);

/// Gram matrix of {b_nu^(j) : nu <= N} in L2(B(0, R)) by Gauss-Legendre in r
/// (radial_order nodes) times the sphere rule. Rows and columns use flat_index.
Eigen::MatrixXcd gram_matrix(int N, double R, const WaveNumber& k, int radial_order = 48);

// ---------------------------------------------------------------------------
// Coefficients

struct CoefficientOptions {
  CoeffMethod method = CoeffMethod::ClosedForm;
  /// Ball radius for the quadrature method; 0 selects 0.95 |y|.
  double R = 0.0;
  /// Gauss-Legendre order of each graded panel.
  int panel_order = 16;
};

/// c_nu^(j)(y) for all nu <= max_degree, at flat_index(nu, j).
/// Domain error for y = 0, invalid_argument for R outside (0, |y|).
std::vector<cplx> expansion_coefficients(int max_degree, const Vec3& y, const WaveNumber& k,
                                         const CoefficientOptions& options = {});

cplx coeff_c(const HarmonicIndex& idx, const Vec3& y, const WaveNumber& k, CoeffMethod method, double R = 0.0);

// ---------------------------------------------------------------------------
// Truncated series and kernels

/// Ratio |x|/|y| beyond which truncations converge too slowly to be useful.
inline constexpr double kPracticalConeRatio = 0.95;

struct SeriesValue {
  cplx value;
  /// Set when |x|/|y| >= kPracticalConeRatio.
  bool slow_convergence = false;
};

/// sum_{nu <= N} sum_j c_nu^(j)(y) b_nu^(j)(x). Requires |x| < |y|.
SeriesValue truncated_e(const Vec3& x, const Vec3& y, const WaveNumber& k, int N);

/// Kernel matrix built from a scalar jet s in place of e: g = grad s,
/// D = Hess s + k^2 s I (see assemble_kernel).
KernelMatrix kernel_from_jet(const ComplexJet& s, const WaveNumber& k);

/// Phi_nu(x, y): kernel_from_jet of the degree-nu slice of the series.
KernelMatrix phi_term(int nu, const Vec3& x, const Vec3& y, const WaveNumber& k);

/// R_N(x, y) = K(x - y) - sum_{nu <= N} Phi_nu(x, y); N = -1 returns K(x - y).
KernelMatrix carleman_R(int N, const Vec3& x, const Vec3& y, const WaveNumber& k);

// ---------------------------------------------------------------------------
// Tables

/// Coefficients c_nu^(j)(y_s) for a fixed list of source points.
class ExpansionTable {
 public:
  ExpansionTable() = default;

  /// R = 0 selects 0.95 min |y_s| (used by the quadrature method only).
  static ExpansionTable build(const WaveNumber& k, int N, std::vector<Vec3> sources,
                              CoeffMethod method = CoeffMethod::ClosedForm, double R = 0.0);

  const WaveNumber& k() const { return k_; }
  int degree() const { return N_; }
  double R() const { return R_; }
  CoeffMethod method() const { return method_; }
  const std::vector<Vec3>& sources() const { return sources_; }
  /// table_size(N) x sources().size(), rows at flat_index(nu, j).
  const Eigen::MatrixXcd& coefficients() const { return coeffs_; }
  cplx coeff(int nu, int j, std::size_t source) const { return coeffs_(flat_index(nu, j), static_cast<Eigen::Index>(source)); }

  /// True when this table was built for the same k, at least degree N, and
  /// the same source points.
  bool covers(const WaveNumber& k, int N, const std::vector<Vec3>& sources) const;

  /// JSON document with k, N, R, method, sources and one record per
  /// (nu, j, source) coefficient.
  void save(std::ostream& os) const;
  static ExpansionTable load(std::istream& is);

 private:
  WaveNumber k_;
  int N_ = -1;
  double R_ = 0.0;
  CoeffMethod method_ = CoeffMethod::ClosedForm;
  std::vector<Vec3> sources_;
  Eigen::MatrixXcd coeffs_;
};

/// R_N over the source points of a table.
class CarlemanKernel {
 public:
  explicit CarlemanKernel(ExpansionTable table) : table_(std::move(table)) {}

  int degree() const { return table_.degree(); }
  const WaveNumber& k() const { return table_.k(); }
  const ExpansionTable& table() const { return table_; }

  /// Phi_nu(x, y_source) given basis_jets(degree(), x, k).
  KernelMatrix phi(int nu, const std::vector<ComplexJet>& basis, std::size_t source) const;
  /// R_N(x, y_source) for N <= degree().
  KernelMatrix R(int N, const Vec3& x, std::size_t source) const;

 private:
  ExpansionTable table_;
};

}  // namespace carleman
