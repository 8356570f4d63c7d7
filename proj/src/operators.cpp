#include "carleman/operators.hpp"

#include <stdexcept>

namespace carleman {

void MaterialParams::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("material: epsilon must be positive");
  if (!(mu > 0.0)) throw std::invalid_argument("material: mu must be positive");
  if (!(sigma >= 0.0)) throw std::invalid_argument("material: sigma must be nonnegative");
  if (omega == 0.0) throw std::domain_error("material: omega must be nonzero");
  if (!(omega > 0.0)) throw std::invalid_argument("material: omega must be positive");
}

WaveNumber wavenumber_from_material(const MaterialParams& m) {
  m.validate();
  const cplx k2 = cplx(m.epsilon, m.sigma / m.omega) * m.mu * m.omega * m.omega;
  cplx k = std::sqrt(k2);
  if (k.imag() < 0.0) k = -k;
  if (m.sigma == 0.0) k = cplx(k.real(), 0.0);
  return WaveNumber(k);
}

int bundle_rank(int i) {
  switch (i) {
    case 0:
    case 3:
      return 1;
    case 1:
    case 2:
      return 3;
    default:
      return 0;
  }
}

Eigen::MatrixXcd a_symbol(int i, const Vec3& xi) {
  const CVec3 ixi = I * xi.cast<cplx>();
  Eigen::MatrixXcd s(bundle_rank(i + 1), bundle_rank(i));
  switch (i) {
    case 0:  // grad
      s = ixi;
      break;
    case 1:  // curl
      s = cross_matrix(ixi);
      break;
    case 2:  // div
      s = ixi.transpose();
      break;
    default:
      break;
  }
  return s;
}

Eigen::MatrixXcd a_adjoint_symbol(int i, const Vec3& xi) { return a_symbol(i, xi).adjoint(); }

Eigen::MatrixXcd laplacian_symbol(int i, const Vec3& xi) {
  const int r = bundle_rank(i);
  Eigen::MatrixXcd lap = Eigen::MatrixXcd::Zero(r, r);
  if (r == 0) return lap;
  lap += a_adjoint_symbol(i, xi) * a_symbol(i, xi);
  if (bundle_rank(i - 1) > 0) lap += a_symbol(i - 1, xi) * a_adjoint_symbol(i - 1, xi);
  return lap;
}

namespace {

void check_step(int step) {
  if (step < 0 || step > 2) throw std::invalid_argument("symbol: step must be 0, 1 or 2");
}

SymbolMatrix assemble(int step, const Vec3& xi, const WaveNumber& k, const Eigen::MatrixXcd& upper_left,
                      const Eigen::MatrixXcd& lower_right) {
  const int r0 = bundle_rank(step), r1 = bundle_rank(step + 1);
  SymbolMatrix s;
  s.step = step;
  s.xi = xi;
  s.k = k;
  s.entries = Eigen::MatrixXcd::Zero(r0 + r1, r0 + r1);
  s.entries.topLeftCorner(r0, r0) = upper_left;
  s.entries.topRightCorner(r0, r1) = a_adjoint_symbol(step, xi);
  s.entries.bottomLeftCorner(r1, r0) = a_symbol(step, xi);
  s.entries.bottomRightCorner(r1, r1) = lower_right;
  return s;
}

}  // namespace

SymbolMatrix maxwell_symbol(int step, const Vec3& xi, const WaveNumber& k) {
  check_step(step);
  k.require_nonzero("maxwell_symbol");
  const cplx ik = I * k.value();
  const int r0 = bundle_rank(step), r1 = bundle_rank(step + 1);
  return assemble(step, xi, k, ik * Eigen::MatrixXcd::Identity(r0, r0), -ik * Eigen::MatrixXcd::Identity(r1, r1));
}

SymbolMatrix parametrix_symbol(int step, const Vec3& xi, const WaveNumber& k) {
  check_step(step);
  k.require_nonzero("parametrix_symbol");
  const cplx ik = I * k.value();
  const int r0 = bundle_rank(step), r1 = bundle_rank(step + 1);

  Eigen::MatrixXcd ul = ik * Eigen::MatrixXcd::Identity(r0, r0);
  if (bundle_rank(step - 1) > 0) ul += (a_symbol(step - 1, xi) * a_adjoint_symbol(step - 1, xi)) / ik;
  Eigen::MatrixXcd lr = -ik * Eigen::MatrixXcd::Identity(r1, r1);
  if (bundle_rank(step + 2) > 0) lr -= (a_adjoint_symbol(step + 1, xi) * a_symbol(step + 1, xi)) / ik;
  return assemble(step, xi, k, ul, lr);
}

SymbolMatrix parametrix_symbol_laplacian_form(int step, const Vec3& xi, const WaveNumber& k) {
  check_step(step);
  k.require_nonzero("parametrix_symbol");
  const cplx ik = I * k.value();
  const cplx k2 = k.value() * k.value();
  const int r0 = bundle_rank(step), r1 = bundle_rank(step + 1);
  const Eigen::MatrixXcd a = a_symbol(step, xi);
  const Eigen::MatrixXcd as = a_adjoint_symbol(step, xi);

  const Eigen::MatrixXcd ul =
      (laplacian_symbol(step, xi) - k2 * Eigen::MatrixXcd::Identity(r0, r0) - as * a) / ik;
  const Eigen::MatrixXcd lr =
      -(laplacian_symbol(step + 1, xi) - k2 * Eigen::MatrixXcd::Identity(r1, r1) - a * as) / ik;
  return assemble(step, xi, k, ul, lr);
}

double factorization_residual(int step, const Vec3& xi, const WaveNumber& k) {
  const auto m = maxwell_symbol(step, xi, k).entries;
  const auto c = parametrix_symbol(step, xi, k).entries;
  const cplx diag = xi.squaredNorm() - k.value() * k.value();
  const Eigen::MatrixXcd target = diag * Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  const double left = (c * m - target).cwiseAbs().maxCoeff();
  const double right = (m * c - target).cwiseAbs().maxCoeff();
  return std::max(left, right);
}

double complex_property_residual(int i, const Vec3& xi) {
  if (bundle_rank(i) == 0 || bundle_rank(i + 2) == 0) return 0.0;
  return (a_symbol(i + 1, xi) * a_symbol(i, xi)).cwiseAbs().maxCoeff();
}

}  // namespace carleman
