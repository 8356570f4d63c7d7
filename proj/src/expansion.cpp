#include "carleman/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace carleman {

const char* to_string(CoeffMethod m) { return m == CoeffMethod::Quadrature ? "quadrature" : "closed_form"; }

CoeffMethod parse_coeff_method(const std::string& name) {
  if (name == "quadrature") return CoeffMethod::Quadrature;
  if (name == "closed_form") return CoeffMethod::ClosedForm;
  throw std::invalid_argument("unknown coefficient method '" + name + "' (expected quadrature or closed_form)");
}

namespace {

void axpy(ComplexJet& a, cplx s, const ComplexJet& b) {
  a.value += s * b.value;
  for (int i = 0; i < 3; ++i) {
    a.grad[i] += s * b.grad[i];
    for (int j = 0; j < 3; ++j) a.hess[i][j] += s * b.hess[i][j];
  }
}

void check_degree(int N) {
  if (N < 0) throw std::invalid_argument("expansion: degree must be nonnegative");
}

// Orthonormal frame whose third axis is `axis`.
void frame_about(const Vec3& axis, Vec3& e1, Vec3& e2) {
  const Vec3 helper = std::abs(axis.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  e1 = axis.cross(helper).normalized();
  e2 = axis.cross(e1);
}

}  // namespace

// ---------------------------------------------------------------------------
// Basis

std::vector<ComplexJet> basis_jets(int max_degree, const Vec3& x, const WaveNumber& k) {
  check_degree(max_degree);
  const auto P = solid_harmonic_jets(max_degree, x);
  const cplx kv = k.value();
  const auto u = spherical_bessel_j_scaled_all(max_degree + 2, kv * x.norm());
  std::vector<ComplexJet> out(P.size());
  cplx kpow = 1.0;  // k^nu
  for (int nu = 0; nu <= max_degree; ++nu) {
    // F(x) = k^nu u_nu(k|x|) with u_nu(z) = j_nu(z) / z^nu, so that b = F P.
    const cplx g1 = -kpow * kv * kv * u[nu + 1];
    const cplx g2 = kpow * kv * kv * kv * kv * u[nu + 2];
    ComplexJet F;
    F.value = kpow * u[nu];
    for (int a = 0; a < 3; ++a) {
      F.grad[a] = g1 * x[a];
      for (int b = 0; b < 3; ++b) F.hess[a][b] = g2 * x[a] * x[b] + (a == b ? g1 : cplx(0.0));
    }
    for (int j = 1; j <= 2 * nu + 1; ++j) {
      const int f = flat_index(nu, j);
      out[f] = mul(F, P[f]);
    }
    kpow *= kv;
  }
  return out;
}

std::vector<cplx> basis_values(int max_degree, const Vec3& x, const WaveNumber& k) {
  check_degree(max_degree);
  const auto P = solid_harmonics<double>(max_degree, x.x(), x.y(), x.z());
  const cplx kv = k.value();
  const auto u = spherical_bessel_j_scaled_all(max_degree, kv * x.norm());
  std::vector<cplx> out(P.size());
  cplx kpow = 1.0;
  for (int nu = 0; nu <= max_degree; ++nu) {
    for (int j = 1; j <= 2 * nu + 1; ++j) out[flat_index(nu, j)] = kpow * u[nu] * P[flat_index(nu, j)];
    kpow *= kv;
  }
  return out;
}

cplx basis_b(const HarmonicIndex& idx, const Vec3& x, const WaveNumber& k) {
  idx.validate();
  if (idx.n != 3) throw std::invalid_argument("basis_b: only n = 3 is supported");
  return basis_values(idx.nu, x, k)[idx.flat()];
}

double radial_norm_squared(int nu, double R, const WaveNumber& k) {
  if (!(R > 0.0)) throw std::invalid_argument("radial_norm_squared: R must be positive");
  const auto rule = gauss_legendre(64, 0.0, R);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double r = rule.nodes[i];
    s += rule.weights[i] * std::norm(spherical_bessel_j(nu, k.value() * r)) * r * r;
  }
  return s;
}

Eigen::MatrixXcd gram_matrix(int N, double R, const WaveNumber& k, int radial_order) {
  check_degree(N);
  if (!(R > 0.0)) throw std::invalid_argument("gram_matrix: R must be positive");
  const auto radial = gauss_legendre(radial_order, 0.0, R);
  const auto sphere = sphere_rule(N + 2);
  const int n = table_size(N);
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXcd v(n);
  for (std::size_t a = 0; a < radial.nodes.size(); ++a) {
    const double r = radial.nodes[a];
    for (std::size_t q = 0; q < sphere.points.size(); ++q) {
      const auto b = basis_values(N, r * sphere.points[q], k);
      for (int i = 0; i < n; ++i) v(i) = b[i];
      gram.noalias() += (radial.weights[a] * r * r * sphere.weights[q]) * v * v.adjoint();
    }
  }
  return gram;
}

// ---------------------------------------------------------------------------
// Coefficients

namespace {

std::vector<cplx> closed_form_coefficients(int L, const Vec3& y, const WaveNumber& k) {
  const double ry = y.norm();
  const auto h = spherical_hankel_h1_all(L, k.value() * ry);
  const auto Y = spherical_harmonics_all(L, y / ry);
  const cplx ik = I * k.value();
  std::vector<cplx> c(Y.size());
  for (int nu = 0; nu <= L; ++nu)
    for (int j = 1; j <= 2 * nu + 1; ++j) c[flat_index(nu, j)] = -ik * h[nu] * Y[flat_index(nu, j)];
  return c;
}

// Volume quadrature of (e(. - y), b)_{B(0,R)} in spherical coordinates about
// the direction of y, graded toward the point of B(0,R) nearest to y.
std::vector<cplx> quadrature_coefficients(int L, const Vec3& y, const WaveNumber& k, double R, int order) {
  const double ry = y.norm();
  const Vec3 axis = y / ry;
  Vec3 e1, e2;
  frame_about(axis, e1, e2);
  const double gap = ry - R;
  const auto radial = graded_gauss_legendre(0.0, R, R, 0.25 * gap, order);
  const auto polar = graded_gauss_legendre(0.0, kPi, 0.0, 0.25 * gap / ry, order);
  const int nphi = 2 * L + 2;
  const double dphi = 2.0 * kPi / nphi;

  const int n = table_size(L);
  std::vector<cplx> acc(static_cast<std::size_t>(n), cplx(0.0));
  std::vector<double> cos_phi(nphi), sin_phi(nphi);
  for (int c = 0; c < nphi; ++c) {
    cos_phi[c] = std::cos((c + 0.5) * dphi);
    sin_phi[c] = std::sin((c + 0.5) * dphi);
  }
  for (std::size_t a = 0; a < radial.nodes.size(); ++a) {
    const double rho = radial.nodes[a];
    const auto jn = spherical_bessel_j_all(L, k.value() * rho);
    for (std::size_t b = 0; b < polar.nodes.size(); ++b) {
      const double th = polar.nodes[b];
      const double st = std::sin(th), ct = std::cos(th);
      const double w = radial.weights[a] * polar.weights[b] * rho * rho * st * dphi;
      for (int c = 0; c < nphi; ++c) {
        const Vec3 dir = st * cos_phi[c] * e1 + st * sin_phi[c] * e2 + ct * axis;
        const cplx ev = helmholtz_value(rho * dir - y, k);
        const auto Y = spherical_harmonics_all(L, dir.normalized());
        for (int nu = 0; nu <= L; ++nu) {
          const cplx t = w * ev * std::conj(jn[nu]);
          for (int j = 1; j <= 2 * nu + 1; ++j) acc[flat_index(nu, j)] += t * Y[flat_index(nu, j)];
        }
      }
    }
  }
  for (int nu = 0; nu <= L; ++nu) {
    const double norm = radial_norm_squared(nu, R, k);
    for (int j = 1; j <= 2 * nu + 1; ++j) acc[flat_index(nu, j)] /= norm;
  }
  return acc;
}

}  // namespace

std::vector<cplx> expansion_coefficients(int max_degree, const Vec3& y, const WaveNumber& k,
                                         const CoefficientOptions& options) {
  check_degree(max_degree);
  k.require_nonzero("expansion coefficients");
  const double ry = y.norm();
  if (ry == 0.0) throw std::domain_error("expansion coefficients: source point must be nonzero");
  if (options.method == CoeffMethod::ClosedForm) return closed_form_coefficients(max_degree, y, k);
  const double R = options.R > 0.0 ? options.R : 0.95 * ry;
  if (!(R < ry)) throw std::invalid_argument("expansion coefficients: integration radius must be below |y|");
  return quadrature_coefficients(max_degree, y, k, R, options.panel_order);
}

cplx coeff_c(const HarmonicIndex& idx, const Vec3& y, const WaveNumber& k, CoeffMethod method, double R) {
  idx.validate();
  CoefficientOptions opt;
  opt.method = method;
  opt.R = R;
  return expansion_coefficients(idx.nu, y, k, opt)[idx.flat()];
}

// ---------------------------------------------------------------------------
// Truncated series and kernels

SeriesValue truncated_e(const Vec3& x, const Vec3& y, const WaveNumber& k, int N) {
  check_degree(N);
  const double ry = y.norm();
  if (ry == 0.0) throw std::domain_error("truncated_e: source point must be nonzero");
  if (!(x.norm() < ry)) throw std::invalid_argument("truncated_e: requires |x| < |y|");
  const auto c = closed_form_coefficients(N, y, k);
  const auto b = basis_values(N, x, k);
  SeriesValue s{cplx(0.0), x.norm() / ry >= kPracticalConeRatio};
  for (std::size_t i = 0; i < c.size(); ++i) s.value += c[i] * b[i];
  return s;
}

KernelMatrix kernel_from_jet(const ComplexJet& s, const WaveNumber& k) {
  const cplx k2 = k.value() * k.value();
  return assemble_kernel(s.gradient(), s.hessian() + k2 * s.value * CMat3::Identity(), k);
}

namespace {

ComplexJet degree_slice(int nu, const std::vector<ComplexJet>& basis, const cplx* coeffs) {
  ComplexJet s;
  for (int j = 1; j <= 2 * nu + 1; ++j) {
    const int f = flat_index(nu, j);
    axpy(s, coeffs[f], basis[f]);
  }
  return s;
}

}  // namespace

KernelMatrix phi_term(int nu, const Vec3& x, const Vec3& y, const WaveNumber& k) {
  check_degree(nu);
  k.require_nonzero("phi_term");
  if (y.norm() == 0.0) throw std::domain_error("phi_term: source point must be nonzero");
  const auto c = closed_form_coefficients(nu, y, k);
  const auto b = basis_jets(nu, x, k);
  return kernel_from_jet(degree_slice(nu, b, c.data()), k);
}

KernelMatrix carleman_R(int N, const Vec3& x, const Vec3& y, const WaveNumber& k) {
  if (N < -1) throw std::invalid_argument("carleman_R: N must be >= -1");
  if (y.norm() == 0.0) throw std::domain_error("carleman_R: source point must be nonzero");
  KernelMatrix R = kernel_block(x, y, k);
  if (N < 0) return R;
  const auto c = closed_form_coefficients(N, y, k);
  const auto b = basis_jets(N, x, k);
  for (int nu = 0; nu <= N; ++nu) R -= kernel_from_jet(degree_slice(nu, b, c.data()), k);
  return R;
}

// ---------------------------------------------------------------------------
// Tables

ExpansionTable ExpansionTable::build(const WaveNumber& k, int N, std::vector<Vec3> sources, CoeffMethod method,
                                     double R) {
  check_degree(N);
  k.require_nonzero("ExpansionTable");
  double rmin = std::numeric_limits<double>::infinity();
  for (const auto& y : sources) rmin = std::min(rmin, y.norm());
  if (!sources.empty() && rmin == 0.0) throw std::domain_error("ExpansionTable: source point at the origin");
  ExpansionTable t;
  t.k_ = k;
  t.N_ = N;
  t.R_ = R > 0.0 ? R : (sources.empty() ? 0.0 : 0.95 * rmin);
  if (!sources.empty() && !(t.R_ < rmin)) throw std::invalid_argument("ExpansionTable: R must be below min |y|");
  t.method_ = method;
  t.sources_ = std::move(sources);
  t.coeffs_.resize(table_size(N), static_cast<Eigen::Index>(t.sources_.size()));
  CoefficientOptions opt;
  opt.method = method;
  opt.R = t.R_;
  for (std::size_t s = 0; s < t.sources_.size(); ++s) {
    const auto c = expansion_coefficients(N, t.sources_[s], k, opt);
    for (int f = 0; f < table_size(N); ++f) t.coeffs_(f, static_cast<Eigen::Index>(s)) = c[f];
  }
  return t;
}

bool ExpansionTable::covers(const WaveNumber& k, int N, const std::vector<Vec3>& sources) const {
  if (k.value() != k_.value() || N > N_ || sources.size() != sources_.size()) return false;
  for (std::size_t i = 0; i < sources.size(); ++i)
    if (sources[i] != sources_[i]) return false;
  return true;
}

void ExpansionTable::save(std::ostream& os) const {
  nlohmann::json doc;
  doc["format"] = "carleman-expansion-table";
  doc["version"] = 1;
  doc["k"] = {k_.value().real(), k_.value().imag()};
  doc["N"] = N_;
  doc["R"] = R_;
  doc["method"] = to_string(method_);
  auto& src = doc["sources"] = nlohmann::json::array();
  for (const auto& y : sources_) src.push_back({y.x(), y.y(), y.z()});
  auto& rows = doc["coefficients"] = nlohmann::json::array();
  for (std::size_t s = 0; s < sources_.size(); ++s)
    for (int nu = 0; nu <= N_; ++nu)
      for (int j = 1; j <= 2 * nu + 1; ++j) {
        const cplx c = coeff(nu, j, s);
        rows.push_back({{"nu", nu}, {"j", j}, {"source", s}, {"re", c.real()}, {"im", c.imag()}});
      }
  os << doc.dump(1) << '\n';
}

ExpansionTable ExpansionTable::load(std::istream& is) {
  nlohmann::json doc;
  try {
    is >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("expansion table: malformed file: ") + e.what());
  }
  if (doc.value("format", std::string()) != "carleman-expansion-table" || doc.value("version", 0) != 1)
    throw std::runtime_error("expansion table: unrecognised format");
  ExpansionTable t;
  t.k_ = WaveNumber(doc.at("k").at(0).get<double>(), doc.at("k").at(1).get<double>());
  t.N_ = doc.at("N").get<int>();
  t.R_ = doc.at("R").get<double>();
  t.method_ = parse_coeff_method(doc.at("method").get<std::string>());
  for (const auto& y : doc.at("sources")) t.sources_.emplace_back(y.at(0).get<double>(), y.at(1).get<double>(), y.at(2).get<double>());
  t.coeffs_ = Eigen::MatrixXcd::Zero(table_size(t.N_), static_cast<Eigen::Index>(t.sources_.size()));
  std::size_t seen = 0;
  for (const auto& row : doc.at("coefficients")) {
    const HarmonicIndex idx{row.at("nu").get<int>(), row.at("j").get<int>(), 3};
    idx.validate();
    const auto s = row.at("source").get<std::size_t>();
    if (idx.nu > t.N_ || s >= t.sources_.size()) throw std::runtime_error("expansion table: coefficient key out of range");
    t.coeffs_(idx.flat(), static_cast<Eigen::Index>(s)) = cplx(row.at("re").get<double>(), row.at("im").get<double>());
    ++seen;
  }
  if (seen != static_cast<std::size_t>(t.coeffs_.size())) throw std::runtime_error("expansion table: missing coefficients");
  return t;
}

KernelMatrix CarlemanKernel::phi(int nu, const std::vector<ComplexJet>& basis, std::size_t source) const {
  const auto col = table_.coefficients().col(static_cast<Eigen::Index>(source));
  return kernel_from_jet(degree_slice(nu, basis, col.data()), table_.k());
}

KernelMatrix CarlemanKernel::R(int N, const Vec3& x, std::size_t source) const {
  if (N > degree()) throw std::invalid_argument("CarlemanKernel: N exceeds the table degree");
  KernelMatrix r = kernel_block(x, table_.sources()[source], table_.k());
  if (N < 0) return r;
  const auto basis = basis_jets(N, x, table_.k());
  for (int nu = 0; nu <= N; ++nu) r -= phi(nu, basis, source);
  return r;
}

}  // namespace carleman
