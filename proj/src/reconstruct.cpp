#include "carleman/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace carleman {

namespace {

void check_inputs(const SurfaceMesh& mesh_S, const TraceData& data, const WaveNumber& k, int N_max) {
  k.require_nonzero("reconstruction");
  if (N_max < 0) throw std::invalid_argument("reconstruction: N_max must be nonnegative");
  if (data.size() != mesh_S.size()) throw std::invalid_argument("reconstruction: trace data do not match the mesh of S");
  if (mesh_S.empty()) throw std::invalid_argument("reconstruction: the mesh of S is empty");
  for (std::size_t i = 0; i < data.size(); ++i)
    if (!data.t_E[i].allFinite() || !data.n_H[i].allFinite())
      throw std::invalid_argument("reconstruction: trace data contain non-finite values");
}

// The caller's table when it covers the nodes of S, otherwise a fresh
// closed-form table.
ExpansionTable resolve_table(const SurfaceMesh& mesh_S, const WaveNumber& k, int N_max, const ExpansionTable* table) {
  if (table == nullptr) return ExpansionTable::build(k, N_max, mesh_S.nodes);
  if (!table->covers(k, N_max, mesh_S.nodes))
    throw std::invalid_argument("reconstruction: expansion table does not cover k, N_max and the nodes of S");
  return *table;
}

}  // namespace

ReconstructionResult carleman_reconstruct(const CapDomain& domain, const SurfaceMesh& mesh_S, const TraceData& data,
                                          const std::vector<Vec3>& targets, const WaveNumber& k, int N_max,
                                          const ReconstructionOptions& options) {
  check_inputs(mesh_S, data, k, N_max);
  for (const auto& x : targets) {
    if (!domain.contains(x))
      throw std::invalid_argument(fmt::format("reconstruction: target ({}, {}, {}) lies outside the domain", x.x(), x.y(), x.z()));
    if (mesh_S.is_near(x))
      throw std::invalid_argument(fmt::format("reconstruction: target ({}, {}, {}) is too close to S", x.x(), x.y(), x.z()));
  }
  const CarlemanKernel kernel(resolve_table(mesh_S, k, N_max, options.table));
  const auto density = boundary_density(mesh_S, data);

  ReconstructionResult res;
  res.targets = targets;
  res.N_max = N_max;
  res.increment_tol = options.increment_tol;
  const auto nN = static_cast<std::size_t>(N_max + 1);
  for (const auto& x : targets) {
    const auto basis = basis_jets(N_max, x, k);
    std::vector<CVec6> est(nN, CVec6::Zero());
    for (std::size_t s = 0; s < mesh_S.size(); ++s) {
      const CVec6 d = mesh_S.weights[s] * density[s];
      KernelMatrix R = kernel_block(x, mesh_S.nodes[s], k);
      for (int nu = 0; nu <= N_max; ++nu) {
        R -= kernel.phi(nu, basis, s);
        est[static_cast<std::size_t>(nu)].noalias() += R * d;
      }
    }
    std::vector<FieldSample> fields;
    std::vector<double> inc;
    for (std::size_t n = 0; n < nN; ++n) {
      fields.push_back(FieldSample::from_stacked(est[n], x));
      inc.push_back(n == 0 ? est[0].norm() : (est[n] - est[n - 1]).norm());
    }
    res.estimates.push_back(std::move(fields));
    res.increments.push_back(std::move(inc));
  }

  if (targets.empty()) return res;
  int run = 0;
  for (std::size_t n = 0; n < nN; ++n) {
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      num = std::max(num, res.increments[t][n]);
      den = std::max(den, res.estimates[t][n].stacked().norm());
    }
    const double rel = den > 0.0 ? num / den : 0.0;
    res.relative_increments.push_back(rel);
    run = (n > 0 && rel < options.increment_tol) ? run + 1 : 0;
    if (run == 3 && !res.converged_N) res.converged_N = static_cast<int>(n);
  }
  return res;
}

std::vector<std::vector<CVec6>> regularized_partial_sums(const SurfaceMesh& mesh_S, const TraceData& data,
                                                         const std::vector<Vec3>& points, const WaveNumber& k,
                                                         int N_max, const ExpansionTable* table) {
  check_inputs(mesh_S, data, k, N_max);
  const auto tab = resolve_table(mesh_S, k, N_max, table);
  const auto density = boundary_density(mesh_S, data);
  const int nf = table_size(N_max);

  // moments(f, :) = sum_s c_f(y_s) w_s density_s
  Eigen::MatrixXcd D(static_cast<Eigen::Index>(mesh_S.size()), 6);
  for (std::size_t s = 0; s < mesh_S.size(); ++s) D.row(static_cast<Eigen::Index>(s)) = mesh_S.weights[s] * density[s].transpose();
  const Eigen::MatrixXcd moments = tab.coefficients().topRows(nf) * D;

  std::vector<std::vector<CVec6>> out;
  out.reserve(points.size());
  for (const auto& x : points) {
    const auto basis = basis_jets(N_max, x, k);
    std::vector<CVec6> U;
    CVec6 acc = CVec6::Zero();
    for (int nu = 0; nu <= N_max; ++nu) {
      for (int j = 1; j <= 2 * nu + 1; ++j) {
        const int f = flat_index(nu, j);
        acc.noalias() += kernel_from_jet(basis[f], k) * moments.row(f).transpose();
      }
      U.push_back(acc);
    }
    out.push_back(std::move(U));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Solvability indicator

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Converging:
      return "converging";
    case Verdict::Diverging:
      return "diverging";
    default:
      return "inconclusive";
  }
}

std::vector<Vec3> indicator_grid(const CapDomain& domain, const SurfaceMesh& mesh_S, const IndicatorGridSpec& spec) {
  std::vector<Vec3> grid;
  if (spec.directions <= 0) return grid;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  const double radii[2] = {domain.eps * spec.inner_fraction, domain.eps + spec.outer_fraction * (domain.R - domain.eps)};
  for (const double r : radii) {
    if (!(r > 0.0 && r < domain.R)) continue;
    for (int i = 0; i < spec.directions; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / spec.directions;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const Vec3 x = r * Vec3(rho * std::cos(golden * i), rho * std::sin(golden * i), z);
      if (!mesh_S.is_near(x)) grid.push_back(x);
    }
  }
  return grid;
}

SolvabilityReport solvability_indicator(const CapDomain& domain, const SurfaceMesh& mesh_S, const TraceData& data,
                                        const WaveNumber& k, int N_max, const IndicatorGridSpec& spec,
                                        const ExpansionTable* table) {
  if (spec.window < 1 || N_max < spec.window)
    throw std::invalid_argument("solvability indicator: N_max must be at least the ratio-test window");
  SolvabilityReport rep;
  rep.spec = spec;
  rep.test_grid = indicator_grid(domain, mesh_S, spec);
  if (rep.test_grid.empty()) throw std::invalid_argument("solvability indicator: empty test grid");
  const auto U = regularized_partial_sums(mesh_S, data, rep.test_grid, k, N_max, table);

  double scale = 0.0;
  rep.sup_increments.assign(static_cast<std::size_t>(N_max + 1), 0.0);
  for (const auto& u : U)
    for (std::size_t n = 0; n < u.size(); ++n) {
      scale = std::max(scale, u[n].norm());
      const double inc = n == 0 ? u[0].norm() : (u[n] - u[n - 1]).norm();
      rep.sup_increments[n] = std::max(rep.sup_increments[n], inc);
    }
  rep.floor = spec.floor_rel * scale;
  if (scale == 0.0) {
    rep.verdict = Verdict::Converging;
    return rep;
  }
  const auto last = static_cast<std::size_t>(N_max);
  const double a = std::max(rep.sup_increments[last - static_cast<std::size_t>(spec.window)], rep.floor);
  const double b = std::max(rep.sup_increments[last], rep.floor);
  rep.observed_ratio = std::pow(b / a, 1.0 / spec.window);
  if (b <= rep.floor || rep.observed_ratio < spec.converge_ratio)
    rep.verdict = Verdict::Converging;
  else if (rep.observed_ratio > spec.diverge_ratio)
    rep.verdict = Verdict::Diverging;
  else
    rep.verdict = Verdict::Inconclusive;
  return rep;
}

// ---------------------------------------------------------------------------
// Tables

ConvergenceTable convergence_table(const ReconstructionResult& result, const FieldEvaluator* reference) {
  ConvergenceTable table;
  table.has_reference = reference != nullptr && static_cast<bool>(*reference);
  for (std::size_t t = 0; t < result.targets.size(); ++t) {
    std::optional<FieldSample> ref;
    if (table.has_reference) ref = (*reference)(result.targets[t]);
    for (int N = 0; N <= result.N_max; ++N) {
      ConvergenceRow row;
      row.target = t;
      row.x = result.targets[t];
      row.N = N;
      row.field = result.estimate(t, N);
      row.increment = result.increments[t][static_cast<std::size_t>(N)];
      if (ref)
        row.error = ((row.field.E - ref->E).norm() + (row.field.H - ref->H).norm()) / (ref->E.norm() + ref->H.norm());
      table.rows.push_back(row);
    }
  }
  return table;
}

void write_convergence_csv(std::ostream& os, const ConvergenceTable& table) {
  os << "target,x,y,z,N";
  for (const char* f : {"E", "H"})
    for (const char* c : {"x", "y", "z"}) os << ",re_" << f << c << ",im_" << f << c;
  os << ",increment" << (table.has_reference ? ",error" : "") << '\n';
  for (const auto& r : table.rows) {
    fmt::print(os, "{},{:.17g},{:.17g},{:.17g},{}", r.target, r.x.x(), r.x.y(), r.x.z(), r.N);
    const CVec6 v = r.field.stacked();
    for (int i = 0; i < 6; ++i) fmt::print(os, ",{:.17g},{:.17g}", v(i).real(), v(i).imag());
    fmt::print(os, ",{:.17g}", r.increment);
    if (table.has_reference) fmt::print(os, ",{:.17g}", r.error.value_or(std::nan("")));
    os << '\n';
  }
}

}  // namespace carleman
