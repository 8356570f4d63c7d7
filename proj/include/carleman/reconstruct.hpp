#pragma once

// Regularized solution of the Cauchy problem for the Maxwell system: given
// t(E) and n(H) on a part S of the boundary of a cap domain X, the field at
// x in X is the limit as N grows of
//   est_N(x) = sum_i w_i R_N(x, y_i) density_i,   y_i in S,
// with the Carleman kernel R_N = K - sum_{nu <= N} Phi_nu. Equivalently
//   est_N(x) = G(x) - U_N(x),   U_N(x) = sum_{nu <= N} int_S Phi_nu(x, .) density,
// where G is the Cauchy-type integral over S. Uniform convergence of U_N on
// compact subsets of B(0, R) is sufficient for solvability of the problem;
// solvability_indicator tests it on a finite grid.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "carleman/expansion.hpp"

namespace carleman {

struct ReconstructionOptions {
  /// converged_N is the first N ending three consecutive relative
  /// increments below this tolerance.
  double increment_tol = 1e-6;
  /// Coefficient table for the nodes of mesh_S; built in closed form when null.
  const ExpansionTable* table = nullptr;
};

struct ReconstructionResult {
  std::vector<Vec3> targets;
  int N_max = -1;
  /// estimates[t][N] for target t and degree N = 0..N_max.
  std::vector<std::vector<FieldSample>> estimates;
  /// increments[t][N] = |est_N - est_{N-1}| with est_{-1} = 0.
  std::vector<std::vector<double>> increments;
  /// max over targets of increments[t][N] divided by max over targets of
  /// |est_N|; 0 when both vanish.
  std::vector<double> relative_increments;
  std::optional<int> converged_N;
  double increment_tol = 1e-6;

  bool empty() const { return targets.empty(); }
  const FieldSample& estimate(std::size_t target, int N) const { return estimates.at(target).at(static_cast<std::size_t>(N)); }
};

/// est_N at every target for N = 0..N_max.
/// invalid_argument: N_max < 0, a target outside X or within three mesh
/// spacings of S, data of the wrong size or non-finite, or a table that does
/// not cover (k, N_max, mesh_S nodes). domain_error: k = 0.
ReconstructionResult carleman_reconstruct(const CapDomain& domain, const SurfaceMesh& mesh_S, const TraceData& data,
                                          const std::vector<Vec3>& targets, const WaveNumber& k, int N_max,
                                          const ReconstructionOptions& options = {});

/// U_N(x) for N = 0..N_max assembled from the moments
///   m_nu^(j) = sum_i w_i c_nu^(j)(y_i) density_i
/// as U_N(x) = sum_{nu <= N} sum_j kernel_from_jet(b_nu^(j))(x) m_nu^(j).
/// Defined for every x; no restriction to X. Result is [point][N].
std::vector<std::vector<CVec6>> regularized_partial_sums(const SurfaceMesh& mesh_S, const TraceData& data,
                                                         const std::vector<Vec3>& points, const WaveNumber& k,
                                                         int N_max, const ExpansionTable* table = nullptr);

// ---------------------------------------------------------------------------
// Solvability indicator

enum class Verdict { Converging, Diverging, Inconclusive };
const char* to_string(Verdict v);

struct IndicatorGridSpec {
  /// Radii as fractions: r = eps * inner_fraction inside the inner ball and
  /// r = eps + outer_fraction (R - eps) between S and the outer sphere.
  double inner_fraction = 0.5;
  double outer_fraction = 0.4;
  int directions = 12;
  /// Ratio-test window and thresholds.
  int window = 5;
  double converge_ratio = 0.9;
  double diverge_ratio = 1.1;
  /// Increments below floor_rel times the largest |U_N| on the grid count as
  /// zero; this keeps roundoff from masquerading as stagnation.
  double floor_rel = 1e-9;
};

struct SolvabilityReport {
  std::vector<Vec3> test_grid;
  /// sup over the grid of |U_N - U_{N-1}| for N = 0..N_max, U_{-1} = 0.
  std::vector<double> sup_increments;
  /// Geometric-mean ratio of consecutive sup increments over the window.
  double observed_ratio = 0.0;
  double floor = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  IndicatorGridSpec spec;
};

/// Points at the given fractions on a Fibonacci sphere; points within three
/// mesh spacings of S are dropped.
std::vector<Vec3> indicator_grid(const CapDomain& domain, const SurfaceMesh& mesh_S, const IndicatorGridSpec& spec);

/// invalid_argument for an empty grid or N_max < window.
SolvabilityReport solvability_indicator(const CapDomain& domain, const SurfaceMesh& mesh_S, const TraceData& data,
                                        const WaveNumber& k, int N_max, const IndicatorGridSpec& spec = {},
                                        const ExpansionTable* table = nullptr);

// ---------------------------------------------------------------------------
// Tables

struct ConvergenceRow {
  std::size_t target = 0;
  Vec3 x = Vec3::Zero();
  int N = 0;
  FieldSample field;
  double increment = 0.0;
  /// Relative error (|dE| + |dH|) / (|E| + |H|) against the reference.
  std::optional<double> error;
};

struct ConvergenceTable {
  bool has_reference = false;
  /// Ordered by target, then N.
  std::vector<ConvergenceRow> rows;
};

ConvergenceTable convergence_table(const ReconstructionResult& result, const FieldEvaluator* reference = nullptr);

/// Header row then one line per row: target,x,y,z,N, Re/Im of E and H,
/// increment and, with a reference, error.
void write_convergence_csv(std::ostream& os, const ConvergenceTable& table);

}  // namespace carleman
