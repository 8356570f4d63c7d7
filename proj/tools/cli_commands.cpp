#include "cli_commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#ifndef CARLEMAN_VERSION
#define CARLEMAN_VERSION "0.0.0"
#endif

namespace carleman::cli {

const char* tool_version() { return CARLEMAN_VERSION; }

namespace {

void write_metadata(std::ostream& os, const std::string& command, const ExperimentConfig& cfg) {
  fmt::print(os, "# tool: carleman {}\n", tool_version());
  fmt::print(os, "# command: {}\n", command);
  fmt::print(os, "# config_hash: fnv1a64:{:016x}\n", cfg.hash());
  for (const auto& [key, value] : cfg.resolved) fmt::print(os, "# config: {} = {}\n", key, value);
}

std::string fmt_field_columns(const FieldSample& f) {
  std::string s;
  const CVec6 v = f.stacked();
  for (int i = 0; i < 6; ++i) s += fmt::format(",{:.17g},{:.17g}", v(i).real(), v(i).imag());
  return s;
}

std::string field_header() {
  std::string s;
  for (const char* f : {"E", "H"})
    for (const char* c : {"x", "y", "z"}) s += fmt::format(",re_{0}{1},im_{0}{1}", f, c);
  return s;
}

SurfaceMesh full_mesh(const ExperimentConfig& cfg) {
  return cfg.domain_kind == DomainKind::Sphere ? mesh_sphere(cfg.R, cfg.resolution) : mesh_boundary(cfg.cap_domain(), cfg.resolution);
}

bool inside_domain(const ExperimentConfig& cfg, const Vec3& x) {
  return cfg.domain_kind == DomainKind::Sphere ? x.norm() < cfg.R : cfg.cap_domain().contains(x);
}

std::vector<Vec3> fibonacci(double r, int n) {
  std::vector<Vec3> out;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    out.push_back(r * Vec3(rho * std::cos(golden * i), rho * std::sin(golden * i), z));
  }
  return out;
}

double relative_field_error(const FieldSample& f, const FieldSample& ref) {
  const double diff = (f.E - ref.E).norm() + (f.H - ref.H).norm();
  const double scale = ref.E.norm() + ref.H.norm();
  return scale > 0.0 ? diff / scale : diff;
}

void maybe_write_mesh(const ExperimentConfig& cfg, const SurfaceMesh& mesh) {
  if (cfg.mesh_out.empty()) return;
  std::ofstream f(cfg.mesh_out);
  if (!f) throw ConfigError("output.mesh", "cannot open '" + cfg.mesh_out + "' for writing");
  write_mesh_csv(f, mesh);
}

ExpansionTable coefficient_table(const ExperimentConfig& cfg, const SurfaceMesh& mesh_S, std::ostream* notes) {
  if (!cfg.cache_path.empty()) {
    std::ifstream f(cfg.cache_path);
    if (f) {
      ExpansionTable t;
      try {
        t = ExpansionTable::load(f);
      } catch (const std::exception& e) {
        throw ConfigError("expansion.cache", e.what());
      }
      if (t.covers(cfg.k, cfg.n_max, mesh_S.nodes)) {
        if (notes) fmt::print(*notes, "# expansion: loaded {} ({})\n", cfg.cache_path, to_string(t.method()));
        return t;
      }
      if (notes) fmt::print(*notes, "# expansion: cache {} does not cover this run; rebuilt\n", cfg.cache_path);
    }
  }
  return ExpansionTable::build(cfg.k, cfg.n_max, mesh_S.nodes, cfg.method);
}

struct Check {
  std::string name;
  double value;
  double threshold;
  bool pass() const { return value <= threshold; }
};

}  // namespace

// ---------------------------------------------------------------------------

int cmd_verify(const ExperimentConfig& cfg, std::ostream& out) {
  const WaveNumber& k = cfg.k;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  auto unit = [&] { return Vec3(normal(rng), normal(rng), normal(rng)).normalized(); };
  std::vector<Check> checks;

  double fact = 0.0, cplx_prop = 0.0;
  for (int step = 0; step <= 2; ++step)
    for (int t = 0; t < 100; ++t) {
      const Vec3 xi = 10.0 * uniform(rng) * unit();
      fact = std::max(fact, factorization_residual(step, xi, k));
      cplx_prop = std::max(cplx_prop, complex_property_residual(step % 2, xi));
    }
  checks.push_back({"factorization_residual", fact, 1e-12});
  checks.push_back({"complex_property_residual", cplx_prop, 1e-12});

  // j_n h_{n-1} - j_{n-1} h_n = i / z^2.
  double cross = 0.0;
  for (const double r : {0.5, 1.0, 2.0, 5.0}) {
    const cplx z = k.value() * r;
    const auto j = spherical_bessel_j_all(10, z);
    const auto h = spherical_hankel_h1_all(10, z);
    for (int n = 1; n <= 10; ++n) cross = std::max(cross, std::abs(z * z * (j[n] * h[n - 1] - j[n - 1] * h[n]) - I));
  }
  checks.push_back({"bessel_cross_product", cross, 1e-10});

  const auto G = gram_matrix(6, 1.0, k);
  double ortho = 0.0;
  for (int a = 0; a < G.rows(); ++a)
    for (int b = 0; b < G.cols(); ++b)
      if (a != b) ortho = std::max(ortho, std::abs(G(a, b)) / std::sqrt(std::abs(G(a, a) * G(b, b))));
  checks.push_back({"gram_orthogonality", ortho, 1e-8});

  const Vec3 y = 1.5 * unit();
  CoefficientOptions quad;
  quad.method = CoeffMethod::Quadrature;
  const auto cq = expansion_coefficients(6, y, k, quad);
  const auto cc = expansion_coefficients(6, y, k);
  quad.R = 0.8;
  const auto cq8 = expansion_coefficients(6, y, k, quad);
  double agree = 0.0, rind = 0.0;
  for (int nu = 0; nu <= 6; ++nu) {
    double num = 0.0, num8 = 0.0, den = 0.0;
    for (int j = 1; j <= 2 * nu + 1; ++j) {
      const int f = flat_index(nu, j);
      num += std::norm(cq[f] - cc[f]);
      num8 += std::norm(cq8[f] - cq[f]);
      den += std::norm(cc[f]);
    }
    agree = std::max(agree, std::sqrt(num / den));
    rind = std::max(rind, std::sqrt(num8 / den));
  }
  checks.push_back({"coefficient_agreement", agree, 1e-6});
  checks.push_back({"coefficient_radius_independence", rind, 1e-6});

  const Vec3 xs = 0.3 * unit();
  const cplx e = helmholtz_value(xs - y, k);
  checks.push_back({"series_truncation_N12", std::abs(truncated_e(xs, y, k, 12).value - e) / std::abs(e), 1e-8});

  double maxwell = 0.0;
  const cplx ik = I * k.value();
  for (int t = 0; t < 5; ++t) {
    const Vec3 x = (0.2 + 0.6 * uniform(rng)) * unit();
    const Vec3 yy = (1.0 + uniform(rng)) * unit();
    CVec6 dens;
    for (int i = 0; i < 6; ++i) dens(i) = cplx(normal(rng), normal(rng));
    for (int nu = 0; nu <= 4; ++nu) {
      auto part = [&](const Vec3& p, int block) -> CVec3 {
        const CVec6 v = phi_term(nu, p, yy, k) * dens;
        return block == 0 ? CVec3(v.head<3>()) : CVec3(v.tail<3>());
      };
      const double h = 1e-3;
      CVec3 dE[3], dH[3];
      for (int a = 0; a < 3; ++a) {
        Vec3 p1 = x, p2 = x, p3 = x, p4 = x;
        p1[a] += h;
        p2[a] -= h;
        p3[a] += 2 * h;
        p4[a] -= 2 * h;
        dE[a] = (8.0 * (part(p1, 0) - part(p2, 0)) - (part(p3, 0) - part(p4, 0))) / (12.0 * h);
        dH[a] = (8.0 * (part(p1, 1) - part(p2, 1)) - (part(p3, 1) - part(p4, 1))) / (12.0 * h);
      }
      const CVec3 curlE(dE[1](2) - dE[2](1), dE[2](0) - dE[0](2), dE[0](1) - dE[1](0));
      const CVec3 curlH(dH[1](2) - dH[2](1), dH[2](0) - dH[0](2), dH[0](1) - dH[1](0));
      const CVec6 f = phi_term(nu, x, yy, k) * dens;
      const double res = ((ik * f.head<3>() + curlH).norm() + (-ik * f.tail<3>() + curlE).norm()) / (std::abs(k.value()) * f.norm());
      maxwell = std::max(maxwell, res);
    }
  }
  checks.push_back({"phi_maxwell_residual", maxwell, 1e-5});

  const auto mesh = full_mesh(cfg);
  maybe_write_mesh(cfg, mesh);
  const SyntheticSolution probe =
      cfg.source.kind == SyntheticSolution::Kind::Zero
          ? SyntheticSolution::plane_wave(k, Vec3(1, 2, -2) / 3.0, (Vec3(1, 2, -2) / 3.0).cross(Vec3::UnitX()).normalized().cast<cplx>())
          : cfg.source;
  checks.push_back({"trace_relations", derived_trace_check([&](const Vec3& x) { return eval_with_curls(probe, x); }, mesh, k), 1e-10});

  const auto traces = make_cauchy_data(probe, mesh, 0.0, cfg.seed);
  double repro = 0.0;
  for (const auto& x : cfg.target_points) {
    if (!inside_domain(cfg, x)) throw ConfigError("targets.points", "verify needs interior targets");
    repro = std::max(repro, relative_field_error(stratton_chu_eval(mesh, traces, x, k), eval_solution(probe, x)));
  }
  checks.push_back({"stratton_chu_quadrature", repro, cfg.check_tol});

  write_metadata(out, "verify", cfg);
  bool ok = true;
  for (const auto& c : checks) ok = ok && c.pass();
  fmt::print(out, "# result: {}\n", ok ? "pass" : "fail");
  out << "check,value,threshold,status\n";
  for (const auto& c : checks) fmt::print(out, "{},{:.6e},{:.1e},{}\n", c.name, c.value, c.threshold, c.pass() ? "pass" : "FAIL");
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_stratton_chu(const ExperimentConfig& cfg, std::ostream& out) {
  const auto mesh = full_mesh(cfg);
  maybe_write_mesh(cfg, mesh);
  const auto traces = make_cauchy_data(cfg.source, mesh, cfg.noise, cfg.seed);
  double scale = 0.0;
  for (std::size_t i = 0; i < traces.size(); ++i) scale += traces.t_E[i].squaredNorm() + traces.n_H[i].squaredNorm();
  scale = std::sqrt(scale / static_cast<double>(std::max<std::size_t>(traces.size(), 1)));

  struct Row {
    const char* region;
    FieldSample f;
    double value;
  };
  std::vector<Row> rows;
  double worst_in = 0.0, worst_out = 0.0;
  for (const auto& x : cfg.target_points) {
    if (!inside_domain(cfg, x))
      throw ConfigError("targets.points", fmt::format("target ({}, {}, {}) is not inside the domain", x.x(), x.y(), x.z()));
    const auto f = stratton_chu_eval(mesh, traces, x, cfg.k);
    const double err = relative_field_error(f, eval_solution(cfg.source, x));
    worst_in = std::max(worst_in, err);
    rows.push_back({"interior", f, err});
  }
  std::vector<Vec3> exterior = fibonacci(cfg.exterior_radius, cfg.target_count);
  if (cfg.domain_kind != DomainKind::Sphere)
    for (const auto& x : fibonacci(0.5 * cfg.cap_radius, cfg.target_count)) exterior.push_back(x);
  for (const auto& x : exterior) {
    const auto f = stratton_chu_eval(mesh, traces, x, cfg.k);
    const double mag = f.E.norm() + f.H.norm();
    const double ratio = scale > 0.0 ? mag / scale : mag;
    worst_out = std::max(worst_out, ratio);
    rows.push_back({"exterior", f, ratio});
  }
  const bool checked = cfg.noise == 0.0;
  const bool ok = !checked || (worst_in <= cfg.check_tol && worst_out <= cfg.check_tol);

  write_metadata(out, "stratton-chu", cfg);
  fmt::print(out, "# boundary_nodes: {}\n", mesh.size());
  fmt::print(out, "# boundary_scale: {:.17g}\n", scale);
  fmt::print(out, "# max_interior_error: {:.17g}\n", worst_in);
  fmt::print(out, "# max_exterior_ratio: {:.17g}\n", worst_out);
  fmt::print(out, "# result: {}\n", !checked ? "not checked (noisy data)" : (ok ? "pass" : "fail"));
  out << "region,x,y,z" << field_header() << ",value,near_surface\n";
  for (const auto& r : rows)
    fmt::print(out, "{},{:.17g},{:.17g},{:.17g}{},{:.17g},{}\n", r.region, r.f.at.x(), r.f.at.y(), r.f.at.z(), fmt_field_columns(r.f),
               r.value, r.f.near_surface ? 1 : 0);
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_reconstruct(const ExperimentConfig& cfg, std::ostream& out) {
  if (cfg.domain_kind == DomainKind::Sphere) throw ConfigError("domain.kind", "reconstruct needs an annulus or cap domain");
  const auto domain = cfg.cap_domain();
  const auto mesh = mesh_boundary(domain, cfg.resolution);
  maybe_write_mesh(cfg, mesh);
  const auto traces = make_cauchy_data(cfg.source, mesh, cfg.noise, cfg.seed);
  const auto mesh_S = mesh.restricted(PatchTag::S);
  const auto data_S = restrict_traces(traces, mesh, PatchTag::S);
  // Generated targets that land near S are dropped; explicit ones are errors.
  const bool explicit_targets = !cfg.resolved.at("targets.points").empty();
  std::vector<Vec3> targets;
  for (const auto& x : cfg.target_points) {
    if (!domain.contains(x))
      throw ConfigError("targets.points", fmt::format("target ({}, {}, {}) is not inside the domain", x.x(), x.y(), x.z()));
    if (!mesh_S.is_near(x))
      targets.push_back(x);
    else if (explicit_targets)
      throw ConfigError("targets.points", fmt::format("target ({}, {}, {}) is within three mesh spacings of S", x.x(), x.y(), x.z()));
  }
  if (targets.empty()) throw ConfigError("targets.radius", "no generated target lies away from S");

  std::ostringstream notes;
  const auto table = coefficient_table(cfg, mesh_S, &notes);
  ReconstructionOptions opt;
  opt.increment_tol = cfg.increment_tol;
  opt.table = &table;
  const auto result = carleman_reconstruct(domain, mesh_S, data_S, targets, cfg.k, cfg.n_max, opt);
  const bool has_ref = cfg.source.kind != SyntheticSolution::Kind::Zero;
  const FieldEvaluator ref = [&](const Vec3& x) { return eval_solution(cfg.source, x); };
  const auto conv = convergence_table(result, has_ref ? &ref : nullptr);

  write_metadata(out, "reconstruct", cfg);
  out << notes.str();
  fmt::print(out, "# S_nodes: {}\n", mesh_S.size());
  fmt::print(out, "# converged_N: {}\n", result.converged_N ? std::to_string(*result.converged_N) : std::string("none"));
  if (cfg.n_max >= cfg.indicator.window) {
    const auto rep = solvability_indicator(domain, mesh_S, data_S, cfg.k, cfg.n_max, cfg.indicator, &table);
    fmt::print(out, "# verdict: {}\n", to_string(rep.verdict));
    fmt::print(out, "# indicator: grid_points={} window={} observed_ratio={:.6g} converge_below={} diverge_above={} floor={:.6g}\n",
               rep.test_grid.size(), rep.spec.window, rep.observed_ratio, rep.spec.converge_ratio, rep.spec.diverge_ratio,
               rep.floor);
    out << "# sup_increments:";
    for (const double v : rep.sup_increments) fmt::print(out, " {:.6e}", v);
    out << '\n';
  } else {
    fmt::print(out, "# verdict: not evaluated (run.n_max below indicator.window)\n");
  }
  write_convergence_csv(out, conv);
  return kExitOk;
}

int cmd_expand_cache(const ExperimentConfig& cfg, std::ostream& out) {
  if (cfg.domain_kind == DomainKind::Sphere) throw ConfigError("domain.kind", "expand-cache needs an annulus or cap domain");
  const auto mesh = mesh_boundary(cfg.cap_domain(), cfg.resolution);
  maybe_write_mesh(cfg, mesh);
  const auto mesh_S = mesh.restricted(PatchTag::S);
  ExpansionTable::build(cfg.k, cfg.n_max, mesh_S.nodes, cfg.method).save(out);
  return kExitOk;
}

int run_command(const std::string& name, const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  std::string dest = cfg.output_path;
  if (name == "expand-cache" && dest == "-" && !cfg.cache_path.empty()) dest = cfg.cache_path;
  std::ostringstream buffer;
  int code = kExitOk;
  try {
    if (name == "verify")
      code = cmd_verify(cfg, buffer);
    else if (name == "stratton-chu")
      code = cmd_stratton_chu(cfg, buffer);
    else if (name == "reconstruct")
      code = cmd_reconstruct(cfg, buffer);
    else if (name == "expand-cache")
      code = cmd_expand_cache(cfg, buffer);
    else {
      fmt::print(err, "error: unknown command '{}'\n", name);
      return kExitConfigError;
    }
  } catch (const ConfigError& e) {
    fmt::print(err, "config error: {}\n", e.what());
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "config error: {}\n", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitCheckFailed;
  }
  if (dest == "-") {
    out << buffer.str();
  } else {
    std::ofstream f(dest, std::ios::binary);
    if (!f) {
      fmt::print(err, "config error: output.path: cannot open '{}' for writing\n", dest);
      return kExitConfigError;
    }
    f << buffer.str();
  }
  if (code == kExitCheckFailed) fmt::print(err, "{}: one or more checks failed\n", name);
  return code;
}

}  // namespace carleman::cli
