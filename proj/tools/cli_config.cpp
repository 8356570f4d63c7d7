#include "cli_config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/program_options.hpp>
#include <fmt/format.h>

namespace carleman::cli {

namespace po = boost::program_options;

const std::map<std::string, std::string>& default_values() {
  static const std::map<std::string, std::string> defaults = {
      {"wave.k", ""},
      {"material.epsilon", "1"},
      {"material.mu", "1"},
      {"material.sigma", "0"},
      {"material.omega", "1"},
      {"domain.kind", "annulus"},
      {"domain.R", "2"},
      {"domain.cap_angle", ""},
      {"domain.cap_radius", "1"},
      {"mesh.resolution", "32"},
      {"run.n_max", "20"},
      {"run.seed", "1"},
      {"run.noise", "0"},
      {"run.increment_tol", "1e-6"},
      {"run.check_tol", "1e-3"},
      {"source.kind", "plane_wave"},
      {"source.direction", "1,2,-2"},
      {"source.polarization", ""},
      {"source.position", "0.1,-0.2,0.3"},
      {"source.moment", "1,i,0.5"},
      {"targets.points", ""},
      {"targets.radius", ""},
      {"targets.count", "6"},
      {"targets.exterior_radius", ""},
      {"indicator.inner_fraction", "0.5"},
      {"indicator.outer_fraction", "0.4"},
      {"indicator.directions", "12"},
      {"indicator.window", "5"},
      {"indicator.converge_ratio", "0.9"},
      {"indicator.diverge_ratio", "1.1"},
      {"indicator.floor_rel", "1e-9"},
      {"expansion.method", "closed_form"},
      {"expansion.cache", ""},
      {"output.path", "-"},
      {"output.mesh", ""},
  };
  return defaults;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw std::invalid_argument("empty number");
  std::size_t pos = 0;
  const double v = std::stod(t, &pos);
  if (pos != t.size()) throw std::invalid_argument("trailing characters in '" + t + "'");
  return v;
}

class Reader {
 public:
  explicit Reader(const std::map<std::string, std::string>& values) : values_(values) {}

  const std::string& raw(const std::string& key) const { return values_.at(key); }
  bool is_set(const std::string& key) const { return !trim(raw(key)).empty(); }

  template <typename F>
  auto with_key(const std::string& key, F&& f) const {
    try {
      return f(raw(key));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(key, fmt::format("cannot parse '{}' ({})", raw(key), e.what()));
    }
  }

  double real(const std::string& key) const {
    const double v = with_key(key, parse_real);
    if (!std::isfinite(v)) throw ConfigError(key, "must be finite");
    return v;
  }
  double positive(const std::string& key) const {
    const double v = real(key);
    if (!(v > 0.0)) throw ConfigError(key, "must be positive");
    return v;
  }
  double nonnegative(const std::string& key) const {
    const double v = real(key);
    if (v < 0.0) throw ConfigError(key, "must be nonnegative");
    return v;
  }
  long long integer(const std::string& key) const {
    return with_key(key, [](const std::string& s) {
      const std::string t = trim(s);
      std::size_t pos = 0;
      const long long v = std::stoll(t, &pos);
      if (pos != t.size()) throw std::invalid_argument("not an integer");
      return v;
    });
  }
  cplx complex(const std::string& key) const { return with_key(key, parse_complex); }
  Vec3 vec3(const std::string& key) const {
    return with_key(key, [](const std::string& s) {
      const auto c = split_components(s);
      Vec3 v;
      for (int i = 0; i < 3; ++i) v[i] = parse_real(c[static_cast<std::size_t>(i)]);
      return v;
    });
  }
  CVec3 cvec3(const std::string& key) const {
    return with_key(key, [](const std::string& s) {
      const auto c = split_components(s);
      CVec3 v;
      for (int i = 0; i < 3; ++i) v[i] = parse_complex(c[static_cast<std::size_t>(i)]);
      return v;
    });
  }
  std::vector<Vec3> points(const std::string& key) const {
    return with_key(key, [](const std::string& s) {
      std::vector<Vec3> out;
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ';')) {
        if (trim(item).empty()) continue;
        const auto c = split_components(item);
        out.emplace_back(parse_real(c[0]), parse_real(c[1]), parse_real(c[2]));
      }
      return out;
    });
  }

 private:
  static std::vector<std::string> split_components(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (const char ch : s) {
      if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
        if (!cur.empty()) parts.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    if (!cur.empty()) parts.push_back(cur);
    if (parts.size() != 3) throw std::invalid_argument("expected three components");
    return parts;
  }

  const std::map<std::string, std::string>& values_;
};

std::vector<Vec3> fibonacci_points(double r, int n) {
  std::vector<Vec3> out;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    out.push_back(r * Vec3(rho * std::cos(golden * i), rho * std::sin(golden * i), z));
  }
  return out;
}

}  // namespace

cplx parse_complex(const std::string& text) {
  std::string t;
  for (const char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw std::invalid_argument("empty complex number");
  if (t.front() == '(') {
    if (t.back() != ')') throw std::invalid_argument("unbalanced parenthesis");
    const auto comma = t.find(',');
    if (comma == std::string::npos) return {parse_real(t.substr(1, t.size() - 2)), 0.0};
    return {parse_real(t.substr(1, comma - 1)), parse_real(t.substr(comma + 1, t.size() - comma - 2))};
  }
  if (t.back() != 'i' && t.back() != 'j') return {parse_real(t), 0.0};
  const std::string body = t.substr(0, t.size() - 1);
  // Split at the last sign that is not an exponent sign or the leading sign.
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_part = [](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_real(s);
  };
  if (split == std::string::npos) return {0.0, imag_part(body)};
  return {parse_real(body.substr(0, split)), imag_part(body.substr(split))};
}

std::uint64_t ExperimentConfig::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& [key, value] : resolved)
    for (const char c : key + "=" + value + "\n") {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ULL;
    }
  return h;
}

ExperimentConfig resolve_config(std::map<std::string, std::string> values) {
  for (const auto& [key, value] : values)
    if (!default_values().count(key)) throw ConfigError(key, "unknown key");
  for (const auto& [key, value] : default_values()) values.emplace(key, value);
  for (auto& [key, value] : values) value = trim(value);
  const Reader in(values);
  ExperimentConfig c;

  if (in.is_set("wave.k")) {
    const cplx k = in.complex("wave.k");
    if (k.imag() < 0.0) throw ConfigError("wave.k", "must satisfy Im k >= 0");
    if (k == cplx(0.0)) throw ConfigError("wave.k", "wave number k must be nonzero");
    c.k = WaveNumber(k);
  } else {
    MaterialParams m;
    m.epsilon = in.real("material.epsilon");
    m.mu = in.real("material.mu");
    m.sigma = in.real("material.sigma");
    m.omega = in.real("material.omega");
    try {
      c.k = wavenumber_from_material(m);
    } catch (const std::exception& e) {
      throw ConfigError("material", e.what());
    }
    if (c.k.is_zero()) throw ConfigError("wave.k", "wave number k derived from material.* is zero");
  }

  const std::string kind = in.raw("domain.kind");
  if (kind == "sphere")
    c.domain_kind = DomainKind::Sphere;
  else if (kind == "annulus")
    c.domain_kind = DomainKind::Annulus;
  else if (kind == "cap")
    c.domain_kind = DomainKind::Cap;
  else
    throw ConfigError("domain.kind", "expected sphere, annulus or cap, got '" + kind + "'");
  c.R = in.positive("domain.R");
  if (c.domain_kind != DomainKind::Sphere) {
    c.cap_radius = in.positive("domain.cap_radius");
    if (!(c.cap_radius < c.R)) throw ConfigError("domain.cap_radius", "must be below domain.R");
    if (c.domain_kind == DomainKind::Cap) {
      if (!in.is_set("domain.cap_angle")) throw ConfigError("domain.cap_angle", "required for domain.kind = cap");
      c.cap_angle = in.real("domain.cap_angle");
      if (!(c.cap_angle > 0.0 && c.cap_angle < kPi)) throw ConfigError("domain.cap_angle", "must lie in (0, pi)");
    }
  }

  const long long res = in.integer("mesh.resolution");
  if (res < 2 || res > 4096) throw ConfigError("mesh.resolution", "must lie in [2, 4096]");
  c.resolution = static_cast<int>(res);
  const long long n_max = in.integer("run.n_max");
  if (n_max < 0 || n_max > 200) throw ConfigError("run.n_max", "must lie in [0, 200]");
  c.n_max = static_cast<int>(n_max);
  const long long seed = in.integer("run.seed");
  if (seed < 0) throw ConfigError("run.seed", "must be nonnegative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.noise = in.nonnegative("run.noise");
  c.increment_tol = in.positive("run.increment_tol");
  c.check_tol = in.positive("run.check_tol");

  const std::string src = in.raw("source.kind");
  try {
    if (src == "plane_wave") {
      const Vec3 d = in.vec3("source.direction");
      if (d.norm() == 0.0) throw ConfigError("source.direction", "must be nonzero");
      const Vec3 dn = d.normalized();
      CVec3 p;
      if (in.is_set("source.polarization")) {
        p = in.cvec3("source.polarization");
      } else {
        const Vec3 helper = std::abs(dn.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
        p = dn.cross(helper).normalized().cast<cplx>();
      }
      c.source = SyntheticSolution::plane_wave(c.k, dn, p);
    } else if (src == "dipole") {
      const Vec3 x0 = in.vec3("source.position");
      c.source = SyntheticSolution::dipole(c.k, x0, in.cvec3("source.moment"));
      const bool inside = c.domain_kind == DomainKind::Sphere ? x0.norm() <= c.R : c.cap_domain().contains(x0);
      if (inside) throw ConfigError("source.position", "dipole must lie outside the domain");
    } else if (src == "zero") {
      c.source = SyntheticSolution::zero(c.k);
    } else {
      throw ConfigError("source.kind", "expected plane_wave, dipole or zero, got '" + src + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(src == "dipole" ? "source.moment" : "source.polarization", e.what());
  }

  const long long count = in.integer("targets.count");
  if (count < 1 || count > 10000) throw ConfigError("targets.count", "must lie in [1, 10000]");
  c.target_count = static_cast<int>(count);
  if (in.is_set("targets.radius")) {
    c.target_radius = in.positive("targets.radius");
  } else {
    c.target_radius = c.domain_kind == DomainKind::Sphere ? 0.5 * c.R : c.cap_radius + 0.4 * (c.R - c.cap_radius);
  }
  c.target_points = in.is_set("targets.points") ? in.points("targets.points") : fibonacci_points(c.target_radius, c.target_count);
  if (c.domain_kind == DomainKind::Cap && !in.is_set("targets.points")) {
    const auto dom = c.cap_domain();
    std::erase_if(c.target_points, [&](const Vec3& x) { return !dom.contains(x); });
  }
  if (c.target_points.empty()) throw ConfigError("targets.points", "no targets inside the domain");
  c.exterior_radius = in.is_set("targets.exterior_radius") ? in.positive("targets.exterior_radius") : 1.5 * c.R;
  if (!(c.exterior_radius > c.R)) throw ConfigError("targets.exterior_radius", "must exceed domain.R");

  c.indicator.inner_fraction = in.positive("indicator.inner_fraction");
  if (!(c.indicator.inner_fraction < 1.0)) throw ConfigError("indicator.inner_fraction", "must lie in (0, 1)");
  c.indicator.outer_fraction = in.positive("indicator.outer_fraction");
  if (!(c.indicator.outer_fraction < 1.0)) throw ConfigError("indicator.outer_fraction", "must lie in (0, 1)");
  const long long dirs = in.integer("indicator.directions");
  if (dirs < 1 || dirs > 10000) throw ConfigError("indicator.directions", "must lie in [1, 10000]");
  c.indicator.directions = static_cast<int>(dirs);
  const long long window = in.integer("indicator.window");
  if (window < 1 || window > 100) throw ConfigError("indicator.window", "must lie in [1, 100]");
  c.indicator.window = static_cast<int>(window);
  c.indicator.converge_ratio = in.positive("indicator.converge_ratio");
  c.indicator.diverge_ratio = in.positive("indicator.diverge_ratio");
  if (!(c.indicator.converge_ratio <= c.indicator.diverge_ratio))
    throw ConfigError("indicator.diverge_ratio", "must not be below indicator.converge_ratio");
  c.indicator.floor_rel = in.nonnegative("indicator.floor_rel");

  try {
    c.method = parse_coeff_method(in.raw("expansion.method"));
  } catch (const std::exception& e) {
    throw ConfigError("expansion.method", e.what());
  }
  c.cache_path = in.raw("expansion.cache");
  c.output_path = in.raw("output.path").empty() ? "-" : in.raw("output.path");
  c.mesh_out = in.raw("output.mesh");
  c.resolved = std::move(values);
  return c;
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::map<std::string, std::string> values;
  if (!path.empty()) {
    std::ifstream file(path);
    if (!file) throw ConfigError("--config", "cannot open '" + path + "'");
    po::options_description desc;
    for (const auto& [key, value] : default_values()) desc.add_options()(key.c_str(), po::value<std::string>());
    po::variables_map vm;
    try {
      po::store(po::parse_config_file(file, desc, false), vm);
    } catch (const po::unknown_option& e) {
      throw ConfigError(e.get_option_name(), "unknown key in config file");
    } catch (const po::error& e) {
      throw ConfigError("--config", e.what());
    }
    for (const auto& [key, value] : vm) values[key] = value.as<std::string>();
  }
  for (const auto& [key, value] : overrides) {
    if (!default_values().count(key)) throw ConfigError(key, "unknown key");
    values[key] = value;
  }
  return resolve_config(std::move(values));
}

}  // namespace carleman::cli
