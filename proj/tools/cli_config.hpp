#pragma once

// Experiment configuration for the command-line runner. Values come from a
// key = value file with dotted keys (or [section] headers), then from
// command-line overrides. Every key has a default; the resolved set of
// key/value strings is what the config hash covers.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "carleman/expansion.hpp"
#include "carleman/harness.hpp"
#include "carleman/operators.hpp"
#include "carleman/reconstruct.hpp"

namespace carleman::cli {

/// Invalid configuration; names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class DomainKind { Sphere, Annulus, Cap };

struct ExperimentConfig {
  WaveNumber k;
  DomainKind domain_kind = DomainKind::Annulus;
  double R = 2.0;
  double cap_angle = kPi;
  double cap_radius = 1.0;
  int resolution = 32;
  int n_max = 20;
  std::uint64_t seed = 1;
  double noise = 0.0;
  double increment_tol = 1e-6;
  SyntheticSolution source;
  /// Explicit interior targets, or Fibonacci points at target_radius.
  std::vector<Vec3> target_points;
  double target_radius = 0.0;
  int target_count = 6;
  double exterior_radius = 0.0;
  double check_tol = 1e-3;
  IndicatorGridSpec indicator;
  CoeffMethod method = CoeffMethod::ClosedForm;
  std::string cache_path;
  std::string output_path = "-";
  std::string mesh_out;

  /// Every key with its resolved string value, sorted by key.
  std::map<std::string, std::string> resolved;

  /// Cap domain for Annulus and Cap kinds (the annulus is the cap with angle pi).
  CapDomain cap_domain() const { return make_cap_domain(R, cap_angle, cap_radius); }
  /// FNV-1a 64-bit hash of the resolved key/value lines.
  std::uint64_t hash() const;
};

/// All recognised keys with their defaults.
const std::map<std::string, std::string>& default_values();

/// Reads the file (empty path: defaults only), applies overrides in order and
/// validates. Throws ConfigError.
ExperimentConfig load_config(const std::string& path, const std::vector<std::pair<std::string, std::string>>& overrides);

/// Builds a config from key/value strings already merged with the defaults.
ExperimentConfig resolve_config(std::map<std::string, std::string> values);

/// "1", "-2.5", "2+0.5i", "0.3-1e-2i", "3i", "(2,0.5)".
cplx parse_complex(const std::string& text);

}  // namespace carleman::cli
