#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "ginavg/quadrature.hpp"

namespace ginavg::runconfig {

struct McConfig {
  std::int64_t samples = 100000;
  std::uint64_t seed = 1;
  double threshold = 1e-8;  // spectrum classification

  bool operator==(const McConfig&) const = default;
};

// Effective run description: every report echoes one of these with all
// defaults resolved, so any reported number is reproducible from the report
// alone.  String fields stay textual (psi in its parse syntax) to keep the
// JSON round trip lossless.
struct RunConfig {
  std::string ensemble = "ginoe";  // ginoe | ginue
  int n = 2;
  std::string psi = "one";
  // auto | pfaffian | skew_orth | parity_det | ginue_det | ginue_orth | mc;
  // auto resolves to the ensemble's determinant-free default route.
  std::string method = "auto";
  quadrature::QuadratureConfig quad;
  McConfig mc;
  std::string output = "json";  // json | csv

  // Enum membership, n >= 1, psi syntax, method/ensemble coherence,
  // quadrature sanity.  Throws std::invalid_argument with the offending key.
  void validate() const;

  // The route auto stands for: pfaffian (ginoe) or ginue_det (ginue).
  std::string resolved_method() const;

  bool operator==(const RunConfig&) const = default;
};

// Unknown keys and type mismatches raise std::invalid_argument; absent keys
// keep their defaults, so partial config files compose with flag overrides.
RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json run_config_to_json(const RunConfig& config);
RunConfig load_run_config(std::istream& in);

// Report envelope {command, config, result, wall_time_seconds}; the config
// block is the full effective RunConfig.
nlohmann::json make_report(const std::string& command,
                           const RunConfig& effective,
                           const nlohmann::json& result, double wall_seconds);

// Scalar formatting for CSV and plain-text output: 17 significant digits,
// enough to reproduce the double exactly.
std::string format_scalar(double value);

}  // namespace ginavg::runconfig
