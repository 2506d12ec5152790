#include "ginavg/runconfig.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <istream>
#include <stdexcept>

#include "ginavg/weights.hpp"

namespace ginavg::runconfig {
namespace {

using nlohmann::json;

constexpr std::array kEnsembles = {"ginoe", "ginue"};
constexpr std::array kMethods = {"auto",      "pfaffian",   "skew_orth",
                                 "parity_det", "ginue_det", "ginue_orth",
                                 "mc"};
constexpr std::array kGinoeMethods = {"pfaffian", "skew_orth", "parity_det"};
constexpr std::array kGinueMethods = {"ginue_det", "ginue_orth"};
constexpr std::array kOutputs = {"json", "csv"};

template <typename List>
bool contains(const List& list, const std::string& value) {
  return std::find(list.begin(), list.end(), value) != list.end();
}

void require_object(const json& j, const std::string& where) {
  if (!j.is_object())
    throw std::invalid_argument("run config: " + where + " must be an object");
}

template <typename T>
void read_key(const json& j, const std::string& key, T* out) {
  if (!j.contains(key)) return;
  try {
    *out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument("run config: bad value for '" + key + "'");
  }
}

void reject_unknown(const json& j, const std::vector<std::string>& known,
                    const std::string& where) {
  for (const auto& item : j.items())
    if (std::find(known.begin(), known.end(), item.key()) == known.end())
      throw std::invalid_argument("run config: unknown key '" + item.key() +
                                  "' in " + where);
}

}  // namespace

void RunConfig::validate() const {
  if (!contains(kEnsembles, ensemble))
    throw std::invalid_argument("run config: unknown ensemble '" + ensemble +
                                "'");
  if (!contains(kMethods, method))
    throw std::invalid_argument("run config: unknown method '" + method + "'");
  if (!contains(kOutputs, output))
    throw std::invalid_argument("run config: unknown output '" + output + "'");
  if (n < 1) throw std::invalid_argument("run config: n must be positive");
  if (mc.samples < 1)
    throw std::invalid_argument("run config: samples must be positive");
  if (mc.threshold <= 0.0)
    throw std::invalid_argument("run config: threshold must be positive");
  weights::PsiSpec::parse(psi);
  quad.validate();

  if (ensemble == "ginoe" && contains(kGinueMethods, method))
    throw std::invalid_argument("run config: method '" + method +
                                "' needs ensemble ginue");
  if (ensemble == "ginue" && contains(kGinoeMethods, method))
    throw std::invalid_argument("run config: method '" + method +
                                "' needs ensemble ginoe");
}

std::string RunConfig::resolved_method() const {
  if (method != "auto") return method;
  return ensemble == "ginoe" ? "pfaffian" : "ginue_det";
}

RunConfig run_config_from_json(const json& j) {
  require_object(j, "document");
  reject_unknown(
      j, {"ensemble", "n", "psi", "method", "quadrature", "mc", "output"},
      "document");

  RunConfig c;
  read_key(j, "ensemble", &c.ensemble);
  read_key(j, "n", &c.n);
  read_key(j, "psi", &c.psi);
  read_key(j, "method", &c.method);
  read_key(j, "output", &c.output);

  if (j.contains("quadrature")) {
    const json& q = j.at("quadrature");
    require_object(q, "quadrature");
    reject_unknown(q,
                   {"real_cutoff", "nodes_1d", "halfplane_cutoff_x",
                    "halfplane_cutoff_y", "nodes_2d_x", "nodes_2d_y",
                    "target_rel_tol"},
                   "quadrature");
    read_key(q, "real_cutoff", &c.quad.real_cutoff);
    read_key(q, "nodes_1d", &c.quad.nodes_1d);
    read_key(q, "halfplane_cutoff_x", &c.quad.halfplane_cutoff_x);
    read_key(q, "halfplane_cutoff_y", &c.quad.halfplane_cutoff_y);
    read_key(q, "nodes_2d_x", &c.quad.nodes_2d_x);
    read_key(q, "nodes_2d_y", &c.quad.nodes_2d_y);
    read_key(q, "target_rel_tol", &c.quad.target_rel_tol);
  }
  if (j.contains("mc")) {
    const json& m = j.at("mc");
    require_object(m, "mc");
    reject_unknown(m, {"samples", "seed", "threshold"}, "mc");
    read_key(m, "samples", &c.mc.samples);
    read_key(m, "seed", &c.mc.seed);
    read_key(m, "threshold", &c.mc.threshold);
  }

  c.validate();
  return c;
}

json run_config_to_json(const RunConfig& c) {
  return json{
      {"ensemble", c.ensemble},
      {"n", c.n},
      {"psi", c.psi},
      {"method", c.method},
      {"quadrature",
       {{"real_cutoff", c.quad.real_cutoff},
        {"nodes_1d", c.quad.nodes_1d},
        {"halfplane_cutoff_x", c.quad.halfplane_cutoff_x},
        {"halfplane_cutoff_y", c.quad.halfplane_cutoff_y},
        {"nodes_2d_x", c.quad.nodes_2d_x},
        {"nodes_2d_y", c.quad.nodes_2d_y},
        {"target_rel_tol", c.quad.target_rel_tol}}},
      {"mc",
       {{"samples", c.mc.samples},
        {"seed", c.mc.seed},
        {"threshold", c.mc.threshold}}},
      {"output", c.output},
  };
}

RunConfig load_run_config(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("run config: parse error: ") +
                                e.what());
  }
  return run_config_from_json(j);
}

json make_report(const std::string& command, const RunConfig& effective,
                 const json& result, double wall_seconds) {
  return json{
      {"command", command},
      {"config", run_config_to_json(effective)},
      {"result", result},
      {"wall_time_seconds", wall_seconds},
  };
}

std::string format_scalar(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace ginavg::runconfig
