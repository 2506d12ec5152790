#include <algorithm>
#include <chrono>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ginavg/antisym.hpp"
#include "ginavg/averages.hpp"
#include "ginavg/errors.hpp"
#include "ginavg/runconfig.hpp"
#include "ginavg/sampler.hpp"
#include "ginavg/verify.hpp"
#include "ginavg/weights.hpp"

namespace {

using ginavg::numerical_error;
using ginavg::runconfig::format_scalar;
using ginavg::runconfig::make_report;
using ginavg::runconfig::RunConfig;
using ginavg::weights::PsiSpec;
using nlohmann::json;

constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

// Quadrature overrides shared by the subcommands; only flags the user set
// are applied on top of the config-file or default values.
struct QuadFlags {
  double real_cutoff = 0, cutoff_x = 0, cutoff_y = 0, rel_tol = 0;
  int nodes_1d = 0, nodes_x = 0, nodes_y = 0;
  CLI::Option *o_rc = nullptr, *o_cx = nullptr, *o_cy = nullptr,
              *o_tol = nullptr, *o_n1 = nullptr, *o_nx = nullptr,
              *o_ny = nullptr;

  void attach(CLI::App* cmd) {
    o_rc = cmd->add_option("--real-cutoff", real_cutoff,
                           "half width of the real-line window");
    o_n1 = cmd->add_option("--nodes-1d", nodes_1d, "line quadrature nodes");
    o_cx = cmd->add_option("--halfplane-cutoff-x", cutoff_x,
                           "half-plane window half width");
    o_cy = cmd->add_option("--halfplane-cutoff-y", cutoff_y,
                           "half-plane window height");
    o_nx = cmd->add_option("--nodes-2d-x", nodes_x, "half-plane x nodes");
    o_ny = cmd->add_option("--nodes-2d-y", nodes_y, "half-plane y nodes");
    o_tol = cmd->add_option("--target-rel-tol", rel_tol,
                            "relative tolerance target");
  }

  void apply(ginavg::quadrature::QuadratureConfig* q) const {
    if (o_rc->count()) q->real_cutoff = real_cutoff;
    if (o_n1->count()) q->nodes_1d = nodes_1d;
    if (o_cx->count()) q->halfplane_cutoff_x = cutoff_x;
    if (o_cy->count()) q->halfplane_cutoff_y = cutoff_y;
    if (o_nx->count()) q->nodes_2d_x = nodes_x;
    if (o_ny->count()) q->nodes_2d_y = nodes_y;
    if (o_tol->count()) q->target_rel_tol = rel_tol;
  }
};

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open config file '" + path + "'");
  return ginavg::runconfig::load_run_config(in);
}

void emit(const json& report, const RunConfig& cfg,
          const std::string& csv_text) {
  if (cfg.output == "csv")
    std::cout << csv_text;
  else
    std::cout << report.dump(2) << "\n";
}

// ---------------------------------------------------------------- average

struct AverageArgs {
  std::string config_path, ensemble, psi, method, output, mc_csv;
  int n = 0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  double threshold = 0;
  QuadFlags quad;
  CLI::Option *o_cfg = nullptr, *o_ens = nullptr, *o_n = nullptr,
              *o_psi = nullptr, *o_method = nullptr, *o_out = nullptr,
              *o_samples = nullptr, *o_seed = nullptr, *o_thr = nullptr,
              *o_mc_csv = nullptr;
};

void attach_average(CLI::App* cmd, AverageArgs* a) {
  a->o_cfg = cmd->add_option("--config", a->config_path, "JSON config file");
  a->o_ens =
      cmd->add_option("--ensemble", a->ensemble, "ginoe or ginue");
  a->o_n = cmd->add_option("--n", a->n, "matrix size");
  a->o_psi = cmd->add_option(
      "--psi", a->psi, "one | pow:k | shift:z | poly:c0,c1,... | modsq");
  a->o_method = cmd->add_option(
      "--method", a->method,
      "auto | pfaffian | skew_orth | parity_det | ginue_det | ginue_orth | mc");
  a->o_samples = cmd->add_option("--samples", a->samples, "MC sample count");
  a->o_seed = cmd->add_option("--seed", a->seed, "MC stream seed");
  a->o_thr = cmd->add_option("--threshold", a->threshold,
                             "spectrum classification threshold");
  a->o_mc_csv = cmd->add_option("--mc-csv", a->mc_csv,
                                "write per-sample CSV to this file");
  a->o_out = cmd->add_option("--output", a->output, "json or csv");
  a->quad.attach(cmd);
}

RunConfig effective_config(const AverageArgs& a) {
  RunConfig cfg;
  if (a.o_cfg->count()) cfg = load_config_file(a.config_path);
  if (a.o_ens->count()) cfg.ensemble = a.ensemble;
  if (a.o_n->count()) cfg.n = a.n;
  if (a.o_psi->count()) cfg.psi = a.psi;
  if (a.o_method->count()) cfg.method = a.method;
  if (a.o_samples->count()) cfg.mc.samples = a.samples;
  if (a.o_seed->count()) cfg.mc.seed = a.seed;
  if (a.o_thr->count()) cfg.mc.threshold = a.threshold;
  if (a.o_out->count()) cfg.output = a.output;
  a.quad.apply(&cfg.quad);
  cfg.validate();
  return cfg;
}

ginavg::averages::EnsembleAverage run_formula(const std::string& method,
                                              const RunConfig& cfg) {
  using namespace ginavg::averages;
  const PsiSpec psi = PsiSpec::parse(cfg.psi);
  if (method == "pfaffian") return average_ginoe(cfg.n, psi, cfg.quad);
  if (method == "skew_orth") return average_ginoe_skew(cfg.n, psi, cfg.quad);
  if (method == "parity_det")
    return average_ginoe_parity(cfg.n, psi, cfg.quad);
  if (method == "ginue_det") return average_ginue(cfg.n, psi, cfg.quad);
  return average_ginue_orth(cfg.n, psi, cfg.quad);
}

int cmd_average(const AverageArgs& args) {
  const auto start = std::chrono::steady_clock::now();
  const RunConfig cfg = effective_config(args);
  const std::string method = cfg.resolved_method();

  json result;
  if (method == "mc") {
    std::ofstream csv_file;
    std::ostream* csv = nullptr;
    if (args.o_mc_csv->count()) {
      csv_file.open(args.mc_csv);
      if (!csv_file)
        throw std::invalid_argument("cannot open '" + args.mc_csv + "'");
      csv = &csv_file;
    }
    const auto ensemble = cfg.ensemble == "ginoe"
                              ? ginavg::sampler::Ensemble::ginoe
                              : ginavg::sampler::Ensemble::ginue;
    const auto est = ginavg::sampler::mc_average(
        ensemble, cfg.n, PsiSpec::parse(cfg.psi), cfg.mc.samples, cfg.mc.seed,
        cfg.mc.threshold, csv);
    result = {{"value", est.mean},     {"method", "mc"},
              {"est_error", est.std_error}, {"samples", est.samples},
              {"seed", est.seed},      {"skipped", est.skipped}};
  } else {
    const auto avg = run_formula(method, cfg);
    result = {{"value", avg.value},
              {"method", ginavg::averages::method_name(avg.method)},
              {"est_error", avg.est_error}};
  }

  const double wall = seconds_since(start);
  std::ostringstream csv_text;
  csv_text << "ensemble,n,psi,method,value,est_error,samples,seed,skipped,"
              "wall_time_seconds\n"
           << cfg.ensemble << ',' << cfg.n << ',' << cfg.psi << ',' << method
           << ',' << format_scalar(result.at("value").get<double>()) << ','
           << format_scalar(result.at("est_error").get<double>()) << ',';
  if (method == "mc")
    csv_text << cfg.mc.samples << ',' << cfg.mc.seed << ','
             << result.at("skipped").get<std::int64_t>();
  else
    csv_text << ",,";
  csv_text << ',' << format_scalar(wall) << '\n';

  emit(make_report("average", cfg, result, wall), cfg, csv_text.str());
  return 0;
}

// --------------------------------------------------------------- pfaffian

struct PfaffianArgs {
  std::string matrix_path;
  std::string method = "elimination";
};

int cmd_pfaffian(const PfaffianArgs& args) {
  const auto start = std::chrono::steady_clock::now();
  if (args.method != "elimination" && args.method != "combinatorial" &&
      args.method != "both")
    throw std::invalid_argument("pfaffian: unknown method '" + args.method +
                                "'");
  ginavg::antisym::AntisymmetricMatrix<double> matrix(0);
  if (args.matrix_path == "-") {
    matrix = ginavg::antisym::read_matrix(std::cin);
  } else {
    std::ifstream in(args.matrix_path);
    if (!in)
      throw std::invalid_argument("cannot open matrix file '" +
                                  args.matrix_path + "'");
    matrix = ginavg::antisym::read_matrix(in);
  }

  auto to_json = [](const ginavg::antisym::PfaffianResult<double>& r) {
    json j = {{"value", r.value}, {"sign", r.unit}};
    if (r.log_abs)
      j["log_abs"] = *r.log_abs;
    else
      j["log_abs"] = nullptr;
    return j;
  };

  json result = {{"dim", matrix.dim()}, {"method", args.method}};
  bool agree = true;
  if (args.method == "elimination" || args.method == "both")
    result["elimination"] = to_json(ginavg::antisym::pfaffian_elimination(matrix));
  if (args.method == "combinatorial" || args.method == "both")
    result["combinatorial"] =
        to_json(ginavg::antisym::pfaffian_combinatorial(matrix));
  if (args.method == "both") {
    const double e = result["elimination"]["value"].get<double>();
    const double c = result["combinatorial"]["value"].get<double>();
    const double residual = std::abs(e - c) / std::max(1.0, std::abs(c));
    result["residual"] = residual;
    agree = residual <= 1e-10;
    result["agree"] = agree;
  }
  const json& primary =
      result.contains("elimination") ? result["elimination"]
                                     : result["combinatorial"];
  result["value"] = primary["value"];

  const json report = {{"command", "pfaffian"},
                       {"config",
                        {{"matrix", args.matrix_path},
                         {"method", args.method}}},
                       {"result", result},
                       {"wall_time_seconds", seconds_since(start)}};
  std::cout << report.dump(2) << "\n";
  return agree ? 0 : kExitVerifyFailed;
}

// ------------------------------------------------------------------- jpdf

struct JpdfArgs {
  std::string point, sector, output;
  bool integrate = false, mc_distribution = false;
  int n = 0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  double threshold = 0;
  QuadFlags quad;
  CLI::Option *o_n = nullptr, *o_point = nullptr, *o_sector = nullptr,
              *o_samples = nullptr, *o_seed = nullptr, *o_thr = nullptr,
              *o_out = nullptr;
};

// Point entries: reals for alpha, trailing-i forms ("0.3+0.8i") for pair
// representatives.
void parse_point(const std::string& text, std::vector<double>* alpha,
                 std::vector<std::complex<double>>* beta) {
  std::istringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty())
      throw std::invalid_argument("jpdf: empty point entry");
    try {
      std::size_t used = 0;
      if (token.back() == 'i') {
        const std::string body = token.substr(0, token.size() - 1);
        // Split at the last +/- that is not an exponent sign.
        std::size_t split = std::string::npos;
        for (std::size_t i = body.size(); i-- > 1;) {
          if ((body[i] == '+' || body[i] == '-') &&
              body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
          }
        }
        if (split == std::string::npos)
          throw std::invalid_argument("jpdf: pair entry '" + token +
                                      "' needs re±imi form");
        const double re = std::stod(body.substr(0, split), &used);
        if (used != split)
          throw std::invalid_argument("jpdf: bad entry '" + token + "'");
        const std::string im_text = body.substr(split);
        const double im =
            im_text == "+" ? 1.0
                           : (im_text == "-" ? -1.0 : std::stod(im_text));
        beta->emplace_back(re, im);
      } else {
        const double re = std::stod(token, &used);
        if (used != token.size())
          throw std::invalid_argument("jpdf: bad entry '" + token + "'");
        alpha->push_back(re);
      }
    } catch (const std::logic_error&) {
      throw std::invalid_argument("jpdf: bad point entry '" + token + "'");
    }
  }
}

int cmd_jpdf(const JpdfArgs& args) {
  const auto start = std::chrono::steady_clock::now();
  const int modes = (args.o_point->count() ? 1 : 0) +
                    (args.o_sector->count() ? 1 : 0) +
                    (args.mc_distribution ? 1 : 0);
  if (modes != 1)
    throw std::invalid_argument(
        "jpdf: choose exactly one of --point, --sector, --mc-distribution");
  if (!args.o_n->count())
    throw std::invalid_argument("jpdf: --n is required");

  RunConfig cfg;
  cfg.n = args.n;
  cfg.method = "mc";
  if (args.o_samples->count()) cfg.mc.samples = args.samples;
  if (args.o_seed->count()) cfg.mc.seed = args.seed;
  if (args.o_thr->count()) cfg.mc.threshold = args.threshold;
  if (args.o_out->count()) cfg.output = args.output;
  args.quad.apply(&cfg.quad);
  cfg.validate();

  json result;
  std::ostringstream csv_text;

  if (args.o_point->count()) {
    std::vector<double> alpha;
    std::vector<std::complex<double>> beta;
    parse_point(args.point, &alpha, &beta);
    const double density = ginavg::sampler::jpdf_partial(alpha, beta, cfg.n);
    result = {{"l", static_cast<int>(alpha.size())},
              {"m", static_cast<int>(beta.size())},
              {"density", density}};
    csv_text << "n,l,m,density\n"
             << cfg.n << ',' << alpha.size() << ',' << beta.size() << ','
             << format_scalar(density) << '\n';
  } else if (args.o_sector->count()) {
    if (!args.integrate)
      throw std::invalid_argument("jpdf: --sector needs --integrate");
    int l = -1, m = -1;
    if (std::sscanf(args.sector.c_str(), "%d,%d", &l, &m) != 2)
      throw std::invalid_argument("jpdf: --sector expects L,M");
    const double probability =
        ginavg::sampler::jpdf_sector_probability(cfg.n, l, m, cfg.quad);
    result = {{"l", l}, {"m", m}, {"probability", probability}};
    csv_text << "n,l,m,probability\n"
             << cfg.n << ',' << l << ',' << m << ','
             << format_scalar(probability) << '\n';
  } else {
    const auto hist = ginavg::sampler::real_count_distribution(
        cfg.n, cfg.mc.samples, cfg.mc.seed, cfg.mc.threshold);
    json rows = json::array();
    csv_text << "l,count,probability\n";
    for (std::size_t l = 0; l < hist.counts.size(); ++l) {
      const double p = hist.probability(static_cast<int>(l));
      rows.push_back({{"l", l}, {"count", hist.counts[l]}, {"probability", p}});
      csv_text << l << ',' << hist.counts[l] << ',' << format_scalar(p)
               << '\n';
    }
    result = {{"histogram", rows},
              {"samples", hist.samples},
              {"seed", cfg.mc.seed},
              {"skipped", hist.skipped}};
  }

  emit(make_report("jpdf", cfg, result, seconds_since(start)), cfg,
       csv_text.str());
  return 0;
}

// ----------------------------------------------------------------- verify

struct VerifyArgs {
  std::string suite = "all";
  std::string output;
  QuadFlags quad;
  CLI::Option* o_out = nullptr;
};

int cmd_verify(const VerifyArgs& args) {
  const auto start = std::chrono::steady_clock::now();
  RunConfig cfg;
  args.quad.apply(&cfg.quad);
  if (args.o_out->count()) cfg.output = args.output;
  cfg.validate();

  std::vector<std::string> suites;
  if (args.suite == "all")
    suites = ginavg::verify::suite_names();
  else
    suites.push_back(args.suite);

  bool ok = true;
  json suite_reports = json::array();
  std::ostringstream csv_text;
  csv_text << "suite,check,pass,tolerance,max_residual\n";
  for (const std::string& suite : suites) {
    const auto checks = ginavg::verify::run_suite(suite, cfg.quad);
    json check_rows = json::array();
    for (const auto& check : checks) {
      std::cerr << (check.pass ? "PASS " : "FAIL ") << suite << '/'
                << check.name << "  max_residual="
                << format_scalar(check.max_residual)
                << "  tol=" << format_scalar(check.tolerance) << "\n";
      json row = {{"name", check.name},
                  {"pass", check.pass},
                  {"tolerance", check.tolerance},
                  {"max_residual", check.max_residual}};
      if (!check.pass) row["failing_instance"] = check.failing_instance;
      check_rows.push_back(row);
      csv_text << suite << ',' << check.name << ','
               << (check.pass ? "true" : "false") << ','
               << format_scalar(check.tolerance) << ','
               << format_scalar(check.max_residual) << '\n';
    }
    const bool suite_ok = ginavg::verify::all_pass(checks);
    ok = ok && suite_ok;
    suite_reports.push_back(
        {{"suite", suite}, {"checks", check_rows}, {"all_pass", suite_ok}});
  }

  const json result = {{"suites", suite_reports}, {"all_pass", ok}};
  emit(make_report("verify", cfg, result, seconds_since(start)), cfg,
       csv_text.str());
  return ok ? 0 : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ensemble averages of multiplicative class functions over "
               "the real and complex Ginibre ensembles"};
  app.require_subcommand(1);

  AverageArgs average_args;
  attach_average(app.add_subcommand("average", "evaluate an ensemble average"),
                 &average_args);

  PfaffianArgs pfaffian_args;
  CLI::App* pfaffian_cmd =
      app.add_subcommand("pfaffian", "Pfaffian of an antisymmetric matrix");
  pfaffian_cmd
      ->add_option("--matrix", pfaffian_args.matrix_path,
                   "matrix file ('-' for stdin)")
      ->required();
  pfaffian_cmd->add_option("--method", pfaffian_args.method,
                           "elimination | combinatorial | both");

  JpdfArgs jpdf_args;
  CLI::App* jpdf_cmd =
      app.add_subcommand("jpdf", "partial eigenvalue density queries");
  jpdf_args.o_n = jpdf_cmd->add_option("--n", jpdf_args.n, "matrix size");
  jpdf_args.o_point = jpdf_cmd->add_option(
      "--point", jpdf_args.point,
      "comma list: reals and re±imi pair representatives");
  jpdf_args.o_sector =
      jpdf_cmd->add_option("--sector", jpdf_args.sector, "L,M sector");
  jpdf_cmd->add_flag("--integrate", jpdf_args.integrate,
                     "integrate the sector density (n <= 2)");
  jpdf_cmd->add_flag("--mc-distribution", jpdf_args.mc_distribution,
                     "sample the real-count distribution");
  jpdf_args.o_samples =
      jpdf_cmd->add_option("--samples", jpdf_args.samples, "MC sample count");
  jpdf_args.o_seed =
      jpdf_cmd->add_option("--seed", jpdf_args.seed, "MC stream seed");
  jpdf_args.o_thr = jpdf_cmd->add_option("--threshold", jpdf_args.threshold,
                                         "classification threshold");
  jpdf_args.o_out =
      jpdf_cmd->add_option("--output", jpdf_args.output, "json or csv");
  jpdf_args.quad.attach(jpdf_cmd);

  VerifyArgs verify_args;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run the identity and end-to-end suites");
  verify_cmd->add_option("suite", verify_args.suite,
                         "pfaffian | identities | inner | end2end | all");
  verify_args.o_out =
      verify_cmd->add_option("--output", verify_args.output, "json or csv");
  verify_args.quad.attach(verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand("average")) return cmd_average(average_args);
    if (app.got_subcommand("pfaffian")) return cmd_pfaffian(pfaffian_args);
    if (app.got_subcommand("jpdf")) return cmd_jpdf(jpdf_args);
    if (verify_args.suite != "all" &&
        std::find(ginavg::verify::suite_names().begin(),
                  ginavg::verify::suite_names().end(), verify_args.suite) ==
            ginavg::verify::suite_names().end())
      throw std::invalid_argument("verify: unknown suite '" +
                                  verify_args.suite + "'");
    return cmd_verify(verify_args);
  } catch (const numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}
