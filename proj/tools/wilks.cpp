// Command-line front end: fit, test, simulate, qq.
//
// Exit codes: 0 success, 1 usage/I-O/parse problems, 2 statistical
// infeasibility (nonexistent MLE, disconnected win digraph, or a requested
// calibration that does not exist). Errors print one JSON object to stderr.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wilks/betamodel.hpp"
#include "wilks/btmodel.hpp"
#include "wilks/errors.hpp"
#include "wilks/graphdata.hpp"
#include "wilks/inference.hpp"
#include "wilks/montecarlo.hpp"
#include "wilks/serialize.hpp"
#include "wilks/types.hpp"

namespace {

using namespace wilks;

struct CliConfig {
  std::string model = "beta";
  std::string input;
  std::string null_kind;
  std::string indices;
  std::string values;
  std::string regime = "auto";
  bool wald = false;
  std::string tol;
  std::uint64_t seed = 1;
  int reps = 1000;
  std::string alpha = "0.05,0.1";
  std::string scenario;
  int n = 200;
  int r = 0;
  double ln_factor = 0.0;
  double c = 0.0;
  int k = 1;
  int reference = 1;
  std::string out;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

// "2..7" ranges and comma lists, 1-based on the command line.
std::vector<int> parse_indices(const std::string& text) {
  std::vector<int> out;
  for (const std::string& part : split(text, ',')) {
    const auto dots = part.find("..");
    if (dots != std::string::npos) {
      const int lo = std::stoi(part.substr(0, dots));
      const int hi = std::stoi(part.substr(dots + 2));
      if (lo < 1 || hi < lo) {
        throw data_error("bad_indices", "bad index range '" + part + "'");
      }
      for (int v = lo; v <= hi; ++v) out.push_back(v - 1);
    } else {
      const int v = std::stoi(part);
      if (v < 1) throw data_error("bad_indices", "indices are 1-based");
      out.push_back(v - 1);
    }
  }
  if (out.empty()) throw data_error("bad_indices", "empty index list");
  return out;
}

// Inline comma list of numbers, or a path to a whitespace-separated file.
std::vector<double> parse_values(const std::string& text) {
  std::vector<double> vals;
  try {
    for (const std::string& part : split(text, ',')) {
      std::size_t pos = 0;
      const double v = std::stod(part, &pos);
      if (pos != part.size()) throw std::invalid_argument(part);
      vals.push_back(v);
    }
    return vals;
  } catch (const std::exception&) {
    vals.clear();
  }
  std::ifstream in(text);
  if (!in) {
    throw data_error("io_error",
                     "--values is neither a number list nor a readable file");
  }
  double v;
  while (in >> v) vals.push_back(v);
  return vals;
}

Tolerance parse_tolerance(const std::string& text) {
  Tolerance tol;
  if (text.empty()) return tol;
  const auto parts = split(text, ',');
  if (parts.size() > 3) {
    throw data_error("bad_tolerance", "--tol takes ABS[,REL[,MAXIT]]");
  }
  if (!parts.empty()) tol.abs_eps = std::stod(parts[0]);
  if (parts.size() > 1) tol.rel_eps = std::stod(parts[1]);
  if (parts.size() > 2) tol.max_iter = std::stoi(parts[2]);
  if (tol.abs_eps <= 0 || tol.rel_eps <= 0 || tol.max_iter < 1) {
    throw data_error("bad_tolerance", "tolerances must be positive");
  }
  return tol;
}

Regime parse_regime(const std::string& text) {
  if (text == "chi2") return Regime::ChiSquare;
  if (text == "normal") return Regime::Normal;
  if (text == "auto") return Regime::Auto;
  throw data_error("bad_regime", "--regime must be chi2, normal, or auto");
}

Schedule parse_schedule(std::string text) {
  for (char& ch : text) ch = static_cast<char>(std::tolower(ch));
  if (text == "h01") return Schedule::H01;
  if (text == "h02") return Schedule::H02;
  if (text == "h03") return Schedule::H03;
  if (text == "h04") return Schedule::H04;
  if (text == "power") return Schedule::Power;
  throw data_error("bad_scenario",
                   "--scenario must be one of H01, H02, H03, H04, power");
}

NullHypothesis parse_null(const CliConfig& cfg) {
  if (cfg.null_kind.empty()) {
    throw data_error("bad_null", "--null {specified|homogeneous} is required");
  }
  std::vector<int> idx = parse_indices(cfg.indices);
  if (cfg.null_kind == "homogeneous") {
    if (!cfg.values.empty()) {
      throw data_error("bad_null", "--values only applies to specified nulls");
    }
    return NullHypothesis::homogeneous(std::move(idx));
  }
  if (cfg.null_kind != "specified") {
    throw data_error("bad_null", "--null must be specified or homogeneous");
  }
  std::vector<double> vals =
      cfg.values.empty() ? std::vector<double>(idx.size(), 0.0)
                         : parse_values(cfg.values);
  return NullHypothesis::specified(std::move(idx), std::move(vals));
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw data_error("io_error", "cannot write " + out_path);
  out << text;
}

SimScenario make_scenario(const CliConfig& cfg) {
  SimScenario s;
  s.model = cfg.model == "bt" ? Model::BT : Model::Beta;
  s.schedule = parse_schedule(cfg.scenario);
  s.n = cfg.n;
  s.ln_factor = cfg.ln_factor;
  s.r = cfg.r;
  s.c = cfg.c;
  s.k_common = cfg.k;
  s.reps = cfg.reps;
  s.master_seed = cfg.seed;
  s.alpha_levels.clear();
  for (const std::string& part : split(cfg.alpha, ',')) {
    s.alpha_levels.push_back(std::stod(part));
  }
  return s;
}

int cmd_fit(const CliConfig& cfg) {
  const Tolerance tol = parse_tolerance(cfg.tol);
  if (cfg.model == "bt") {
    const ComparisonData data = read_comparisons_file(cfg.input);
    const BtFitResult fit = bt_fit_mle(data, tol, cfg.reference - 1);
    emit(bt_fit_result_json(fit), cfg.out);
  } else {
    const UndirectedGraph g = read_edge_list_file(cfg.input);
    const FitResult fit = fit_mle(g, tol);
    emit(fit_result_json(fit, Model::Beta), cfg.out);
  }
  return 0;
}

int cmd_test(const CliConfig& cfg) {
  const Tolerance tol = parse_tolerance(cfg.tol);
  const NullHypothesis null = parse_null(cfg);
  const Regime regime = parse_regime(cfg.regime);
  TestResult res;
  if (cfg.model == "bt") {
    const ComparisonData data = read_comparisons_file(cfg.input);
    res = run_lrt(data, null, regime, tol, cfg.wald, cfg.reference - 1);
  } else {
    const UndirectedGraph g = read_edge_list_file(cfg.input);
    res = run_lrt(g, null, regime, tol, cfg.wald);
  }
  emit(test_result_json(res), cfg.out);
  return 0;
}

int cmd_simulate(const CliConfig& cfg) {
  const SimScenario s = make_scenario(cfg);
  const SimReport report =
      s.schedule == Schedule::Power ? run_power(s) : run_type1(s);
  std::ostringstream csv;
  sim_report_csv(report, csv);
  emit(csv.str(), cfg.out);
  for (const auto& [alpha, rate] : report.lrt_rejection_rates) {
    std::cerr << "alpha=" << alpha << " lrt_rate=" << rate;
    const auto wald = report.wald_rejection_rates.find(alpha);
    if (wald != report.wald_rejection_rates.end()) {
      std::cerr << " wald_rate=" << wald->second;
    }
    std::cerr << " nonexistence=" << report.nonexistence_rate << "\n";
  }
  return 0;
}

int cmd_qq(const CliConfig& cfg) {
  const SimScenario s = make_scenario(cfg);
  const std::vector<QqRow> rows = qq_export(s);
  std::ostringstream csv;
  qq_table_csv(rows, csv);
  emit(csv.str(), cfg.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beta-model and Bradley-Terry fitting, likelihood ratio and "
               "Wald tests, and a seeded Monte Carlo calibration harness"};
  app.require_subcommand(1);
  CliConfig cfg;

  auto add_model = [&cfg](CLI::App* sub) {
    sub->add_option("--model", cfg.model, "beta or bt")
        ->check(CLI::IsMember({"beta", "bt"}));
  };

  CLI::App* fit = app.add_subcommand("fit", "Fit a model by maximum likelihood");
  add_model(fit);
  fit->add_option("--input", cfg.input, "edge list (beta) or comparison CSV (bt)")
      ->required();
  fit->add_option("--reference", cfg.reference,
                  "1-based reference item pinned to 0 (bt)");
  fit->add_option("--tol", cfg.tol, "ABS[,REL[,MAXIT]] solver tolerance");
  fit->add_option("--out", cfg.out, "output path (default stdout)");

  CLI::App* test = app.add_subcommand("test", "Likelihood ratio / Wald test");
  add_model(test);
  test->add_option("--input", cfg.input, "data file")->required();
  test->add_option("--null", cfg.null_kind, "specified or homogeneous")
      ->required();
  test->add_option("--indices", cfg.indices,
                   "1-based tested indices, e.g. 1..5 or 2,4,7")
      ->required();
  test->add_option("--values", cfg.values,
                   "specified-null values: comma list or file");
  test->add_option("--regime", cfg.regime, "chi2, normal, or auto");
  test->add_flag("--wald", cfg.wald, "also run the Wald test");
  test->add_option("--reference", cfg.reference, "1-based reference item (bt)");
  test->add_option("--tol", cfg.tol, "ABS[,REL[,MAXIT]] solver tolerance");
  test->add_option("--out", cfg.out, "output path (default stdout)");

  auto add_scenario = [&](CLI::App* sub) {
    add_model(sub);
    sub->add_option("--scenario", cfg.scenario, "H01, H02, H03, H04, or power")
        ->required();
    sub->add_option("--n", cfg.n, "number of nodes/items");
    sub->add_option("--r", cfg.r, "tested-set size (0 = schedule default)");
    sub->add_option("--ln", cfg.ln_factor, "L_n = ln * log(n)");
    sub->add_option("--c", cfg.c, "power separation");
    sub->add_option("--k", cfg.k, "comparisons per pair (bt)");
    sub->add_option("--reps", cfg.reps, "number of replicates");
    sub->add_option("--seed", cfg.seed, "master seed");
    sub->add_option("--alpha", cfg.alpha, "comma list of levels");
    sub->add_option("--out", cfg.out, "output CSV path (default stdout)");
  };

  CLI::App* simulate =
      app.add_subcommand("simulate", "Type-I error / power study");
  add_scenario(simulate);

  CLI::App* qq = app.add_subcommand("qq", "Normalized-statistic quantile table");
  add_scenario(qq);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << wilks::error_json("usage", e.what());
    return 1;
  }

  try {
    if (app.got_subcommand("fit")) return cmd_fit(cfg);
    if (app.got_subcommand("test")) return cmd_test(cfg);
    if (app.got_subcommand("simulate")) return cmd_simulate(cfg);
    if (app.got_subcommand("qq")) return cmd_qq(cfg);
    std::cerr << wilks::error_json("usage", "no subcommand");
    return 1;
  } catch (const wilks::statistical_error& e) {
    std::cerr << wilks::error_json(e.code(), e.what());
    return 2;
  } catch (const wilks::data_error& e) {
    std::cerr << wilks::error_json(e.code(), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::cerr << wilks::error_json("error", e.what());
    return 1;
  }
}
