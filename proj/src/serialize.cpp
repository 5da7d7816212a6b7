#include "wilks/serialize.hpp"

#include <cinttypes>
#include <cstdio>
#include <ostream>

#include "json.hpp"

namespace wilks {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

const char* model_name(Model m) { return m == Model::Beta ? "beta" : "bt"; }

const char* schedule_name(Schedule s) {
  switch (s) {
    case Schedule::H01: return "H01";
    case Schedule::H02: return "H02";
    case Schedule::H03: return "H03";
    case Schedule::H04: return "H04";
    case Schedule::Power: return "power";
  }
  return "?";
}

ordered null_json(const NullHypothesis& h) {
  ordered j;
  j["kind"] = h.kind == NullHypothesis::Kind::Specified ? "specified"
                                                        : "homogeneous";
  std::vector<int> one_based;
  one_based.reserve(h.indices.size());
  for (int k : h.indices) one_based.push_back(k + 1);
  j["indices"] = one_based;
  if (h.kind == NullHypothesis::Kind::Specified) j["values"] = h.values;
  return j;
}

ordered fit_json_common(const FitResult& fit, Model model) {
  ordered j;
  j["model"] = model_name(model);
  j["n"] = fit.beta_hat.size();
  j["beta"] = fit.beta_hat.values;
  j["se"] = fit.se;
  j["loglik"] = fit.loglik;
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  j["residual_inf"] = fit.residual_inf;
  j["b_n"] = fit.b_n;
  j["c_n"] = fit.c_n;
  if (fit.restricted_to) j["null"] = null_json(*fit.restricted_to);
  return j;
}

// Fixed formatting keeps replicate CSVs byte-identical across runs.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string fit_result_json(const FitResult& fit, Model model) {
  return fit_json_common(fit, model).dump(2) + "\n";
}

std::string bt_fit_result_json(const BtFitResult& fit) {
  ordered j = fit_json_common(fit, Model::BT);
  j["reference"] = fit.reference + 1;
  return j.dump(2) + "\n";
}

std::string test_result_json(const TestResult& res) {
  ordered j;
  j["model"] = model_name(res.model);
  j["null"] = null_json(res.null);
  j["lrt_stat"] = res.lrt_stat;
  if (res.regime == Regime::ChiSquare) {
    j["regime"] = "chi2";
    j["df"] = res.df;
  } else {
    j["regime"] = "normal";
    j["r"] = res.r;
    j["z"] = res.z;
  }
  j["p_value"] = res.p_value;
  if (res.wald_stat) {
    j["wald"] = ordered{{"stat", *res.wald_stat}, {"p", *res.wald_p}};
  }
  j["warnings"] = res.warnings;
  return j.dump(2) + "\n";
}

std::string error_json(const std::string& code, const std::string& message) {
  ordered j;
  j["error"] = ordered{{"code", code}, {"message", message}};
  return j.dump() + "\n";
}

void sim_report_csv(const SimReport& report, std::ostream& out) {
  const SimScenario& s = report.scenario;
  out << "model,schedule,n,r,ln_factor,c,k,reps,seed,regime,alpha,"
         "lrt_rejection_rate,wald_rejection_rate,nonexistence_rate\n";
  for (const auto& [alpha, rate] : report.lrt_rejection_rates) {
    out << model_name(s.model) << "," << schedule_name(s.schedule) << ","
        << s.n << "," << s.effective_r() << "," << fmt(s.ln_factor) << ","
        << fmt(s.c) << "," << s.k_common << "," << s.reps << ","
        << s.master_seed << "," << report.regime << "," << fmt(alpha) << ","
        << fmt(rate) << ",";
    const auto wald = report.wald_rejection_rates.find(alpha);
    if (wald != report.wald_rejection_rates.end()) out << fmt(wald->second);
    out << "," << fmt(report.nonexistence_rate) << "\n";
  }
}

void qq_table_csv(const std::vector<QqRow>& rows, std::ostream& out) {
  out << "empirical,normal_q,chi2_q\n";
  for (const QqRow& row : rows) {
    out << fmt(row.empirical) << "," << fmt(row.normal_q) << ","
        << fmt(row.chi2_q) << "\n";
  }
}

}  // namespace wilks
