#include "deeplq/experiments.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

namespace deeplq {

namespace {

bool same_values(const TimeVarying& a, const TimeVarying& b) {
  if (a.breakpoints() != b.breakpoints() || a.values().size() != b.values().size()) return false;
  for (std::size_t k = 0; k < a.values().size(); ++k) {
    if (a.values()[k] != b.values()[k]) return false;
  }
  return true;
}

// Influence values of the shifted exponential moment: (Y_m - Ybar) / (lambda Ybar).
std::vector<double> rs_influence(const std::vector<double>& costs, double lambda) {
  const double M = static_cast<double>(costs.size());
  std::vector<double> out(costs.size());
  if (lambda == 0.0) {
    double mean = 0.0;
    for (double c : costs) mean += c / M;
    for (std::size_t m = 0; m < costs.size(); ++m) out[m] = costs[m] - mean;
    return out;
  }
  double jmax = costs.front();
  for (double c : costs) jmax = std::max(jmax, c);
  double ybar = 0.0;
  for (double c : costs) ybar += std::exp(lambda * (c - jmax)) / M;
  for (std::size_t m = 0; m < costs.size(); ++m) {
    out[m] = (std::exp(lambda * (costs[m] - jmax)) - ybar) / (lambda * ybar);
  }
  return out;
}

double stderr_of(const std::vector<double>& psi) {
  const double M = static_cast<double>(psi.size());
  double mean = 0.0;
  for (double v : psi) mean += v / M;
  double ss = 0.0;
  for (double v : psi) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (M - 1.0) / M);
}

std::vector<int> por_targets(const TeamModel& model) {
  std::vector<int> targets;
  for (int s = 0; s < model.num_subs(); ++s) {
    if (model.subs[s].n > 1) targets.push_back(s);
  }
  if (targets.empty()) targets.push_back(0);
  return targets;
}

nlohmann::json estimate_json(const CostEstimate& e) {
  return {{"replicates", e.replicates},
          {"lambda", e.lambda},
          {"mean", e.mean},
          {"mean_stderr", e.mean_stderr},
          {"variance", e.variance},
          {"risk_sensitive", e.risk_sensitive},
          {"risk_sensitive_stderr", e.risk_sensitive_stderr}};
}

}  // namespace

TeamModel resize_population(const TeamModel& model, int s, int n) {
  if (s < 0 || s >= model.num_subs()) throw InputError("resize_population: sub-population out of range");
  if (n < 1) throw InputError("resize_population: n must be positive");
  TeamModel out = model;
  auto& sub = out.subs[s];
  if (sub.f != 1) throw DomainError("resizing needs a single feature");
  const double a = sub.alpha(0, 0);
  if (std::abs(std::abs(a) - 1.0) > 1e-12 || (sub.alpha.array() != a).any()) {
    throw DomainError("resizing needs uniform influence factors (alpha = 1 for every agent)");
  }
  for (int i = 1; i < sub.n; ++i) {
    if (!sub.tracking.empty() && !same_values(sub.tracking[i], sub.tracking[0])) {
      throw DomainError("resizing needs identical tracking signals");
    }
    if (sub.init.mean[i] != sub.init.mean[0]) throw DomainError("resizing needs identical initial means");
    if (sub.beta.size() && sub.beta(i) != sub.beta(0)) throw DomainError("resizing needs identical beta");
  }
  sub.n = n;
  sub.alpha = Mat::Constant(n, 1, a);
  if (!sub.tracking.empty()) sub.tracking.assign(static_cast<std::size_t>(n), sub.tracking[0]);
  sub.init.mean.assign(static_cast<std::size_t>(n), sub.init.mean[0]);
  if (sub.beta.size()) sub.beta = Vec::Constant(n, sub.beta(0));
  return out;
}

PairedDifference risk_sensitive_difference(const std::vector<double>& a, const std::vector<double>& b,
                                           double lambda) {
  if (a.size() != b.size() || a.size() < 2) throw InputError("paired samples must have equal size >= 2");
  const auto ea = summarize_costs(a, lambda);
  const auto eb = summarize_costs(b, lambda);
  const auto pa = rs_influence(a, lambda);
  const auto pb = rs_influence(b, lambda);
  std::vector<double> psi(a.size());
  for (std::size_t m = 0; m < a.size(); ++m) psi[m] = pa[m] - pb[m];
  return {ea.risk_sensitive - eb.risk_sensitive, stderr_of(psi)};
}

PairedDifference robustness_gap(const std::vector<double>& costs, double lambda) {
  const auto e = summarize_costs(costs, lambda);
  const auto p = rs_influence(costs, lambda);
  std::vector<double> psi(costs.size());
  for (std::size_t m = 0; m < costs.size(); ++m) psi[m] = p[m] - (costs[m] - e.mean);
  return {e.risk_sensitive - e.mean, stderr_of(psi)};
}

std::vector<PorRow> price_of_robustness(const TeamModel& model, double lambda, const std::vector<int>& n_sweep,
                                        const ExperimentOptions& options) {
  if (n_sweep.empty()) throw InputError("the n sweep is empty");
  if (!(lambda >= 0.0)) throw InputError("lambda must be non-negative");
  const auto targets = por_targets(model);
  std::vector<PorRow> rows;
  for (int n : n_sweep) {
    PorRow row;
    row.n = n;
    TeamModel m = model;
    m.risk_factor = lambda;
    for (int s : targets) m = resize_population(m, s, n);
    const auto report = validate_model(m);
    if (!report.ok()) {
      row.note = "skipped: " + report.failures().front()->name;
      rows.push_back(row);
      continue;
    }
    DeepRiccatiOptions ro;
    ro.steps = options.riccati_steps;
    const auto strategy = make_dss_strategy(m, make_gain_schedule(m, ro));
    SimulationOptions so;
    so.dt = options.dt;
    const auto costs = sample_costs(m, *strategy, options.replicates, so, options.seed);
    row.estimate = summarize_costs(costs, lambda);
    const auto gap = robustness_gap(costs, lambda);
    row.por = gap.value;
    row.por_stderr = gap.stderr_;
    row.computed = true;
    rows.push_back(row);
  }
  return rows;
}

std::vector<PoiRow> price_of_information(const TeamModel& model, const std::vector<StrategyKind>& filters,
                                         const std::vector<int>& n_sweep, const ExperimentOptions& options) {
  if (n_sweep.empty()) throw InputError("the n sweep is empty");
  std::vector<PoiRow> rows;
  for (int n : n_sweep) {
    TeamModel m = model;
    for (int s = 0; s < m.num_subs(); ++s) {
      if (!m.is_shared(s)) m = resize_population(m, s, n);
    }
    const auto report = validate_model(m);
    SimulationOptions so;
    so.dt = options.dt;
    DeepRiccatiOptions ro;
    ro.steps = options.riccati_steps;
    std::vector<double> optimal;
    CostEstimate optimal_est;
    if (report.ok()) {
      const auto dss = make_dss_strategy(m, make_gain_schedule(m, ro));
      optimal = sample_costs(m, *dss, options.replicates, so, options.seed);
      optimal_est = summarize_costs(optimal, m.risk_factor);
    }
    for (auto kind : filters) {
      PoiRow row;
      row.n = n;
      row.filter = kind;
      if (!report.ok()) {
        row.note = "skipped: " + report.failures().front()->name;
        rows.push_back(row);
        continue;
      }
      DeepRiccatiOptions fo = ro;
      if (kind == StrategyKind::PdssInfinite) fo.assembly = infinite_population_assembly(m);
      const auto filter = make_pdss_strategy(m, make_gain_schedule(m, fo), kind);
      const auto costs = sample_costs(m, *filter, options.replicates, so, options.seed);
      row.optimal = optimal_est;
      row.filtered = summarize_costs(costs, m.risk_factor);
      const auto diff = risk_sensitive_difference(costs, optimal, m.risk_factor);
      row.poi = diff.value;
      row.poi_stderr = diff.stderr_;
      row.computed = true;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string to_json(const CostEstimate& e) { return estimate_json(e).dump(2); }

std::string por_report_json(const std::vector<PorRow>& rows, double lambda, const ExperimentOptions& options) {
  nlohmann::json j;
  j["experiment"] = "price_of_robustness";
  j["lambda"] = lambda;
  j["replicates"] = options.replicates;
  j["dt"] = options.dt;
  j["seed"] = options.seed;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row{{"n", r.n}, {"computed", r.computed}};
    if (!r.note.empty()) row["note"] = r.note;
    if (r.computed) {
      row["por"] = r.por;
      row["por_stderr"] = r.por_stderr;
      row["estimate"] = estimate_json(r.estimate);
    }
    j["rows"].push_back(row);
  }
  return j.dump(2);
}

std::string poi_report_json(const std::vector<PoiRow>& rows, double lambda, const ExperimentOptions& options) {
  nlohmann::json j;
  j["experiment"] = "price_of_information";
  j["lambda"] = lambda;
  j["replicates"] = options.replicates;
  j["dt"] = options.dt;
  j["seed"] = options.seed;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row{{"n", r.n}, {"filter", to_string(r.filter)}, {"computed", r.computed}};
    if (!r.note.empty()) row["note"] = r.note;
    if (r.computed) {
      row["poi"] = r.poi;
      row["poi_stderr"] = r.poi_stderr;
      row["optimal"] = estimate_json(r.optimal);
      row["filtered"] = estimate_json(r.filtered);
    }
    j["rows"].push_back(row);
  }
  return j.dump(2);
}

}  // namespace deeplq
