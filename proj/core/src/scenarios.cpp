#include "deeplq/scenarios.hpp"

#include <cmath>
#include <random>

namespace deeplq {

namespace {

SubPopulation scalar_sub(int n, double a, double b, double c, double q, double r, int deep_x, int deep_u) {
  SubPopulation sub;
  sub.n = n;
  sub.f = 1;
  sub.A = TimeVarying::scalar(a);
  sub.B = TimeVarying::scalar(b);
  sub.C = TimeVarying::scalar(c);
  sub.Q = TimeVarying::scalar(q);
  sub.R = TimeVarying::scalar(r);
  sub.Abar = {TimeVarying::zeros(1, deep_x)};
  sub.Bbar = {TimeVarying::zeros(1, deep_u)};
  sub.Qbar = TimeVarying::zeros(deep_x, deep_x);
  sub.Rbar = TimeVarying::zeros(deep_u, deep_u);
  sub.alpha = Mat::Ones(n, 1);
  sub.init.mean.assign(static_cast<std::size_t>(n), Vec::Zero(1));
  return sub;
}

}  // namespace

std::vector<double> supply_chain_raw_alpha(char variant, int n2) {
  std::vector<double> alpha(static_cast<std::size_t>(n2), 0.1);
  switch (variant) {
    case 'a':
      alpha[0] = 4.45;
      break;
    case 'b':
      alpha[0] = alpha[1] = 3.14;
      break;
    case 'c':
      for (int i = 0; i < n2 / 2; ++i) alpha[i] = 1.41;
      break;
    case 'd':
      alpha.assign(alpha.size(), 1.0);
      break;
    default:
      throw InputError(std::string("unknown supply-chain variant '") + variant + "' (expected a, b, c or d)");
  }
  return alpha;
}

TeamModel builtin_supply_chain(char variant, int n2, std::uint64_t seed, bool exact_normalization) {
  if (n2 < 2) throw InputError("the supply chain needs at least two distributors");
  auto raw = supply_chain_raw_alpha(variant, n2);
  double scale = 1.0;
  if (exact_normalization) {
    double ss = 0.0;
    for (double a : raw) ss += a * a;
    scale = 1.0 / std::sqrt(ss / n2);
  }

  TeamModel m;
  m.risk_factor = 1.0;
  m.horizon = 10.0;
  m.shared_set = {0, 1};

  SubPopulation supplier = scalar_sub(1, 0.4, 0.8, 0.6, 1.0, 1.0, 2, 2);
  // 0.5 n2 (x^1 - xbar(2))^2 over the stacked deep state (xbar(1) = x^1).
  Mat qbar(2, 2);
  qbar << 1.0, -1.0, -1.0, 1.0;
  supplier.Qbar = Mat(0.5 * n2 * qbar);
  supplier.mu = 1.0 / (1.0 + n2);

  SubPopulation dist = scalar_sub(n2, 2.0, 1.0, 1.0, 1.0, 0.1, 2, 2);
  dist.mu = n2 / (1.0 + n2);
  for (int i = 0; i < n2; ++i) dist.alpha(i, 0) = scale * raw[i];
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < n2; ++i) dist.tracking.push_back(TimeVarying::scalar(unif(rng)));

  m.subs = {supplier, dist};
  return m;
}

TeamModel builtin_supplier_only() {
  TeamModel m;
  m.risk_factor = 1.0;
  m.horizon = 2.0;
  m.shared_set = {0};
  SubPopulation sub = scalar_sub(1, 0.4, 0.8, 0.6, 1.0, 1.0, 1, 1);
  sub.mu = 0.5;
  sub.init.mean = {Vec::Ones(1)};
  m.subs = {sub};
  return m;
}

TeamModel builtin_por_scalar(int n, double lambda) {
  if (n < 1) throw InputError("n must be positive");
  TeamModel m;
  m.risk_factor = lambda;
  m.horizon = 1.0;
  m.shared_set = {0};
  SubPopulation sub = scalar_sub(n, 1.0, 1.0, 1.0, 1.0, 1.0, 1, 1);
  sub.init.mean.assign(static_cast<std::size_t>(n), Vec::Ones(1));
  m.subs = {sub};
  return m;
}

TeamModel builtin_poi_coupled(int n, double lambda) {
  if (n < 1) throw InputError("n must be positive");
  TeamModel m;
  m.risk_factor = lambda;
  m.horizon = 1.0;
  SubPopulation sub = scalar_sub(n, 0.0, 1.0, 1.0, 1.0, 1.0, 1, 1);
  sub.Abar = {TimeVarying::scalar(1.0)};
  sub.Qbar = TimeVarying::scalar(1.0);
  sub.init.kind = InitialState::Kind::Gaussian;
  sub.init.mean.assign(static_cast<std::size_t>(n), Vec::Ones(1));
  sub.init.cov = Mat::Identity(1, 1);
  m.subs = {sub};
  return m;
}

TeamModel builtin_three_agent() {
  TeamModel m;
  m.risk_factor = 0.1;
  m.horizon = 1.0;
  m.shared_set = {0, 1};

  SubPopulation lead = scalar_sub(1, 0.5, 1.0, 0.4, 1.0, 1.0, 2, 2);
  Mat ab(1, 2);
  ab << 0.0, 0.3;
  lead.Abar = {ab};
  Mat qb(2, 2);
  qb << 1.0, -1.0, -1.0, 1.0;
  lead.Qbar = qb;
  lead.mu = 0.4;
  lead.init.mean = {Vec::Constant(1, 1.0)};

  SubPopulation pair = scalar_sub(2, -0.2, 0.7, 0.5, 2.0, 0.5, 2, 2);
  Mat pa(1, 2);
  pa << 0.2, -0.1;
  pair.Abar = {pa};
  Mat pb(1, 2);
  pb << 0.0, 0.1;
  pair.Bbar = {pb};
  Mat prb = Mat::Zero(2, 2);
  prb(1, 1) = 0.2;
  pair.Rbar = prb;
  pair.mu = 0.6;
  pair.alpha.resize(2, 1);
  pair.alpha << 1.0, 1.0;
  pair.tracking = {TimeVarying::scalar(0.5), TimeVarying::scalar(0.5)};
  pair.init.mean = {Vec::Constant(1, -0.5), Vec::Constant(1, 0.5)};

  m.subs = {lead, pair};
  return m;
}

std::vector<std::string> builtin_scenario_names() {
  return {"supply-chain", "supplier-only", "por-scalar", "poi-coupled", "three-agent"};
}

TeamModel builtin_scenario(const std::string& name, const ScenarioOptions& options) {
  if (name == "supply-chain") return builtin_supply_chain(options.variant, options.n2, options.seed);
  if (name == "supplier-only") return builtin_supplier_only();
  if (name == "por-scalar") return builtin_por_scalar();
  if (name == "poi-coupled") return builtin_poi_coupled();
  if (name == "three-agent") return builtin_three_agent();
  std::string known;
  for (const auto& n : builtin_scenario_names()) known += (known.empty() ? "" : ", ") + n;
  throw InputError("unknown scenario '" + name + "' (known: " + known + ")");
}

}  // namespace deeplq
