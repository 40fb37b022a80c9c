#include "deeplq/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace deeplq {

namespace {

double min_eig(const Mat& m) {
  const Mat sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double asymmetry(const Mat& m) {
  const double scale = std::max(1.0, m.norm());
  return (m - m.transpose()).norm() / scale;
}

std::string shape(const TimeVarying& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

std::string label(const char* what, int s) {
  std::ostringstream os;
  os << what << "(" << s + 1 << ")";
  return os.str();
}

std::string label(const char* what, int s, int j) {
  std::ostringstream os;
  os << what << "^" << j + 1 << "(" << s + 1 << ")";
  return os.str();
}

// Collects dimension problems; returns an empty list when consistent.
std::vector<std::string> dimension_problems(const TeamModel& model) {
  std::vector<std::string> out;
  auto expect = [&](const TimeVarying& m, Eigen::Index r, Eigen::Index c, const std::string& name) {
    if (m.empty()) {
      out.push_back(name + " is missing");
    } else if (m.rows() != r || m.cols() != c) {
      std::ostringstream os;
      os << name << " is " << shape(m) << ", expected " << r << "x" << c;
      out.push_back(os.str());
    }
  };
  if (model.subs.empty()) out.emplace_back("model has no sub-populations");
  if (!(model.horizon > 0.0)) out.emplace_back("horizon must be positive");
  if (!(model.risk_factor >= 0.0)) out.emplace_back("risk_factor must be non-negative");
  for (int s : model.shared_set) {
    if (s < 0 || s >= model.num_subs()) out.push_back("shared_set index out of range");
  }

  int total_x = 0, total_u = 0;
  for (const auto& sub : model.subs) {
    if (sub.n < 1 || sub.f < 1 || sub.dx < 1 || sub.du < 1) {
      out.emplace_back("n, f, dx, du must be positive");
      return out;
    }
    total_x += sub.f * sub.dx;
    total_u += sub.f * sub.du;
  }

  for (int s = 0; s < model.num_subs(); ++s) {
    const auto& sub = model.subs[s];
    if (sub.f > sub.n) out.push_back(label("f > n in sub-population", s));
    expect(sub.A, sub.dx, sub.dx, label("A", s));
    expect(sub.B, sub.dx, sub.du, label("B", s));
    expect(sub.C, sub.dx, sub.dx, label("C", s));
    expect(sub.Q, sub.dx, sub.dx, label("Q", s));
    expect(sub.R, sub.du, sub.du, label("R", s));
    if (static_cast<int>(sub.Abar.size()) != sub.f) {
      out.push_back(label("Abar", s) + " must have f entries");
    } else {
      for (int j = 0; j < sub.f; ++j) expect(sub.Abar[j], sub.dx, total_x, label("Abar", s, j));
    }
    if (static_cast<int>(sub.Bbar.size()) != sub.f) {
      out.push_back(label("Bbar", s) + " must have f entries");
    } else {
      for (int j = 0; j < sub.f; ++j) expect(sub.Bbar[j], sub.dx, total_u, label("Bbar", s, j));
    }
    expect(sub.Qbar, total_x, total_x, label("Qbar", s));
    expect(sub.Rbar, total_u, total_u, label("Rbar", s));
    if (sub.alpha.rows() != sub.n || sub.alpha.cols() != sub.f) {
      out.push_back(label("alpha", s) + " must be n x f");
    }
    if (!(sub.mu > 0.0)) out.push_back(label("mu", s) + " must be positive");
    if (!sub.tracking.empty()) {
      if (static_cast<int>(sub.tracking.size()) != sub.n) {
        out.push_back(label("tracking", s) + " must have n entries");
      } else {
        for (int i = 0; i < sub.n; ++i) expect(sub.tracking[i], sub.dx, 1, label("tracking", s));
      }
    }
    if (sub.beta.size() != 0) {
      if (sub.beta.size() != sub.n) {
        out.push_back(label("beta", s) + " must have n entries");
      } else if ((sub.beta.array() <= 0.0).any()) {
        out.push_back(label("beta", s) + " must be positive");
      }
    }
    if (static_cast<int>(sub.init.mean.size()) != sub.n) {
      out.push_back(label("init mean", s) + " must have n entries");
    } else {
      for (const auto& m : sub.init.mean) {
        if (m.size() != sub.dx) out.push_back(label("init mean", s) + " entries must be dx vectors");
      }
    }
    if (sub.init.kind == InitialState::Kind::Gaussian &&
        (sub.init.cov.rows() != sub.dx || sub.init.cov.cols() != sub.dx)) {
      out.push_back(label("init cov", s) + " must be dx x dx");
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

bool TeamModel::is_shared(int s) const {
  return std::find(shared_set.begin(), shared_set.end(), s) != shared_set.end();
}

std::vector<double> TeamModel::breakpoints() const {
  std::set<double> pts{0.0};
  auto add = [&](const TimeVarying& m) {
    for (double t : m.breakpoints()) {
      if (t > 0.0 && t <= horizon) pts.insert(t);
    }
  };
  for (const auto& sub : subs) {
    for (const auto* m : {&sub.A, &sub.B, &sub.C, &sub.Q, &sub.R, &sub.Qbar, &sub.Rbar}) add(*m);
    for (const auto& m : sub.Abar) add(m);
    for (const auto& m : sub.Bbar) add(m);
  }
  return {pts.begin(), pts.end()};
}

bool TeamModel::is_time_invariant() const {
  for (const auto& sub : subs) {
    for (const auto* m : {&sub.A, &sub.B, &sub.C, &sub.Q, &sub.R, &sub.Qbar, &sub.Rbar}) {
      if (!m->is_constant()) return false;
    }
    for (const auto& m : sub.Abar) {
      if (!m.is_constant()) return false;
    }
    for (const auto& m : sub.Bbar) {
      if (!m.is_constant()) return false;
    }
  }
  return true;
}

Layout::Layout(const TeamModel& model) {
  for (const auto& sub : model.subs) {
    dx_.push_back(sub.dx);
    du_.push_back(sub.du);
    deep_x_.push_back(total_deep_x_);
    deep_u_.push_back(total_deep_u_);
    joint_x_.push_back(total_joint_x_);
    joint_u_.push_back(total_joint_u_);
    agent_.push_back(total_agents_);
    total_deep_x_ += sub.f * sub.dx;
    total_deep_u_ += sub.f * sub.du;
    total_joint_x_ += sub.n * sub.dx;
    total_joint_u_ += sub.n * sub.du;
    total_agents_ += sub.n;
  }
}

// ---------------------------------------------------------------------------

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ValidationCheck& c) { return c.passed || !c.hard; });
}

std::vector<const ValidationCheck*> ValidationReport::failures() const {
  std::vector<const ValidationCheck*> out;
  for (const auto& c : checks) {
    if (!c.passed && c.hard) out.push_back(&c);
  }
  return out;
}

std::vector<const ValidationCheck*> ValidationReport::warnings() const {
  std::vector<const ValidationCheck*> out;
  for (const auto& c : checks) {
    if (!c.passed && !c.hard) out.push_back(&c);
  }
  return out;
}

ValidationReport validate_model(const TeamModel& model, const ValidationOptions& options) {
  ValidationReport report;
  const auto problems = dimension_problems(model);
  {
    ValidationCheck c{"dimensions", problems.empty(), true, static_cast<double>(problems.size()), ""};
    for (const auto& p : problems) c.detail += (c.detail.empty() ? "" : "; ") + p;
    report.checks.push_back(std::move(c));
  }
  if (!problems.empty()) return report;

  const double lambda = model.risk_factor;
  const int S = model.num_subs();

  for (int s = 0; s < S; ++s) {
    const auto& sub = model.subs[s];
    const Mat gram = sub.alpha.transpose() * sub.alpha / static_cast<double>(sub.n);
    for (int j = 0; j < sub.f; ++j) {
      for (int jp = j; jp < sub.f; ++jp) {
        const double target = j == jp ? 1.0 : 0.0;
        const double err = std::abs(gram(j, jp) - target);
        std::ostringstream name;
        name << "orthonormality(s=" << s + 1 << ",j=" << j + 1 << ",j'=" << jp + 1 << ")";
        report.checks.push_back(
            {name.str(), err <= options.tol_orth, !options.orth_warn_only, err,
             err <= options.tol_orth ? "" : "(1/n) sum alpha alpha deviates from the identity"});
      }
    }
    if (sub.beta.size() != 0) {
      const Mat w = sub.alpha.array().colwise() / sub.beta.array().sqrt();
      const double err = (w.transpose() * w / static_cast<double>(sub.n) -
                          Mat::Identity(sub.f, sub.f)).cwiseAbs().maxCoeff();
      report.checks.push_back({label("beta-normalization", s), err <= options.tol_orth, false, err,
                               "needed only for the optimization-factor strategy"});
    }
    if (!model.is_shared(s) && sub.n > 1) {
      double spread = 0.0;
      for (const auto& m : sub.init.mean) spread = std::max(spread, (m - sub.init.mean.front()).norm());
      report.checks.push_back({label("identical-initial-means", s), spread <= 1e-12, false, spread,
                               "PDSS estimators assume identical means outside the shared set"});
    }
  }

  double worst_q = INFINITY, worst_r = INFINITY, worst_qbar = INFINITY, worst_rbar = INFINITY;
  double worst_b_local = INFINITY, worst_b_global = INFINITY, worst_sym = 0.0;
  std::string at_b_local, at_b_global;
  for (double t : model.breakpoints()) {
    for (int s = 0; s < S; ++s) {
      const auto& sub = model.subs[s];
      const Mat& Q = sub.Q.at(t);
      const Mat& R = sub.R.at(t);
      worst_sym = std::max({worst_sym, asymmetry(Q), asymmetry(R), asymmetry(sub.Qbar.at(t)),
                            asymmetry(sub.Rbar.at(t))});
      worst_q = std::min(worst_q, min_eig(Q));
      const double r_min = min_eig(R);
      worst_r = std::min(worst_r, r_min);
      if (lambda > 0.0 && r_min > 0.0) {
        const Mat& B = sub.B.at(t);
        const Mat& C = sub.C.at(t);
        const Mat m = B * R.ldlt().solve(B.transpose()) -
                      2.0 * lambda * sub.mu / sub.n * C * C.transpose();
        const double e = min_eig(m);
        if (e < worst_b_local) {
          worst_b_local = e;
          std::ostringstream os;
          os << "s=" << s + 1 << ", t=" << t;
          at_b_local = os.str();
        }
      }
    }
    const auto pm = assemble_population_matrices(model, t);
    worst_qbar = std::min(worst_qbar, min_eig(pm.Q));
    const double rbar_min = min_eig(pm.R);
    worst_rbar = std::min(worst_rbar, rbar_min);
    if (lambda > 0.0 && rbar_min > 0.0) {
      const Mat m = pm.B * pm.R.ldlt().solve(pm.B.transpose()) - 2.0 * lambda * pm.Sigma;
      const double e = min_eig(m);
      if (e < worst_b_global) {
        worst_b_global = e;
        std::ostringstream os;
        os << "t=" << t;
        at_b_global = os.str();
      }
    }
  }

  const double psd_tol = -1e-12;
  report.checks.push_back({"symmetry(Q,R,Qbar,Rbar)", worst_sym <= 1e-10, true, worst_sym, ""});
  report.checks.push_back({"Q(s) positive semi-definite", worst_q >= psd_tol, true, worst_q,
                           "minimum eigenvalue"});
  report.checks.push_back({"R(s) positive definite", worst_r > 0.0, true, worst_r, "minimum eigenvalue"});
  report.checks.push_back({"Qbar (population) positive semi-definite", worst_qbar >= psd_tol, true,
                           worst_qbar, "minimum eigenvalue"});
  report.checks.push_back({"Rbar (population) positive definite", worst_rbar > 0.0, true, worst_rbar,
                           "minimum eigenvalue"});
  if (lambda > 0.0) {
    report.checks.push_back({"risk condition local: B R^-1 B' - 2 lambda (mu/n) Sigma_w > 0",
                             worst_b_local > 0.0, true, worst_b_local,
                             "minimum eigenvalue at " + at_b_local});
    report.checks.push_back({"risk condition global: Bbar Rbar^-1 Bbar' - 2 lambda Sigmabar_w > 0",
                             worst_b_global > 0.0, true, worst_b_global,
                             "minimum eigenvalue at " + at_b_global});
  } else {
    report.checks.push_back({"risk condition", true, true, 0.0, "not required at lambda = 0"});
  }
  return report;
}

void require_valid(const TeamModel& model, const ValidationOptions& options) {
  const auto report = validate_model(model, options);
  const auto failed = report.failures();
  if (!failed.empty()) {
    std::ostringstream os;
    os << "model validation failed: " << failed.front()->name;
    if (!failed.front()->detail.empty()) os << " (" << failed.front()->detail << ")";
    if (failed.front()->name.rfind("dimensions", 0) == 0) throw InputError(os.str());
    throw DomainError(os.str());
  }
}

// ---------------------------------------------------------------------------

PopulationMatrices assemble_population_matrices(const TeamModel& model, double t,
                                                const AssemblyOptions& options) {
  const Layout lay(model);
  const int Dx = lay.deep_x_dim();
  const int Du = lay.deep_u_dim();
  PopulationMatrices pm;
  pm.A = Mat::Zero(Dx, Dx);
  pm.B = Mat::Zero(Dx, Du);
  pm.Q_track = Mat::Zero(Dx, Dx);
  pm.R = Mat::Zero(Du, Du);
  pm.Sigma = Mat::Zero(Dx, Dx);
  pm.C = Mat::Zero(Dx, Dx);
  Mat Qcouple = Mat::Zero(Dx, Dx);

  for (int s = 0; s < model.num_subs(); ++s) {
    const auto& sub = model.subs[s];
    const Mat& A = sub.A.at(t);
    const Mat& B = sub.B.at(t);
    const Mat& C = sub.C.at(t);
    const Mat& Q = sub.Q.at(t);
    const Mat& R = sub.R.at(t);
    const Mat& Qbar = sub.Qbar.at(t);
    const Mat& Rbar = sub.Rbar.at(t);
    if (Qbar.rows() != Dx || Qbar.cols() != Dx) throw InputError(label("Qbar", s) + " has wrong size");
    if (Rbar.rows() != Du || Rbar.cols() != Du) throw InputError(label("Rbar", s) + " has wrong size");
    const bool infinite = s < static_cast<int>(options.infinite_population.size()) &&
                          options.infinite_population[s];
    const double noise_scale = infinite ? 0.0 : 1.0 / sub.n;
    const Mat Sw = C * C.transpose();
    for (int j = 0; j < sub.f; ++j) {
      const int rx = lay.deep_x(s, j);
      const int ru = lay.deep_u(s, j);
      const Mat& Abar = sub.Abar[j].at(t);
      const Mat& Bbar = sub.Bbar[j].at(t);
      if (Abar.rows() != sub.dx || Abar.cols() != Dx) throw InputError(label("Abar", s, j) + " has wrong size");
      if (Bbar.rows() != sub.dx || Bbar.cols() != Du) throw InputError(label("Bbar", s, j) + " has wrong size");
      pm.A.block(rx, 0, sub.dx, Dx) += Abar;
      pm.A.block(rx, rx, sub.dx, sub.dx) += A;
      pm.B.block(rx, 0, sub.dx, Du) += Bbar;
      pm.B.block(rx, ru, sub.dx, sub.du) += B;
      pm.Q_track.block(rx, rx, sub.dx, sub.dx) = sub.mu * Q;
      pm.R.block(ru, ru, sub.du, sub.du) += sub.mu * R;
      pm.Sigma.block(rx, rx, sub.dx, sub.dx) = noise_scale * Sw;
      pm.C.block(rx, rx, sub.dx, sub.dx) = C;
    }
    const double weight = sub.mu * (options.use_beta ? mean_beta(sub) : 1.0);
    Qcouple += weight * Qbar;
    pm.R += weight * Rbar;
  }
  pm.Q = pm.Q_track + Qcouple;
  return pm;
}

Mat sub_rows(const TeamModel& model, const Mat& m, int s) {
  const Layout lay(model);
  const auto& sub = model.subs[s];
  const bool u_rows = m.rows() == lay.deep_u_dim() && m.rows() != lay.deep_x_dim();
  const int start = u_rows ? lay.deep_u(s) : lay.deep_x(s);
  const int rows = sub.f * (u_rows ? sub.du : sub.dx);
  return m.middleRows(start, rows);
}

// ---------------------------------------------------------------------------

CentralizedSystem assemble_centralized(const TeamModel& model, double t,
                                       const CentralizedOptions& options) {
  const Layout lay(model);
  const int Nx = lay.joint_x_dim();
  const int Nu = lay.joint_u_dim();
  if (Nx > options.max_joint_dim) {
    std::ostringstream os;
    os << "centralized system of dimension " << Nx << " exceeds the cap of " << options.max_joint_dim;
    throw DomainError(os.str());
  }
  const int Dx = lay.deep_x_dim();
  const int Du = lay.deep_u_dim();

  CentralizedSystem cs;
  cs.deep_x_map = Mat::Zero(Dx, Nx);
  cs.deep_u_map = Mat::Zero(Du, Nu);
  for (int s = 0; s < model.num_subs(); ++s) {
    const auto& sub = model.subs[s];
    for (int j = 0; j < sub.f; ++j) {
      for (int i = 0; i < sub.n; ++i) {
        const double w = sub.alpha(i, j) / sub.n;
        cs.deep_x_map.block(lay.deep_x(s, j), lay.joint_x(s, i), sub.dx, sub.dx) =
            w * Mat::Identity(sub.dx, sub.dx);
        cs.deep_u_map.block(lay.deep_u(s, j), lay.joint_u(s, i), sub.du, sub.du) =
            w * Mat::Identity(sub.du, sub.du);
      }
    }
  }

  cs.A = Mat::Zero(Nx, Nx);
  cs.B = Mat::Zero(Nx, Nu);
  cs.Q = Mat::Zero(Nx, Nx);
  cs.R = Mat::Zero(Nu, Nu);
  cs.Sigma = Mat::Zero(Nx, Nx);
  Mat Qdeep = Mat::Zero(Dx, Dx);
  Mat Rdeep = Mat::Zero(Du, Du);
  for (int s = 0; s < model.num_subs(); ++s) {
    const auto& sub = model.subs[s];
    const Mat& A = sub.A.at(t);
    const Mat& B = sub.B.at(t);
    const Mat& C = sub.C.at(t);
    const Mat& Q = sub.Q.at(t);
    const Mat& R = sub.R.at(t);
    Mat Acouple = Mat::Zero(sub.dx, Dx);
    Mat Bcouple = Mat::Zero(sub.dx, Du);
    for (int i = 0; i < sub.n; ++i) {
      const int rx = lay.joint_x(s, i);
      const int ru = lay.joint_u(s, i);
      const double beta = options.use_beta && sub.beta.size() ? sub.beta(i) : 1.0;
      const double w = sub.mu / sub.n * beta;
      Acouple.setZero();
      Bcouple.setZero();
      for (int j = 0; j < sub.f; ++j) {
        Acouple += sub.alpha(i, j) * sub.Abar[j].at(t);
        Bcouple += sub.alpha(i, j) * sub.Bbar[j].at(t);
      }
      cs.A.middleRows(rx, sub.dx) += Acouple * cs.deep_x_map;
      cs.A.block(rx, rx, sub.dx, sub.dx) += A;
      cs.B.middleRows(rx, sub.dx) += Bcouple * cs.deep_u_map;
      cs.B.block(rx, ru, sub.dx, sub.du) += B;
      cs.Q.block(rx, rx, sub.dx, sub.dx) += w * Q;
      cs.R.block(ru, ru, sub.du, sub.du) += w * R;
      cs.Sigma.block(rx, rx, sub.dx, sub.dx) = C * C.transpose();
    }
    const double weight = sub.mu * (options.use_beta ? mean_beta(sub) : 1.0);
    Qdeep += weight * sub.Qbar.at(t);
    Rdeep += weight * sub.Rbar.at(t);
  }
  cs.Q += cs.deep_x_map.transpose() * Qdeep * cs.deep_x_map;
  cs.R += cs.deep_u_map.transpose() * Rdeep * cs.deep_u_map;
  return cs;
}

CentralizedTracking centralized_tracking(const TeamModel& model, double t, bool use_beta) {
  const Layout lay(model);
  CentralizedTracking out;
  out.q = Vec::Zero(lay.joint_x_dim());
  for (int s = 0; s < model.num_subs(); ++s) {
    const auto& sub = model.subs[s];
    if (sub.tracking.empty()) continue;
    const Mat& Q = sub.Q.at(t);
    for (int i = 0; i < sub.n; ++i) {
      const double beta = use_beta && sub.beta.size() ? sub.beta(i) : 1.0;
      const double w = sub.mu / sub.n * beta;
      const Vec r = sub.tracking[i].at(t);
      out.q.segment(lay.joint_x(s, i), sub.dx) = -w * Q * r;
      out.c += w * r.dot(Q * r);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

Vec deep_state(const std::vector<Vec>& states, const Mat& alpha) {
  const auto n = static_cast<Eigen::Index>(states.size());
  if (alpha.rows() != n) throw InputError("deep_state: state count does not match alpha rows");
  if (n == 0) throw InputError("deep_state: no states");
  const Eigen::Index dx = states.front().size();
  Vec out = Vec::Zero(alpha.cols() * dx);
  for (Eigen::Index j = 0; j < alpha.cols(); ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (states[i].size() != dx) throw InputError("deep_state: states have mixed dimensions");
      out.segment(j * dx, dx) += alpha(i, j) * states[i];
    }
  }
  return out / static_cast<double>(n);
}

Vec deep_state_joint(const TeamModel& model, const Layout& lay, const Vec& joint_x) {
  Vec out = Vec::Zero(lay.deep_x_dim());
  for (int s = 0; s < model.num_subs(); ++s) {
    const auto& sub = model.subs[s];
    for (int j = 0; j < sub.f; ++j) {
      auto seg = out.segment(lay.deep_x(s, j), sub.dx);
      for (int i = 0; i < sub.n; ++i) seg += sub.alpha(i, j) * joint_x.segment(lay.joint_x(s, i), sub.dx);
      seg /= static_cast<double>(sub.n);
    }
  }
  return out;
}

Vec deep_action_joint(const TeamModel& model, const Layout& lay, const Vec& joint_u) {
  Vec out = Vec::Zero(lay.deep_u_dim());
  for (int s = 0; s < model.num_subs(); ++s) {
    const auto& sub = model.subs[s];
    for (int j = 0; j < sub.f; ++j) {
      auto seg = out.segment(lay.deep_u(s, j), sub.du);
      for (int i = 0; i < sub.n; ++i) seg += sub.alpha(i, j) * joint_u.segment(lay.joint_u(s, i), sub.du);
      seg /= static_cast<double>(sub.n);
    }
  }
  return out;
}

GaugeDecomposition gauge_decompose(const std::vector<Vec>& states, const Mat& alpha) {
  return gauge_decompose(states, alpha, alpha);
}

GaugeDecomposition gauge_decompose(const std::vector<Vec>& states, const Mat& alpha,
                                   const Mat& mixing) {
  if (mixing.rows() != alpha.rows() || mixing.cols() != alpha.cols()) {
    throw InputError("gauge_decompose: mixing weights must match alpha");
  }
  GaugeDecomposition g;
  g.deep = deep_state(states, alpha);
  const Eigen::Index dx = states.front().size();
  g.delta.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    Vec d = states[i];
    for (Eigen::Index j = 0; j < alpha.cols(); ++j) {
      d -= mixing(static_cast<Eigen::Index>(i), j) * g.deep.segment(j * dx, dx);
    }
    g.delta.push_back(std::move(d));
  }
  return g;
}

Mat mixing_weights(const SubPopulation& sub, bool use_beta) {
  if (!use_beta || sub.beta.size() == 0) return sub.alpha;
  return sub.alpha.array().colwise() / sub.beta.array();
}

std::vector<Vec> tracking_at(const SubPopulation& sub, double t) {
  std::vector<Vec> r(static_cast<std::size_t>(sub.n), Vec::Zero(sub.dx));
  if (sub.tracking.empty()) return r;
  for (int i = 0; i < sub.n; ++i) r[i] = sub.tracking[i].at(t);
  return r;
}

double mean_beta(const SubPopulation& sub) { return sub.beta.size() ? sub.beta.mean() : 1.0; }

}  // namespace deeplq
