#include "deeplq/network_export.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

namespace deeplq {

NetworkExport export_network_weights(const TeamModel& model, const GainSchedule& gains, double dt) {
  if (model.num_subs() != 1) throw DomainError("network export supports a single sub-population");
  const auto& sub = model.subs[0];
  for (const auto& m : sub.Abar) {
    if (!m.is_zero()) throw DomainError("network export needs decoupled dynamics (Abar = 0)");
  }
  for (const auto& m : sub.Bbar) {
    if (!m.is_zero()) throw DomainError("network export needs decoupled dynamics (Bbar = 0)");
  }
  if (gains.use_beta) throw InputError("network export uses the standard DSS law");
  const long K = std::lround(model.horizon / dt);
  if (!(dt > 0.0) || K < 1 || std::abs(K * dt - model.horizon) > 1e-9 * std::max(1.0, model.horizon)) {
    throw InputError("dt must divide the horizon");
  }

  const int n = sub.n, f = sub.f, dx = sub.dx, du = sub.du;
  const Mat& alpha = sub.alpha;
  const Mat I = Mat::Identity(dx, dx);
  const double inv_n = 1.0 / n;
  // (1/n) sum_j alpha^{ij} alpha^{mj}, agent-by-agent.
  const Mat gram = alpha * alpha.transpose() * inv_n;

  NetworkExport net;
  net.dt = dt;
  net.lambda = model.risk_factor;
  net.alpha = alpha;
  net.layers.resize(static_cast<std::size_t>(K));
  for (long k = 0; k < K; ++k) {
    const double t = k * dt;
    const int g = gains.riccati.index_at(t);
    const Mat& A = sub.A.at(t);
    const Mat Bdt = sub.B.at(t) * dt;
    const Mat& theta = gains.riccati.theta[0][g];
    const Mat& tb = gains.riccati.theta_bar[g];
    const Vec& rb = gains.corrections.rho_bar[g];
    // M^{im} = (1/n) sum_{j,j'} alpha^{ij} alpha^{mj'} thetabar^{jj'}.
    auto coupled = [&](int i, int m) {
      Mat out = Mat::Zero(du, dx);
      for (int j = 0; j < f; ++j) {
        for (int jp = 0; jp < f; ++jp) {
          out += alpha(i, j) * alpha(m, jp) * tb.block(j * du, jp * dx, du, dx);
        }
      }
      return Mat(out * inv_n);
    };
    NetworkLayer& layer = net.layers[k];
    layer.W.assign(static_cast<std::size_t>(n), std::vector<Mat>(static_cast<std::size_t>(n)));
    layer.b.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (int m = 0; m < n; ++m) {
        if (i == m) {
          layer.W[i][m] = I + A * dt + Bdt * ((1.0 - gram(i, i)) * theta + coupled(i, i));
        } else {
          layer.W[i][m] = Bdt * (-gram(i, m) * theta + coupled(i, m));
        }
      }
      Vec drift = gains.corrections.rho_of(0, i, g);
      for (int j = 0; j < f; ++j) drift += alpha(i, j) * rb.segment(j * du, du);
      layer.b[i] = Bdt * drift;
    }
  }
  return net;
}

Vec forward_layer(const NetworkLayer& layer, const Vec& joint_x) {
  const auto n = static_cast<int>(layer.b.size());
  const auto dx = static_cast<int>(layer.b.front().size());
  Vec out(joint_x.size());
  for (int i = 0; i < n; ++i) {
    Vec acc = layer.b[i];
    for (int m = 0; m < n; ++m) acc.noalias() += layer.W[i][m] * joint_x.segment(m * dx, dx);
    out.segment(i * dx, dx) = acc;
  }
  return out;
}

namespace {

nlohmann::json mat_json(const Mat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::string network_to_json(const NetworkExport& net) {
  nlohmann::json j;
  j["dt"] = net.dt;
  j["lambda"] = net.lambda;
  j["alpha"] = mat_json(net.alpha);
  j["layers"] = nlohmann::json::array();
  for (const auto& layer : net.layers) {
    nlohmann::json W = nlohmann::json::array();
    for (const auto& row : layer.W) {
      nlohmann::json r = nlohmann::json::array();
      for (const auto& block : row) r.push_back(mat_json(block));
      W.push_back(r);
    }
    nlohmann::json b = nlohmann::json::array();
    for (const auto& v : layer.b) b.push_back(std::vector<double>(v.data(), v.data() + v.size()));
    j["layers"].push_back({{"W", W}, {"b", b}});
  }
  return j.dump();
}

}  // namespace deeplq
