#pragma once

#include <string>
#include <vector>

#include "deeplq/model.hpp"
#include "deeplq/strategies.hpp"

namespace deeplq {

/// One time step of the closed loop as an affine layer:
/// x^i_{k+1} = sum_m W[i][m] x^m_k + b[i] + w^i_k.
struct NetworkLayer {
  std::vector<std::vector<Mat>> W;  ///< n x n blocks, d_x x d_x each
  std::vector<Vec> b;               ///< n vectors of d_x
};

struct NetworkExport {
  double dt = 0.0;
  double lambda = 0.0;
  Mat alpha;
  std::vector<NetworkLayer> layers;  ///< T / dt layers
};

/// Needs one sub-population with decoupled dynamics (Abar = Bbar = 0).
NetworkExport export_network_weights(const TeamModel& model, const GainSchedule& gains, double dt);

/// Applies one layer to the stacked agent states.
Vec forward_layer(const NetworkLayer& layer, const Vec& joint_x);

std::string network_to_json(const NetworkExport& net);

}  // namespace deeplq
