#pragma once

#include <memory>
#include <string>
#include <vector>

#include "deeplq/deep_riccati.hpp"
#include "deeplq/model.hpp"

namespace deeplq {

enum class StrategyKind { Dss, DssBeta, PdssFinite, PdssInfinite, Zero, CentralizedOracle };

std::string to_string(StrategyKind kind);
/// Accepts dss, dss-beta, pdss-finite, pdss-infinite, zero, oracle.
StrategyKind parse_strategy_kind(const std::string& name);

/// Everything a DSS-type law reads, computed once and shared read-only.
struct GainSchedule {
  DeepRiccatiSolution riccati;
  CorrectionTerms corrections;
  bool use_beta = false;

  /// Row block of theta-bar for feature j of sub-population s (d_u x D_x).
  Mat theta_bar_rows(const Layout& layout, int s, int j, int k) const;
};

/// Solves the deep Riccati equation and the correction terms.
std::shared_ptr<const GainSchedule> make_gain_schedule(const TeamModel& model,
                                                       const DeepRiccatiOptions& options = {});

/// Optimal DSS action of agent i in sub-population s. `xbar` is the stacked
/// deep state of the whole team. Gains are held constant between grid points.
Vec dss_action(const TeamModel& model, const GainSchedule& gains, int s, int i, double t, const Vec& x_i,
               const Vec& xbar);

/// Optimization-factor variant: mixing weights alpha / beta. Needs a
/// schedule solved with use_beta, decoupled dynamics and lambda = 0.
Vec dss_action_with_beta(const TeamModel& model, const GainSchedule& gains, int s, int i, double t,
                         const Vec& x_i, const Vec& xbar);

/// Reduced law for weakly coupled models; reads only the agent's own
/// sub-population deep state `xbar_s` (f(s) d_x entries).
Vec weakly_coupled_action(const TeamModel& model, const GainSchedule& gains, int s, int i, double t,
                          const Vec& x_i, const Vec& xbar_s);

/// Actions of every agent from the joint state, with `deep` standing in for
/// the stacked deep state (observed under DSS, estimated under PDSS).
void dss_joint_actions(const TeamModel& model, const Layout& layout, const GainSchedule& gains, int k,
                       const Vec& joint_x, const Vec& deep, Vec& joint_u);

/// Joint feedback matrix and offset implied by the DSS law at grid point k.
Mat composed_dss_gain(const TeamModel& model, const GainSchedule& gains, int k);
Vec composed_dss_offset(const TeamModel& model, const GainSchedule& gains, int k);

/// Decision rule for the whole team. Stateful kinds keep their estimator
/// in the instance, so each replicate works on its own clone.
class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual StrategyKind kind() const = 0;
  virtual std::unique_ptr<Strategy> clone() const = 0;
  /// Called once with the initial joint state before the first action.
  virtual void reset(const Vec& joint_x0) { (void)joint_x0; }
  virtual void act(double t, const Vec& joint_x, Vec& joint_u) = 0;
  /// Propagates internal state from t to t + dt after act().
  virtual void advance(double t, double dt) {
    (void)t;
    (void)dt;
  }
  /// Current deep-state estimate (PDSS only).
  virtual const Vec* estimate() const { return nullptr; }
};

struct StrategyOptions {
  int riccati_steps = 2000;
  int max_joint_dim = 64;
};

std::unique_ptr<Strategy> make_strategy(StrategyKind kind, const TeamModel& model,
                                        const StrategyOptions& options = {});

/// DSS from an existing schedule (use_beta selects the optimization-factor law).
std::unique_ptr<Strategy> make_dss_strategy(const TeamModel& model, std::shared_ptr<const GainSchedule> gains);

/// PDSS filter with the given schedule. The infinite-population filter
/// expects a schedule solved with n(s) -> infinity outside the shared set.
std::unique_ptr<Strategy> make_pdss_strategy(const TeamModel& model, std::shared_ptr<const GainSchedule> gains,
                                             StrategyKind kind);

/// n(s) -> infinity outside the shared set; used by the infinite filter.
AssemblyOptions infinite_population_assembly(const TeamModel& model);

}  // namespace deeplq
