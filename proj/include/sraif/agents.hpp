#pragma once

#include <memory>

#include <Eigen/Core>

#include "sraif/efe.hpp"
#include "sraif/gridworld.hpp"
#include "sraif/planner.hpp"
#include "sraif/successor.hpp"

namespace sraif {

/// Agent that selects actions from the analytic successor-representation
/// value function. The matrix solve happens once in the constructor (timed
/// into setup_time_ms); per-decision work is two matrix-vector products.
class SrAgent : public Controller {
 public:
  /// beta = +infinity means greedy. gamma >= 1 is accepted (heuristic mode);
  /// any invariant suspension is recorded in warnings().
  SrAgent(std::shared_ptr<const GenerativeModel> model, double gamma, const EfeWeights& weights,
          double beta);

  int act(const Belief& belief, Rng& rng) override;
  double setup_time_ms() const override { return setup_time_ms_; }

  const SuccessorMatrix& successor() const { return sr_; }
  const Eigen::VectorXd& reward_vector() const { return g_; }
  /// Cached v = M g.
  const Eigen::VectorXd& value() const { return value_; }
  const WarningLog& warnings() const { return warnings_; }

 private:
  std::shared_ptr<const GenerativeModel> model_;
  SuccessorMatrix sr_;
  Eigen::VectorXd g_;
  Eigen::VectorXd value_;
  double beta_;
  double setup_time_ms_ = 0.0;
  WarningLog warnings_;
};

/// Exhaustive receding-horizon planner agent: re-enumerates all U^H policies
/// at every decision and samples the first action from the policy posterior.
class PlannerAgent : public Controller {
 public:
  PlannerAgent(std::shared_ptr<const GenerativeModel> model, const PlannerConfig& config,
               const EfeWeights& weights);

  int act(const Belief& belief, Rng& rng) override;

  const Eigen::VectorXd& reward_vector() const { return g_; }
  /// Telemetry from the most recent act() call.
  const PlanStats& last_stats() const { return last_stats_; }

 private:
  std::shared_ptr<const GenerativeModel> model_;
  PlannerConfig config_;
  Eigen::VectorXd g_;
  PlanStats last_stats_;
};

}  // namespace sraif
