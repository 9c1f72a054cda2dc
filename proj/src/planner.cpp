#include "sraif/planner.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace sraif {
namespace {

/// U^H with the cap enforced before any multiplication can overflow.
std::int64_t checked_policy_count(int num_actions, int horizon, std::int64_t policy_cap) {
  if (num_actions <= 0 || horizon <= 0) {
    throw Error(ErrorCode::InvalidArgument, "policy enumeration needs num_actions, horizon >= 1");
  }
  if (policy_cap <= 0) {
    throw Error(ErrorCode::InvalidArgument, "policy cap must be positive");
  }
  std::int64_t count = 1;
  for (int h = 0; h < horizon; ++h) {
    if (count > policy_cap / num_actions) {
      throw Error(ErrorCode::ExplosionCap,
                  std::to_string(num_actions) + "^" + std::to_string(horizon) +
                      " policies exceed the cap of " + std::to_string(policy_cap));
    }
    count *= num_actions;
  }
  if (count > policy_cap) {
    throw Error(ErrorCode::ExplosionCap,
                std::to_string(count) + " policies exceed the cap of " +
                    std::to_string(policy_cap));
  }
  return count;
}

/// Streaming log-sum-exp accumulator (shift-invariant, overflow-safe).
struct LogSumExp {
  double max_arg = -std::numeric_limits<double>::infinity();
  double sum = 0.0;  // sum of exp(arg - max_arg)

  void add(double arg) {
    if (arg <= max_arg) {
      sum += std::exp(arg - max_arg);
    } else {
      sum = sum * std::exp(max_arg - arg) + 1.0;
      max_arg = arg;
    }
  }
};

/// Column -> row map for a one-hot-column (deterministic) transition matrix,
/// or empty if any column is not exactly one-hot.
std::vector<int> deterministic_targets(const Eigen::MatrixXd& b) {
  std::vector<int> targets(static_cast<std::size_t>(b.cols()), -1);
  for (Eigen::Index c = 0; c < b.cols(); ++c) {
    for (Eigen::Index r = 0; r < b.rows(); ++r) {
      const double v = b(r, c);
      if (v == 1.0 && targets[static_cast<std::size_t>(c)] < 0) {
        targets[static_cast<std::size_t>(c)] = static_cast<int>(r);
      } else if (v != 0.0) {
        return {};
      }
    }
    if (targets[static_cast<std::size_t>(c)] < 0) {
      return {};
    }
  }
  return targets;
}

struct DfsContext {
  const GenerativeModel* model = nullptr;
  const Eigen::VectorXd* g = nullptr;
  double gamma = 0.0;
  int horizon = 0;
  // One gather map per action when every B slice is deterministic; empty
  // otherwise (dense matrix-vector pushforwards are used instead).
  std::vector<std::vector<int>> gather;
  // Pre-sized belief buffer per depth so the walk allocates nothing.
  std::vector<Eigen::VectorXd> beliefs;
  std::vector<LogSumExp> per_root;  // finite beta accumulators, one per root action
  double beta = 0.0;
  bool greedy = false;
  double best_cost = std::numeric_limits<double>::infinity();
  int best_root = 0;
  std::int64_t nodes = 0;

  void push_belief(int depth, int action) {
    const Eigen::VectorXd& src = beliefs[static_cast<std::size_t>(depth - 1)];
    Eigen::VectorXd& dst = beliefs[static_cast<std::size_t>(depth)];
    if (!gather.empty()) {
      dst.setZero();
      const std::vector<int>& map = gather[static_cast<std::size_t>(action)];
      for (int s = 0; s < static_cast<int>(map.size()); ++s) {
        const double p = src[s];
        if (p != 0.0) {
          dst[map[static_cast<std::size_t>(s)]] += p;
        }
      }
    } else {
      dst.noalias() = model->B[static_cast<std::size_t>(action)] * src;
    }
  }

  /// Expands all policies below one prefix. depth counts completed actions;
  /// cost_so_far is the discounted partial path cost; root is the first
  /// action on the current prefix.
  void walk(int depth, double discount, double cost_so_far, int root) {
    const int num_actions = model->num_actions;
    for (int u = 0; u < num_actions; ++u) {
      push_belief(depth + 1, u);
      ++nodes;
      const double df = discount * gamma;
      const double cost =
          cost_so_far - df * g->dot(beliefs[static_cast<std::size_t>(depth + 1)]);
      const int this_root = depth == 0 ? u : root;
      if (depth + 1 == horizon) {
        if (greedy) {
          // Strict < keeps the lexicographically first minimum.
          if (cost < best_cost) {
            best_cost = cost;
            best_root = this_root;
          }
        } else {
          per_root[static_cast<std::size_t>(this_root)].add(-beta * cost);
        }
      } else {
        walk(depth + 1, df, cost, this_root);
      }
    }
  }
};

}  // namespace

PolicyEnumerator::PolicyEnumerator(int num_actions, int horizon, std::int64_t policy_cap)
    : num_actions_(num_actions), horizon_(horizon) {
  count_ = checked_policy_count(num_actions, horizon, policy_cap);
  current_.assign(static_cast<std::size_t>(horizon), 0);
}

bool PolicyEnumerator::next(Policy& policy) {
  if (done_) {
    return false;
  }
  if (!started_) {
    started_ = true;
  } else {
    // Odometer increment, least-significant digit last.
    int pos = horizon_ - 1;
    while (pos >= 0) {
      if (++current_[static_cast<std::size_t>(pos)] < num_actions_) {
        break;
      }
      current_[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) {
      done_ = true;
      return false;
    }
  }
  policy = current_;
  return true;
}

void PolicyEnumerator::reset() {
  current_.assign(static_cast<std::size_t>(horizon_), 0);
  started_ = false;
  done_ = false;
}

double policy_efe(const GenerativeModel& model, const Belief& belief, const Eigen::VectorXd& g,
                  const Policy& policy, double gamma) {
  if (policy.empty()) {
    throw Error(ErrorCode::InvalidArgument, "policy_efe: empty policy");
  }
  if (belief.probs.size() != model.num_states || g.size() != model.num_states) {
    throw Error(ErrorCode::ShapeMismatch, "policy_efe: dimension mismatch");
  }
  Eigen::VectorXd q = belief.probs;
  double cost = 0.0;
  double discount = 1.0;
  for (int action : policy) {
    if (action < 0 || action >= model.num_actions) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "policy_efe: action " + std::to_string(action) + " out of range");
    }
    q = model.B[static_cast<std::size_t>(action)] * q;
    discount *= gamma;
    cost -= discount * g.dot(q);
  }
  return cost;
}

Eigen::VectorXd plan_action_marginal(const GenerativeModel& model, const Belief& belief,
                                     const Eigen::VectorXd& g, const PlannerConfig& config,
                                     PlanStats* stats) {
  if (belief.probs.size() != model.num_states || g.size() != model.num_states) {
    throw Error(ErrorCode::ShapeMismatch, "plan_action_marginal: dimension mismatch");
  }
  if (config.horizon < 1) {
    throw Error(ErrorCode::InvalidArgument, "plan_action_marginal: horizon must be >= 1");
  }
  if (!std::isfinite(config.gamma) || config.gamma <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "plan_action_marginal: gamma must be positive");
  }
  const bool greedy = std::isinf(config.beta) && config.beta > 0.0;
  if (!greedy && (!std::isfinite(config.beta) || config.beta <= 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "plan_action_marginal: beta must be positive (or +infinity for greedy)");
  }
  const std::int64_t policies =
      checked_policy_count(model.num_actions, config.horizon, config.policy_cap);

  DfsContext ctx;
  ctx.model = &model;
  ctx.g = &g;
  ctx.gamma = config.gamma;
  ctx.horizon = config.horizon;
  ctx.beta = config.beta;
  ctx.greedy = greedy;
  ctx.gather.reserve(static_cast<std::size_t>(model.num_actions));
  for (int u = 0; u < model.num_actions; ++u) {
    std::vector<int> targets = deterministic_targets(model.B[static_cast<std::size_t>(u)]);
    if (targets.empty()) {
      ctx.gather.clear();
      break;
    }
    ctx.gather.push_back(std::move(targets));
  }
  ctx.beliefs.assign(static_cast<std::size_t>(config.horizon) + 1,
                     Eigen::VectorXd(model.num_states));
  ctx.beliefs[0] = belief.probs;
  ctx.per_root.assign(static_cast<std::size_t>(model.num_actions), LogSumExp{});
  ctx.walk(0, 1.0, 0.0, 0);

  if (stats != nullptr) {
    stats->policies = policies;
    stats->nodes = ctx.nodes;
  }

  Eigen::VectorXd marginal = Eigen::VectorXd::Zero(model.num_actions);
  if (greedy) {
    marginal[ctx.best_root] = 1.0;
    return marginal;
  }
  // Per-root mass in log space: log sum_{pi: pi_1 = u} exp(-beta cost(pi)).
  double overall_max = -std::numeric_limits<double>::infinity();
  for (const LogSumExp& acc : ctx.per_root) {
    if (acc.sum > 0.0) {
      overall_max = std::max(overall_max, acc.max_arg + std::log(acc.sum));
    }
  }
  for (int u = 0; u < model.num_actions; ++u) {
    const LogSumExp& acc = ctx.per_root[static_cast<std::size_t>(u)];
    marginal[u] = acc.sum > 0.0 ? std::exp(acc.max_arg + std::log(acc.sum) - overall_max) : 0.0;
  }
  marginal /= marginal.sum();
  return marginal;
}

int plan_action(const GenerativeModel& model, const Belief& belief, const Eigen::VectorXd& g,
                const PlannerConfig& config, Rng& rng, PlanStats* stats) {
  const Eigen::VectorXd marginal = plan_action_marginal(model, belief, g, config, stats);
  if (std::isinf(config.beta) && config.beta > 0.0) {
    int best = 0;
    for (Eigen::Index i = 1; i < marginal.size(); ++i) {
      if (marginal[i] > marginal[best]) {
        best = static_cast<int>(i);
      }
    }
    return best;
  }
  return rng.sample_categorical(marginal);
}

}  // namespace sraif
