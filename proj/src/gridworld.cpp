#include "sraif/gridworld.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace sraif {
namespace {

int clamp_move(const GridSpec& spec, int state, int action) {
  const int n = spec.n;
  int row = state / n;
  int col = state % n;
  switch (action) {
    case kUp:
      row = row > 0 ? row - 1 : row;
      break;
    case kDown:
      row = row < n - 1 ? row + 1 : row;
      break;
    case kLeft:
      col = col > 0 ? col - 1 : col;
      break;
    case kRight:
      col = col < n - 1 ? col + 1 : col;
      break;
    case kStay:
      break;
    default:
      throw Error(ErrorCode::IndexOutOfRange,
                  "grid step: action " + std::to_string(action) + " out of range");
  }
  return row * n + col;
}

bool is_unknowable(const GridSpec& spec, int cell) {
  for (int u : spec.unknowable) {
    if (u == cell) {
      return true;
    }
  }
  return false;
}

/// Draws an observation from the A column of `cell` without materializing A:
/// identity columns observe the cell itself; unknowable columns are uniform
/// over the cell's row.
int sample_observation(const GridSpec& spec, int cell, Rng& rng) {
  if (is_unknowable(spec, cell)) {
    return (cell / spec.n) * spec.n + rng.next_int(spec.n);
  }
  return cell;
}

/// Uniform belief over every non-goal cell.
Belief non_goal_prior(const GridSpec& spec) {
  const int cells = spec.num_cells();
  Belief belief;
  belief.probs = Eigen::VectorXd::Constant(cells, 1.0 / (cells - 1));
  belief.probs[spec.goal_cell()] = 0.0;
  return belief;
}

}  // namespace

void validate_spec(const GridSpec& spec) {
  if (spec.n < 2) {
    throw Error(ErrorCode::InvalidSpec, "grid spec: n must be >= 2");
  }
  const int cells = spec.num_cells();
  if (spec.goal_cell() < 0 || spec.goal_cell() >= cells) {
    throw Error(ErrorCode::InvalidSpec,
                "grid spec: goal " + std::to_string(spec.goal_cell()) + " out of range");
  }
  for (int u : spec.unknowable) {
    if (u < 0 || u >= cells) {
      throw Error(ErrorCode::InvalidSpec,
                  "grid spec: unknowable cell " + std::to_string(u) + " out of range");
    }
    if (u == spec.goal_cell()) {
      throw Error(ErrorCode::InvalidSpec, "grid spec: the goal cell cannot be unknowable");
    }
  }
  if (spec.step_budget() < 1) {
    throw Error(ErrorCode::InvalidSpec, "grid spec: max_steps must be >= 1");
  }
  if (!std::isfinite(spec.step_reward) || !std::isfinite(spec.goal_reward) ||
      !std::isfinite(spec.c_goal)) {
    throw Error(ErrorCode::InvalidSpec, "grid spec: rewards and c_goal must be finite");
  }
}

GenerativeModel build_model(const GridSpec& spec) {
  validate_spec(spec);
  const int n = spec.n;
  const int cells = spec.num_cells();

  GenerativeModel model;
  model.num_states = cells;
  model.num_obs = cells;
  model.num_actions = kNumGridActions;

  model.B.assign(kNumGridActions, Eigen::MatrixXd::Zero(cells, cells));
  for (int u = 0; u < kNumGridActions; ++u) {
    for (int s = 0; s < cells; ++s) {
      model.B[static_cast<std::size_t>(u)](clamp_move(spec, s, u), s) = 1.0;
    }
  }

  model.A = Eigen::MatrixXd::Identity(cells, cells);
  for (int u : spec.unknowable) {
    model.A.col(u).setZero();
    const int row_base = (u / n) * n;
    for (int j = 0; j < n; ++j) {
      model.A(row_base + j, u) = 1.0 / n;
    }
  }

  model.C = Eigen::VectorXd::Zero(cells);
  model.C[spec.goal_cell()] = spec.c_goal;

  validate_model(model);
  return model;
}

int reset(const GridSpec& spec, Rng& rng) {
  validate_spec(spec);
  const int draw = rng.next_int(spec.num_cells() - 1);
  return draw < spec.goal_cell() ? draw : draw + 1;
}

StepResult step(const GridSpec& spec, int state, int action, Rng& rng) {
  validate_spec(spec);
  if (state < 0 || state >= spec.num_cells()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "grid step: state " + std::to_string(state) + " out of range");
  }
  StepResult result;
  result.next_state = clamp_move(spec, state, action);
  result.observation = sample_observation(spec, result.next_state, rng);
  result.done = result.next_state == spec.goal_cell();
  result.reward = result.done ? spec.goal_reward : spec.step_reward;
  return result;
}

EpisodeResult run_episode(Controller& controller, const GridSpec& spec, Rng& rng) {
  return run_episode_from(controller, spec, reset(spec, rng), rng);
}

EpisodeResult run_episode_from(Controller& controller, const GridSpec& spec, int start_state,
                               Rng& rng) {
  validate_spec(spec);
  if (start_state < 0 || start_state >= spec.num_cells()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "run_episode: start state " + std::to_string(start_state) + " out of range");
  }
  const GenerativeModel model = build_model(spec);

  EpisodeResult result;
  const auto start_time = std::chrono::steady_clock::now();

  // The agent first observes its (unknown) start cell; the observation
  // conditions the uniform non-goal prior directly, with no transition.
  Belief belief = bayes_update(model, non_goal_prior(spec), sample_observation(spec, start_state, rng));

  int state = start_state;
  for (int t = 0; t < spec.step_budget(); ++t) {
    const int action = controller.act(belief, rng);
    const StepResult outcome = step(spec, state, action, rng);
    result.trajectory.push_back({outcome.next_state, action, outcome.observation});
    result.total_reward += outcome.reward;
    state = outcome.next_state;
    if (outcome.done) {
      result.reached_goal = true;
      break;
    }
    belief = infer_state(model, belief, action, outcome.observation);
  }

  const auto end_time = std::chrono::steady_clock::now();
  result.steps = static_cast<int>(result.trajectory.size());
  result.wall_time_ms =
      std::chrono::duration<double, std::milli>(end_time - start_time).count();
  return result;
}

}  // namespace sraif
