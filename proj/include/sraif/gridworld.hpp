#pragma once

#include <vector>

#include "sraif/model.hpp"
#include "sraif/rng.hpp"

namespace sraif {

/// Grid actions. Cells are indexed row-major (cell = row * n + col); UP
/// decreases the row, so the default goal n*n-1 sits at the bottom-right.
enum GridAction : int {
  kUp = 0,
  kDown = 1,
  kLeft = 2,
  kRight = 3,
  kStay = 4,
};

inline constexpr int kNumGridActions = 5;

/// N x N gridworld task description.
struct GridSpec {
  int n = 3;                    // side length, >= 2
  int goal = -1;                // cell index; -1 means bottom-right (n*n - 1)
  std::vector<int> unknowable;  // cells whose observations are ambiguous
  double step_reward = -1.0;
  double goal_reward = 10.0;
  int max_steps = -1;  // -1 means 4 * n * n
  double c_goal = 2.0;  // goal log-preference in nats

  int num_cells() const { return n * n; }
  int goal_cell() const { return goal >= 0 ? goal : n * n - 1; }
  int step_budget() const { return max_steps >= 0 ? max_steps : 4 * n * n; }
};

/// Throws InvalidSpec when n < 2, an index is out of range, or the goal is
/// marked unknowable.
void validate_spec(const GridSpec& spec);

/// S = O = N^2, U = 5. B deterministic with boundary moves resolving to
/// self-transitions; A identity except each unknowable column is uniform
/// (1/N) over the observation indices of its row; C = c_goal at the goal
/// observation. The result passes validate_model.
GenerativeModel build_model(const GridSpec& spec);

/// Uniform start over all cells except the goal.
int reset(const GridSpec& spec, Rng& rng);

struct StepResult {
  int next_state = 0;
  int observation = 0;
  double reward = 0.0;
  bool done = false;
};

/// Applies the deterministic move, samples the observation from the A column
/// of the next state, and pays goal_reward / step_reward. done only on goal;
/// the step budget is enforced by run_episode.
StepResult step(const GridSpec& spec, int state, int action, Rng& rng);

/// Any agent the episode loop can drive. act must be deterministic given
/// (belief, rng state); belief updates between steps are the loop's job.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual int act(const Belief& belief, Rng& rng) = 0;
  /// One-time construction cost attributable to the agent (0 unless the
  /// agent builds something episode-independent, e.g. a successor matrix).
  virtual double setup_time_ms() const { return 0.0; }
};

struct TrajectoryStep {
  int state = 0;  // state after the move
  int action = 0;
  int observation = 0;
};

struct EpisodeResult {
  int steps = 0;
  double total_reward = 0.0;
  bool reached_goal = false;
  std::vector<TrajectoryStep> trajectory;
  double wall_time_ms = 0.0;  // controller + inference time; excludes setup
};

/// Runs one episode from a uniform non-goal start. The belief starts uniform
/// over non-goal cells, is conditioned on an initial observation of the start
/// state (no transition), and is updated by infer_state after every move.
EpisodeResult run_episode(Controller& controller, const GridSpec& spec, Rng& rng);

/// Same loop from a fixed start state (for exhaustive start sweeps).
EpisodeResult run_episode_from(Controller& controller, const GridSpec& spec, int start_state,
                               Rng& rng);

}  // namespace sraif
