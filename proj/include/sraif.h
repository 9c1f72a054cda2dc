/* C interface to the SR active-inference toolkit.
 *
 * Every function that can fail returns a sraif_status; SRAIF_OK means
 * success and anything else leaves a human-readable explanation in
 * sraif_last_error() (thread-local). Out-parameters are written only on
 * success. Handles are opaque and freed with their matching _free call;
 * freeing NULL is a no-op. Matrix buffers are row-major, caller-allocated.
 */
#ifndef SRAIF_H
#define SRAIF_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define SRAIF_VERSION "0.1.0"

typedef enum sraif_status {
  SRAIF_OK = 0,
  SRAIF_INVALID_ARGUMENT = 1,
  SRAIF_SHAPE_MISMATCH = 2,
  SRAIF_NOT_STOCHASTIC = 3,
  SRAIF_NON_FINITE = 4,
  SRAIF_INDEX_OUT_OF_RANGE = 5,
  SRAIF_NUMERICALLY_SINGULAR = 6,
  SRAIF_DIVERGENT_SERIES = 7,
  SRAIF_EXPLOSION_CAP = 8,
  SRAIF_INVALID_SPEC = 9,
  SRAIF_NON_POSITIVE_LIKELIHOOD = 10,
  SRAIF_INTERNAL = 11
} sraif_status;

const char* sraif_version(void);
const char* sraif_status_name(sraif_status status);
/* Message from the most recent failing call on this thread ("" if none). */
const char* sraif_last_error(void);

/* Deterministic seed derivation for independent streams. */
uint64_t sraif_child_seed(uint64_t master_seed, uint64_t index);
const char* sraif_child_seed_formula(void);

/* ---- gridworld task ---------------------------------------------------- */

typedef struct sraif_grid_spec {
  int n;                 /* side length, >= 2 */
  int goal;              /* cell index, -1 = bottom-right */
  const int* unknowable; /* ambiguous cells, may be NULL when count is 0 */
  int num_unknowable;
  double step_reward;
  double goal_reward;
  int max_steps; /* -1 = 4 n^2 */
  double c_goal; /* goal log-preference, nats */
} sraif_grid_spec;

/* Fills the documented defaults (3x3, bottom-right goal, -1/+10 rewards). */
void sraif_grid_spec_init(sraif_grid_spec* spec);

/* ---- generative model -------------------------------------------------- */

typedef struct sraif_model sraif_model;

sraif_status sraif_grid_model_create(const sraif_grid_spec* spec, sraif_model** out);
void sraif_model_free(sraif_model* model);

int sraif_model_num_states(const sraif_model* model);
int sraif_model_num_obs(const sraif_model* model);
int sraif_model_num_actions(const sraif_model* model);

/* Uniform-default-policy transition matrix, num_states^2 doubles. */
sraif_status sraif_model_default_transition(const sraif_model* model, double* out);
/* Likelihood-column entropy per state, num_states doubles. */
sraif_status sraif_model_entropy(const sraif_model* model, double* out);
/* g = w_utility * utility + w_epistemic * entropy, num_states doubles. */
sraif_status sraif_model_efe_reward(const sraif_model* model, double w_utility,
                                    double w_epistemic, double* out);

/* ---- successor representation ------------------------------------------ */

typedef struct sraif_sr sraif_sr;

/* Solves the successor matrix for the model's uniform default policy.
 * gamma >= 1 is accepted but records a warning on the handle. */
sraif_status sraif_sr_create(const sraif_model* model, double gamma, sraif_sr** out);
void sraif_sr_free(sraif_sr* sr);

int sraif_sr_size(const sraif_sr* sr);
/* The matrix itself, size^2 doubles. */
sraif_status sraif_sr_matrix(const sraif_sr* sr, double* out);
/* v = M g for a caller-supplied reward vector of `size` doubles. */
sraif_status sraif_sr_state_value(const sraif_sr* sr, const double* g, double* out);

int sraif_sr_num_warnings(const sraif_sr* sr);
const char* sraif_sr_warning(const sraif_sr* sr, int index);

/* ---- agents and episodes ------------------------------------------------ */

typedef struct sraif_agent sraif_agent;

/* beta > 0 is the softmax precision; greedy nonzero ignores beta and picks
 * the argmax action. */
sraif_status sraif_sr_agent_create(const sraif_model* model, double gamma, double w_utility,
                                   double w_epistemic, double beta, int greedy,
                                   sraif_agent** out);
/* policy_cap <= 0 selects the default cap of 10^7 enumerated policies. */
sraif_status sraif_planner_agent_create(const sraif_model* model, int horizon, double beta,
                                        int greedy, double gamma, int64_t policy_cap,
                                        double w_utility, double w_epistemic,
                                        sraif_agent** out);
void sraif_agent_free(sraif_agent* agent);

/* One-time construction cost (successor solve); 0 for the planner. */
double sraif_agent_setup_time_ms(const sraif_agent* agent);
/* Cached v = M g, num_states doubles. Fails for the planner agent, which
 * has no precomputed value function. */
sraif_status sraif_agent_state_value(const sraif_agent* agent, double* out);
int sraif_agent_num_warnings(const sraif_agent* agent);
const char* sraif_agent_warning(const sraif_agent* agent, int index);

typedef struct sraif_episode sraif_episode;

/* Runs one episode (uniform non-goal start drawn from `seed`). The same
 * spec, agent, and seed always reproduce the same episode. */
sraif_status sraif_run_episode(sraif_agent* agent, const sraif_grid_spec* spec, uint64_t seed,
                               sraif_episode** out);
/* Same, from a fixed start cell. */
sraif_status sraif_run_episode_from(sraif_agent* agent, const sraif_grid_spec* spec,
                                    int start_state, uint64_t seed, sraif_episode** out);
void sraif_episode_free(sraif_episode* episode);

int sraif_episode_steps(const sraif_episode* episode);
double sraif_episode_total_reward(const sraif_episode* episode);
int sraif_episode_reached_goal(const sraif_episode* episode);
double sraif_episode_wall_time_ms(const sraif_episode* episode);
/* Entry i of the trajectory: state after the move, action, observation. */
sraif_status sraif_episode_entry(const sraif_episode* episode, int index, int* state,
                                 int* action, int* observation);

/* ---- duality lab -------------------------------------------------------- */

typedef struct sraif_duality_report {
  int trials;
  int deterministic_trials;
  int agreement_failures;
  int jensen_failures;
  int equality_failures;
  int occupancy_failures;
  double max_agreement_error;
  double max_jensen_violation;
  double max_equality_gap;
  double max_occupancy_error;
  int passed; /* 1 iff every check on every trial passed */
} sraif_duality_report;

/* Randomized verification sweep over `trials` sampled instances with
 * S <= max_states and horizons <= max_horizon. */
sraif_status sraif_duality_sweep(int max_states, int max_horizon, int trials, uint64_t seed,
                                 sraif_duality_report* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SRAIF_H */
