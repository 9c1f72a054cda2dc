#include "sraif.h"

#include <limits>
#include <memory>
#include <string>
#include <utility>

#include "sraif/agents.hpp"
#include "sraif/duality.hpp"
#include "sraif/efe.hpp"
#include "sraif/error.hpp"
#include "sraif/gridworld.hpp"
#include "sraif/model.hpp"
#include "sraif/rng.hpp"
#include "sraif/successor.hpp"

struct sraif_model {
  std::shared_ptr<const sraif::GenerativeModel> model;
};

struct sraif_sr {
  sraif::SuccessorMatrix sr;
  sraif::WarningLog warnings;
};

struct sraif_agent {
  std::shared_ptr<const sraif::GenerativeModel> model;
  std::unique_ptr<sraif::Controller> controller;
  const sraif::SrAgent* sr_view = nullptr;  // set when the controller is an SrAgent
};

struct sraif_episode {
  sraif::EpisodeResult result;
};

namespace {

thread_local std::string g_last_error;

sraif_status status_from(sraif::ErrorCode code) {
  switch (code) {
    case sraif::ErrorCode::InvalidArgument:
      return SRAIF_INVALID_ARGUMENT;
    case sraif::ErrorCode::ShapeMismatch:
      return SRAIF_SHAPE_MISMATCH;
    case sraif::ErrorCode::NotStochastic:
      return SRAIF_NOT_STOCHASTIC;
    case sraif::ErrorCode::NonFinite:
      return SRAIF_NON_FINITE;
    case sraif::ErrorCode::IndexOutOfRange:
      return SRAIF_INDEX_OUT_OF_RANGE;
    case sraif::ErrorCode::NumericallySingular:
      return SRAIF_NUMERICALLY_SINGULAR;
    case sraif::ErrorCode::DivergentSeries:
      return SRAIF_DIVERGENT_SERIES;
    case sraif::ErrorCode::ExplosionCap:
      return SRAIF_EXPLOSION_CAP;
    case sraif::ErrorCode::InvalidSpec:
      return SRAIF_INVALID_SPEC;
    case sraif::ErrorCode::NonPositiveLikelihood:
      return SRAIF_NON_POSITIVE_LIKELIHOOD;
  }
  return SRAIF_INTERNAL;
}

template <typename Fn>
sraif_status guarded(Fn&& fn) {
  try {
    fn();
    return SRAIF_OK;
  } catch (const sraif::Error& e) {
    g_last_error = e.what();
    return status_from(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SRAIF_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return SRAIF_INTERNAL;
  }
}

void require(bool condition, const char* message) {
  if (!condition) {
    throw sraif::Error(sraif::ErrorCode::InvalidArgument, message);
  }
}

sraif::GridSpec to_spec(const sraif_grid_spec* spec) {
  require(spec != nullptr, "grid spec pointer is NULL");
  sraif::GridSpec out;
  out.n = spec->n;
  out.goal = spec->goal;
  if (spec->num_unknowable > 0) {
    require(spec->unknowable != nullptr, "unknowable pointer is NULL with nonzero count");
    out.unknowable.assign(spec->unknowable, spec->unknowable + spec->num_unknowable);
  }
  out.step_reward = spec->step_reward;
  out.goal_reward = spec->goal_reward;
  out.max_steps = spec->max_steps;
  out.c_goal = spec->c_goal;
  return out;
}

void copy_row_major(const Eigen::MatrixXd& m, double* out) {
  require(out != nullptr, "output pointer is NULL");
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out[r * m.cols() + c] = m(r, c);
    }
  }
}

void copy_vector(const Eigen::VectorXd& v, double* out) {
  require(out != nullptr, "output pointer is NULL");
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[i] = v[i];
  }
}

double effective_beta(double beta, int greedy) {
  return greedy != 0 ? std::numeric_limits<double>::infinity() : beta;
}

}  // namespace

extern "C" {

const char* sraif_version(void) { return SRAIF_VERSION; }

const char* sraif_status_name(sraif_status status) {
  switch (status) {
    case SRAIF_OK:
      return "OK";
    case SRAIF_INVALID_ARGUMENT:
      return "InvalidArgument";
    case SRAIF_SHAPE_MISMATCH:
      return "ShapeMismatch";
    case SRAIF_NOT_STOCHASTIC:
      return "NotStochastic";
    case SRAIF_NON_FINITE:
      return "NonFinite";
    case SRAIF_INDEX_OUT_OF_RANGE:
      return "IndexOutOfRange";
    case SRAIF_NUMERICALLY_SINGULAR:
      return "NumericallySingular";
    case SRAIF_DIVERGENT_SERIES:
      return "DivergentSeries";
    case SRAIF_EXPLOSION_CAP:
      return "ExplosionCap";
    case SRAIF_INVALID_SPEC:
      return "InvalidSpec";
    case SRAIF_NON_POSITIVE_LIKELIHOOD:
      return "NonPositiveLikelihood";
    case SRAIF_INTERNAL:
      return "Internal";
  }
  return "Unknown";
}

const char* sraif_last_error(void) { return g_last_error.c_str(); }

uint64_t sraif_child_seed(uint64_t master_seed, uint64_t index) {
  return sraif::child_seed(master_seed, index);
}

const char* sraif_child_seed_formula(void) { return sraif::child_seed_formula(); }

void sraif_grid_spec_init(sraif_grid_spec* spec) {
  if (spec == nullptr) {
    return;
  }
  spec->n = 3;
  spec->goal = -1;
  spec->unknowable = nullptr;
  spec->num_unknowable = 0;
  spec->step_reward = -1.0;
  spec->goal_reward = 10.0;
  spec->max_steps = -1;
  spec->c_goal = 2.0;
}

sraif_status sraif_grid_model_create(const sraif_grid_spec* spec, sraif_model** out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is NULL");
    auto model = std::make_shared<sraif::GenerativeModel>(sraif::build_model(to_spec(spec)));
    *out = new sraif_model{std::move(model)};
  });
}

void sraif_model_free(sraif_model* model) { delete model; }

int sraif_model_num_states(const sraif_model* model) {
  return model != nullptr ? model->model->num_states : 0;
}

int sraif_model_num_obs(const sraif_model* model) {
  return model != nullptr ? model->model->num_obs : 0;
}

int sraif_model_num_actions(const sraif_model* model) {
  return model != nullptr ? model->model->num_actions : 0;
}

sraif_status sraif_model_default_transition(const sraif_model* model, double* out) {
  return guarded([&] {
    require(model != nullptr, "model handle is NULL");
    copy_row_major(sraif::default_transition(
                       *model->model, sraif::DefaultPolicy::uniform(model->model->num_actions)),
                   out);
  });
}

sraif_status sraif_model_entropy(const sraif_model* model, double* out) {
  return guarded([&] {
    require(model != nullptr, "model handle is NULL");
    copy_vector(sraif::epistemic_vector(*model->model), out);
  });
}

sraif_status sraif_model_efe_reward(const sraif_model* model, double w_utility,
                                    double w_epistemic, double* out) {
  return guarded([&] {
    require(model != nullptr, "model handle is NULL");
    copy_vector(sraif::efe_reward_vector(*model->model, {w_utility, w_epistemic}), out);
  });
}

sraif_status sraif_sr_create(const sraif_model* model, double gamma, sraif_sr** out) {
  return guarded([&] {
    require(model != nullptr, "model handle is NULL");
    require(out != nullptr, "output pointer is NULL");
    auto handle = std::make_unique<sraif_sr>();
    const Eigen::MatrixXd b_tilde = sraif::default_transition(
        *model->model, sraif::DefaultPolicy::uniform(model->model->num_actions));
    handle->sr = sraif::successor_matrix(b_tilde, gamma, &handle->warnings);
    *out = handle.release();
  });
}

void sraif_sr_free(sraif_sr* sr) { delete sr; }

int sraif_sr_size(const sraif_sr* sr) {
  return sr != nullptr ? static_cast<int>(sr->sr.M.rows()) : 0;
}

sraif_status sraif_sr_matrix(const sraif_sr* sr, double* out) {
  return guarded([&] {
    require(sr != nullptr, "sr handle is NULL");
    copy_row_major(sr->sr.M, out);
  });
}

sraif_status sraif_sr_state_value(const sraif_sr* sr, const double* g, double* out) {
  return guarded([&] {
    require(sr != nullptr, "sr handle is NULL");
    require(g != nullptr, "reward vector pointer is NULL");
    const Eigen::Map<const Eigen::VectorXd> reward(g, sr->sr.M.rows());
    copy_vector(sraif::state_value(sr->sr, reward), out);
  });
}

int sraif_sr_num_warnings(const sraif_sr* sr) {
  return sr != nullptr ? static_cast<int>(sr->warnings.messages.size()) : 0;
}

const char* sraif_sr_warning(const sraif_sr* sr, int index) {
  if (sr == nullptr || index < 0 ||
      index >= static_cast<int>(sr->warnings.messages.size())) {
    return "";
  }
  return sr->warnings.messages[static_cast<std::size_t>(index)].c_str();
}

sraif_status sraif_sr_agent_create(const sraif_model* model, double gamma, double w_utility,
                                   double w_epistemic, double beta, int greedy,
                                   sraif_agent** out) {
  return guarded([&] {
    require(model != nullptr, "model handle is NULL");
    require(out != nullptr, "output pointer is NULL");
    auto agent = std::make_unique<sraif::SrAgent>(
        model->model, gamma, sraif::EfeWeights{w_utility, w_epistemic},
        effective_beta(beta, greedy));
    auto handle = std::make_unique<sraif_agent>();
    handle->model = model->model;
    handle->sr_view = agent.get();
    handle->controller = std::move(agent);
    *out = handle.release();
  });
}

sraif_status sraif_planner_agent_create(const sraif_model* model, int horizon, double beta,
                                        int greedy, double gamma, int64_t policy_cap,
                                        double w_utility, double w_epistemic,
                                        sraif_agent** out) {
  return guarded([&] {
    require(model != nullptr, "model handle is NULL");
    require(out != nullptr, "output pointer is NULL");
    sraif::PlannerConfig config;
    config.horizon = horizon;
    config.beta = effective_beta(beta, greedy);
    config.gamma = gamma;
    if (policy_cap > 0) {
      config.policy_cap = policy_cap;
    }
    auto handle = std::make_unique<sraif_agent>();
    handle->model = model->model;
    handle->controller = std::make_unique<sraif::PlannerAgent>(
        model->model, config, sraif::EfeWeights{w_utility, w_epistemic});
    *out = handle.release();
  });
}

void sraif_agent_free(sraif_agent* agent) { delete agent; }

double sraif_agent_setup_time_ms(const sraif_agent* agent) {
  return agent != nullptr ? agent->controller->setup_time_ms() : 0.0;
}

sraif_status sraif_agent_state_value(const sraif_agent* agent, double* out) {
  return guarded([&] {
    require(agent != nullptr, "agent handle is NULL");
    require(agent->sr_view != nullptr, "planner agent has no precomputed value function");
    copy_vector(agent->sr_view->value(), out);
  });
}

int sraif_agent_num_warnings(const sraif_agent* agent) {
  if (agent == nullptr || agent->sr_view == nullptr) {
    return 0;
  }
  return static_cast<int>(agent->sr_view->warnings().messages.size());
}

const char* sraif_agent_warning(const sraif_agent* agent, int index) {
  if (agent == nullptr || agent->sr_view == nullptr || index < 0 ||
      index >= static_cast<int>(agent->sr_view->warnings().messages.size())) {
    return "";
  }
  return agent->sr_view->warnings().messages[static_cast<std::size_t>(index)].c_str();
}

sraif_status sraif_run_episode(sraif_agent* agent, const sraif_grid_spec* spec, uint64_t seed,
                               sraif_episode** out) {
  return guarded([&] {
    require(agent != nullptr, "agent handle is NULL");
    require(out != nullptr, "output pointer is NULL");
    sraif::Rng rng(seed);
    auto episode = std::make_unique<sraif_episode>();
    episode->result = sraif::run_episode(*agent->controller, to_spec(spec), rng);
    *out = episode.release();
  });
}

sraif_status sraif_run_episode_from(sraif_agent* agent, const sraif_grid_spec* spec,
                                    int start_state, uint64_t seed, sraif_episode** out) {
  return guarded([&] {
    require(agent != nullptr, "agent handle is NULL");
    require(out != nullptr, "output pointer is NULL");
    sraif::Rng rng(seed);
    auto episode = std::make_unique<sraif_episode>();
    episode->result =
        sraif::run_episode_from(*agent->controller, to_spec(spec), start_state, rng);
    *out = episode.release();
  });
}

void sraif_episode_free(sraif_episode* episode) { delete episode; }

int sraif_episode_steps(const sraif_episode* episode) {
  return episode != nullptr ? episode->result.steps : 0;
}

double sraif_episode_total_reward(const sraif_episode* episode) {
  return episode != nullptr ? episode->result.total_reward : 0.0;
}

int sraif_episode_reached_goal(const sraif_episode* episode) {
  return episode != nullptr && episode->result.reached_goal ? 1 : 0;
}

double sraif_episode_wall_time_ms(const sraif_episode* episode) {
  return episode != nullptr ? episode->result.wall_time_ms : 0.0;
}

sraif_status sraif_episode_entry(const sraif_episode* episode, int index, int* state,
                                 int* action, int* observation) {
  return guarded([&] {
    require(episode != nullptr, "episode handle is NULL");
    const auto& trajectory = episode->result.trajectory;
    if (index < 0 || index >= static_cast<int>(trajectory.size())) {
      throw sraif::Error(sraif::ErrorCode::IndexOutOfRange,
                         "episode entry " + std::to_string(index) + " out of range");
    }
    const sraif::TrajectoryStep& entry = trajectory[static_cast<std::size_t>(index)];
    if (state != nullptr) {
      *state = entry.state;
    }
    if (action != nullptr) {
      *action = entry.action;
    }
    if (observation != nullptr) {
      *observation = entry.observation;
    }
  });
}

sraif_status sraif_duality_sweep(int max_states, int max_horizon, int trials, uint64_t seed,
                                 sraif_duality_report* out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is NULL");
    const sraif::DualitySweepResult result =
        sraif::run_duality_sweep(max_states, max_horizon, trials, seed);
    out->trials = result.trials;
    out->deterministic_trials = result.deterministic_trials;
    out->agreement_failures = result.agreement_failures;
    out->jensen_failures = result.jensen_failures;
    out->equality_failures = result.equality_failures;
    out->occupancy_failures = result.occupancy_failures;
    out->max_agreement_error = result.max_agreement_error;
    out->max_jensen_violation = result.max_jensen_violation;
    out->max_equality_gap = result.max_equality_gap;
    out->max_occupancy_error = result.max_occupancy_error;
    out->passed = result.passed() ? 1 : 0;
  });
}

}  // extern "C"
