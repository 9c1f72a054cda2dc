#include "sraif/efe.hpp"

#include <cmath>

#include "sraif/error.hpp"

namespace sraif {

Eigen::VectorXd utility_vector(const GenerativeModel& model) {
  // u[s] = sum_o A(o, s) * C(o)
  return model.A.transpose() * model.C;
}

Eigen::VectorXd epistemic_vector(const GenerativeModel& model) {
  Eigen::VectorXd entropy(model.num_states);
  for (int s = 0; s < model.num_states; ++s) {
    double h = 0.0;
    for (int o = 0; o < model.num_obs; ++o) {
      const double p = model.A(o, s);
      if (p > 0.0) {
        h -= p * std::log(p);
      }
    }
    entropy[s] = h;
  }
  return entropy;
}

Eigen::VectorXd efe_reward_vector(const GenerativeModel& model, const EfeWeights& weights) {
  if (!std::isfinite(weights.utility) || !std::isfinite(weights.epistemic)) {
    throw Error(ErrorCode::NonFinite, "efe_reward_vector: weights must be finite");
  }
  return weights.utility * utility_vector(model) + weights.epistemic * epistemic_vector(model);
}

}  // namespace sraif
