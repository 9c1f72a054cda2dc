#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>

#include "doctest.h"
#include "sraif/efe.hpp"
#include "support.hpp"

using namespace sraif;
using test_support::thrown_code;

namespace {

GenerativeModel two_state_model() {
  GenerativeModel model;
  model.num_states = 2;
  model.num_obs = 2;
  model.num_actions = 1;
  model.A.resize(2, 2);
  model.A << 0.8, 0.3, 0.2, 0.7;
  model.B = {Eigen::MatrixXd::Identity(2, 2)};
  model.C.resize(2);
  model.C << 1.0, 2.0;
  return model;
}

}  // namespace

TEST_CASE("utility vector is the likelihood-weighted preference") {
  const Eigen::VectorXd u = utility_vector(two_state_model());
  // u[s] = sum_o A(o, s) C(o)
  CHECK(u[0] == doctest::Approx(0.8 * 1.0 + 0.2 * 2.0).epsilon(1e-15));
  CHECK(u[1] == doctest::Approx(0.3 * 1.0 + 0.7 * 2.0).epsilon(1e-15));
}

TEST_CASE("entropy field: deterministic columns zero, uniform columns ln n") {
  GenerativeModel model = two_state_model();
  model.A = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd e = epistemic_vector(model);
  CHECK(e[0] == 0.0);
  CHECK(e[1] == 0.0);

  model.num_states = 3;
  model.num_obs = 3;
  model.A = Eigen::MatrixXd::Constant(3, 3, 1.0 / 3.0);
  model.B = {Eigen::MatrixXd::Identity(3, 3)};
  model.C = Eigen::VectorXd::Zero(3);
  e = epistemic_vector(model);
  for (int s = 0; s < 3; ++s) {
    CHECK(e[s] == doctest::Approx(std::log(3.0)).epsilon(1e-15));
  }
}

TEST_CASE("a two-point column carries the binary entropy") {
  GenerativeModel model = two_state_model();
  model.A << 0.25, 1.0, 0.75, 0.0;
  const Eigen::VectorXd e = epistemic_vector(model);
  // H(0.25) = -(0.25 ln 0.25 + 0.75 ln 0.75)
  CHECK(e[0] == doctest::Approx(0.5623351446188083).epsilon(1e-14));
  CHECK(e[1] == 0.0);  // the exact-zero entry must not produce NaN
}

TEST_CASE("efe reward combines the terms with configurable weights") {
  const GenerativeModel model = two_state_model();
  const Eigen::VectorXd u = utility_vector(model);
  const Eigen::VectorXd e = epistemic_vector(model);

  const Eigen::VectorXd g = efe_reward_vector(model, {2.0, 0.5});
  CHECK((g - (2.0 * u + 0.5 * e)).cwiseAbs().maxCoeff() == 0.0);

  // A negative epistemic weight flips the uncertainty bonus into a penalty.
  const Eigen::VectorXd avoidant = efe_reward_vector(model, {1.0, -1.0});
  CHECK((avoidant - (u - e)).cwiseAbs().maxCoeff() == 0.0);

  const Eigen::VectorXd utility_only = efe_reward_vector(model, {1.0, 0.0});
  CHECK((utility_only - u).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("efe reward rejects non-finite weights") {
  const GenerativeModel model = two_state_model();
  CHECK(thrown_code([&] { efe_reward_vector(model, {std::nan(""), 1.0}); }) ==
        ErrorCode::NonFinite);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(thrown_code([&] { efe_reward_vector(model, {1.0, inf}); }) == ErrorCode::NonFinite);
}

TEST_CASE("entropy is nonnegative and bounded by ln num_obs on random models") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + rng.next_int(8);
    GenerativeModel model;
    model.num_states = n;
    model.num_obs = n;
    model.num_actions = 1;
    model.A = test_support::random_column_stochastic(n, rng);
    model.B = {Eigen::MatrixXd::Identity(n, n)};
    model.C = Eigen::VectorXd::Zero(n);
    const Eigen::VectorXd e = epistemic_vector(model);
    CHECK(e.minCoeff() >= 0.0);
    CHECK(e.maxCoeff() <= std::log(static_cast<double>(n)) + 1e-12);
  }
}
