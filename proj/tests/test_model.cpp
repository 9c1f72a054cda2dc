#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>
#include <string>

#include "doctest.h"
#include "sraif/model.hpp"
#include "support.hpp"

using namespace sraif;
using test_support::thrown_code;

namespace {

/// 2-state, 2-action model with a mixed likelihood; used across the Bayes
/// tests. A columns: [0.8, 0.2] and [0.3, 0.7].
GenerativeModel mixed_model() {
  GenerativeModel model;
  model.num_states = 2;
  model.num_obs = 2;
  model.num_actions = 2;
  model.A.resize(2, 2);
  model.A << 0.8, 0.3, 0.2, 0.7;
  Eigen::MatrixXd swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  model.B = {Eigen::MatrixXd::Identity(2, 2), swap};
  model.C = Eigen::VectorXd::Zero(2);
  return model;
}

}  // namespace

TEST_CASE("uniform and delta beliefs are valid distributions") {
  const Belief u = Belief::uniform(4);
  CHECK(u.probs.size() == 4);
  CHECK(u.probs[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_NOTHROW(u.validate());

  const Belief d = Belief::delta(4, 2);
  CHECK(d.probs[2] == 1.0);
  CHECK(d.probs.sum() == 1.0);
  CHECK_NOTHROW(d.validate());
}

TEST_CASE("belief factories reject bad arguments") {
  CHECK(thrown_code([] { Belief::uniform(0); }) == ErrorCode::InvalidArgument);
  CHECK(thrown_code([] { Belief::delta(3, 3); }) == ErrorCode::IndexOutOfRange);
  CHECK(thrown_code([] { Belief::delta(3, -1); }) == ErrorCode::IndexOutOfRange);
}

TEST_CASE("belief validation pinpoints malformed distributions") {
  Belief b;
  CHECK(thrown_code([&] { b.validate(); }) == ErrorCode::ShapeMismatch);

  b.probs = Eigen::VectorXd::Constant(2, 0.6);  // sums to 1.2
  CHECK(thrown_code([&] { b.validate(); }) == ErrorCode::NotStochastic);

  b.probs << 1.5, -0.5;
  CHECK(thrown_code([&] { b.validate(); }) == ErrorCode::NotStochastic);

  b.probs << std::nan(""), 1.0;
  CHECK(thrown_code([&] { b.validate(); }) == ErrorCode::NonFinite);
}

TEST_CASE("model validation accepts a consistent model") {
  CHECK_NOTHROW(validate_model(mixed_model()));
}

TEST_CASE("model validation reports each defect class") {
  GenerativeModel model = mixed_model();
  model.A.resize(3, 2);
  CHECK(thrown_code([&] { validate_model(model); }) == ErrorCode::ShapeMismatch);

  model = mixed_model();
  model.B.pop_back();
  CHECK(thrown_code([&] { validate_model(model); }) == ErrorCode::ShapeMismatch);

  model = mixed_model();
  model.A(0, 1) = 0.2;  // column 1 now sums to 0.9
  CHECK(thrown_code([&] { validate_model(model); }) == ErrorCode::NotStochastic);

  model = mixed_model();
  model.B[0](0, 0) = -0.1;
  CHECK(thrown_code([&] { validate_model(model); }) == ErrorCode::NotStochastic);

  model = mixed_model();
  model.C[0] = std::nan("");
  CHECK(thrown_code([&] { validate_model(model); }) == ErrorCode::NonFinite);

  model = mixed_model();
  model.C.resize(3);
  CHECK(thrown_code([&] { validate_model(model); }) == ErrorCode::ShapeMismatch);

  model = mixed_model();
  model.num_actions = 0;
  CHECK(thrown_code([&] { validate_model(model); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("softmax_cost favors low cost and normalizes") {
  Eigen::VectorXd costs(2);
  costs << 0.0, 1.0;
  const Eigen::VectorXd p = softmax_cost(costs, 1.0);
  // p0 = 1 / (1 + e^-1), p1 = e^-1 / (1 + e^-1)
  CHECK(p[0] == doctest::Approx(0.7310585786300049).epsilon(1e-14));
  CHECK(p[1] == doctest::Approx(0.2689414213699951).epsilon(1e-14));
  CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-15));

  const Eigen::VectorXd flat = softmax_cost(Eigen::VectorXd::Constant(5, 3.0), 2.0);
  for (int i = 0; i < 5; ++i) {
    CHECK(flat[i] == doctest::Approx(0.2).epsilon(1e-15));
  }
}

TEST_CASE("softmax_cost is shift invariant and overflow safe") {
  Eigen::VectorXd costs(3);
  costs << 0.4, 1.1, 2.7;
  const Eigen::VectorXd base = softmax_cost(costs, 3.0);
  const Eigen::VectorXd shifted = softmax_cost((costs.array() + 1000.0).matrix(), 3.0);
  CHECK((base - shifted).cwiseAbs().maxCoeff() <= 1e-15);

  Eigen::VectorXd extreme(2);
  extreme << 0.0, 1e8;
  const Eigen::VectorXd p = softmax_cost(extreme, 10.0);
  CHECK(p.allFinite());
  CHECK(p[0] == 1.0);
  CHECK(p[1] == 0.0);
}

TEST_CASE("softmax_cost high precision concentrates on the minimum") {
  Eigen::VectorXd costs(3);
  costs << 2.0, 1.0, 3.0;
  const Eigen::VectorXd p = softmax_cost(costs, 500.0);
  CHECK(p[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("softmax_cost rejects bad input") {
  Eigen::VectorXd ok(2);
  ok << 0.0, 1.0;
  CHECK(thrown_code([&] { softmax_cost(Eigen::VectorXd(), 1.0); }) == ErrorCode::InvalidArgument);
  CHECK(thrown_code([&] { softmax_cost(ok, 0.0); }) == ErrorCode::InvalidArgument);
  CHECK(thrown_code([&] { softmax_cost(ok, -2.0); }) == ErrorCode::InvalidArgument);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(thrown_code([&] { softmax_cost(ok, inf); }) == ErrorCode::NonFinite);
  Eigen::VectorXd bad(2);
  bad << 0.0, std::nan("");
  CHECK(thrown_code([&] { softmax_cost(bad, 1.0); }) == ErrorCode::NonFinite);
}

TEST_CASE("predict_next pushes the belief through the chosen slice") {
  const GenerativeModel model = mixed_model();
  Belief b;
  b.probs.resize(2);
  b.probs << 0.25, 0.75;

  const Belief same = predict_next(model, b, 0);  // identity dynamics
  CHECK(same.probs[0] == 0.25);
  const Belief swapped = predict_next(model, b, 1);  // swap dynamics
  CHECK(swapped.probs[0] == 0.75);
  CHECK(swapped.probs[1] == 0.25);

  CHECK(thrown_code([&] { predict_next(model, b, 2); }) == ErrorCode::IndexOutOfRange);
  CHECK(thrown_code([&] { predict_next(model, Belief::uniform(3), 0); }) ==
        ErrorCode::ShapeMismatch);
}

TEST_CASE("bayes_update applies the likelihood row exactly") {
  const GenerativeModel model = mixed_model();
  const Belief posterior = bayes_update(model, Belief::uniform(2), 0);
  // Unnormalized [0.4, 0.15] -> [8/11, 3/11].
  CHECK(posterior.probs[0] == doctest::Approx(8.0 / 11.0).epsilon(1e-14));
  CHECK(posterior.probs[1] == doctest::Approx(3.0 / 11.0).epsilon(1e-14));
  CHECK_NOTHROW(posterior.validate());

  CHECK(thrown_code([&] { bayes_update(model, Belief::uniform(2), 5); }) ==
        ErrorCode::IndexOutOfRange);
}

TEST_CASE("an impossible observation keeps the prior and records a warning") {
  GenerativeModel model = mixed_model();
  model.A = Eigen::MatrixXd::Identity(2, 2);
  const Belief prior = Belief::delta(2, 0);
  WarningLog log;
  const Belief posterior = bayes_update(model, prior, 1, &log);
  CHECK((posterior.probs - prior.probs).cwiseAbs().maxCoeff() == 0.0);
  CHECK_FALSE(log.empty());
  CHECK(log.messages[0].find("vanishing likelihood") != std::string::npos);
}

TEST_CASE("infer_state composes prediction and conditioning") {
  const GenerativeModel model = mixed_model();
  Belief b;
  b.probs.resize(2);
  b.probs << 0.9, 0.1;
  const Belief direct = infer_state(model, b, 1, 0);
  const Belief composed = bayes_update(model, predict_next(model, b, 1), 0);
  CHECK((direct.probs - composed.probs).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("posteriors stay valid across random models and observations") {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + rng.next_int(6);
    GenerativeModel model;
    model.num_states = n;
    model.num_obs = n;
    model.num_actions = 2;
    model.A = test_support::random_column_stochastic(n, rng);
    model.B = {test_support::random_column_stochastic(n, rng),
               test_support::random_column_stochastic(n, rng)};
    model.C = Eigen::VectorXd::Zero(n);
    validate_model(model);

    Belief b = Belief::uniform(n);
    for (int step = 0; step < 5; ++step) {
      b = infer_state(model, b, rng.next_int(2), rng.next_int(n));
      CHECK_NOTHROW(b.validate());
    }
  }
}
