#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sraif {

enum class ErrorCode {
  InvalidArgument,
  ShapeMismatch,
  NotStochastic,
  NonFinite,
  IndexOutOfRange,
  NumericallySingular,
  DivergentSeries,
  ExplosionCap,
  InvalidSpec,
  NonPositiveLikelihood,
};

const char* error_code_name(ErrorCode code);

/// Exception carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Collects recoverable conditions (underflow fallbacks, suspended
/// invariants) so callers can surface them in reports. Operations that can
/// warn accept a nullable pointer to one of these.
struct WarningLog {
  std::vector<std::string> messages;

  void add(std::string message) { messages.push_back(std::move(message)); }
  bool empty() const { return messages.empty(); }
};

}  // namespace sraif
