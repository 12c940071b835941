#pragma once

#include <stdexcept>
#include <string>

namespace ua {

enum class Errc {
  UnknownNode,
  NotEnabled,
  UnsafeMarking,
  InvalidNet,
  MixedCaseIds,
  EmptyInput,
  NegativeDuration,
  InvalidTrace,
  AlreadyExtended,
  NotExtended,
  InvalidConfiguration,
  InvalidSequence,
  InvalidCostModel,
  Parse,
  Overflow,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ua
