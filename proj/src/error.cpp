#include "unfold_align/error.hpp"

namespace ua {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::NotEnabled: return "NotEnabled";
    case Errc::UnsafeMarking: return "UnsafeMarking";
    case Errc::InvalidNet: return "InvalidNet";
    case Errc::MixedCaseIds: return "MixedCaseIds";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::NegativeDuration: return "NegativeDuration";
    case Errc::InvalidTrace: return "InvalidTrace";
    case Errc::AlreadyExtended: return "AlreadyExtended";
    case Errc::NotExtended: return "NotExtended";
    case Errc::InvalidConfiguration: return "InvalidConfiguration";
    case Errc::InvalidSequence: return "InvalidSequence";
    case Errc::InvalidCostModel: return "InvalidCostModel";
    case Errc::Parse: return "Parse";
    case Errc::Overflow: return "Overflow";
  }
  return "?";
}

}  // namespace ua
