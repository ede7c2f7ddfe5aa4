#include "dwave/simulation.hpp"

namespace dwave {

std::string RunOutcome::status_name() const {
  if (std::holds_alternative<BlowUpReport>(status)) return "blowup";
  if (std::holds_alternative<NumericOverflow>(status)) return "overflow";
  return "budget";
}

}  // namespace dwave
