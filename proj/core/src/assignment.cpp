#include "taintchain/assignment.hpp"

namespace taintchain {

std::string_view to_string(Policy policy) {
  switch (policy) {
    case Policy::Fifo: return "fifo";
    case Policy::Poison: return "poison";
    case Policy::Haircut: return "haircut";
  }
  return "unknown";
}

std::optional<Policy> parse_policy(std::string_view text) {
  if (text == "fifo") return Policy::Fifo;
  if (text == "poison") return Policy::Poison;
  if (text == "haircut") return Policy::Haircut;
  return std::nullopt;
}

Policy policy_of(const TaintAssignment& assignment) {
  return std::visit([](const auto& a) { return std::decay_t<decltype(a)>::policy; }, assignment);
}

}  // namespace taintchain
