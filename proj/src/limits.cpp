#include "rva/limits.hpp"

#include <algorithm>

#include "rva/errors.hpp"

namespace rva {

namespace {
std::size_t g_largest = 0;
}

EngineLimits& engine_limits() {
  static EngineLimits limits;
  return limits;
}

void note_intermediate(std::size_t states) { g_largest = std::max(g_largest, states); }

std::size_t largest_intermediate() { return g_largest; }

void check_engine_limits(const std::string& stage, std::size_t states) {
  note_intermediate(states);
  const auto& limits = engine_limits();
  if (states > limits.max_states) throw EngineLimitError(stage, g_largest);
  if (limits.deadline && std::chrono::steady_clock::now() > *limits.deadline)
    throw EngineLimitError(stage + " (timeout)", g_largest);
}

}  // namespace rva
