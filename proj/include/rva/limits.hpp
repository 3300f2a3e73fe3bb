#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>

namespace rva {

/// Process-wide resource bounds checked by the constructions that can blow up
/// (determinization, products). Exceeding a bound throws EngineLimitError.
struct EngineLimits {
  std::size_t max_states = 4'000'000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

EngineLimits& engine_limits();

/// Throws EngineLimitError if `states` exceeds the bound or the deadline passed.
void check_engine_limits(const std::string& stage, std::size_t states);

/// Largest automaton produced so far by any construction (for diagnostics).
std::size_t largest_intermediate();
void note_intermediate(std::size_t states);

}  // namespace rva
