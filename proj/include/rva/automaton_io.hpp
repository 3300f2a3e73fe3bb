#pragma once

#include <string>
#include <string_view>

#include "rva/automaton.hpp"

namespace rva {

/// Parses the line-oriented `rva 1` format. Muller tables are converted to
/// parity, the result is intersected with the well-formed words, minimized,
/// and flagged saturated when the header says so or a saturation check passes.
RelationAutomaton load_automaton(std::string_view text);
RelationAutomaton load_automaton_file(const std::string& path);

/// Writes every transition, states in breadth-first order from the initial state.
std::string write_automaton(const RelationAutomaton& a);
void write_automaton_file(const RelationAutomaton& a, const std::string& path);

}  // namespace rva
