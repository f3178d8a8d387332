#pragma once

#include <string>

#include <json.hpp>

#include "symaut/automaton/automaton.hpp"
#include "symaut/spec_lang/parser.hpp"

namespace symaut {

/// {"locations", "initial", "accepting", "deterministic", "complete",
///  "state_dim", "transitions": [{"from", "to", "guard"}]}. Guards are written
/// in the guard grammar, so every region they name must be in the table used to
/// read the file back.
nlohmann::json automaton_to_json(const SymbolicAutomaton& a);

/// `state_dim` is used when the document has no "state_dim" key.
SymbolicAutomaton automaton_from_json(const nlohmann::json& j, const RegionTable& regions,
                                      std::size_t state_dim = 0);

/// Same transitions (by structural guard), sets and flags.
bool structurally_equal(const SymbolicAutomaton& a, const SymbolicAutomaton& b);

}  // namespace symaut
