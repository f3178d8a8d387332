#include "symaut/automaton/io.hpp"

namespace symaut {

nlohmann::json automaton_to_json(const SymbolicAutomaton& a) {
  nlohmann::json ts = nlohmann::json::array();
  for (const auto& t : a.transitions()) {
    ts.push_back({{"from", t.from}, {"to", t.to}, {"guard", to_string(t.guard)}});
  }
  return {{"locations", a.n_locations()},   {"state_dim", a.state_dim()},
          {"initial", a.initial()},          {"accepting", a.accepting()},
          {"deterministic", a.deterministic()}, {"complete", a.complete()},
          {"transitions", ts}};
}

SymbolicAutomaton automaton_from_json(const nlohmann::json& j, const RegionTable& regions,
                                      std::size_t state_dim) {
  if (!j.is_object()) throw AutomatonError("automaton must be a JSON object");
  try {
    const auto n = j.at("locations").get<std::size_t>();
    if (j.contains("state_dim")) state_dim = j.at("state_dim").get<std::size_t>();
    std::vector<Transition> ts;
    for (const auto& t : j.at("transitions")) {
      ts.push_back({t.at("from").get<std::size_t>(), t.at("to").get<std::size_t>(),
                    parse_predicate(t.at("guard").get<std::string>(), regions)});
    }
    AutomatonFlags flags;
    flags.deterministic = j.value("deterministic", false);
    flags.complete = j.value("complete", false);
    return SymbolicAutomaton(n, state_dim, j.at("initial").get<std::vector<std::size_t>>(),
                             j.at("accepting").get<std::vector<std::size_t>>(), std::move(ts),
                             flags);
  } catch (const nlohmann::json::exception& e) {
    throw AutomatonError(std::string("malformed automaton: ") + e.what());
  }
}

bool structurally_equal(const SymbolicAutomaton& a, const SymbolicAutomaton& b) {
  if (a.n_locations() != b.n_locations() || a.state_dim() != b.state_dim() ||
      a.initial() != b.initial() || a.accepting() != b.accepting() ||
      a.deterministic() != b.deterministic() || a.complete() != b.complete()) {
    return false;
  }
  const auto ta = a.transitions();
  const auto tb = b.transitions();
  if (ta.size() != tb.size()) return false;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (ta[i].from != tb[i].from || ta[i].to != tb[i].to ||
        structural_key(ta[i].guard) != structural_key(tb[i].guard)) {
      return false;
    }
  }
  return true;
}

}  // namespace symaut
