#include "symaut/cli/scenario.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "symaut/automaton/builders.hpp"
#include "symaut/automaton/io.hpp"

namespace symaut::cli {

using nlohmann::json;

std::string to_string(Mode m) { return m == Mode::mpc ? "mpc" : "open_loop"; }

std::optional<Mode> parse_mode(std::string_view text) {
  if (text == "open_loop" || text == "open-loop") return Mode::open_loop;
  if (text == "mpc" || text == "closed_loop" || text == "closed-loop") return Mode::mpc;
  return std::nullopt;
}

namespace {

std::string summarize(const std::vector<Issue>& issues) {
  std::string out = "invalid scenario (" + std::to_string(issues.size()) + " problem" +
                    (issues.size() == 1 ? "" : "s") + "):";
  for (const auto& i : issues) out += "\n  " + (i.pointer.empty() ? "/" : i.pointer) + ": " + i.message;
  return out;
}

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

/// Type-checked field access that records problems instead of throwing.
class Reader {
 public:
  std::vector<Issue> issues;

  void fail(const std::string& ptr, std::string msg) { issues.push_back({ptr, std::move(msg)}); }

  static std::string at(const std::string& ptr, const std::string& key) {
    return ptr + "/" + escape_token(key);
  }
  static std::string at(const std::string& ptr, std::size_t i) {
    return ptr + "/" + std::to_string(i);
  }

  bool object(const json& j, const std::string& ptr) {
    if (j.is_object()) return true;
    fail(ptr, "expected an object");
    return false;
  }

  /// Reports keys of `j` outside `allowed`.
  void only(const json& j, const std::string& ptr, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) return;
    for (const auto& [k, v] : j.items()) {
      bool ok = false;
      for (auto a : allowed) ok = ok || a == k;
      if (!ok) fail(at(ptr, k), "unknown key");
    }
  }

  const json* find(const json& j, const std::string& ptr, const std::string& key, bool required) {
    if (j.is_object()) {
      auto it = j.find(key);
      if (it != j.end()) return &*it;
    }
    if (required) fail(at(ptr, key), "missing required key");
    return nullptr;
  }

  std::optional<std::string> string(const json& j, const std::string& ptr, const std::string& key,
                                    bool required) {
    const json* v = find(j, ptr, key, required);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      fail(at(ptr, key), "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<double> number(const json& j, const std::string& ptr, const std::string& key,
                               bool required) {
    const json* v = find(j, ptr, key, required);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      fail(at(ptr, key), "expected a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<std::size_t> count(const json& j, const std::string& ptr, const std::string& key,
                                   bool required) {
    const json* v = find(j, ptr, key, required);
    if (!v) return std::nullopt;
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0)) {
      fail(at(ptr, key), "expected a non-negative integer");
      return std::nullopt;
    }
    return v->get<std::size_t>();
  }

  std::optional<bool> boolean(const json& j, const std::string& ptr, const std::string& key) {
    const json* v = find(j, ptr, key, false);
    if (!v) return std::nullopt;
    if (!v->is_boolean()) {
      fail(at(ptr, key), "expected true or false");
      return std::nullopt;
    }
    return v->get<bool>();
  }

  std::optional<std::vector<double>> numbers(const json& j, const std::string& ptr,
                                             const std::string& key, bool required) {
    const json* v = find(j, ptr, key, required);
    if (!v) return std::nullopt;
    if (!v->is_array()) {
      fail(at(ptr, key), "expected an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    bool ok = true;
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number()) {
        fail(at(at(ptr, key), i), "expected a number");
        ok = false;
      } else {
        out.push_back((*v)[i].get<double>());
      }
    }
    if (!ok) return std::nullopt;
    return out;
  }

  std::optional<std::vector<std::size_t>> indices(const json& j, const std::string& ptr,
                                                  const std::string& key) {
    const json* v = find(j, ptr, key, false);
    if (!v) return std::nullopt;
    if (!v->is_array()) {
      fail(at(ptr, key), "expected an array of indices");
      return std::nullopt;
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const json& e = (*v)[i];
      if (!e.is_number_integer() || e.get<long long>() < 0) {
        fail(at(at(ptr, key), i), "expected a non-negative integer");
        return std::nullopt;
      }
      out.push_back(e.get<std::size_t>());
    }
    return out;
  }

  std::optional<Predicate> guard(const json& j, const std::string& ptr,
                                 const RegionTable& regions) {
    if (!j.is_string()) {
      fail(ptr, "expected a guard string");
      return std::nullopt;
    }
    const auto text = j.get<std::string>();
    try {
      return parse_predicate(text, regions);
    } catch (const UnknownRegion& e) {
      fail(ptr, "guard '" + text + "' names unknown region '" + e.name() + "'");
    } catch (const ParseError& e) {
      fail(ptr, "guard '" + text + "': " + e.what());
    }
    return std::nullopt;
  }
};

void read_regions(Reader& r, const json& doc, Scenario& s) {
  const json* regions = r.find(doc, "", "regions", false);
  if (!regions) return;
  if (!r.object(*regions, "/regions")) return;
  for (const auto& [name, spec] : regions->items()) {
    const std::string ptr = Reader::at("/regions", name);
    if (!r.object(spec, ptr)) continue;
    const auto shape = r.string(spec, ptr, "shape", true);
    const auto proj = r.indices(spec, ptr, "proj");
    Region region;
    if (shape == "box") {
      r.only(spec, ptr, {"shape", "lo", "hi", "proj"});
      const auto lo = r.numbers(spec, ptr, "lo", true);
      const auto hi = r.numbers(spec, ptr, "hi", true);
      if (!lo || !hi) continue;
      if (lo->size() != hi->size() || lo->empty()) {
        r.fail(ptr, "box bounds lo and hi must be non-empty and of equal length");
        continue;
      }
      bool ordered = true;
      for (std::size_t i = 0; i < lo->size(); ++i) ordered = ordered && (*lo)[i] <= (*hi)[i];
      if (!ordered) {
        r.fail(Reader::at(ptr, "lo"), "lower bound exceeds upper bound");
        continue;
      }
      region = Region::box(*lo, *hi, proj.value_or(std::vector<std::size_t>{}));
    } else if (shape == "ball") {
      r.only(spec, ptr, {"shape", "center", "radius", "proj"});
      const auto c = r.numbers(spec, ptr, "center", true);
      const auto radius = r.number(spec, ptr, "radius", true);
      if (!c || !radius) continue;
      if (c->empty()) {
        r.fail(Reader::at(ptr, "center"), "ball centre is empty");
        continue;
      }
      if (!(*radius > 0.0)) {
        r.fail(Reader::at(ptr, "radius"), "radius must be positive");
        continue;
      }
      region = Region::ball(*c, *radius, proj.value_or(std::vector<std::size_t>{}));
    } else {
      if (shape) r.fail(Reader::at(ptr, "shape"), "shape must be \"box\" or \"ball\"");
      continue;
    }
    if (proj && proj->size() != region.dim()) {
      r.fail(Reader::at(ptr, "proj"), "projection length differs from the region dimension");
      continue;
    }
    s.regions.emplace(name, std::move(region));
  }
}

void read_dynamics(Reader& r, const json& doc, Scenario& s) {
  const json* dyn = r.find(doc, "", "dynamics", true);
  if (!dyn || !r.object(*dyn, "/dynamics")) return;
  const std::string ptr = "/dynamics";
  r.only(*dyn, ptr, {"model", "dt", "x0", "bounds", "bounds_mode", "lead_profile"});
  if (auto kind = r.string(*dyn, ptr, "model", true)) {
    if (auto k = parse_model_kind(*kind)) {
      s.model = *k == ModelKind::single_integrator ? DynamicsModel::single_integrator()
                : *k == ModelKind::unicycle        ? DynamicsModel::unicycle()
                                                   : DynamicsModel::acc();
    } else {
      r.fail(Reader::at(ptr, "model"), "unknown model '" + *kind + "'");
    }
  }
  if (auto dt = r.number(*dyn, ptr, "dt", false)) {
    if (*dt > 0.0) s.model.dt = *dt;
    else r.fail(Reader::at(ptr, "dt"), "time step must be positive");
  }
  if (auto x0 = r.numbers(*dyn, ptr, "x0", true)) {
    if (x0->size() != s.model.state_dim()) {
      r.fail(Reader::at(ptr, "x0"), "initial state has " + std::to_string(x0->size()) +
                                        " entries, the model state has " +
                                        std::to_string(s.model.state_dim()));
    }
    s.x0 = *x0;
  }
  if (const json* b = r.find(*dyn, ptr, "bounds", false)) {
    const std::string bp = Reader::at(ptr, "bounds");
    if (r.object(*b, bp)) {
      r.only(*b, bp, {"lo", "hi"});
      const auto lo = r.numbers(*b, bp, "lo", true);
      const auto hi = r.numbers(*b, bp, "hi", true);
      if (lo && hi) {
        bool ok = lo->size() == s.model.control_dim() && hi->size() == s.model.control_dim();
        for (std::size_t i = 0; ok && i < lo->size(); ++i) ok = (*lo)[i] <= (*hi)[i];
        if (ok) s.model.bounds = ControlBounds{*lo, *hi};
        else r.fail(bp, "bounds must have one ordered [lo, hi] pair per control dimension");
      }
    }
  }
  if (auto mode = r.string(*dyn, ptr, "bounds_mode", false)) {
    if (auto m = parse_bounds_mode(*mode)) s.model.bounds_mode = *m;
    else r.fail(Reader::at(ptr, "bounds_mode"), "expected project, reject or none");
  }
  if (const json* lp = r.find(*dyn, ptr, "lead_profile", false)) {
    const std::string lpp = Reader::at(ptr, "lead_profile");
    if (s.model.kind != ModelKind::acc) r.fail(lpp, "a lead profile needs the acc model");
    if (r.object(*lp, lpp)) {
      r.only(*lp, lpp, {"starts", "speeds"});
      const auto starts = r.numbers(*lp, lpp, "starts", true);
      const auto speeds = r.numbers(*lp, lpp, "speeds", true);
      if (starts && speeds) {
        if (starts->size() != speeds->size() || starts->empty()) {
          r.fail(lpp, "starts and speeds must be non-empty and of equal length");
        } else {
          s.lead_profile = LeadProfile{*starts, *speeds};
        }
      }
    }
  }
}

void read_mode_settings(Reader& r, const json& doc, const std::string& key, ModeSettings& m,
                        std::size_t* total_steps) {
  const json* j = r.find(doc, "", key, false);
  if (!j) return;
  const std::string ptr = "/" + key;
  if (!r.object(*j, ptr)) return;
  if (total_steps) r.only(*j, ptr, {"horizon", "epochs", "guard_margin", "total_steps"});
  else r.only(*j, ptr, {"horizon", "epochs", "guard_margin"});
  if (auto h = r.count(*j, ptr, "horizon", false)) {
    if (*h >= 1) m.horizon = *h;
    else r.fail(Reader::at(ptr, "horizon"), "horizon must be at least 1");
  }
  if (auto k = r.count(*j, ptr, "epochs", false)) {
    if (*k >= 1) m.epochs = *k;
    else r.fail(Reader::at(ptr, "epochs"), "epoch count must be at least 1");
  }
  if (auto g = r.number(*j, ptr, "guard_margin", false)) {
    if (*g >= 0.0) m.guard_margin = *g;
    else r.fail(Reader::at(ptr, "guard_margin"), "guard margin must be non-negative");
  }
  if (total_steps) {
    if (auto t = r.count(*j, ptr, "total_steps", false)) {
      if (*t >= 1) *total_steps = *t;
      else r.fail(Reader::at(ptr, "total_steps"), "total_steps must be at least 1");
    }
  }
}

void read_planner(Reader& r, const json& doc, PlannerConfig& cfg) {
  const json* j = r.find(doc, "", "planner", false);
  if (!j) return;
  const std::string ptr = "/planner";
  if (!r.object(*j, ptr)) return;
  r.only(*j, ptr,
         {"learning_rate", "semiring", "seed", "early_stop", "restart_count", "adaptive",
          "backtracking", "control_penalty", "warm_start", "mpc_consumes_current_state"});
  if (auto v = r.number(*j, ptr, "learning_rate", false)) {
    if (*v > 0.0) cfg.learning_rate = *v;
    else r.fail(Reader::at(ptr, "learning_rate"), "learning rate must be positive");
  }
  if (auto v = r.string(*j, ptr, "semiring", false)) {
    if (auto s = parse_semiring(*v)) cfg.semiring = *s;
    else r.fail(Reader::at(ptr, "semiring"), "unknown semiring '" + *v + "'");
  }
  if (auto v = r.count(*j, ptr, "seed", false)) cfg.seed = *v;
  if (auto v = r.boolean(*j, ptr, "early_stop")) cfg.early_stop = *v;
  if (auto v = r.count(*j, ptr, "restart_count", false)) cfg.restart_count = *v;
  if (auto v = r.boolean(*j, ptr, "adaptive")) cfg.adaptive = *v;
  if (auto v = r.boolean(*j, ptr, "backtracking")) cfg.backtracking = *v;
  if (auto v = r.number(*j, ptr, "control_penalty", false)) {
    if (*v >= 0.0) cfg.control_penalty = *v;
    else r.fail(Reader::at(ptr, "control_penalty"), "control penalty must be non-negative");
  }
  if (auto v = r.boolean(*j, ptr, "warm_start")) cfg.warm_start = *v;
  if (auto v = r.boolean(*j, ptr, "mpc_consumes_current_state")) {
    cfg.mpc_consumes_current_state = *v;
  }
}

std::vector<Predicate> read_guard_list(Reader& r, const json& j, const std::string& ptr,
                                       const std::string& key, const RegionTable& regions,
                                       bool required) {
  std::vector<Predicate> out;
  const json* v = r.find(j, ptr, key, required);
  if (!v) return out;
  if (!v->is_array()) {
    r.fail(Reader::at(ptr, key), "expected an array of guards");
    return out;
  }
  for (std::size_t i = 0; i < v->size(); ++i) {
    if (auto g = r.guard((*v)[i], Reader::at(Reader::at(ptr, key), i), regions)) {
      out.push_back(std::move(*g));
    }
  }
  return out;
}

void read_automaton(Reader& r, const json& doc, Scenario& s) {
  const json* j = r.find(doc, "", "automaton", true);
  if (!j) return;
  const std::string ptr = "/automaton";
  if (!r.object(*j, ptr)) return;
  s.automaton_spec = *j;
  const std::size_t n = s.model.state_dim();
  const std::size_t before = r.issues.size();
  auto build = [&](auto&& f) {
    if (r.issues.size() != before) return;
    try {
      s.automaton.emplace(f());
    } catch (const std::exception& e) {
      r.fail(ptr, e.what());
    }
  };
  const int forms = static_cast<int>(j->contains("builder")) +
                    static_cast<int>(j->contains("inline")) + static_cast<int>(j->contains("file"));
  if (forms != 1) {
    r.fail(ptr, "give exactly one of \"builder\", \"inline\" or \"file\"");
    return;
  }
  if (j->contains("inline") || j->contains("file")) {
    r.only(*j, ptr, {"inline", "file"});
    json body;
    if (j->contains("inline")) {
      body = (*j)["inline"];
    } else {
      const auto file = r.string(*j, ptr, "file", true);
      if (!file) return;
      const auto path = s.base_dir / *file;
      std::ifstream in(path);
      if (!in) {
        r.fail(Reader::at(ptr, "file"), "cannot open " + path.string());
        return;
      }
      try {
        body = json::parse(in);
      } catch (const json::exception& e) {
        r.fail(Reader::at(ptr, "file"), std::string("malformed JSON: ") + e.what());
        return;
      }
    }
    build([&] { return automaton_from_json(body, s.regions, n); });
    return;
  }
  const auto builder = r.string(*j, ptr, "builder", true);
  if (!builder) return;
  if (*builder == "sequence_visit") {
    r.only(*j, ptr, {"builder", "goals", "avoid"});
    auto goals = read_guard_list(r, *j, ptr, "goals", s.regions, true);
    auto avoid = read_guard_list(r, *j, ptr, "avoid", s.regions, false);
    build([&] { return build_sequence_visit(goals, avoid, n); });
  } else if (*builder == "any_order_visit") {
    r.only(*j, ptr, {"builder", "goals", "avoid"});
    std::vector<DwellGoal> goals;
    const json* gs = r.find(*j, ptr, "goals", true);
    if (gs && !gs->is_array()) r.fail(Reader::at(ptr, "goals"), "expected an array of goals");
    if (gs && gs->is_array()) {
      for (std::size_t i = 0; i < gs->size(); ++i) {
        const std::string gp = Reader::at(Reader::at(ptr, "goals"), i);
        const json& g = (*gs)[i];
        if (g.is_string()) {
          if (auto p = r.guard(g, gp, s.regions)) goals.push_back({std::move(*p), 1});
          continue;
        }
        if (!r.object(g, gp)) continue;
        r.only(g, gp, {"guard", "dwell"});
        const json* text = r.find(g, gp, "guard", true);
        const auto dwell = r.count(g, gp, "dwell", false).value_or(1);
        if (dwell < 1) r.fail(Reader::at(gp, "dwell"), "dwell must be at least 1");
        if (text) {
          if (auto p = r.guard(*text, Reader::at(gp, "guard"), s.regions)) {
            goals.push_back({std::move(*p), dwell});
          }
        }
      }
    }
    auto avoid = read_guard_list(r, *j, ptr, "avoid", s.regions, false);
    build([&] { return build_any_order_visit(goals, avoid, n); });
  } else if (*builder == "bounded_response") {
    r.only(*j, ptr, {"builder", "invariant", "trigger", "response", "deadline"});
    std::optional<Predicate> parts[3];
    const char* keys[3] = {"invariant", "trigger", "response"};
    for (int i = 0; i < 3; ++i) {
      if (const json* g = r.find(*j, ptr, keys[i], true)) {
        parts[i] = r.guard(*g, Reader::at(ptr, keys[i]), s.regions);
      }
    }
    const auto deadline = r.count(*j, ptr, "deadline", true);
    if (deadline && *deadline < 1) r.fail(Reader::at(ptr, "deadline"), "deadline must be at least 1");
    build([&] { return build_bounded_response(*parts[0], *parts[1], *parts[2], *deadline, n); });
  } else if (*builder == "acc") {
    r.only(*j, ptr, {"builder", "v_ref", "t_safe", "d_safe", "deadline", "epsilon"});
    AccSpec spec;
    if (auto v = r.number(*j, ptr, "v_ref", false)) spec.v_ref = *v;
    if (auto v = r.number(*j, ptr, "t_safe", false)) spec.t_safe = *v;
    if (auto v = r.number(*j, ptr, "d_safe", false)) spec.d_safe = *v;
    if (auto v = r.count(*j, ptr, "deadline", false)) spec.deadline = *v;
    if (auto v = r.number(*j, ptr, "epsilon", false)) spec.epsilon = *v;
    if (spec.deadline < 1) r.fail(Reader::at(ptr, "deadline"), "deadline must be at least 1");
    if (!(spec.epsilon > 0.0)) r.fail(Reader::at(ptr, "epsilon"), "epsilon must be positive");
    if (s.model.kind != ModelKind::acc) r.fail(ptr, "the acc builder needs the acc model");
    s.acc = spec;
    build([&] {
      const AccGuards g = acc_guards(spec);
      return build_bounded_response(g.invariant, g.trigger, g.response, spec.deadline, n);
    });
  } else {
    r.fail(Reader::at(ptr, "builder"), "unknown builder '" + *builder + "'");
  }
}

void read_formula(Reader& r, const json& doc, Scenario& s) {
  auto text = r.string(doc, "", "stl_formula", !s.acc.has_value());
  if (!text && s.acc) text = acc_guards(*s.acc).formula;
  if (!text) return;
  s.stl_text = *text;
  try {
    s.formula.emplace(stl::parse_formula(*text, s.regions));
  } catch (const UnknownRegion& e) {
    r.fail("/stl_formula", "formula names unknown region '" + e.name() + "'");
  } catch (const std::exception& e) {
    r.fail("/stl_formula", e.what());
  }
}

void read_outputs(Reader& r, const json& doc, Outputs& o) {
  const json* j = r.find(doc, "", "outputs", false);
  if (!j || !r.object(*j, "/outputs")) return;
  r.only(*j, "/outputs", {"trajectory", "stats", "report"});
  if (auto v = r.string(*j, "/outputs", "trajectory", false)) o.trajectory = *v;
  if (auto v = r.string(*j, "/outputs", "stats", false)) o.stats = *v;
  if (auto v = r.string(*j, "/outputs", "report", false)) o.report = *v;
}

json region_json(const Region& r) {
  json j;
  if (r.shape == Region::Shape::box) {
    j["shape"] = "box";
    j["lo"] = r.lo;
    j["hi"] = r.hi;
  } else {
    j["shape"] = "ball";
    j["center"] = r.center;
    j["radius"] = r.radius;
  }
  if (!r.proj.empty()) j["proj"] = r.proj;
  return j;
}

}  // namespace

ScenarioError::ScenarioError(std::vector<Issue> issues)
    : std::runtime_error(summarize(issues)), issues_(std::move(issues)) {}

PlannerConfig Scenario::effective_config() const {
  PlannerConfig cfg = planner;
  cfg.horizon = active().horizon;
  cfg.epochs = active().epochs;
  return cfg;
}

AccGuards acc_guards(const AccSpec& spec) {
  // state (p_ego, v_ego, d_lead, v_rel); d_follow = d_safe + t_safe * v_ego
  auto f = [](double v) { return format_number(v); };
  const std::string inv = "affine(0, 0, 1, 0; " + f(-spec.d_safe) + ") >= 0";
  const std::string trig = "affine(0, " + f(-spec.t_safe) + ", 1, 0; " + f(-spec.d_safe) + ") >= 0";
  const std::string near = "(affine(0, 1, 0, 0; " + f(-(spec.v_ref - spec.epsilon)) +
                           ") >= 0 & affine(0, -1, 0, 0; " + f(spec.v_ref + spec.epsilon) +
                           ") >= 0)";
  const std::string close = "affine(0, " + f(spec.t_safe) + ", -1, 0; " + f(spec.d_safe) + ") >= 0";
  const std::string resp = near + " | " + close;
  const RegionTable none;
  return {parse_predicate(inv, none), parse_predicate(trig, none), parse_predicate(resp, none),
          "G " + inv + " & G (" + trig + " -> F[0, " + std::to_string(spec.deadline) + "] (" +
              resp + "))"};
}

Scenario parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
  Reader r;
  Scenario s;
  s.base_dir = base_dir;
  if (!r.object(doc, "")) throw ScenarioError(std::move(r.issues));
  r.only(doc, "", {"name", "description", "regions", "automaton", "stl_formula", "dynamics",
                   "planner", "mode", "open_loop", "mpc", "outputs"});
  if (auto v = r.string(doc, "", "name", true)) s.name = *v;
  if (auto v = r.string(doc, "", "description", false)) s.description = *v;
  read_regions(r, doc, s);
  read_dynamics(r, doc, s);
  read_planner(r, doc, s.planner);
  if (auto v = r.string(doc, "", "mode", false)) {
    if (auto m = parse_mode(*v)) s.mode = *m;
    else r.fail("/mode", "mode must be open_loop or mpc");
  }
  read_mode_settings(r, doc, "open_loop", s.open_loop, nullptr);
  read_mode_settings(r, doc, "mpc", s.mpc, &s.total_steps);
  read_automaton(r, doc, s);
  read_formula(r, doc, s);
  read_outputs(r, doc, s.outputs);
  if (s.automaton && s.automaton->state_dim() != s.model.state_dim()) {
    r.fail("/automaton", "automaton reads " + std::to_string(s.automaton->state_dim()) +
                             "-dimensional states, the model has " +
                             std::to_string(s.model.state_dim()));
  }
  if (s.formula) {
    for (const auto& [name, region] : s.regions) {
      for (auto p : region.projection()) {
        if (p >= s.model.state_dim()) {
          r.fail(Reader::at("/regions", name), "projection index " + std::to_string(p) +
                                                   " is outside the model state");
          break;
        }
      }
    }
  }
  if (s.lead_profile && s.model.kind != ModelKind::acc) s.lead_profile.reset();
  if (!r.issues.empty()) throw ScenarioError(std::move(r.issues));
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError({{"", "cannot open " + path.string()}});
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ScenarioError({{"", std::string("malformed JSON: ") + e.what()}});
  }
  return parse_scenario(doc, path.parent_path());
}

json serialize(const Scenario& s) {
  json j;
  j["name"] = s.name;
  if (!s.description.empty()) j["description"] = s.description;
  j["regions"] = json::object();
  for (const auto& [name, region] : s.regions) j["regions"][name] = region_json(region);
  j["automaton"] = s.automaton_spec;
  j["stl_formula"] = s.stl_text;
  json dyn;
  dyn["model"] = to_string(s.model.kind);
  dyn["dt"] = s.model.dt;
  dyn["x0"] = s.x0;
  if (s.model.bounds) dyn["bounds"] = {{"lo", s.model.bounds->lo}, {"hi", s.model.bounds->hi}};
  dyn["bounds_mode"] = to_string(s.model.bounds_mode);
  if (s.lead_profile) {
    dyn["lead_profile"] = {{"starts", s.lead_profile->starts}, {"speeds", s.lead_profile->speeds}};
  }
  j["dynamics"] = dyn;
  const PlannerConfig& p = s.planner;
  j["planner"] = {{"learning_rate", p.learning_rate},
                  {"semiring", std::string(to_string(p.semiring))},
                  {"seed", p.seed},
                  {"early_stop", p.early_stop},
                  {"restart_count", p.restart_count},
                  {"adaptive", p.adaptive},
                  {"backtracking", p.backtracking},
                  {"control_penalty", p.control_penalty},
                  {"warm_start", p.warm_start},
                  {"mpc_consumes_current_state", p.mpc_consumes_current_state}};
  j["mode"] = to_string(s.mode);
  j["open_loop"] = {{"horizon", s.open_loop.horizon},
                    {"epochs", s.open_loop.epochs},
                    {"guard_margin", s.open_loop.guard_margin}};
  j["mpc"] = {{"horizon", s.mpc.horizon},
              {"epochs", s.mpc.epochs},
              {"guard_margin", s.mpc.guard_margin},
              {"total_steps", s.total_steps}};
  j["outputs"] = {{"trajectory", s.outputs.trajectory},
                  {"stats", s.outputs.stats},
                  {"report", s.outputs.report}};
  return j;
}

std::string git_blob_hash(std::string_view bytes) {
  const std::string header = "blob " + std::to_string(bytes.size()) + std::string(1, '\0');
  const std::string blob = header + std::string(bytes);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_Digest(blob.data(), blob.size(), digest.data(), &len, EVP_sha1(), nullptr);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string scenario_hash(const Scenario& s) { return git_blob_hash(serialize(s).dump()); }

}  // namespace symaut::cli
