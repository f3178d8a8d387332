#include "symaut/cli/run.hpp"

#include <chrono>
#include <cmath>
#include <atomic>
#include <fstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "symaut/cli/table.hpp"

namespace symaut::cli {

using nlohmann::json;

Scenario apply_overrides(Scenario s, const RunOverrides& o) {
  if (o.semiring) s.planner.semiring = *o.semiring;
  if (o.mode) s.mode = *o.mode;
  if (o.seed) s.planner.seed = *o.seed;
  return s;
}

int RunReport::exit_code() const {
  if (rho && *rho >= 0.0) return 0;
  return dead_end ? 2 : 1;
}

json number_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return semiring::kInf;
  if (s == "-inf") return -semiring::kInf;
  return std::nan("");
}

json report_to_json(const RunReport& r) {
  json j;
  j["scenario"] = r.scenario;
  j["semiring"] = r.semiring;
  j["mode"] = r.mode;
  j["seed"] = r.seed;
  j["t_star"] = r.t_star ? json(*r.t_star) : json(nullptr);
  j["rho"] = r.rho ? number_json(*r.rho) : json(nullptr);
  j["final_weight"] = number_json(r.final_weight);
  j["wall_clock_s"] = r.wall_clock_s;
  j["epochs_used"] = r.epochs_used;
  j["dead_end"] = r.dead_end;
  j["violated_at"] = r.violated_at ? json(*r.violated_at) : json(nullptr);
  j["config"] = r.config;
  j["input_hash"] = r.input_hash;
  j["exit_code"] = r.exit_code();
  return j;
}

RunReport report_from_json(const json& j) {
  RunReport r;
  r.scenario = j.at("scenario").get<std::string>();
  r.semiring = j.at("semiring").get<std::string>();
  r.mode = j.at("mode").get<std::string>();
  r.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("t_star") && !j["t_star"].is_null()) r.t_star = j["t_star"].get<std::size_t>();
  if (j.contains("rho") && !j["rho"].is_null()) r.rho = number_from_json(j["rho"]);
  if (j.contains("final_weight")) r.final_weight = number_from_json(j["final_weight"]);
  r.wall_clock_s = j.value("wall_clock_s", 0.0);
  r.epochs_used = j.value("epochs_used", std::size_t{0});
  r.dead_end = j.value("dead_end", false);
  if (j.contains("violated_at") && !j["violated_at"].is_null()) {
    r.violated_at = j["violated_at"].get<std::size_t>();
  }
  r.config = j.value("config", json::object());
  r.input_hash = j.value("input_hash", std::string());
  return r;
}

std::string trajectory_csv(const Scenario& s, const Trace& trace, const ControlSequence& controls) {
  const SemiringTag sr = s.planner.semiring;
  const SymbolicAutomaton& a = *s.automaton;
  const std::size_t n = s.model.state_dim();
  const std::size_t m = s.model.control_dim();
  std::string out = "t";
  for (std::size_t i = 0; i < n; ++i) out += ",x" + std::to_string(i);
  for (std::size_t i = 0; i < m; ++i) out += ",u" + std::to_string(i);
  out += ",weight\r\n";
  auto [alpha, beta] = alpha_beta(a, sr);
  std::vector<double> q(alpha.values().begin(), alpha.values().end());
  for (std::size_t t = 0; t < trace.size(); ++t) {
    q = a.step(Real{}, std::span<const double>(q), std::span<const double>(trace[t]), sr);
    double w = semiring::zero(sr);
    for (auto f : a.accepting()) w = semiring::plus(sr, w, q[f]);
    out += std::to_string(t);
    for (double v : trace[t]) out += "," + format_number(v);
    for (std::size_t i = 0; i < m; ++i) {
      out += ",";
      if (t < controls.size()) out += format_number(controls[t][i]);
    }
    out += "," + format_number(w) + "\r\n";
  }
  return out;
}

RunArtifacts run(const Scenario& s) {
  const PlannerConfig cfg = s.effective_config();
  const SemiringTag sr = cfg.semiring;
  const ModeSettings& ms = s.active();
  const SymbolicAutomaton plan_automaton =
      ms.guard_margin > 0.0 ? tightened(*s.automaton, ms.guard_margin) : *s.automaton;

  RunArtifacts art;
  RunReport& rep = art.report;
  rep.scenario = s.name;
  rep.semiring = std::string(to_string(sr));
  rep.mode = to_string(s.mode);
  rep.seed = cfg.seed;
  rep.config = serialize(s);
  rep.input_hash = scenario_hash(s);

  json& st = art.stats;
  st["scenario"] = s.name;
  st["semiring"] = rep.semiring;
  st["mode"] = rep.mode;
  st["seed"] = cfg.seed;
  st["horizon"] = cfg.horizon;
  st["epochs"] = cfg.epochs;
  st["learning_rate"] = cfg.learning_rate;
  st["guard_margin"] = ms.guard_margin;
  st["input_hash"] = rep.input_hash;

  spdlog::info("{}: {} {} horizon {} epochs {} margin {}", s.name, rep.mode, rep.semiring,
               cfg.horizon, cfg.epochs, ms.guard_margin);
  const auto t0 = std::chrono::steady_clock::now();
  Trace trace;
  ControlSequence controls;
  if (s.mode == Mode::open_loop) {
    auto [alpha, beta] = alpha_beta(plan_automaton, sr);
    std::vector<double> q(alpha.values().begin(), alpha.values().end());
    PlanResult res = open_loop(s.model, plan_automaton, s.x0, q, cfg, nullptr, &*s.formula);
    rep.t_star = res.t_star;
    rep.rho = res.rho;
    rep.epochs_used = res.epochs_used;
    rep.dead_end = res.dead_tape;
    json hist = json::array();
    for (double w : res.weight_history) hist.push_back(number_json(w));
    st["weight_history"] = std::move(hist);
    st["planned_weight"] = number_json(res.final_weight);
    trace = std::move(res.trace);
    controls = std::move(res.controls);
  } else {
    std::unique_ptr<Environment> env;
    if (s.model.kind == ModelKind::acc) {
      env = std::make_unique<LeadCarEnvironment>(s.model.dt,
                                                 s.lead_profile.value_or(LeadProfile::standard()));
    } else {
      env = std::make_unique<ModelEnvironment>(s.model);
    }
    MpcResult res = mpc(s.model, *env, plan_automaton, s.x0, cfg, s.total_steps, &*s.formula);
    rep.rho = res.rho;
    rep.dead_end = res.violated;
    rep.violated_at = res.violated_at;
    json hist = json::array();
    json per_step = json::array();
    for (const auto& step : res.steps) {
      rep.epochs_used += step.epochs_used;
      hist.push_back(number_json(step.planned_weight));
      per_step.push_back(step.epochs_used);
    }
    st["weight_history"] = std::move(hist);
    st["epochs_per_step"] = std::move(per_step);
    st["total_steps"] = s.total_steps;
    trace = std::move(res.trace);
    controls = std::move(res.controls);
  }
  rep.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.final_weight = trajectory_weight(*s.automaton, trace, sr).value();
  st["t_star"] = rep.t_star ? json(*rep.t_star) : json(nullptr);
  st["rho"] = rep.rho ? number_json(*rep.rho) : json(nullptr);
  st["final_weight"] = number_json(rep.final_weight);
  st["epochs_used"] = rep.epochs_used;
  st["dead_end"] = rep.dead_end;
  st["trace_length"] = trace.size();
  art.trajectory_csv = trajectory_csv(s, trace, controls);
  spdlog::info("{}: rho {} t* {} in {:.2f}s", s.name, rep.rho ? *rep.rho : std::nan(""),
               rep.t_star ? static_cast<long>(*rep.t_star) : -1L, rep.wall_clock_s);
  return art;
}

void write_artifacts(const RunArtifacts& a, const Scenario& s, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto write = [&](const std::string& name, const std::string& text) {
    const auto path = out_dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
  };
  write(s.outputs.trajectory, a.trajectory_csv);
  write(s.outputs.stats, a.stats.dump(2) + "\n");
  write(s.outputs.report, report_to_json(a.report).dump(2) + "\n");
}

std::string run_directory_name(const Scenario& s) {
  return s.name + "_" + to_string(s.mode) + "_" + std::string(to_string(s.planner.semiring)) +
         "_s" + std::to_string(s.planner.seed);
}

std::vector<RunReport> sweep(const std::vector<SweepJob>& jobs,
                             const std::filesystem::path& out_dir, std::size_t workers) {
  std::vector<std::optional<RunReport>> slots(jobs.size());
  std::vector<std::string> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        const Scenario& s = jobs[i].scenario;
        RunArtifacts art = run(s);
        write_artifacts(art, s, out_dir / run_directory_name(s));
        slots[i] = std::move(art.report);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  workers = std::max<std::size_t>(1, std::min(workers, jobs.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::vector<RunReport> reports;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!errors[i].empty()) {
      throw std::runtime_error(run_directory_name(jobs[i].scenario) + ": " + errors[i]);
    }
    reports.push_back(std::move(*slots[i]));
  }
  sort_reports(reports);
  return reports;
}

}  // namespace symaut::cli
