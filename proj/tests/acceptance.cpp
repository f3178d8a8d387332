// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include "oracles.hpp"
#include "symaut/algebra/numeric.hpp"
#include "symaut/cli/run.hpp"
#include "symaut/cli/scenario.hpp"

using namespace symaut;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

cli::Scenario load(const char* file) {
  return cli::load_scenario(std::filesystem::path(SYMAUT_SOURCE_DIR) / "scenarios" / file);
}

cli::RunArtifacts run_with(cli::Scenario s, SemiringTag sr, cli::Mode mode) {
  cli::RunOverrides o;
  o.semiring = sr;
  o.mode = mode;
  return cli::run(cli::apply_overrides(std::move(s), o));
}

std::string rho_text(const cli::RunReport& r) {
  return r.rho ? fmt::format("{:.4f}", *r.rho) : std::string("none");
}

std::string tstar_text(const cli::RunReport& r) {
  return r.t_star ? std::to_string(*r.t_star) : std::string("none");
}

constexpr SemiringTag kAll[] = {SemiringTag::boolean, SemiringTag::minmax, SemiringTag::maxplus,
                                SemiringTag::minplus};

// 1 -----------------------------------------------------------------------
Outcome semiring_laws() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  std::size_t failures = 0;
  for (auto s : kAll) {
    const Weight zero = Weight::zero(s), one = Weight::one(s);
    for (int i = 0; i < 1000; ++i) {
      const Weight a(oracle::random_carrier(s, rng)), b(oracle::random_carrier(s, rng)),
          c(oracle::random_carrier(s, rng));
      const bool ok =
          sr_add(sr_add(a, b, s), c, s) == sr_add(a, sr_add(b, c, s), s) &&
          sr_add(a, b, s) == sr_add(b, a, s) &&
          sr_mul(sr_mul(a, b, s), c, s) == sr_mul(a, sr_mul(b, c, s), s) &&
          sr_mul(a, sr_add(b, c, s), s) == sr_add(sr_mul(a, b, s), sr_mul(a, c, s), s) &&
          sr_mul(sr_add(b, c, s), a, s) == sr_add(sr_mul(b, a, s), sr_mul(c, a, s), s) &&
          sr_add(a, zero, s) == a && sr_add(zero, a, s) == a && sr_mul(a, one, s) == a &&
          sr_mul(one, a, s) == a && sr_mul(a, zero, s) == zero && sr_mul(zero, a, s) == zero;
      failures += !ok;
    }
  }
  const double dt = seconds_since(t0);
  return {failures == 0 && dt < 1.0,
          fmt::format("4 semirings x 1000 triples, {} failures, {:.3f} s (limit 1 s)", failures, dt)};
}

// 2 -----------------------------------------------------------------------
Outcome weight_acceptance() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(102);
  std::size_t tested = 0, failures = 0;
  while (tested < 600) {
    const SymbolicAutomaton a = oracle::random_automaton(rng, 5);
    const Trace xi = oracle::random_trace(rng, 8);
    if (oracle::trace_margin(a, xi) <= 1e-9) continue;
    ++tested;
    const bool acc = accepts(a, xi);
    const bool independent = oracle::accepts(a, xi);
    const double wb = trajectory_weight(a, xi, SemiringTag::boolean).value();
    const double wm = trajectory_weight(a, xi, SemiringTag::maxplus).value();
    const bool ok = acc == independent && wb == (acc ? 1.0 : 0.0) && (wm == 0.0) == acc &&
                    (acc || wm < 0.0);
    failures += !ok;
  }
  const double dt = seconds_since(t0);
  return {failures == 0 && dt < 30.0,
          fmt::format("{} instances, {} failures, {:.2f} s (limit 30 s)", tested, failures, dt)};
}

// 3 -----------------------------------------------------------------------
Outcome memoization() {
  std::mt19937_64 rng(103);
  std::size_t failures = 0;
  for (int i = 0; i < 200; ++i) {
    const SymbolicAutomaton a = oracle::random_automaton(rng, 5);
    const Trace xi = oracle::random_trace(rng, 8);
    for (auto s : {SemiringTag::minmax, SemiringTag::maxplus, SemiringTag::minplus}) {
      WVector q = alpha_beta(a, s).first;
      const WVector alpha = q;
      WMatrix prod = WMatrix::identity(a.n_locations(), s);
      for (const auto& x : xi) {
        q = step_weight_vector(q, x, a, s);
        prod = mat_mul(prod, operator_matrix(a, x, s));
        failures += !(q == vec_mat(alpha, prod));
      }
    }
  }
  return {failures == 0, fmt::format("200 traces x 3 semirings, {} prefix mismatches", failures)};
}

// 4 -----------------------------------------------------------------------
Outcome gradients() {
  std::mt19937_64 rng(104);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::uniform_int_distribution<std::size_t> horizon(2, 6);
  const auto model = DynamicsModel::single_integrator(0.1);
  const double h = 1e-5;
  std::size_t checked = 0, failures = 0, attempts = 0;
  double worst = 0.0;
  while (checked < 100 && attempts < 20000) {
    ++attempts;
    const SymbolicAutomaton a = oracle::random_automaton(rng, 4);
    const SemiringTag s = attempts % 2 ? SemiringTag::maxplus : SemiringTag::minmax;
    const std::size_t H = horizon(rng);
    std::vector<double> us(2 * H);
    for (auto& v : us) v = 2 * u(rng);
    const std::vector<double> x0{u(rng), u(rng)};

    ad::Tape tape;
    const Recorder rec{&tape};
    std::vector<ad::Var> vars;
    for (double v : us) vars.push_back(tape.input(v));
    const auto trace = rollout(rec, model, x0, std::span<const ad::Var>(vars));
    auto [alpha, beta] = alpha_beta(a, s);
    std::vector<ad::Var> q, b;
    for (double v : alpha.values()) q.push_back(tape.constant(v));
    for (double v : beta.values()) b.push_back(tape.constant(v));
    for (const auto& x : trace) {
      q = a.step(rec, std::span<const ad::Var>(q), std::span<const ad::Var>(x), s);
    }
    const ad::Var out = tape.semiring_dot(s, q, b);
    const double value = tape.evaluate(out);
    if (!std::isfinite(value) || tape.branch_margin() <= 1e-3) continue;

    auto weight_at = [&](const std::vector<double>& c) {
      ControlSequence cs;
      for (std::size_t k = 0; k < H; ++k) cs.push_back({c[2 * k], c[2 * k + 1]});
      return trajectory_weight(a, rollout(model, x0, cs), s).value();
    };
    if (weight_at(us) != value) {
      ++failures;
      ++checked;
      continue;
    }
    const auto g = tape.gradient(out);
    bool ok = true;
    for (std::size_t k = 0; k < us.size(); ++k) {
      auto p = us, m = us;
      p[k] += h;
      m[k] -= h;
      const double fd = (weight_at(p) - weight_at(m)) / (2 * h);
      const double err = std::fabs(g[k] - fd) / std::max(1.0, std::fabs(fd));
      worst = std::max(worst, err);
      ok = ok && err <= 1e-4;
    }
    failures += !ok;
    ++checked;
  }
  return {checked >= 100 && failures == 0,
          fmt::format("{} weight tapes (winner margin > 1e-3), {} failures, worst relative error "
                      "{:.2e} (limit 1e-4, h = 1e-5)",
                      checked, failures, worst)};
}

// 5 -----------------------------------------------------------------------
Outcome stl_soundness() {
  std::mt19937_64 rng(105);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::uniform_int_distribution<std::size_t> len(1, 10);
  std::size_t tested = 0, failures = 0;
  while (tested < 600) {
    const stl::Formula f = oracle::random_formula(rng, 3);
    Trace xi(len(rng));
    for (auto& x : xi) x = {u(rng)};
    if (oracle::stl_atom_margin(f, xi) <= 1e-6) continue;
    const double rho = stl::robustness(f, xi);
    if (std::fabs(rho) <= 1e-6) continue;
    ++tested;
    failures += (rho > 0) != oracle::stl_holds(f, xi, 0);
  }

  const cli::Scenario p2 = load("phi2.json");
  const SymbolicAutomaton& a = *p2.automaton;
  const stl::Formula& phi = *p2.formula;
  std::vector<State> anchors;
  for (const char* name : {"red", "green", "orange", "blue"}) anchors.push_back(p2.regions.at(name).centre());
  std::uniform_int_distribution<int> pick(0, 4);
  std::size_t cross = 0, cross_fail = 0, accepted = 0;
  for (int i = 0; i < 20000 && cross < 500; ++i) {
    Trace xi;
    for (int w = 0; w < 7; ++w) {
      const int k = pick(rng);
      State x{u(rng), u(rng), u(rng), u(rng), u(rng)};
      if (k < 4) {
        x[0] = anchors[k][0] + 0.1 * u(rng);
        x[1] = anchors[k][1] + 0.1 * u(rng);
      }
      xi.push_back(x);
    }
    if (std::min(oracle::trace_margin(a, xi), oracle::stl_atom_margin(phi, xi)) <= 1e-6) continue;
    ++cross;
    const bool acc = oracle::accepts(a, xi);
    accepted += acc;
    cross_fail += acc != (stl::robustness(phi, xi) > 0) || acc != oracle::stl_holds(phi, xi, 0);
  }
  return {tested >= 500 && failures == 0 && cross >= 500 && cross_fail == 0 && accepted > 0,
          fmt::format("{} formula/trace pairs, {} sign mismatches; {} phi2 traces ({} accepted), "
                      "{} automaton/STL mismatches",
                      tested, failures, cross, accepted, cross_fail)};
}

// 6 -----------------------------------------------------------------------
Outcome complement_product() {
  std::mt19937_64 rng(106);
  std::size_t failures = 0, checks = 0;
  for (int i = 0; i < 200; ++i) {
    const SymbolicAutomaton a = oracle::random_dc_automaton(rng);
    const SymbolicAutomaton b = oracle::random_dc_automaton(rng);
    const SymbolicAutomaton c = complement(a);
    const SymbolicAutomaton p = product(a, b);
    failures += !p.deterministic() || !p.complete();
    for (int k = 0; k < 10; ++k) {
      const Trace xi = oracle::random_trace(rng, 8);
      if (std::min(oracle::trace_margin(a, xi), oracle::trace_margin(b, xi)) <= 1e-9) continue;
      ++checks;
      const bool in_a = oracle::accepts(a, xi), in_b = oracle::accepts(b, xi);
      failures += oracle::accepts(c, xi) == in_a;
      failures += oracle::accepts(p, xi) != (in_a && in_b);
    }
  }
  return {failures == 0 && checks > 0,
          fmt::format("200 automata, {} trace checks, {} failures", checks, failures)};
}

// 7, 8 ----------------------------------------------------------------------
cli::RunArtifacts phi1_maxplus, phi2_maxplus;

Outcome open_loop_run(const char* file, bool require_order, cli::RunArtifacts& keep) {
  const cli::Scenario s = load(file);
  std::string detail;
  bool pass = true;
  std::optional<std::size_t> t_mm, t_mp;
  for (auto sr : {SemiringTag::minmax, SemiringTag::maxplus}) {
    const auto t0 = Clock::now();
    cli::RunArtifacts art = run_with(s, sr, cli::Mode::open_loop);
    const double dt = seconds_since(t0);
    const auto& r = art.report;
    const bool ok = r.t_star && *r.t_star <= s.open_loop.epochs && r.rho && *r.rho >= 0.0 &&
                    dt < 300.0;
    pass = pass && ok;
    (sr == SemiringTag::minmax ? t_mm : t_mp) = r.t_star;
    detail += fmt::format("{} t* {} rho {} {:.1f} s; ", r.semiring, tstar_text(r), rho_text(r), dt);
    if (sr == SemiringTag::maxplus) keep = std::move(art);
  }
  if (require_order) {
    const bool ordered = t_mm && t_mp && *t_mp < *t_mm;
    pass = pass && ordered;
    detail += ordered ? "maxplus t* < minmax t*" : "maxplus t* not below minmax t*";
  }
  detail += fmt::format(" (H {}, k {}, limit 300 s per run)", s.open_loop.horizon,
                        s.open_loop.epochs);
  return {pass, detail};
}

// 9 -----------------------------------------------------------------------
Outcome closed_loop_runs() {
  bool pass = true;
  std::string detail;
  for (const char* file : {"phi1.json", "phi2.json"}) {
    const cli::Scenario s = load(file);
    for (auto sr : {SemiringTag::minmax, SemiringTag::maxplus}) {
      const auto t0 = Clock::now();
      const auto art = run_with(s, sr, cli::Mode::mpc);
      const double dt = seconds_since(t0);
      const auto& r = art.report;
      pass = pass && r.rho && *r.rho >= 0.0 && dt < 600.0 && !r.dead_end;
      detail += fmt::format("{} {} rho {} {:.1f} s; ", s.name, r.semiring, rho_text(r), dt);
    }
    detail += fmt::format("{} steps H {} k {}; ", s.total_steps, s.mpc.horizon, s.mpc.epochs);
  }
  return {pass, detail + "limit 600 s each"};
}

// 10 ----------------------------------------------------------------------
Outcome acc_run() {
  const cli::Scenario s = load("acc.json");
  bool pass = true;
  std::string detail;
  for (auto sr : {SemiringTag::maxplus, SemiringTag::minmax}) {
    const auto t0 = Clock::now();
    const auto art = run_with(s, sr, cli::Mode::mpc);
    const double dt = seconds_since(t0);
    const auto& r = art.report;
    if (sr == SemiringTag::maxplus) {
      pass = pass && r.rho && *r.rho > 0.0;
    } else {
      pass = pass && r.rho.has_value();
    }
    pass = pass && dt < 1800.0;
    detail += fmt::format("{} rho {} {:.1f} s; ", r.semiring, rho_text(r), dt);
  }
  return {pass, detail + fmt::format("{} steps H {} k {}, limit 1800 s each", s.total_steps,
                                     s.mpc.horizon, s.mpc.epochs)};
}

// 11 ----------------------------------------------------------------------
Outcome determinism() {
  bool pass = true;
  std::string detail;
  for (auto [file, first] : {std::pair{"phi1.json", &phi1_maxplus}, std::pair{"phi2.json", &phi2_maxplus}}) {
    const auto again = run_with(load(file), SemiringTag::maxplus, cli::Mode::open_loop);
    const bool same = !first->trajectory_csv.empty() && again.trajectory_csv == first->trajectory_csv;
    pass = pass && same;
    detail += fmt::format("{} maxplus CSV {} ({} bytes); ", file, same ? "identical" : "differs",
                          again.trajectory_csv.size());
  }
  return {pass, detail + "seed 0"};
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::warn);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"semiring laws", semiring_laws},
      {"weight/acceptance equivalence", weight_acceptance},
      {"memoization soundness", memoization},
      {"gradient correctness", gradients},
      {"STL sign soundness and phi2 cross-validation", stl_soundness},
      {"complement and product laws", complement_product},
      {"phi1 open loop", [] { return open_loop_run("phi1.json", true, phi1_maxplus); }},
      {"phi2 open loop", [] { return open_loop_run("phi2.json", false, phi2_maxplus); }},
      {"phi1/phi2 closed loop", closed_loop_runs},
      {"ACC closed loop", acc_run},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %2zu %s: %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
