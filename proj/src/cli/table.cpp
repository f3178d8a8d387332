#include "symaut/cli/table.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <tuple>

namespace symaut::cli {

namespace {

// Published figures, keyed by (scenario, mode). Order: minmax, maxplus, STLCG, MILP.
struct RefRow {
  const char* minmax;
  const char* maxplus;
  const char* stlcg;
  const char* milp;
};

const std::map<std::pair<std::string, std::string>, RefRow>& ref_rows() {
  static const std::map<std::pair<std::string, std::string>, RefRow> rows{
      {{"phi1", "open_loop"}, {"746", "78", "1164", "42265"}},
      {{"phi1", "mpc"}, {"0.0", "0.0", "--", "--"}},
      {{"phi2", "open_loop"}, {"35", "425", "234", "--"}},
      {{"phi2", "mpc"}, {"0.060", "0.048", "--", "--"}},
      {{"acc", "mpc"}, {"-1.78", "0.4", "-2.21", "0.6"}},
  };
  return rows;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string cell(const RunReport& r) {
  if (r.mode == "open_loop") {
    if (r.t_star) return std::to_string(*r.t_star);
    return "none (rho " + (r.rho ? fixed(*r.rho, 3) : std::string("?")) + ")";
  }
  return r.rho ? fixed(*r.rho, 3) : "?";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void sort_reports(std::vector<RunReport>& reports) {
  std::stable_sort(reports.begin(), reports.end(), [](const RunReport& a, const RunReport& b) {
    return std::tie(a.scenario, a.mode, a.semiring, a.seed) <
           std::tie(b.scenario, b.mode, b.semiring, b.seed);
  });
}

Table make_table(std::vector<RunReport> reports) {
  sort_reports(reports);
  std::vector<std::string> semirings{"minmax", "maxplus"};
  for (const auto& r : reports) {
    if (std::find(semirings.begin(), semirings.end(), r.semiring) == semirings.end()) {
      semirings.push_back(r.semiring);
    }
  }
  std::map<std::pair<std::string, std::string>, std::map<std::string, const RunReport*>> rows;
  for (const auto& r : reports) {
    auto& slot = rows[{r.scenario, r.mode}][r.semiring];
    if (!slot) slot = &r;
  }

  std::vector<std::string> header{"scenario", "metric"};
  for (const auto& s : semirings) header.push_back(s);
  for (const char* h : {"ref minmax", "ref maxplus", "ref STLCG", "ref MILP"}) {
    header.push_back(h);
  }
  for (const char* h : {"H", "k", "gamma"}) header.push_back(h);

  std::vector<std::vector<std::string>> body;
  for (const auto& [key, cells] : rows) {
    const auto& [scenario, mode] = key;
    std::vector<std::string> row{scenario, mode == "open_loop" ? "open loop t*" : "closed loop rho"};
    for (const auto& s : semirings) {
      auto it = cells.find(s);
      row.push_back(it == cells.end() ? "--" : cell(*it->second));
    }
    auto p = ref_rows().find(key);
    if (p != ref_rows().end()) {
      for (const char* v : {p->second.minmax, p->second.maxplus, p->second.stlcg, p->second.milp}) {
        row.push_back(v);
      }
    } else {
      for (int i = 0; i < 4; ++i) row.push_back("--");
    }
    const nlohmann::json& cfg = cells.begin()->second->config;
    const std::string block = mode == "mpc" ? "mpc" : "open_loop";
    auto get = [&](const char* k) -> std::string {
      if (cfg.contains(block) && cfg[block].contains(k)) return cfg[block][k].dump();
      return "?";
    };
    row.push_back(get("horizon"));
    row.push_back(get("epochs"));
    row.push_back(cfg.contains("planner") && cfg["planner"].contains("learning_rate")
                      ? cfg["planner"]["learning_rate"].dump()
                      : "?");
    body.push_back(std::move(row));
  }

  Table t;
  for (std::size_t i = 0; i < header.size(); ++i) t.csv += (i ? "," : "") + csv_field(header[i]);
  t.csv += "\r\n";
  for (const auto& row : body) {
    for (std::size_t i = 0; i < row.size(); ++i) t.csv += (i ? "," : "") + csv_field(row[i]);
    t.csv += "\r\n";
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& row : body) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  auto line = [&](const std::vector<std::string>& row) {
    std::string out;
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += row[i] + std::string(width[i] - row[i].size(), ' ');
      if (i + 1 < row.size()) out += "  ";
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  t.text = line(header);
  std::size_t total = 0;
  for (auto w : width) total += w + 2;
  t.text += std::string(total - 2, '-') + "\n";
  for (const auto& row : body) t.text += line(row);
  t.text += "ref columns are published figures, not reproduced\n";
  return t;
}

}  // namespace symaut::cli
