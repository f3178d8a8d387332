#pragma once

#include <string>
#include <vector>

#include "symaut/cli/run.hpp"

namespace symaut::cli {

struct Table {
  std::string text;
  std::string csv;
};

/// One row per (scenario, mode) present in `reports`; measured cells hold t*
/// for open loop and rho for mpc, "--" when that semiring was not run. Published
/// figures for the same row are shown alongside in columns marked as
/// reported, not reproduced. Duplicate cells keep the report with the lowest
/// seed.
Table make_table(std::vector<RunReport> reports);

/// Sorts by (scenario, mode, semiring, seed).
void sort_reports(std::vector<RunReport>& reports);

}  // namespace symaut::cli
