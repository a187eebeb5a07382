#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rbcsp/model.hpp"

namespace rbcsp {

inline constexpr const char* kVersion = "1.0.0";

// Satisfiability threshold -alpha / ln(1-p).
double r_cr(double alpha, double p);
// Backtrack-freeness threshold -alpha / (k ln(1-p)) = r_cr / k.
double r_bf(double alpha, double p, std::uint32_t k);

// Human-readable notes for hypotheses of the satisfiability threshold that
// (alpha, p, k) fails: alpha > 1/k and k >= 1/(1-p). Empty when all hold.
std::vector<std::string> threshold_warnings(double alpha, double p, std::uint32_t k);

// k r ln n: the first-order width of HG(n, r n ln n, k).
double predicted_width(double n, std::uint32_t k, double r);
// (1 + sqrt(6/(k r))) k r ln n: a whp upper bound on the maximum degree.
double predicted_degree_bound(double n, std::uint32_t k, double r);

enum class Statistic { SatProbability, GreedySuccess, CertificateRate, WidthRatio, MaxDegreeRatio };

std::string to_string(Statistic s);
// Accepts the enum names and the short CLI forms sat, greedy, certificate, width, maxdegree.
Statistic parse_statistic(const std::string& text);
bool is_bernoulli(Statistic s);

struct SweepBudget {
  std::uint64_t solver_nodes = 10'000'000;
  std::uint64_t enumeration = 10'000'000;
};

struct SweepSpec {
  GenParams base;  // r and seed are ignored; each trial sets its own
  std::vector<double> r_grid;
  std::uint32_t trials = 1;
  std::uint64_t master_seed = 0;
  Statistic statistic = Statistic::SatProbability;
  SweepBudget budget;

  void validate() const;
};

struct SweepRow {
  double r = 0;
  double value = 0;  // statistic over trials that finished within budget
  std::uint32_t trials = 0;
  std::uint32_t budget_failures = 0;
  double std_error = 0;
};

struct SweepTable {
  SweepSpec spec;
  std::vector<SweepRow> rows;
};

// `points` evenly spaced values from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, std::size_t points);

// Seed of trial `trial` at grid index `r_index`.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t r_index, std::size_t trial);

// Runs every (r, trial) job, possibly on several threads. The table does not
// depend on `jobs`.
SweepTable run_sweep(const SweepSpec& spec, unsigned jobs = 1);

// Smallest r at which consecutive rows bracket `level`, linearly interpolated.
std::optional<double> crossing_point(std::span<const SweepRow> rows, double level);
inline std::optional<double> crossing_point(const SweepTable& table, double level) {
  return crossing_point(table.rows, level);
}

// Least-squares slope of value against r, skipping rows with no finished trials.
double trend_slope(std::span<const SweepRow> rows);

// CSV with header r,value,trials,budget_failures,stderr and LF line endings.
std::string to_csv(const SweepTable& table);
std::vector<SweepRow> parse_csv(std::string_view text);

// JSON sidecar echoing the sweep spec and the artifact version.
std::string metadata_json(const SweepTable& table);

}  // namespace rbcsp
