#include "rbcsp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "rbcsp/consistency.hpp"
#include "rbcsp/hypergraph.hpp"
#include "rbcsp/instance_io.hpp"
#include "rbcsp/rng.hpp"
#include "rbcsp/search.hpp"

namespace rbcsp {

namespace {

void require_tightness(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("threshold: p must lie in (0,1)");
}

}  // namespace

double r_cr(double alpha, double p) {
  require_tightness(p);
  if (!(alpha > 0.0)) throw std::invalid_argument("threshold: alpha must be positive");
  return -alpha / std::log1p(-p);
}

double r_bf(double alpha, double p, std::uint32_t k) {
  if (k < 2) throw std::invalid_argument("threshold: k must be at least 2");
  return r_cr(alpha, p) / k;
}

std::vector<std::string> threshold_warnings(double alpha, double p, std::uint32_t k) {
  require_tightness(p);
  std::vector<std::string> out;
  if (!(alpha > 1.0 / k)) out.push_back("alpha <= 1/k: the satisfiability threshold is not guaranteed");
  if (!(k >= 1.0 / (1.0 - p))) out.push_back("k < 1/(1-p): the satisfiability threshold is not guaranteed");
  return out;
}

double predicted_width(double n, std::uint32_t k, double r) {
  if (!(n >= 2)) throw std::invalid_argument("predicted_width: n must be at least 2");
  return k * r * std::log(n);
}

double predicted_degree_bound(double n, std::uint32_t k, double r) {
  return (1.0 + std::sqrt(6.0 / (k * r))) * predicted_width(n, k, r);
}

std::string to_string(Statistic s) {
  switch (s) {
    case Statistic::SatProbability:
      return "SatProbability";
    case Statistic::GreedySuccess:
      return "GreedySuccess";
    case Statistic::CertificateRate:
      return "CertificateRate";
    case Statistic::WidthRatio:
      return "WidthRatio";
    case Statistic::MaxDegreeRatio:
      return "MaxDegreeRatio";
  }
  return "?";
}

Statistic parse_statistic(const std::string& text) {
  for (auto s : {Statistic::SatProbability, Statistic::GreedySuccess, Statistic::CertificateRate,
                 Statistic::WidthRatio, Statistic::MaxDegreeRatio})
    if (text == to_string(s)) return s;
  if (text == "sat") return Statistic::SatProbability;
  if (text == "greedy") return Statistic::GreedySuccess;
  if (text == "certificate") return Statistic::CertificateRate;
  if (text == "width") return Statistic::WidthRatio;
  if (text == "maxdegree") return Statistic::MaxDegreeRatio;
  throw std::invalid_argument("unknown statistic '" + text + "'");
}

bool is_bernoulli(Statistic s) { return s != Statistic::WidthRatio && s != Statistic::MaxDegreeRatio; }

void SweepSpec::validate() const {
  if (r_grid.empty()) throw std::invalid_argument("SweepSpec: r_grid is empty");
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > 0.0)) throw std::invalid_argument("SweepSpec: r values must be positive");
    if (i > 0 && !(r_grid[i - 1] < r_grid[i])) throw std::invalid_argument("SweepSpec: r_grid must be strictly increasing");
  }
  if (trials < 1) throw std::invalid_argument("SweepSpec: trials must be at least 1");
  GenParams probe = base;
  probe.r = r_grid.front();
  probe.validate();
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points == 0) return {};
  if (points == 1) return {lo};
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) grid[i] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  grid.back() = hi;
  return grid;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t r_index, std::size_t trial) {
  return derive_seed(master_seed, {r_index, trial});
}

namespace {

struct TrialOutcome {
  double value = 0;
  bool budget_failed = false;
};

TrialOutcome run_trial(const SweepSpec& spec, GenParams params) {
  const double scale = predicted_width(params.n, params.k, params.r);
  switch (spec.statistic) {
    case Statistic::WidthRatio:
      return {compute_width(random_hypergraph(params)).width / scale, false};
    case Statistic::MaxDegreeRatio:
      return {max_degree(random_hypergraph(params)) / scale, false};
    default:
      break;
  }
  const Instance inst = generate(params);
  const auto order = width_optimal_order(inst);
  switch (spec.statistic) {
    case Statistic::SatProbability: {
      const auto res = backtrack_solve(inst, order, spec.budget.solver_nodes);
      if (res.status == SolveStatus::BudgetExhausted) return {0, true};
      return {res.status == SolveStatus::Sat ? 1.0 : 0.0, false};
    }
    case Statistic::GreedySuccess: {
      const auto rule = ValueRule::seeded_random(derive_seed(params.seed, {2}));
      return {greedy_run(inst, order, rule).success ? 1.0 : 0.0, false};
    }
    case Statistic::CertificateRate:
      try {
        return {strong_bf_certificate(inst, order, {16, spec.budget.enumeration}) ? 1.0 : 0.0, false};
      } catch (const BudgetExceeded&) {
        return {0, true};
      }
    default:
      break;
  }
  throw std::logic_error("run_trial: unhandled statistic");
}

}  // namespace

SweepTable run_sweep(const SweepSpec& spec, unsigned jobs) {
  spec.validate();
  const std::size_t total = spec.r_grid.size() * spec.trials;
  std::vector<TrialOutcome> outcomes(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

  auto worker = [&] {
    for (std::size_t job = next++; job < total && !failed; job = next++) {
      const std::size_t ri = job / spec.trials, trial = job % spec.trials;
      GenParams params = spec.base;
      params.r = spec.r_grid[ri];
      params.seed = trial_seed(spec.master_seed, ri, trial);
      try {
        outcomes[job] = run_trial(spec, params);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(total)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  SweepTable table;
  table.spec = spec;
  for (std::size_t ri = 0; ri < spec.r_grid.size(); ++ri) {
    SweepRow row;
    row.r = spec.r_grid[ri];
    row.trials = spec.trials;
    double sum = 0, sum_sq = 0;
    for (std::size_t t = 0; t < spec.trials; ++t) {
      const auto& o = outcomes[ri * spec.trials + t];
      if (o.budget_failed) {
        ++row.budget_failures;
        continue;
      }
      sum += o.value;
      sum_sq += o.value * o.value;
    }
    const double finished = row.trials - row.budget_failures;
    if (finished == 0) {
      row.value = std::nan("");
      row.std_error = std::nan("");
    } else if (is_bernoulli(spec.statistic)) {
      row.value = sum / finished;
      row.std_error = std::sqrt(row.value * (1.0 - row.value) / finished);
    } else {
      row.value = sum / finished;
      const double var = finished > 1 ? std::max(0.0, (sum_sq - finished * row.value * row.value) / (finished - 1)) : 0.0;
      row.std_error = std::sqrt(var / finished);
    }
    table.rows.push_back(row);
  }
  return table;
}

std::optional<double> crossing_point(std::span<const SweepRow> rows, double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("crossing_point: level must lie in (0,1)");
  if (rows.size() < 2) throw std::invalid_argument("crossing_point: need at least two rows");
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double v0 = rows[i].value, v1 = rows[i + 1].value;
    if (std::isnan(v0) || std::isnan(v1)) continue;
    if (v0 == level) return rows[i].r;
    if ((v0 - level) * (v1 - level) < 0.0) return rows[i].r + (level - v0) * (rows[i + 1].r - rows[i].r) / (v1 - v0);
  }
  if (rows.back().value == level) return rows.back().r;
  return std::nullopt;
}

double trend_slope(std::span<const SweepRow> rows) {
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& row : rows) {
    if (std::isnan(row.value)) continue;
    n += 1;
    sx += row.r;
    sy += row.value;
    sxx += row.r * row.r;
    sxy += row.r * row.value;
  }
  const double denom = n * sxx - sx * sx;
  if (n < 2 || denom == 0.0) throw std::invalid_argument("trend_slope: need two distinct r values");
  return (n * sxy - sx * sy) / denom;
}

std::string to_csv(const SweepTable& table) {
  std::string out = "r,value,trials,budget_failures,stderr\n";
  for (const auto& row : table.rows) {
    out += format_real(row.r) + ',' + format_real(row.value) + ',' + std::to_string(row.trials) + ',' +
           std::to_string(row.budget_failures) + ',' + format_real(row.std_error) + '\n';
  }
  return out;
}

std::vector<SweepRow> parse_csv(std::string_view text) {
  std::vector<SweepRow> rows;
  std::size_t line_no = 0;
  for (std::size_t start = 0; start < text.size();) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no++ == 0) {
      if (line != "r,value,trials,budget_failures,stderr") throw FormatError("csv: unexpected header");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    for (std::size_t s = 0;;) {
      const std::size_t comma = line.find(',', s);
      cells.push_back(line.substr(s, comma == std::string_view::npos ? std::string_view::npos : comma - s));
      if (comma == std::string_view::npos) break;
      s = comma + 1;
    }
    if (cells.size() != 5) throw FormatError("csv: expected 5 cells on line " + std::to_string(line_no));
    SweepRow row;
    row.r = parse_real(cells[0]);
    row.value = parse_real(cells[1]);
    row.trials = static_cast<std::uint32_t>(parse_real(cells[2]));
    row.budget_failures = static_cast<std::uint32_t>(parse_real(cells[3]));
    row.std_error = parse_real(cells[4]);
    rows.push_back(row);
  }
  if (line_no == 0) throw FormatError("csv: empty input");
  return rows;
}

std::string metadata_json(const SweepTable& table) {
  const SweepSpec& s = table.spec;
  nlohmann::ordered_json j;
  j["artifact"] = "rbcsp";
  j["version"] = kVersion;
  j["statistic"] = to_string(s.statistic);
  j["n"] = s.base.n;
  j["k"] = s.base.k;
  j["alpha"] = s.base.alpha;
  j["p"] = s.base.p;
  j["model"] = to_string(s.base.model);
  j["r_grid"] = s.r_grid;
  j["trials"] = s.trials;
  j["master_seed"] = s.master_seed;
  j["budget"] = {{"solver_nodes", s.budget.solver_nodes}, {"enumeration", s.budget.enumeration}};
  j["r_cr"] = r_cr(s.base.alpha, s.base.p);
  j["r_bf"] = r_bf(s.base.alpha, s.base.p, s.base.k);
  j["seed_derivation"] = "trial_seed = derive_seed(master_seed, {r_index, trial})";
  return j.dump(2) + "\n";
}

}  // namespace rbcsp
