// rbcsp: generate Model RB/RD instances, analyse their constraint
// hypergraphs, run searches and threshold sweeps, and plot sweep tables.
//
// Exit status: 0 success, 2 usage error, 3 budget exhausted, 4 I/O or
// malformed input. Failures print one line on stderr:
//   error kind=<usage|budget|io> message="..."

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rbcsp/consistency.hpp"
#include "rbcsp/experiments.hpp"
#include "rbcsp/hypergraph.hpp"
#include "rbcsp/instance_io.hpp"
#include "rbcsp/model.hpp"
#include "rbcsp/plot.hpp"
#include "rbcsp/search.hpp"

namespace {

using namespace rbcsp;

constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitIo = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string quote(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

int fail(const char* kind, const std::string& message, int code) {
  std::cerr << "error kind=" << kind << " message=" << quote(message) << '\n';
  return code;
}

struct GenOptions {
  std::uint32_t n = 0;
  std::uint32_t k = 2;
  double alpha = 0;
  double p = 0;
  double r = 0;
  std::string model = "rd";
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* cmd, bool with_r = true) {
    cmd->add_option("--n", n, "number of variables");
    cmd->add_option("--k", k, "constraint arity")->capture_default_str();
    cmd->add_option("--alpha", alpha, "domain exponent, d = round(n^alpha)");
    cmd->add_option("--p", p, "tightness in (0,1)");
    if (with_r) cmd->add_option("--r", r, "density, m = round(r n ln n)");
    cmd->add_option("--model", model, "rb or rd")->capture_default_str();
    cmd->add_option("--seed", seed, "64-bit generation seed (required)");
  }

  GenParams params() const {
    if (!seed) throw UsageError("--seed is required; runs are never seeded from the clock");
    GenParams g;
    g.n = n;
    g.k = k;
    g.alpha = alpha;
    g.p = p;
    g.r = r;
    g.model = parse_model(model);
    g.seed = *seed;
    g.validate();
    return g;
  }
};

// Instance from -i, or generated inline from the generation flags.
struct InstanceSource {
  std::string input;
  GenOptions gen;

  void attach(CLI::App* cmd) {
    cmd->add_option("-i,--input", input, "instance file (rbcsp v1)");
    gen.attach(cmd);
  }

  Instance load() const {
    if (!input.empty()) return read_instance(input);
    return generate(gen.params());
  }
};

std::string params_record(const Instance& inst) {
  const GenParams& p = inst.params();
  std::ostringstream out;
  out << "version=" << kVersion << " n=" << p.n << " k=" << p.k << " d=" << inst.d()
      << " m=" << inst.constraints().size() << " model=" << to_string(p.model) << " alpha=" << format_real(p.alpha)
      << " p=" << format_real(p.p) << " r=" << format_real(p.r) << " seed=" << p.seed;
  return out.str();
}

std::string join(const std::vector<Var>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
  return out;
}

std::vector<Var> choose_order(const Instance& inst, const std::string& kind) {
  if (kind == "width") return width_optimal_order(inst);
  if (kind == "natural") {
    std::vector<Var> order(inst.n());
    for (Var v = 0; v < inst.n(); ++v) order[v] = v;
    return order;
  }
  throw UsageError("--order must be 'width' or 'natural'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random CSP laboratory for Model RB/RD instances"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate an instance file");
  GenOptions gen_opts;
  std::string gen_out;
  gen_opts.attach(gen);
  gen->add_option("-o,--output", gen_out, "output path")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "chronological backtracking search");
  InstanceSource solve_src;
  std::uint64_t solve_budget = kDefaultBudget;
  std::string solve_order = "width";
  bool solve_witness = false;
  solve_src.attach(solve);
  solve->add_option("--budget", solve_budget, "node budget")->capture_default_str();
  solve->add_option("--order", solve_order, "width or natural")->capture_default_str();
  solve->add_flag("--witness", solve_witness, "print the solution");

  // greedy
  auto* greedy = app.add_subcommand("greedy", "greedy backtrack-free run");
  InstanceSource greedy_src;
  std::string greedy_rule = "lexmin", greedy_order = "width";
  std::optional<std::uint64_t> value_seed;
  greedy_src.attach(greedy);
  greedy->add_option("--rule", greedy_rule, "lexmin or random")->capture_default_str();
  greedy->add_option("--value-seed", value_seed, "seed for --rule random");
  greedy->add_option("--order", greedy_order, "width or natural")->capture_default_str();

  // width
  auto* width = app.add_subcommand("width", "hypergraph width and optimal ordering");
  InstanceSource width_src;
  width_src.attach(width);

  // core
  auto* core = app.add_subcommand("core", "m-core of the constraint hypergraph");
  InstanceSource core_src;
  std::uint32_t core_m = 1;
  core_src.attach(core);
  core->add_option("--m", core_m, "minimum degree")->required();

  // bfcheck
  auto* bfcheck = app.add_subcommand("bfcheck", "exact backtrack-freeness and sufficient certificate");
  InstanceSource bf_src;
  std::uint64_t bf_budget = kDefaultBudget;
  std::string bf_order = "width";
  bf_src.attach(bfcheck);
  bfcheck->add_option("--budget", bf_budget, "enumeration budget")->capture_default_str();
  bfcheck->add_option("--order", bf_order, "width or natural")->capture_default_str();

  // consistency
  auto* consist = app.add_subcommand("consistency", "vertex-centered t-consistency of an instance");
  InstanceSource cons_src;
  std::uint32_t cons_t = 1;
  ConsistencyLimits cons_limits;
  cons_src.attach(consist);
  consist->add_option("--t", cons_t, "critical size t")->required();
  consist->add_option("--budget", cons_limits.budget, "enumeration budget")->capture_default_str();
  consist->add_option("--max-degree", cons_limits.max_degree, "subset enumeration degree cap")->capture_default_str();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over r, written as CSV");
  GenOptions sweep_gen;
  std::vector<double> r_grid;
  double r_min = 0, r_max = 0;
  std::size_t points = 0;
  std::string r_unit = "abs", statistic = "sat", sweep_out;
  std::uint32_t trials = 100;
  unsigned jobs = 1;
  SweepBudget sweep_budget;
  sweep_gen.attach(sweep, false);
  sweep->add_option("--r-grid", r_grid, "explicit ascending r values")->delimiter(',');
  sweep->add_option("--r-min", r_min, "grid start");
  sweep->add_option("--r-max", r_max, "grid end");
  sweep->add_option("--points", points, "grid size");
  sweep->add_option("--r-unit", r_unit, "abs, cr or bf: grid values are multiples of r_cr or r_bf")
      ->capture_default_str();
  sweep->add_option("--statistic", statistic, "sat, greedy, certificate, width, maxdegree")->capture_default_str();
  sweep->add_option("--trials", trials, "trials per grid point")->capture_default_str();
  sweep->add_option("--budget", sweep_budget.solver_nodes, "solver node budget")->capture_default_str();
  sweep->add_option("--enum-budget", sweep_budget.enumeration, "certificate enumeration budget")
      ->capture_default_str();
  sweep->add_option("--jobs", jobs, "worker threads")->capture_default_str();
  sweep->add_option("-o,--output", sweep_out, "CSV path; metadata goes to <path>.meta.json")->required();

  // plot
  auto* plot = app.add_subcommand("plot", "render a sweep CSV as an SVG line chart");
  std::string plot_in, plot_out, plot_threshold = "auto";
  std::optional<double> plot_alpha, plot_p;
  std::optional<std::uint32_t> plot_k;
  plot->add_option("-i,--input", plot_in, "sweep CSV")->required();
  plot->add_option("-o,--output", plot_out, "SVG path")->required();
  plot->add_option("--threshold", plot_threshold, "cr, bf, none or auto (from the sidecar statistic)")
      ->capture_default_str();
  plot->add_option("--alpha", plot_alpha, "overrides the sidecar value");
  plot->add_option("--p", plot_p, "overrides the sidecar value");
  plot->add_option("--k", plot_k, "overrides the sidecar value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kExitUsage);
  }

  try {
    if (gen->parsed()) {
      const Instance inst = generate(gen_opts.params());
      write_instance(gen_out, inst);
      std::cout << params_record(inst) << " output=" << gen_out << '\n';
    } else if (solve->parsed()) {
      const Instance inst = solve_src.load();
      const auto res = backtrack_solve(inst, choose_order(inst, solve_order), solve_budget);
      std::cout << params_record(inst) << " order=" << solve_order << ' ' << to_record(res);
      if (solve_witness && res.witness) {
        std::cout << " witness=";
        const auto& vals = res.witness->raw();
        for (std::size_t i = 0; i < vals.size(); ++i) std::cout << (i ? "," : "") << vals[i];
      }
      std::cout << '\n';
      if (res.status == SolveStatus::BudgetExhausted) return fail("budget", "solver node budget exhausted", kExitBudget);
    } else if (greedy->parsed()) {
      const Instance inst = greedy_src.load();
      ValueRule rule;
      if (greedy_rule == "random") {
        if (!value_seed) throw UsageError("--rule random needs --value-seed");
        rule = ValueRule::seeded_random(*value_seed);
      } else if (greedy_rule != "lexmin") {
        throw UsageError("--rule must be 'lexmin' or 'random'");
      }
      const auto out = greedy_run(inst, choose_order(inst, greedy_order), rule);
      std::cout << params_record(inst) << " order=" << greedy_order << " rule=" << greedy_rule << ' '
                << to_record(out) << '\n';
    } else if (width->parsed()) {
      const Instance inst = width_src.load();
      const auto res = compute_width(from_instance(inst));
      std::cout << params_record(inst) << " width=" << res.width << " ordering=" << join(res.ordering.perm) << '\n';
    } else if (core->parsed()) {
      const Instance inst = core_src.load();
      const auto res = find_core(from_instance(inst), core_m);
      std::cout << params_record(inst) << " core_m=" << core_m << " core_size=" << res.nodes.size()
                << " core_edges=" << res.edges.size() << " nodes=" << join(res.nodes) << '\n';
    } else if (bfcheck->parsed()) {
      const Instance inst = bf_src.load();
      const auto order = choose_order(inst, bf_order);
      const bool exact = exact_backtrack_free(inst, order, bf_budget);
      std::string cert;
      try {
        cert = strong_bf_certificate(inst, order, {16, bf_budget}) ? "1" : "0";
      } catch (const BudgetExceeded&) {
        cert = "budget";
      }
      std::cout << params_record(inst) << " order=" << bf_order << " exact=" << exact << " certificate=" << cert;
      if (inst.n() <= 8) std::cout << " any_order=" << is_backtrack_free(inst, {}, bf_budget);
      std::cout << '\n';
    } else if (consist->parsed()) {
      const Instance inst = cons_src.load();
      const bool ok = instance_consistent(inst, cons_t, cons_limits);
      std::cout << params_record(inst) << " t=" << cons_t << " consistent=" << ok << '\n';
    } else if (sweep->parsed()) {
      SweepSpec spec;
      sweep_gen.r = 1.0;
      spec.base = sweep_gen.params();
      spec.master_seed = spec.base.seed;
      spec.statistic = parse_statistic(statistic);
      spec.trials = trials;
      spec.budget = sweep_budget;
      if (r_grid.empty()) {
        if (points == 0) throw UsageError("give --r-grid or --r-min/--r-max/--points");
        r_grid = linear_grid(r_min, r_max, points);
      }
      double unit = 1.0;
      if (r_unit == "cr")
        unit = r_cr(spec.base.alpha, spec.base.p);
      else if (r_unit == "bf")
        unit = r_bf(spec.base.alpha, spec.base.p, spec.base.k);
      else if (r_unit != "abs")
        throw UsageError("--r-unit must be abs, cr or bf");
      for (double& r : r_grid) r *= unit;
      spec.r_grid = r_grid;
      for (const auto& w : threshold_warnings(spec.base.alpha, spec.base.p, spec.base.k))
        std::cerr << "warning: " << w << '\n';
      const SweepTable table = run_sweep(spec, jobs);
      write_file(sweep_out, to_csv(table));
      write_file(sweep_out + ".meta.json", metadata_json(table));
      std::cout << "version=" << kVersion << " statistic=" << to_string(spec.statistic)
                << " rows=" << table.rows.size() << " output=" << sweep_out << '\n';
    } else if (plot->parsed()) {
      const auto rows = parse_csv(read_file(plot_in));
      nlohmann::json meta;
      const std::string sidecar = plot_in + ".meta.json";
      if (std::filesystem::exists(sidecar)) {
        try {
          meta = nlohmann::json::parse(read_file(sidecar));
        } catch (const nlohmann::json::exception& e) {
          throw FormatError(std::string("metadata sidecar: ") + e.what());
        }
      }
      auto pick = [&](const auto& flag, const char* key, auto fallback) {
        using T = decltype(fallback);
        if (flag) return static_cast<T>(*flag);
        if (meta.contains(key)) return meta[key].template get<T>();
        return fallback;
      };
      const double alpha = pick(plot_alpha, "alpha", 0.0);
      const double p = pick(plot_p, "p", 0.0);
      const std::uint32_t k = pick(plot_k, "k", std::uint32_t{2});
      std::string which = plot_threshold;
      const std::string stat = meta.contains("statistic") ? meta["statistic"].get<std::string>() : "";
      if (which == "auto") which = stat == "SatProbability" ? "cr" : (stat.empty() || stat == "WidthRatio" || stat == "MaxDegreeRatio") ? "none" : "bf";
      PlotOptions opts;
      opts.title = stat.empty() ? "sweep" : stat;
      if (which == "cr" || which == "bf") {
        if (!(alpha > 0) || !(p > 0 && p < 1)) throw UsageError("threshold rule needs alpha and p (flags or sidecar)");
        opts.threshold = which == "cr" ? r_cr(alpha, p) : r_bf(alpha, p, k);
        opts.threshold_label = (which == "cr" ? "r_cr = " : "r_bf = ") + format_real(*opts.threshold);
      } else if (which != "none") {
        throw UsageError("--threshold must be cr, bf, none or auto");
      }
      write_file(plot_out, render_svg(rows, opts));
      std::cout << "version=" << kVersion << " output=" << plot_out << " threshold=";
      if (opts.threshold)
        std::cout << format_real(*opts.threshold) << '\n';
      else
        std::cout << "none\n";
    }
  } catch (const BudgetExceeded& e) {
    return fail("budget", e.what(), kExitBudget);
  } catch (const FormatError& e) {
    return fail("io", e.what(), kExitIo);
  } catch (const std::ios_base::failure& e) {
    return fail("io", e.what(), kExitIo);
  } catch (const UsageError& e) {
    return fail("usage", e.what(), kExitUsage);
  } catch (const std::invalid_argument& e) {
    return fail("usage", e.what(), kExitUsage);
  }
  return 0;
}
