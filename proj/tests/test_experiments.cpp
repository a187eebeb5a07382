#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rbcsp/experiments.hpp"
#include "rbcsp/plot.hpp"

using namespace rbcsp;

TEST_CASE("threshold formulas") {
  CHECK(r_cr(1.0, 0.5) == doctest::Approx(1.4426950408889634).epsilon(1e-12));
  CHECK(r_cr(0.8, 0.25) == doctest::Approx(2.780847597425766).epsilon(1e-12));
  CHECK(r_bf(1.0, 0.5, 2) == doctest::Approx(0.7213475204444817).epsilon(1e-12));
  CHECK(r_bf(0.8, 0.25, 2) == doctest::Approx(1.390423798712883).epsilon(1e-12));
  const double alpha = 0.7;
  CHECK(r_cr(alpha, 1.0 - std::exp(-alpha)) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(r_cr(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(r_cr(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(r_bf(1.0, 0.5, 1), std::invalid_argument);

  CHECK(threshold_warnings(0.8, 0.25, 2).empty());
  CHECK(threshold_warnings(0.4, 0.25, 2).size() == 1);   // alpha <= 1/k
  CHECK(threshold_warnings(0.8, 0.6, 2).size() == 1);    // k < 1/(1-p) = 2.5
  CHECK(threshold_warnings(0.3, 0.6, 2).size() == 2);
}

TEST_CASE("r_bf times k equals r_cr") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> a(0.05, 3.0), p(1e-4, 1 - 1e-4);
  for (int i = 0; i < 1000; ++i) {
    const double alpha = a(gen), tight = p(gen);
    const std::uint32_t k = 2 + static_cast<std::uint32_t>(gen() % 9);
    const double cr = r_cr(alpha, tight);
    CHECK(std::abs(k * r_bf(alpha, tight, k) - cr) <= 1e-12 * cr);
  }
}

TEST_CASE("predicted width and degree bound") {
  CHECK(predicted_width(std::exp(2.0), 2, 1.0) == doctest::Approx(4.0));
  CHECK(predicted_width(10000, 2, 1.0) == doctest::Approx(18.420680743952367));
  const double n = 500;
  CHECK(predicted_degree_bound(n, 2, 3.0) == doctest::Approx(12 * std::log(n)));
  CHECK_THROWS_AS(predicted_width(1, 2, 1.0), std::invalid_argument);
}

TEST_CASE("crossing_point") {
  std::vector<SweepRow> rows{{1.0, 0.9, 1, 0, 0}, {2.0, 0.1, 1, 0, 0}};
  CHECK(*crossing_point(rows, 0.5) == doctest::Approx(1.5));

  std::vector<SweepRow> high{{1.0, 0.9, 1, 0, 0}, {2.0, 0.8, 1, 0, 0}, {3.0, 0.7, 1, 0, 0}};
  CHECK_FALSE(crossing_point(high, 0.5));
  CHECK_THROWS_AS(crossing_point(std::span<const SweepRow>(rows.data(), 1), 0.5), std::invalid_argument);
  CHECK_THROWS_AS(crossing_point(rows, 1.0), std::invalid_argument);

  SUBCASE("noisy tables agree with an independent implementation") {
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
      std::vector<SweepRow> noisy;
      std::vector<std::pair<double, double>> pts;
      double r = 0.1;
      for (int i = 0; i < 9; ++i) {
        r += 0.05 + u(gen);
        const double v = std::round(std::clamp(1.0 - i / 8.0 + 0.3 * (u(gen) - 0.5), 0.0, 1.0) * 20) / 20;
        noisy.push_back({r, v, 20, 0, 0});
        pts.emplace_back(r, v);
      }
      for (double level : {0.25, 0.5, 0.75}) {
        const auto got = crossing_point(noisy, level);
        const auto want = oracle::crossing(pts, level);
        REQUIRE(got.has_value() == want.has_value());
        if (got) CHECK(*got == doctest::Approx(*want).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("trend_slope") {
  std::vector<SweepRow> rows{{1, 1.0, 1, 0, 0}, {2, 0.5, 1, 0, 0}, {3, 0.0, 1, 0, 0}};
  CHECK(trend_slope(rows) == doctest::Approx(-0.5));
  rows[1].value = std::nan("");
  CHECK(trend_slope(rows) == doctest::Approx(-0.5));
}

TEST_CASE("run_sweep") {
  SweepSpec spec;
  spec.base.n = 12;
  spec.base.k = 2;
  spec.base.alpha = 0.8;
  spec.base.p = 0.25;
  spec.r_grid = {0.1};
  spec.trials = 1;
  spec.master_seed = 5;

  SUBCASE("single row") {
    const auto table = run_sweep(spec);
    REQUIRE(table.rows.size() == 1);
    CHECK(table.rows[0].trials == 1);
    CHECK(table.rows[0].value == 1.0);
  }

  SUBCASE("bernoulli stderr") {
    spec.r_grid = linear_grid(0.5, 4.0, 4);
    spec.trials = 30;
    spec.statistic = Statistic::GreedySuccess;
    const auto table = run_sweep(spec);
    for (const auto& row : table.rows) {
      CHECK(row.value >= 0.0);
      CHECK(row.value <= 1.0);
      CHECK(row.std_error == doctest::Approx(std::sqrt(row.value * (1 - row.value) / row.trials)));
    }
  }

  SUBCASE("thread count does not change the table") {
    spec.r_grid = linear_grid(0.5, 3.0, 5);
    spec.trials = 12;
    for (auto stat : {Statistic::SatProbability, Statistic::GreedySuccess, Statistic::WidthRatio,
                      Statistic::MaxDegreeRatio, Statistic::CertificateRate}) {
      spec.statistic = stat;
      const std::string one = to_csv(run_sweep(spec, 1));
      CHECK(one == to_csv(run_sweep(spec, 4)));
      CHECK(one == to_csv(run_sweep(spec, 1)));
    }
  }

  SUBCASE("budget failures are counted apart") {
    spec.r_grid = {2.0};
    spec.trials = 5;
    spec.statistic = Statistic::SatProbability;
    spec.budget.solver_nodes = 1;
    const auto row = run_sweep(spec).rows.at(0);
    CHECK(row.budget_failures == 5);
    CHECK(std::isnan(row.value));
  }

  SUBCASE("invalid specs are rejected") {
    spec.r_grid = {1.0, 1.0};
    CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
    spec.r_grid = {};
    CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
    spec.r_grid = {1.0};
    spec.trials = 0;
    CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
  }
}

TEST_CASE("satisfiability far from the threshold") {
  SweepSpec spec;
  spec.base.n = 16;
  spec.base.k = 2;
  spec.base.alpha = 0.8;
  spec.base.p = 0.25;
  const double cr = r_cr(spec.base.alpha, spec.base.p);
  spec.r_grid = {0.2 * cr, 2.0 * cr};
  spec.trials = 100;
  spec.master_seed = 2024;
  const auto table = run_sweep(spec);
  CHECK(table.rows[0].value >= 0.9);
  CHECK(table.rows[1].value <= 0.1);
  CHECK(table.rows[0].budget_failures == 0);
  CHECK(table.rows[1].budget_failures == 0);
}

TEST_CASE("csv and metadata") {
  SweepTable table;
  table.spec.base.n = 20;
  table.spec.base.alpha = 0.8;
  table.spec.base.p = 0.25;
  table.spec.r_grid = {1.0, 1.5};
  table.rows = {{1.0, 0.75, 4, 0, 0.21650635094610965}, {1.5, 0.25, 4, 1, 0.25}};
  const std::string csv = to_csv(table);
  CHECK(csv == "r,value,trials,budget_failures,stderr\n1,0.75,4,0,0.21650635094610965\n1.5,0.25,4,1,0.25\n");
  const auto rows = parse_csv(csv);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].budget_failures == 1);
  CHECK(rows[0].std_error == table.rows[0].std_error);
  CHECK_THROWS(parse_csv("x,y\n1,2\n"));

  const std::string meta = metadata_json(table);
  CHECK(meta.find("\"version\": \"1.0.0\"") != std::string::npos);
  CHECK(meta.find("\"r_grid\"") != std::string::npos);
}

TEST_CASE("svg chart") {
  std::vector<SweepRow> rows{{1.0, 0.9, 1, 0, 0}, {2.0, 0.5, 1, 0, 0}, {3.0, 0.1, 1, 0, 0}};
  PlotOptions opts;
  opts.title = "P(sat) <n=20>";
  opts.threshold = 2.5;
  const std::string svg = render_svg(rows, opts);
  CHECK(svg.rfind("<svg ", 0) == 0);
  CHECK(svg.find("class=\"threshold\" data-r=\"2.5\"") != std::string::npos);
  CHECK(svg.find("<polyline class=\"series\"") != std::string::npos);
  CHECK(svg.find("&lt;n=20&gt;") != std::string::npos);
  // x spans [1, 3] over 560 px starting at 60: the rule sits at 60 + 0.75 * 560.
  CHECK(svg.find("x1=\"480.00\"") != std::string::npos);
  CHECK(render_svg(rows, opts) == svg);
  CHECK_THROWS(render_svg(std::vector<SweepRow>{}, opts));
}
