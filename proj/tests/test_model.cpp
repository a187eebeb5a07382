#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "rbcsp/instance_io.hpp"
#include "rbcsp/model.hpp"

using namespace rbcsp;

namespace {

GenParams base_params() {
  GenParams p;
  p.n = 20;
  p.k = 2;
  p.alpha = 0.8;
  p.p = 0.25;
  p.r = 1.0;
  p.model = ModelVariant::RD;
  p.seed = 42;
  return p;
}

Constraint single(std::vector<Var> scope, std::uint32_t d, bool full) {
  TupleCode space = 1;
  for (std::size_t i = 0; i < scope.size(); ++i) space *= d;
  return {std::move(scope), full ? Relation::full(space) : Relation(space)};
}

}  // namespace

TEST_CASE("derived sizes follow the rounding rules") {
  const GenParams p = base_params();
  CHECK(p.domain_size() == 11);
  CHECK(p.constraint_count() == 60);
  const Instance inst = generate(p);
  CHECK(inst.d() == 11);
  CHECK(inst.constraints().size() == 60);

  GenParams tiny = p;
  tiny.n = 3;
  tiny.alpha = 0.1;  // 3^0.1 rounds to 1, clamped to 2
  CHECK(tiny.domain_size() == 2);
  tiny.r = 1e-6;
  CHECK(tiny.constraint_count() == 1);
}

TEST_CASE("RB relations have exactly q compatible codes") {
  GenParams p = base_params();
  p.model = ModelVariant::RB;
  p.n = 9;
  p.alpha = 0.5;  // d = 3
  p.r = 2.0;
  REQUIRE(p.domain_size() == 3);
  CHECK(p.rb_compatible_count() == 7);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    p.seed = seed;
    const Instance inst = generate(p);
    for (const auto& c : inst.constraints()) CHECK(c.compatible.count() == 7);
  }

  SUBCASE("q is clamped away from empty and full relations") {
    p.p = 0.999;
    CHECK(p.rb_compatible_count() == 1);
    p.p = 0.001;
    CHECK(p.rb_compatible_count() == 8);
  }
  SUBCASE("dense relations go through the complement path") {
    p.p = 0.1;
    p.alpha = 1.0;
    p.n = 10;  // d = 10, q = 90
    const Instance inst = generate(p);
    for (const auto& c : inst.constraints()) CHECK(c.compatible.count() == 90);
  }
}

TEST_CASE("RD compatible fraction is binomial around 1-p") {
  GenParams p = base_params();  // d^k = 121
  std::uint64_t hits = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    p.seed = 1000 + seed;
    const Instance inst = generate(p);
    for (const auto& c : inst.constraints()) {
      hits += c.compatible.count();
      total += c.compatible.size();
    }
  }
  const double mean = static_cast<double>(hits) / total;
  const double sd = std::sqrt(0.75 * 0.25 / total);
  CHECK(std::abs(mean - 0.75) < 5 * sd);
}

TEST_CASE("scopes are k distinct increasing variables") {
  GenParams p = base_params();
  p.k = 4;
  p.alpha = 0.5;
  const Instance inst = generate(p);
  for (const auto& c : inst.constraints()) {
    REQUIRE(c.scope.size() == 4);
    for (std::size_t i = 1; i < c.scope.size(); ++i) CHECK(c.scope[i - 1] < c.scope[i]);
    CHECK(c.scope.back() < p.n);
  }
}

TEST_CASE("generation is a pure function of the parameters") {
  const GenParams p = base_params();
  CHECK(serialize(generate(p)) == serialize(generate(p)));
  GenParams q = p;
  q.seed = 7;
  GenParams q2 = q;
  CHECK(serialize(generate(q)) == serialize(generate(q2)));
  CHECK(serialize(generate(q)) != serialize(generate(p)));
}

TEST_CASE("parameter violations are rejected") {
  GenParams p = base_params();
  p.n = 1;
  CHECK_THROWS_AS(generate(p), std::invalid_argument);
  p = base_params();
  p.p = 1.0;
  CHECK_THROWS_AS(generate(p), std::invalid_argument);
  p.p = 0.0;
  CHECK_THROWS_AS(generate(p), std::invalid_argument);
  p = base_params();
  p.alpha = -1;
  CHECK_THROWS_AS(generate(p), std::invalid_argument);
  p = base_params();
  p.r = 0;
  CHECK_THROWS_AS(generate(p), std::invalid_argument);
  p = base_params();
  p.k = 1;
  CHECK_THROWS_AS(generate(p), std::invalid_argument);

  SUBCASE("tuple space overflow") {
    p = base_params();
    p.n = 1000;
    p.k = 4;
    p.alpha = 1.0;  // d^k = 10^12
    CHECK_THROWS_WITH_AS(generate(p), doctest::Contains("tuple space"), std::invalid_argument);
  }
}

TEST_CASE("encode_tuple positional code") {
  const std::vector<Value> a{1, 3}, zero{0, 0};
  CHECK(encode_tuple(a, 4) == 7);
  CHECK(encode_tuple(zero, 4) == 0);
  const std::vector<Value> bad{4, 0};
  CHECK_THROWS_AS(encode_tuple(bad, 4), std::invalid_argument);

  std::set<TupleCode> seen;
  for (TupleCode code = 0; code < 81; ++code) {
    const auto t = decode_tuple(code, 4, 3);
    CHECK(encode_tuple(t, 3) == code);
    seen.insert(encode_tuple(t, 3));
  }
  CHECK(seen.size() == 81);
  CHECK_THROWS_AS(decode_tuple(81, 4, 3), std::invalid_argument);
}

TEST_CASE("is_compatible") {
  const std::uint32_t d = 3;
  Assignment a(4);
  a.set(0, 2);
  a.set(2, 1);
  CHECK(is_compatible(single({0, 2}, d, true), a, d));
  CHECK_FALSE(is_compatible(single({0, 2}, d, false), a, d));
  CHECK_THROWS_AS(is_compatible(single({0, 3}, d, true), a, d), std::invalid_argument);

  SUBCASE("agrees with re-encoding against the code list") {
    std::mt19937 gen(5);
    for (int trial = 0; trial < 50; ++trial) {
      const Instance inst = oracle::random_tiny(5, 3, 4, 0.5, static_cast<std::uint32_t>(trial), 3);
      Assignment full(5);
      std::vector<Value> raw(5);
      for (Var v = 0; v < 5; ++v) {
        raw[v] = gen() % 3;
        full.set(v, raw[v]);
      }
      for (const auto& c : inst.constraints()) CHECK(is_compatible(c, full, 3) == oracle::holds(c, raw, 3));
    }
  }
}

TEST_CASE("check_solution") {
  GenParams params;
  params.n = 3;
  params.k = 2;
  const Instance empty(params, 2, {});
  Assignment a(3);
  for (Var v = 0; v < 3; ++v) a.set(v, 1);
  CHECK(check_solution(empty, a));

  const Instance dead(params, 2, {single({0, 1}, 2, false)});
  std::vector<Var> all{0, 1, 2};
  oracle::for_each_assignment(all, 3, 2, [&](const std::vector<Value>& values) {
    Assignment x(3);
    for (Var v = 0; v < 3; ++v) x.set(v, values[v]);
    CHECK_FALSE(check_solution(dead, x));
    return true;
  });

  Assignment partial(3);
  partial.set(0, 0);
  CHECK_THROWS_AS(check_solution(empty, partial), std::invalid_argument);

  SUBCASE("agrees with a per-constraint brute-force check") {
    for (std::uint32_t seed = 0; seed < 30; ++seed) {
      const Instance inst = oracle::random_tiny(6, 3, 6, 0.4, seed);
      std::vector<Var> vars{0, 1, 2, 3, 4, 5};
      oracle::for_each_assignment(vars, 6, 3, [&](const std::vector<Value>& values) {
        Assignment x(6);
        for (Var v = 0; v < 6; ++v) x.set(v, values[v]);
        bool expect = true;
        for (const auto& c : inst.constraints()) expect = expect && oracle::holds(c, values, 3);
        CHECK(check_solution(inst, x) == expect);
        return true;
      });
    }
  }
}

TEST_CASE("instance file round trip") {
  for (auto model : {ModelVariant::RB, ModelVariant::RD}) {
    GenParams p = base_params();
    p.model = model;
    p.alpha = 0.73;
    p.r = 1.0 / 3.0;
    const Instance inst = generate(p);
    const std::string text = serialize(inst);
    CHECK(text.rfind("rbcsp v1\n20 2 9 ", 0) == 0);
    const Instance back = deserialize(text);
    CHECK(back == inst);
    CHECK(serialize(back) == text);
  }
}

TEST_CASE("malformed instance files are rejected") {
  CHECK_THROWS_AS(deserialize("rbcsp v2\n"), FormatError);
  CHECK_THROWS_AS(deserialize("rbcsp v1\n3 2 2 1 RD 1 0.5 1 0\n0 1 | 9\n"), FormatError);
  CHECK_THROWS_AS(deserialize("rbcsp v1\n3 2 2 2 RD 1 0.5 1 0\n0 1 | 1\n"), FormatError);
  CHECK_THROWS_AS(deserialize("rbcsp v1\n3 2 2 1 RD 1 0.5 1 0\n1 0 | 1\n"), FormatError);
  CHECK_THROWS_AS(deserialize("rbcsp v1\n3 2 2 1 RD 1 0.5 1 0\n0 1 | 2 1\n"), FormatError);
  CHECK_THROWS_AS(deserialize("rbcsp v1\n3 2 2 1 XX 1 0.5 1 0\n0 1 | 1\n"), FormatError);
  CHECK_NOTHROW(deserialize("rbcsp v1\n3 2 2 1 RD 1 0.5 1 0\n0 1 |\n"));
}
