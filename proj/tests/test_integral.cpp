#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "choquet/integral.hpp"
#include "support.hpp"

using namespace choquet;

namespace {

// Reference layer cake evaluated on an arbitrary refinement of the level
// partition: inserting thresholds that f never attains must not change the
// integral, since the distribution function is constant between levels.
double reference_integral(const GridFunction& f, double delta, const std::vector<double>& thresholds) {
  KahanSum total;
  double prev = 0.0;
  for (double t : thresholds) {
    double mid = 0.5 * (prev + t);
    total.add((t - prev) * dyadic_content_value(superlevel_set(f, mid), delta));
    prev = t;
  }
  return total.value();
}

}  // namespace

TEST_CASE("integral of zero and validation") {
  GridGeometry g(2, 4);
  CHECK(choquet_integral(GridFunction::zero(g), 1.0).value == 0.0);
  CHECK(choquet_integral(GridFunction::zero(g), 1.0).levels_used == 0);
  GridFunction f = GridFunction::indicator(set_complement(GridSet(g)));
  CHECK_THROWS_AS(choquet_integral(f, 0.0), std::domain_error);
  CHECK_THROWS_AS(choquet_integral(f, 2.3), std::domain_error);
  CHECK_THROWS_AS(choquet_integral_power(f, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(choquet_integral_quantized(f, 1.0, 0), std::domain_error);
}

TEST_CASE("indicator integrates to the content of its set") {
  GridGeometry g(2, 5);
  std::mt19937_64 rng(41);
  for (int k = 0; k < 25; ++k) {
    GridSet e = testsupport::random_mixed_set(g, rng);
    for (double delta : {0.5, 1.0, 2.0}) {
      double lhs = choquet_integral(GridFunction::indicator(e), delta).value;
      double rhs = dyadic_content_value(e, delta);
      REQUIRE(lhs == Catch::Approx(rhs).epsilon(1e-14).margin(1e-300));
    }
  }
}

TEST_CASE("two-level step function has the expected layer cake") {
  // f = 3 on A, 1 on B \ A: integral = 1 * H(A u B) + 2 * H(A).
  GridGeometry g(2, 3);
  GridSet a(g), b(g);
  for (std::uint64_t i = 0; i < 4; ++i) a.insert(i);
  for (std::uint64_t i = 0; i < 12; ++i) b.insert(i);
  GridSet sup = set_union(a, b);
  std::vector<double> vals(g.cell_count(), 0.0);
  for (std::uint64_t i : sup.indices()) vals[i] = a.contains(i) ? 3.0 : 1.0;
  GridFunction f(g, sup, vals);
  for (double delta : {0.8, 1.5, 2.0}) {
    double expect = dyadic_content_value(sup, delta) + 2.0 * dyadic_content_value(a, delta);
    IntegralValue got = choquet_integral(f, delta);
    CHECK(got.value == Catch::Approx(expect).epsilon(1e-14));
    CHECK(got.levels_used == 2);
  }
}

TEST_CASE("layer cake is invariant under refining the threshold partition") {
  GridGeometry g(2, 4);
  std::mt19937_64 rng(43);
  for (int k = 0; k < 15; ++k) {
    GridFunction f = testsupport::random_function(g, rng, 8);
    auto levels = distinct_levels(f);
    if (levels.empty()) continue;
    std::vector<double> refined;
    double prev = 0.0;
    for (double t : levels) {
      refined.push_back(0.5 * (prev + t));  // extra thresholds between levels
      refined.push_back(t);
      prev = t;
    }
    for (double delta : {0.6, 1.9}) {
      double exact = choquet_integral(f, delta).value;
      double ref = reference_integral(f, delta, refined);
      REQUIRE(ref == Catch::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("power route residual stays below tolerance on random inputs") {
  GridGeometry g(2, 5);
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> pexp(0.3, 4.0);
  std::uniform_real_distribution<double> dexp(0.1, 2.0);
  for (int k = 0; k < 50; ++k) {
    GridFunction f = testsupport::random_function(g, rng);
    double p = pexp(rng);
    double delta = dexp(rng);
    PowerIntegral pi = choquet_integral_power(f, p, delta);
    REQUIRE(pi.residual <= 1e-10 * (1.0 + pi.integral.value));
  }
}

TEST_CASE("power integral of scaled indicators has a closed form") {
  GridGeometry g(2, 4);
  std::mt19937_64 rng(53);
  GridSet e = testsupport::random_blocky_set(g, rng, 3);
  for (double a : {1.0, 2.0, 0.7}) {
    for (double p : {1.0, 2.0, 3.5}) {
      double got = choquet_integral_power(GridFunction::indicator(e).scaled(a), p, 1.0).integral.value;
      double expect = std::pow(a, p) * dyadic_content_value(e, 1.0);
      REQUIRE(got == Catch::Approx(expect).epsilon(1e-13).margin(1e-300));
    }
  }
}

TEST_CASE("truncation is monotone and saturates at the maximum") {
  GridGeometry g(2, 4);
  std::mt19937_64 rng(59);
  GridFunction f = testsupport::random_function(g, rng);
  auto levels = distinct_levels(f);
  if (levels.empty()) return;
  double full = choquet_integral(f, 1.0).value;
  double prev = 0.0;
  for (double c : {0.3, 0.9, 2.0, 4.0}) {
    GridFunction cap = pointwise_min(f, GridFunction::indicator(f.support()).scaled(c));
    double v = choquet_integral(cap, 1.0).value;
    REQUIRE(v >= prev - 1e-14);
    REQUIRE(v <= full * (1.0 + 1e-13));
    prev = v;
  }
  GridFunction cap = pointwise_min(f, GridFunction::indicator(f.support()).scaled(levels.back()));
  REQUIRE(choquet_integral(cap, 1.0).value == Catch::Approx(full).epsilon(1e-13));
}

TEST_CASE("quantized integral brackets the exact value") {
  GridGeometry g(2, 5);
  std::mt19937_64 rng(61);
  for (int k = 0; k < 20; ++k) {
    GridFunction f = testsupport::random_function(g, rng, 20);
    for (double delta : {0.5, 1.5, 2.0}) {
      double exact = choquet_integral(f, delta).value;
      auto values = distinct_levels(f);
      double vmax = values.empty() ? 0.0 : values.back();
      double support_content = dyadic_content_value(superlevel_set(f, 0.0), delta);
      for (int levels : {8, 64, 256}) {
        QuantizedIntegral q = choquet_integral_quantized(f, delta, levels);
        REQUIRE(q.lower <= exact * (1.0 + 1e-12) + 1e-15);
        REQUIRE(q.upper >= exact * (1.0 - 1e-12) - 1e-15);
        // One-slab bracket: width is (vmax / levels) * H(support).
        REQUIRE(q.upper - q.lower <=
                vmax / levels * support_content * (1.0 + 1e-12) + 1e-15);
      }
      QuantizedIntegral fine = choquet_integral_quantized(f, delta, 512);
      REQUIRE(std::abs(fine.midpoint() - exact) <= 0.5 * (fine.upper - fine.lower) + 1e-12);
    }
  }
}

TEST_CASE("choquet axiom battery passes on random pairs") {
  std::mt19937_64 rng(67);
  GridGeometry g(2, 5);
  for (double delta : {0.5, 1.0, 1.5, 2.0}) {
    for (int k = 0; k < 6; ++k) {
      GridFunction f = testsupport::random_function(g, rng, 10);
      GridFunction h = testsupport::random_function(g, rng, 10);
      ChoquetAxiomReport rep = check_choquet_axioms(f, h, delta, 2.0);
      INFO("delta " << delta << " iteration " << k << " worst " << rep.worst_violation);
      CHECK(rep.pass());
    }
  }
}

TEST_CASE("choquet axiom battery validates inputs") {
  GridGeometry a(2, 3), b(2, 4);
  std::mt19937_64 rng(71);
  GridFunction f = testsupport::random_function(a, rng);
  GridFunction h = testsupport::random_function(b, rng);
  CHECK_THROWS_AS(check_choquet_axioms(f, h, 1.0, 2.0), std::invalid_argument);
  GridFunction h2 = testsupport::random_function(a, rng);
  CHECK_THROWS_AS(check_choquet_axioms(f, h2, 1.0, 1.0), std::domain_error);
}

TEST_CASE("embedding inequality holds and validates") {
  GridGeometry g(2, 5);
  std::mt19937_64 rng(73);

  CHECK(check_content_embedding(GridFunction::zero(g), 1.0, 2.0).pass);

  for (int k = 0; k < 30; ++k) {
    GridFunction f = testsupport::random_function(g, rng);
    for (auto [d1, d2] : {std::pair{0.5, 1.0}, std::pair{1.0, 2.0}, std::pair{1.5, 2.0}}) {
      EmbeddingReport rep = check_content_embedding(f, d1, d2);
      INFO("d1 " << d1 << " d2 " << d2 << " lhs " << rep.lhs << " rhs " << rep.rhs);
      REQUIRE(rep.pass);
    }
  }

  GridFunction f = testsupport::random_function(g, rng);
  CHECK_THROWS_AS(check_content_embedding(f, 1.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(check_content_embedding(f, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(check_content_embedding(f, 1.0, 2.5), std::domain_error);
}
