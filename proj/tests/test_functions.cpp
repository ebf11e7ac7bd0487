#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "choquet/domains.hpp"
#include "choquet/functions.hpp"

using namespace choquet;

namespace {

RasterizedDomain ball_domain(int level, double radius = 0.45) {
  return rasterize(DomainSpec::ball(Vec{0.5, 0.5}, radius), GridGeometry(2, level));
}

}  // namespace

TEST_CASE("test function validation") {
  CHECK_THROWS_AS(TestFunction::radial_bump(Vec{0.5, 0.5}, -0.1, 0.2), std::domain_error);
  CHECK_THROWS_AS(TestFunction::radial_bump(Vec{0.5, 0.5}, 0.3, 0.2), std::domain_error);
  CHECK_THROWS_AS(TestFunction::power_profile(-1.0), std::domain_error);
  CHECK_THROWS_AS(TestFunction::fourier_field(7, 0, 1.0), std::domain_error);
  CHECK_THROWS_AS(TestFunction::fourier_field(7, 3, 0.0), std::domain_error);
  CHECK_THROWS_AS(TestFunction::distance_power(1.0), std::domain_error);
  CHECK_THROWS_AS(TestFunction::power_profile(2.0).scaled(-1.0), std::domain_error);
  CHECK_NOTHROW(TestFunction::power_profile(0.0));
}

TEST_CASE("radial bump profile and gradient") {
  TestFunction bump = TestFunction::radial_bump(Vec{0.5, 0.5}, 0.1, 0.3);
  DomainSpec dom = DomainSpec::ball(Vec{0.5, 0.5}, 0.45);
  CHECK(bump.value(dom, Vec{0.5, 0.5}, 2) == 1.0);
  CHECK(bump.value(dom, Vec{0.55, 0.5}, 2) == 1.0);  // inside the plateau
  CHECK(bump.gradient_magnitude(dom, Vec{0.55, 0.5}, 2) == 0.0);
  // Halfway across the shell: s = 1/2, u = 9/16, |grad| = 4*(1/2)*(3/4)/0.2.
  CHECK(bump.value(dom, Vec{0.7, 0.5}, 2) == Catch::Approx(9.0 / 16.0).epsilon(1e-14));
  CHECK(bump.gradient_magnitude(dom, Vec{0.7, 0.5}, 2) == Catch::Approx(7.5).epsilon(1e-14));
  CHECK(bump.value(dom, Vec{0.8, 0.5}, 2) == 0.0);
  CHECK(bump.gradient_magnitude(dom, Vec{0.8, 0.5}, 2) == 0.0);
  CHECK(bump.value(dom, Vec{0.95, 0.5}, 2) == 0.0);

  CHECK(bump.compact_support_inside(dom, 2));
  CHECK_FALSE(TestFunction::radial_bump(Vec{0.5, 0.5}, 0.1, 0.45).compact_support_inside(dom, 2));
  CHECK_FALSE(TestFunction::power_profile(1.0).compact_support_inside(dom, 2));
  CHECK_FALSE(
      TestFunction::radial_bump(Vec{0.2, 0.5}, 0.0, 0.1)
          .compact_support_inside(DomainSpec::annulus(0.25, 0.45), 2));  // center off the annulus
}

TEST_CASE("bump sampled outside its support is exactly zero") {
  RasterizedDomain dom = ball_domain(6);
  TestFunction bump = TestFunction::radial_bump(Vec{0.5, 0.5}, 0.05, 0.15);
  GridFunction f = sample_function(bump, dom);
  const GridGeometry& g = dom.geometry();
  int zero_cells = 0;
  for (std::uint64_t i : dom.set.indices()) {
    if (dist(g.center_of(i), Vec{0.5, 0.5}, 2) >= 0.15) {
      CHECK(f.value(i) == 0.0);
      CHECK(f.gradient(i) == 0.0);
      ++zero_cells;
    }
  }
  CHECK(zero_cells > 0);
}

TEST_CASE("compact support certificate holds near the domain boundary") {
  RasterizedDomain dom = ball_domain(6);
  double h = dom.geometry().cell_side();
  TestFunction bump = TestFunction::radial_bump(Vec{0.5, 0.5}, 0.1, 0.45 - 4 * h);
  REQUIRE(bump.compact_support_inside(dom.spec, 2));
  GridFunction f = sample_function(bump, dom);
  for (std::uint64_t i : dom.set.indices()) {
    if (dom.dist(i) <= h) {
      CHECK(f.value(i) == 0.0);
      CHECK(f.gradient(i) == 0.0);
    }
  }
}

TEST_CASE("power profile matches x1^alpha") {
  DomainSpec spire = DomainSpec::spire(1.5);
  TestFunction lin = TestFunction::power_profile(1.0);
  CHECK(lin.value(spire, Vec{0.37, 0.5}, 2) == 0.37);
  CHECK(lin.gradient_magnitude(spire, Vec{0.37, 0.5}, 2) == 1.0);
  TestFunction quad = TestFunction::power_profile(2.0);
  CHECK(quad.value(spire, Vec{0.3, 0.5}, 2) == Catch::Approx(0.09).epsilon(1e-15));
  CHECK(quad.gradient_magnitude(spire, Vec{0.3, 0.5}, 2) == Catch::Approx(0.6).epsilon(1e-15));
  TestFunction flat = TestFunction::power_profile(0.0);
  CHECK(flat.value(spire, Vec{0.3, 0.5}, 2) == 1.0);
  CHECK(flat.gradient_magnitude(spire, Vec{0.3, 0.5}, 2) == 0.0);

  RasterizedDomain dom = rasterize(spire, GridGeometry(2, 6));
  GridFunction f = sample_function(lin, dom);
  for (std::uint64_t i : dom.set.indices()) {
    CHECK(f.value(i) == dom.geometry().center_of(i)[0]);
    CHECK(f.gradient(i) == 1.0);
  }
}

TEST_CASE("distance power matches the cached distances") {
  RasterizedDomain dom = ball_domain(6, 0.3);
  TestFunction fn = TestFunction::distance_power(2.0);
  GridFunction f = sample_function(fn, dom);
  for (std::uint64_t i : dom.set.indices()) {
    CHECK(f.value(i) == Catch::Approx(sqr(dom.dist(i))).epsilon(1e-12));
    CHECK(f.gradient(i) == Catch::Approx(2.0 * dom.dist(i)).epsilon(1e-12));
  }
}

TEST_CASE("fourier fields are deterministic and respect the gradient bound") {
  TestFunction a = TestFunction::fourier_field(7, 3, 1.0);
  TestFunction b = TestFunction::fourier_field(7, 3, 1.0);
  TestFunction c = TestFunction::fourier_field(8, 3, 1.0);
  DomainSpec dom = DomainSpec::ball(Vec{0.5, 0.5}, 0.45);
  bool differs = false;
  for (double t : {0.31, 0.53, 0.64, 0.71}) {
    Vec x{t, 1.0 - t};
    CHECK(a.value(dom, x, 2) == b.value(dom, x, 2));
    CHECK(a.gradient_magnitude(dom, x, 2) == b.gradient_magnitude(dom, x, 2));
    if (a.value(dom, x, 2) != c.value(dom, x, 2)) differs = true;
  }
  CHECK(differs);

  CHECK(a.mode_norm_sum() >= 3.0);  // every mode has a nonzero integer frequency
  RasterizedDomain rast = ball_domain(6);
  GridFunction f = sample_function(a, rast);
  double bound = 1.0 * a.mode_norm_sum();
  for (std::uint64_t i : rast.set.indices()) {
    CHECK(f.gradient(i) <= bound + 1e-12);
    CHECK(f.value(i) <= bound + 1e-12);
  }
}

TEST_CASE("sampling commutes with scaling") {
  RasterizedDomain dom = ball_domain(6);
  for (const TestFunction& fn :
       {TestFunction::radial_bump(Vec{0.5, 0.5}, 0.1, 0.3), TestFunction::power_profile(1.7),
        TestFunction::fourier_field(11, 4, 0.8), TestFunction::distance_power(1.5)}) {
    GridFunction base = sample_function(fn, dom);
    GridFunction scaled = sample_function(fn.scaled(3.25), dom);
    for (std::uint64_t i : dom.set.indices()) {
      CHECK(scaled.value(i) == 3.25 * base.value(i));
      CHECK(scaled.gradient(i) == 3.25 * base.gradient(i));
    }
  }
}

TEST_CASE("signed samples agree with magnitudes") {
  RasterizedDomain dom = ball_domain(6);
  TestFunction fn = TestFunction::fourier_field(7, 3, 1.0);
  GridFunction mag = sample_function(fn, dom);
  std::vector<double> sgn = sample_signed(fn, dom);
  bool negative = false;
  for (std::uint64_t i = 0; i < dom.geometry().cell_count(); ++i) {
    if (!dom.set.contains(i)) {
      CHECK(sgn[i] == 0.0);
      continue;
    }
    CHECK(std::abs(sgn[i]) == mag.value(i));
    if (sgn[i] < 0.0) negative = true;
  }
  CHECK(negative);  // a zero-mean trigonometric field takes both signs
}

TEST_CASE("finite differences validate analytic gradients") {
  CHECK_THROWS_AS(
      finite_difference_check(TestFunction::power_profile(1.0),
                              rasterize(DomainSpec::spire(1.5), GridGeometry(2, 4))),
      std::domain_error);

  RasterizedDomain spire = rasterize(DomainSpec::spire(1.5), GridGeometry(2, 6));
  CHECK(finite_difference_check(TestFunction::power_profile(1.0), spire) <= 1e-12);

  RasterizedDomain fine = ball_domain(8);
  TestFunction bump = TestFunction::radial_bump(Vec{0.5, 0.5}, 0.1, 0.35);
  CHECK(finite_difference_check(bump, fine) <= 1e-3);

  TestFunction wave = TestFunction::fourier_field(7, 3, 1.0);
  double e6 = finite_difference_check(wave, ball_domain(6));
  double e8 = finite_difference_check(wave, fine);
  CHECK(e8 > 0.0);
  double decay = e6 / e8;
  CHECK(decay >= 12.0);
  CHECK(decay <= 20.0);
}

TEST_CASE("family names are informative") {
  CHECK(TestFunction::radial_bump(Vec{0.5, 0.25}, 0.1, 0.3).name() == "bump(0.5,0.25,0.1,0.3)");
  CHECK(TestFunction::power_profile(1.5).name() == "power(1.5)");
  CHECK(TestFunction::fourier_field(7, 3, 1.0).name() == "fourier(7,3,1)");
  CHECK(TestFunction::distance_power(2.5).name() == "distpow(2.5)");
}
