#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "choquet/domains.hpp"
#include "choquet/functions.hpp"
#include "choquet/inequalities.hpp"

using namespace choquet;

namespace {

// Bump compactly supported inside Annulus(0.25, 0.45): midline points have
// boundary distance exactly 0.1.
TestFunction annulus_bump(double outer = 0.08) {
  return TestFunction::radial_bump({0.85, 0.5}, 0.4 * outer, outer);
}

RasterizedDomain annulus_domain(int level) {
  return rasterize(DomainSpec::annulus(0.25, 0.45), GridGeometry(2, level));
}

RasterizedDomain spire_domain(double s, int level) {
  return rasterize(DomainSpec::spire(s), GridGeometry(2, level));
}

RasterizedDomain ball_domain(int level) {
  return rasterize(DomainSpec::ball({0.5, 0.5}, 0.45), GridGeometry(2, level));
}

std::vector<double> dyadic_t_grid() {
  std::vector<double> t;
  for (int j = -6; j <= 0; ++j) t.push_back(std::ldexp(1.0, j));
  return t;
}

}  // namespace

TEST_CASE("checkers reject parameters outside their admissible intervals") {
  RasterizedDomain ann = annulus_domain(4);
  RasterizedDomain sp = spire_domain(1.5, 4);
  TestFunction bump = annulus_bump();
  TestFunction fld = TestFunction::fourier_field(3, 2, 1.0);

  SECTION("pointwise hardy") {
    CHECK_THROWS_AS(hardy_pointwise_check(ann, bump, 1.0), std::domain_error);
    CHECK_THROWS_AS(hardy_pointwise_check(ann, bump, -0.1), std::domain_error);
    // u must be certified compactly supported inside the domain.
    CHECK_THROWS_AS(hardy_pointwise_check(ann, TestFunction::power_profile(1.0), 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(hardy_pointwise_check(ann, TestFunction::radial_bump({0.85, 0.5}, 0.05, 0.2), 0.0),
                    std::invalid_argument);
  }

  SECTION("integral hardy: p interval is open, delta/0 treated as infinite") {
    CHECK_THROWS_AS(hardy_check(ann, bump, 2.0, 0.0, 1.0), std::domain_error);  // p = delta/n
    CHECK_THROWS_AS(hardy_check(ann, bump, 2.0, 0.25, 8.0), std::domain_error);  // p = delta/kappa
    CHECK_THROWS_AS(hardy_check(ann, bump, 2.0, 1.0, 2.0), std::domain_error);   // kappa = 1
    CHECK_THROWS_AS(hardy_check(ann, bump, 2.5, 0.0, 2.0), std::domain_error);   // delta > n
    CHECK_THROWS_AS(hardy_check(ann, bump, 2.0, 0.0, 2.0, 0.0), std::domain_error);  // eps = 0
    CHECK_THROWS_AS(hardy_check(ann, bump, 2.0, 0.0, 2.0, 2.0), std::domain_error);  // eps = delta
    // kappa = 0 leaves p unbounded above.
    CHECK_NOTHROW(hardy_check(ann, bump, 2.0, 0.0, 50.0));
  }

  SECTION("s-John checks demand an admissible s and a matching domain") {
    CHECK_THROWS_AS(sjohn_pointwise_check(sp, fld, 0.9), std::domain_error);
    CHECK_THROWS_AS(sjohn_pointwise_check(sp, fld, 2.0), std::domain_error);  // s = n/(n-1)
    CHECK_THROWS_AS(sjohn_pointwise_check(sp, fld, 1.2), std::invalid_argument);  // spire(1.5) is not 1.2-John
    CHECK_NOTHROW(sjohn_pointwise_check(sp, fld, 1.5));
    CHECK_THROWS_AS(sjohn_pointwise_check(sp, fld, 1.5, 0.0), std::domain_error);  // k out of (0,1)
  }

  SECTION("poincare needs p > delta/n and a John-type domain") {
    CHECK_THROWS_AS(poincare_check(sp, fld, 2.0, 1.0), std::domain_error);  // p = delta/n
    CHECK_THROWS_AS(poincare_check(sp, fld, 1.2, 0.6), std::domain_error);
    RasterizedDomain room = rasterize(DomainSpec::room_with_cusp(2.0, 0.5, false), GridGeometry(2, 4));
    CHECK_THROWS_AS(poincare_check(room, fld, 2.0, 1.5), std::invalid_argument);
  }

  SECTION("poincare-sobolev interval endpoints are excluded") {
    // e = n + s(1-n) = 0.5 at s = 1.5, so p ranges over (1, 4).
    CHECK_THROWS_AS(poincare_sobolev_check(sp, fld, 2.0, 0.0, 1.0, 1.5), std::domain_error);
    CHECK_THROWS_AS(poincare_sobolev_check(sp, fld, 2.0, 0.0, 4.0, 1.5), std::domain_error);
    CHECK_THROWS_AS(poincare_sobolev_check(sp, fld, 2.0, 0.5, 1.1, 1.5), std::domain_error);  // kappa = e
    CHECK_NOTHROW(poincare_sobolev_check(sp, fld, 2.0, 0.25, 1.1, 1.5));
  }

  SECTION("weak-type thresholds must be positive and present") {
    CHECK_THROWS_AS(weak_type_check(sp, fld, 2.0, 1.5, {}), std::domain_error);
    CHECK_THROWS_AS(weak_type_check(sp, fld, 2.0, 1.5, {0.5, 0.0}), std::domain_error);
    CHECK_THROWS_AS(weak_type_check(sp, fld, 2.0, 1.5, {-1.0}), std::domain_error);
    CHECK_NOTHROW(weak_type_check(sp, fld, 2.0, 1.5, {0.5}));
  }
}

TEST_CASE("constant functions give ratio exactly zero") {
  RasterizedDomain sp = spire_domain(1.5, 5);
  TestFunction one = TestFunction::power_profile(0.0);  // u = 1, gradient 0

  InequalityReport sj = sjohn_pointwise_check(sp, one, 1.5);
  CHECK(sj.ratio == 0.0);
  CHECK(sj.finite);

  for (BMode mode : {BMode::Infimum, BMode::JohnAverage}) {
    InequalityReport pc = poincare_check(sp, one, 2.0, 1.25, mode);
    CHECK(pc.lhs == 0.0);
    CHECK(pc.rhs == 0.0);
    CHECK(pc.ratio == 0.0);
    CHECK(pc.finite);

    InequalityReport ps = poincare_sobolev_check(sp, one, 2.0, 0.25, 1.1, 1.5, mode);
    CHECK(ps.ratio == 0.0);
    CHECK(ps.finite);

    InequalityReport wt = weak_type_check(sp, one, 2.0, 1.5, dyadic_t_grid(), mode);
    CHECK(wt.ratio == 0.0);
    CHECK(wt.rearranged_sup == 0.0);
    for (auto& [t, ct] : wt.curve) CHECK(ct == 0.0);
  }

  // The zero function is the compactly supported constant case.
  RasterizedDomain ann = annulus_domain(5);
  TestFunction zero = annulus_bump().scaled(0.0);
  CHECK(hardy_pointwise_check(ann, zero, 0.25).ratio == 0.0);
  InequalityReport h = hardy_check(ann, zero, 2.0, 0.0, 2.0);
  CHECK(h.ratio == 0.0);
  CHECK(h.finite);
}

TEST_CASE("poincare-sobolev echoes q from its exponent formula") {
  RasterizedDomain sp = spire_domain(1.5, 5);
  TestFunction fld = TestFunction::fourier_field(5, 3, 1.0);
  double delta = 2.0, kappa = 0.25, p = 1.1, s = 1.5;
  InequalityReport ps = poincare_sobolev_check(sp, fld, delta, kappa, p, s, BMode::JohnAverage);
  double e = 2.0 + s * (1.0 - 2.0);
  CHECK(ps.params.q == (delta - kappa * p) * p / (delta - p * e));
  CHECK(ps.params.q > p);

  // Classical exponent: s = 1, delta = n = 2, kappa = 0, p = 3/2 gives q = 6.
  RasterizedDomain ball = ball_domain(5);
  InequalityReport cls = poincare_sobolev_check(ball, fld, 2.0, 0.0, 1.5, 1.0, BMode::JohnAverage);
  CHECK(cls.params.q == 6.0);
}

TEST_CASE("reported ratios are scale invariant") {
  const double tol = 1e-10;
  RasterizedDomain ann = annulus_domain(5);
  TestFunction bump = annulus_bump();

  InequalityReport hp1 = hardy_pointwise_check(ann, bump, 0.25);
  InequalityReport hp3 = hardy_pointwise_check(ann, bump.scaled(3.0), 0.25);
  CHECK(hp3.ratio == Catch::Approx(hp1.ratio).epsilon(tol));

  InequalityReport h1 = hardy_check(ann, bump, 2.0, 0.25, 2.0);
  InequalityReport h3 = hardy_check(ann, bump.scaled(3.0), 2.0, 0.25, 2.0);
  CHECK(h3.ratio == Catch::Approx(h1.ratio).epsilon(tol));

  InequalityReport he1 = hardy_check(ann, bump, 2.0, 0.25, 2.0, 0.5);
  InequalityReport he3 = hardy_check(ann, bump.scaled(3.0), 2.0, 0.25, 2.0, 0.5);
  CHECK(he3.ratio == Catch::Approx(he1.ratio).epsilon(tol));

  RasterizedDomain sp = spire_domain(1.2, 5);
  TestFunction fld = TestFunction::fourier_field(7, 3, 1.0);

  InequalityReport sj1 = sjohn_pointwise_check(sp, fld, 1.2);
  InequalityReport sj3 = sjohn_pointwise_check(sp, fld.scaled(3.0), 1.2);
  CHECK(sj3.ratio == Catch::Approx(sj1.ratio).epsilon(tol));

  InequalityReport pj1 = poincare_check(sp, fld, 1.2, 0.8, BMode::JohnAverage);
  InequalityReport pj3 = poincare_check(sp, fld.scaled(3.0), 1.2, 0.8, BMode::JohnAverage);
  CHECK(pj3.ratio == Catch::Approx(pj1.ratio).epsilon(tol));

  // Infimum mode: a power-of-two scaling keeps every branch of the b-search
  // on the same path, so the ratio reproduces to roundoff.
  InequalityReport pi1 = poincare_check(sp, fld, 1.2, 0.8, BMode::Infimum);
  InequalityReport pi4 = poincare_check(sp, fld.scaled(4.0), 1.2, 0.8, BMode::Infimum);
  CHECK(pi4.ratio == Catch::Approx(pi1.ratio).epsilon(tol));

  InequalityReport ps1 = poincare_sobolev_check(sp, fld, 1.5, 0.25, 1.1, 1.2, BMode::JohnAverage);
  InequalityReport ps3 =
      poincare_sobolev_check(sp, fld.scaled(3.0), 1.5, 0.25, 1.1, 1.2, BMode::JohnAverage);
  CHECK(ps3.ratio == Catch::Approx(ps1.ratio).epsilon(tol));

  // Weak-type curves satisfy c_{a u}(a t) = c_u(t); scale thresholds along
  // with the function.
  std::vector<double> tg = dyadic_t_grid();
  std::vector<double> tg4 = tg;
  for (double& t : tg4) t *= 4.0;
  InequalityReport wt1 = weak_type_check(sp, fld, 1.5, 1.2, tg, BMode::JohnAverage);
  InequalityReport wt4 = weak_type_check(sp, fld.scaled(4.0), 1.5, 1.2, tg4, BMode::JohnAverage);
  CHECK(wt4.ratio == Catch::Approx(wt1.ratio).epsilon(tol));
  REQUIRE(wt4.curve.size() == wt1.curve.size());
  for (std::size_t j = 0; j < wt1.curve.size(); ++j)
    CHECK(wt4.curve[j].second == Catch::Approx(wt1.curve[j].second).epsilon(tol));
}

TEST_CASE("b-search candidate set shifts exactly under translation") {
  RasterizedDomain ball = ball_domain(3);
  std::vector<double> su(ball.geometry().cell_count(), 0.0);
  double seedv = -4.0;
  for (std::uint64_t i : ball.set.indices()) {
    su[i] = seedv;  // dyadic values, exact under + 2.0
    seedv += 0.375;
  }
  std::vector<double> shifted = su;
  for (std::uint64_t i : ball.set.indices()) shifted[i] += 2.0;

  double ub = detail::john_average(ball, su, 0.5);
  double ub_shift = detail::john_average(ball, shifted, 0.5);
  CHECK(ub_shift == ub + 2.0);

  std::vector<double> c0 = detail::b_candidates(ball, su, ub);
  std::vector<double> c1 = detail::b_candidates(ball, shifted, ub_shift);
  REQUIRE(c0.size() == c1.size());
  for (std::size_t j = 0; j < c0.size(); ++j) CHECK(c1[j] == c0[j] + 2.0);
}

TEST_CASE("infimum-over-b never exceeds the John-average choice") {
  RasterizedDomain sp = spire_domain(1.5, 5);
  for (unsigned seed : {11u, 12u, 13u}) {
    TestFunction fld = TestFunction::fourier_field(seed, 3, 1.0);

    InequalityReport p_inf = poincare_check(sp, fld, 2.0, 1.25, BMode::Infimum);
    InequalityReport p_avg = poincare_check(sp, fld, 2.0, 1.25, BMode::JohnAverage);
    CHECK(p_inf.lhs <= p_avg.lhs);
    CHECK(p_inf.b_is_infimum);
    CHECK_FALSE(p_avg.b_is_infimum);

    InequalityReport s_inf = poincare_sobolev_check(sp, fld, 2.0, 0.25, 1.1, 1.5, BMode::Infimum);
    InequalityReport s_avg = poincare_sobolev_check(sp, fld, 2.0, 0.25, 1.1, 1.5, BMode::JohnAverage);
    CHECK(s_inf.lhs <= s_avg.lhs);

    InequalityReport w_inf = weak_type_check(sp, fld, 2.0, 1.5, dyadic_t_grid(), BMode::Infimum);
    InequalityReport w_avg = weak_type_check(sp, fld, 2.0, 1.5, dyadic_t_grid(), BMode::JohnAverage);
    REQUIRE(w_inf.curve.size() == w_avg.curve.size());
    for (std::size_t j = 0; j < w_inf.curve.size(); ++j)
      CHECK(w_inf.curve[j].second <= w_avg.curve[j].second);
  }
}

TEST_CASE("hardy reports on the annulus are finite and positive") {
  RasterizedDomain ann = annulus_domain(6);
  TestFunction bump = annulus_bump();

  InequalityReport a = hardy_check(ann, bump, 2.0, 0.0, 2.0);
  CHECK(a.finite);
  CHECK(a.lhs > 0.0);
  CHECK(a.rhs > 0.0);
  CHECK(a.ratio > 0.0);
  CHECK(a.theorem == TheoremId::Hardy);

  InequalityReport b = hardy_check(ann, bump, 1.5, 0.25, 1.0);
  CHECK(b.finite);
  CHECK(b.ratio > 0.0);

  InequalityReport c = hardy_check(ann, bump, 2.0, 0.0, 2.0, 0.5);
  CHECK(c.theorem == TheoremId::HardyEpsilon);
  CHECK(c.finite);
  CHECK(c.ratio > 0.0);
  CHECK(c.params.epsilon == 0.5);

  InequalityReport hp = hardy_pointwise_check(ann, bump, 0.0);
  CHECK(hp.finite);
  CHECK(hp.ratio > 0.0);
  CHECK(hp.lhs > 0.0);
  CHECK(hp.rhs > 0.0);
}

TEST_CASE("poincare on spires accepts exponents below one") {
  RasterizedDomain sp = spire_domain(1.2, 5);
  TestFunction fld = TestFunction::fourier_field(21, 3, 1.0);
  InequalityReport rep = poincare_check(sp, fld, 1.2, 0.8, BMode::Infimum);
  CHECK(rep.finite);
  CHECK(rep.ratio > 0.0);
  CHECK(rep.rhs > 0.0);
  CHECK(rep.b_is_infimum);
  CHECK(rep.level == 5);
}

TEST_CASE("sjohn pointwise reports finite constants on spires and balls") {
  RasterizedDomain sp = spire_domain(1.5, 5);
  InequalityReport a = sjohn_pointwise_check(sp, TestFunction::power_profile(2.0), 1.5);
  CHECK(a.finite);
  CHECK(a.ratio > 0.0);
  CHECK(a.rhs > 0.0);

  RasterizedDomain ball = ball_domain(5);
  InequalityReport b = sjohn_pointwise_check(ball, TestFunction::fourier_field(9, 3, 1.0), 1.0);
  CHECK(b.finite);
  CHECK(b.ratio > 0.0);
}

TEST_CASE("weak-type curve vanishes beyond the sup of |u - b|") {
  RasterizedDomain sp = spire_domain(1.5, 5);
  TestFunction fld = TestFunction::fourier_field(17, 3, 1.0);
  std::vector<double> tg = dyadic_t_grid();
  tg.push_back(1e9);  // beyond any sampled |u - u_B|
  InequalityReport rep = weak_type_check(sp, fld, 2.0, 1.5, tg, BMode::JohnAverage);
  CHECK(rep.finite);
  CHECK(rep.ratio >= 0.0);
  CHECK(rep.rearranged_sup >= 0.0);
  REQUIRE(rep.curve.size() == tg.size());
  CHECK(rep.curve.back().second == 0.0);
  CHECK(rep.params.t > 0.0);
  for (auto& [t, ct] : rep.curve) CHECK(ct >= 0.0);
  // The sup must be attained on the curve.
  double sup = 0.0;
  for (auto& [t, ct] : rep.curve) sup = std::max(sup, ct);
  CHECK(rep.ratio == sup);
}

TEST_CASE("run_check dispatches on the theorem id") {
  RasterizedDomain sp = spire_domain(1.5, 4);
  RasterizedDomain ann = annulus_domain(4);
  TestFunction fld = TestFunction::fourier_field(3, 2, 1.0);
  TestFunction bump = annulus_bump();

  InequalityParams prm;
  prm.delta = 2.0;
  prm.kappa = 0.25;
  prm.p = 2.0;
  CHECK(run_check(TheoremId::Hardy, ann, bump, prm).theorem == TheoremId::Hardy);
  CHECK(run_check(TheoremId::HardyPointwise, ann, bump, prm).theorem == TheoremId::HardyPointwise);
  // Default dimension drop is delta/4.
  InequalityReport he = run_check(TheoremId::HardyEpsilon, ann, bump, prm);
  CHECK(he.params.epsilon == 0.5);

  prm.s = 1.5;
  prm.p = 1.25;
  prm.kappa = 0.0;
  CHECK(run_check(TheoremId::SJohnPointwise, sp, fld, prm).theorem == TheoremId::SJohnPointwise);
  CHECK(run_check(TheoremId::Poincare, sp, fld, prm).theorem == TheoremId::Poincare);
  prm.p = 1.1;
  CHECK(run_check(TheoremId::PoincareSobolev, sp, fld, prm).theorem == TheoremId::PoincareSobolev);
  InequalityReport wt = run_check(TheoremId::WeakType, sp, fld, prm);
  CHECK(wt.theorem == TheoremId::WeakType);
  CHECK(wt.curve.size() == 7);  // default dyadic grid 2^-6 .. 2^0
}

TEST_CASE("estimate_constant sweeps, refines, and reports two levels") {
  InequalityParams prm;
  prm.delta = 2.0;
  prm.p = 1.25;

  SECTION("constant family gives zero everywhere") {
    ConstantEstimate est = estimate_constant(
        TheoremId::Poincare, DomainSpec::spire(1.5), 2, {0.0},
        [](double) { return TestFunction::power_profile(0.0); }, prm, 4, 5);
    CHECK(est.sup_ratio == 0.0);
    CHECK(est.ratio_refine_level == 0.0);
    CHECK(est.finite);
    CHECK(est.sweep.size() == 1);
  }

  SECTION("bump sweep for the integral hardy bound") {
    InequalityParams hprm;
    hprm.delta = 2.0;
    hprm.kappa = 0.0;
    hprm.p = 2.0;
    std::vector<double> outers = {0.04, 0.06, 0.08};
    ConstantEstimate est = estimate_constant(
        TheoremId::Hardy, DomainSpec::annulus(0.25, 0.45), 2, outers,
        [](double outer) { return annulus_bump(outer); }, hprm, 5, 6, BMode::Infimum, 0, 4);
    CHECK(est.finite);
    CHECK(est.sup_ratio > 0.0);
    CHECK(est.ratio_base_level == est.sup_ratio);
    CHECK(est.ratio_refine_level > 0.0);
    CHECK(est.argmax_parameter >= outers.front());
    CHECK(est.argmax_parameter <= outers.back());
    REQUIRE(est.sweep.size() == outers.size());
    for (auto& [param, ratio] : est.sweep) {
      CHECK(param > 0.0);
      CHECK(ratio > 0.0);
    }
  }

  SECTION("empty sweep is rejected") {
    CHECK_THROWS_AS(estimate_constant(TheoremId::Poincare, DomainSpec::spire(1.5), 2, {},
                                      [](double) { return TestFunction::power_profile(0.0); }, prm,
                                      4, 5),
                    std::domain_error);
  }
}
