// Named experiment presets: each bundles a domain, a function family,
// exponent choices and a level plan for one of the shipped checks. Fourier
// draws derive from the run seed plus a fixed per-preset offset, so a seed
// pins every preset's function set exactly.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "choquet/domains.hpp"
#include "choquet/functions.hpp"
#include "choquet/inequalities.hpp"

namespace choquet {

enum class PresetKind { Inequality, Adams, Hedberg };

struct PresetCheck {
  PresetKind kind = PresetKind::Inequality;
  TheoremId theorem = TheoremId::Poincare;
  DomainSpec domain = DomainSpec::spire(1.5);
  int dim = 2;
  std::vector<TestFunction> functions;
  InequalityParams params;
  BMode b_mode = BMode::Infimum;
};

struct Preset {
  std::string name;
  std::string statement;
  int level = 6;
  int refine_level = 7;
  int quantize_levels = 0;
  std::vector<PresetCheck> checks;

  // Optional constant sweep: sweep_family maps each grid value to a test
  // function, evaluated with the theorem and exponents of checks[sweep_check].
  std::vector<double> sweep_grid;
  std::function<TestFunction(double)> sweep_family;
  int sweep_check = 0;
};

namespace detail {

inline std::vector<double> dyadic_thresholds(int lo_exp, int hi_exp) {
  std::vector<double> t;
  for (int e = lo_exp; e <= hi_exp; ++e) t.push_back(std::ldexp(1.0, e));
  return t;
}

inline std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = a + (b - a) * i / (count - 1);
  return v;
}

inline InequalityParams ineq_params(double delta, double kappa, double p, double s,
                                    double epsilon = 0.0) {
  InequalityParams prm;
  prm.delta = delta;
  prm.kappa = kappa;
  prm.p = p;
  prm.s = s;
  prm.epsilon = epsilon;
  return prm;
}

}  // namespace detail

inline std::vector<Preset> preset_catalog(std::uint64_t seed) {
  std::vector<Preset> out;
  const Vec annulus_pole{0.85, 0.5};  // 0.1 from both annulus boundary circles
  const auto bump_at_pole = [annulus_pole](double outer) {
    return TestFunction::radial_bump(annulus_pole, 0.4 * outer, outer);
  };

  {
    Preset p;
    p.name = "corollary-1.1";
    p.statement =
        "integral Hardy bound on the annulus A(0.25,0.45): "
        "int |u|^p d(x)^{-p(1-kappa)} dH^{delta-kappa*p} <= c int |grad u|^p dH^delta "
        "for compactly supported u";
    DomainSpec dom = DomainSpec::annulus(0.25, 0.45);
    const double combos[4][3] = {{2.0, 0.0, 2.0}, {2.0, 0.25, 2.0}, {1.5, 0.0, 2.0}, {1.5, 0.25, 1.0}};
    for (const auto& c : combos) {
      PresetCheck chk;
      chk.theorem = TheoremId::Hardy;
      chk.domain = dom;
      for (double outer : {0.04, 0.055, 0.07, 0.085, 0.095}) chk.functions.push_back(bump_at_pole(outer));
      chk.params = detail::ineq_params(c[0], c[1], c[2], 1.0);
      p.checks.push_back(std::move(chk));
    }
    p.sweep_grid = detail::linspace(0.03, 0.095, 20);
    p.sweep_family = bump_at_pole;
    out.push_back(std::move(p));
  }

  {
    Preset p;
    p.name = "hardy-theorem";
    p.statement =
        "Hardy bounds on a ball: pointwise |u(x)| <= c d(x)^{1-kappa} M_kappa|grad u|(x) for "
        "kappa in [0,1), and the integral form for p in (delta/n, delta/kappa)";
    DomainSpec dom = DomainSpec::ball(Vec{0.5, 0.5}, 0.45);
    TestFunction bump = TestFunction::radial_bump(Vec{0.5, 0.5}, 0.14, 0.35);
    for (double kappa : {0.0, 0.3}) {
      PresetCheck chk;
      chk.theorem = TheoremId::HardyPointwise;
      chk.domain = dom;
      chk.functions = {bump};
      chk.params = detail::ineq_params(2.0, kappa, 1.0, 1.0);
      p.checks.push_back(std::move(chk));
    }
    for (const auto& c : {std::pair{2.0, 0.3}, std::pair{1.7, 0.0}}) {
      PresetCheck chk;
      chk.theorem = TheoremId::Hardy;
      chk.domain = dom;
      chk.functions = {bump};
      chk.params = detail::ineq_params(c.first, c.second, 1.5, 1.0);
      p.checks.push_back(std::move(chk));
    }
    out.push_back(std::move(p));
  }

  {
    Preset p;
    p.name = "hardy-epsilon";
    p.statement =
        "dimension-drop Hardy variant: the gradient side integrates |grad u|^{p(delta-eps)/delta} "
        "at content dimension delta-eps and is raised to delta/(delta-eps)";
    DomainSpec dom = DomainSpec::annulus(0.25, 0.45);
    for (double eps : {0.5, 1.0}) {
      PresetCheck chk;
      chk.theorem = TheoremId::HardyEpsilon;
      chk.domain = dom;
      chk.functions = {bump_at_pole(0.085)};
      chk.params = detail::ineq_params(2.0, 0.25, 2.0, 1.0, eps);
      p.checks.push_back(std::move(chk));
    }
    out.push_back(std::move(p));
  }

  {
    Preset p;
    p.name = "adams-7a";
    p.statement =
        "Adams trace bound: int (M_kappa f)^p dH^{delta-kappa*p} <= c int f^p dH^delta "
        "over seeded random fields";
    p.level = 5;
    p.refine_level = 6;
    PresetCheck chk;
    chk.kind = PresetKind::Adams;
    chk.domain = DomainSpec::ball(Vec{0.5, 0.5}, 0.45);
    for (int i = 0; i < 10; ++i) chk.functions.push_back(TestFunction::fourier_field(seed + i, 3, 1.0));
    chk.params = detail::ineq_params(1.5, 0.25, 1.0, 1.0);
    p.checks.push_back(std::move(chk));
    out.push_back(std::move(p));
  }

  {
    Preset p;
    p.name = "hedberg";
    p.statement =
        "pointwise Hedberg split of the Riesz potential: R_beta f <= c (M_kappa f)^{e1} "
        "(int f^{delta/n} dH^delta)^{e2} with beta = s(n-1) and scaling-fixed exponents";
    p.level = 5;
    p.refine_level = 6;
    const double combos[2][3] = {{2.0, 1.3, 0.4}, {1.8, 1.0, 0.0}};
    for (int c = 0; c < 2; ++c) {
      PresetCheck chk;
      chk.kind = PresetKind::Hedberg;
      chk.domain = DomainSpec::ball(Vec{0.5, 0.5}, 0.45);
      for (int i = 0; i < 3; ++i)
        chk.functions.push_back(TestFunction::fourier_field(seed + 20 + 3 * c + i, 3, 1.0));
      chk.params = detail::ineq_params(combos[c][0], combos[c][2], 1.0, combos[c][1]);
      p.checks.push_back(std::move(chk));
    }
    out.push_back(std::move(p));
  }

  {
    Preset p;
    p.name = "sjohn-pointwise";
    p.statement =
        "pointwise s-John bound |u(x) - u_B| <= c R_{s(n-1)}|grad u|(x) on domains whose "
        "John exponent is at most s";
    {
      PresetCheck chk;
      chk.theorem = TheoremId::SJohnPointwise;
      chk.domain = DomainSpec::spire(1.5);
      chk.functions = {TestFunction::power_profile(2.0), TestFunction::power_profile(1.0)};
      chk.params = detail::ineq_params(2.0, 0.0, 1.0, 1.5);
      p.checks.push_back(std::move(chk));
    }
    {
      PresetCheck chk;
      chk.theorem = TheoremId::SJohnPointwise;
      chk.domain = DomainSpec::ball(Vec{0.5, 0.5}, 0.45);
      chk.functions = {TestFunction::fourier_field(seed + 30, 3, 1.0)};
      chk.params = detail::ineq_params(2.0, 0.0, 1.0, 1.0);
      p.checks.push_back(std::move(chk));
    }
    out.push_back(std::move(p));
  }

  {
    Preset p;
    p.name = "poincare";
    p.statement =
        "Choquet Poincare bound inf_b int |u-b|^p dH^delta <= c int |grad u|^p dH^delta "
        "for p > delta/n on s-John domains with s(n-1) < n";
    {
      PresetCheck chk;
      chk.domain = DomainSpec::spire(1.5);
      chk.functions = {TestFunction::fourier_field(seed + 40, 3, 1.0), TestFunction::power_profile(1.5)};
      chk.params = detail::ineq_params(2.0, 0.0, 1.25, 1.5);
      p.checks.push_back(std::move(chk));
    }
    {
      PresetCheck chk;
      chk.domain = DomainSpec::spire(1.2);
      chk.functions = {TestFunction::fourier_field(seed + 41, 3, 1.0)};
      chk.params = detail::ineq_params(1.2, 0.0, 0.8, 1.2);
      p.checks.push_back(std::move(chk));
    }
    p.sweep_grid = detail::linspace(0.5, 3.0, 11);
    p.sweep_family = [](double alpha) { return TestFunction::power_profile(alpha); };
    out.push_back(std::move(p));
  }

  {
    Preset p;
    p.name = "poincare-sobolev";
    p.statement =
        "Poincare-Sobolev bound (inf_b int |u-b|^q dH^{delta-kappa*p})^{1/q} <= "
        "c (int |grad u|^p dH^delta)^{1/p} with q = (delta-kappa*p)p/(delta-p*e), e = n+s(1-n)";
    const double combos[3][4] = {{2.0, 0.25, 1.1, 1.5}, {2.0, 0.0, 1.25, 1.5}, {2.0, 0.25, 1.1, 1.2}};
    for (int c = 0; c < 3; ++c) {
      PresetCheck chk;
      chk.theorem = TheoremId::PoincareSobolev;
      chk.domain = DomainSpec::spire(combos[c][3]);
      chk.functions = {TestFunction::fourier_field(seed + 50 + c, 3, 1.0)};
      chk.params = detail::ineq_params(combos[c][0], combos[c][1], combos[c][2], combos[c][3]);
      p.checks.push_back(std::move(chk));
    }
    out.push_back(std::move(p));
  }

  {
    Preset p;
    p.name = "weak-type";
    p.statement =
        "weak-type bound H^delta({|u-b| > t}) <= c t^{-delta/beta} "
        "(int |grad u|^{delta/n} dH^delta)^{n/beta}, beta = s(n-1), reported as the curve c(t)";
    const std::vector<double> t_grid = detail::dyadic_thresholds(-6, 0);
    {
      PresetCheck chk;
      chk.theorem = TheoremId::WeakType;
      chk.domain = DomainSpec::spire(1.5);
      chk.functions = {TestFunction::fourier_field(seed + 60, 3, 1.0)};
      chk.params = detail::ineq_params(2.0, 0.0, 1.0, 1.5);
      chk.params.t_grid = t_grid;
      chk.b_mode = BMode::JohnAverage;
      p.checks.push_back(chk);
      chk.b_mode = BMode::Infimum;
      p.checks.push_back(std::move(chk));
    }
    {
      PresetCheck chk;
      chk.theorem = TheoremId::WeakType;
      chk.domain = DomainSpec::spire(1.2);
      chk.functions = {TestFunction::fourier_field(seed + 61, 3, 1.0)};
      chk.params = detail::ineq_params(2.0, 0.0, 1.0, 1.2);
      chk.params.t_grid = t_grid;
      chk.b_mode = BMode::JohnAverage;
      p.checks.push_back(std::move(chk));
    }
    out.push_back(std::move(p));
  }

  {
    Preset p;
    p.name = "corollary-spire-poincare";
    p.statement =
        "endpoint bounds on the spire with cusp exponent 1.5: the kappa = 0 Poincare-Sobolev "
        "form with q = delta*p/(delta-p*e), and the weak-type curve with the minimizing b";
    {
      PresetCheck chk;
      chk.theorem = TheoremId::PoincareSobolev;
      chk.domain = DomainSpec::spire(1.5);
      chk.functions = {TestFunction::power_profile(1.5), TestFunction::fourier_field(seed + 70, 3, 1.0)};
      chk.params = detail::ineq_params(2.0, 0.0, 1.25, 1.5);
      p.checks.push_back(std::move(chk));
    }
    {
      PresetCheck chk;
      chk.theorem = TheoremId::WeakType;
      chk.domain = DomainSpec::spire(1.5);
      chk.functions = {TestFunction::fourier_field(seed + 71, 3, 1.0)};
      chk.params = detail::ineq_params(2.0, 0.0, 1.0, 1.5);
      chk.params.t_grid = detail::dyadic_thresholds(-6, 0);
      chk.b_mode = BMode::Infimum;
      p.checks.push_back(std::move(chk));
    }
    out.push_back(std::move(p));
  }

  {
    Preset p;
    p.name = "remark-ub-forms";
    p.statement =
        "upper-bound forms: the Poincare, Poincare-Sobolev and weak-type checks with the "
        "John-ball average u_B in place of the minimizing b; constants can only grow";
    DomainSpec dom = DomainSpec::spire(1.5);
    {
      PresetCheck chk;
      chk.theorem = TheoremId::Poincare;
      chk.domain = dom;
      chk.functions = {TestFunction::fourier_field(seed + 72, 3, 1.0)};
      chk.params = detail::ineq_params(2.0, 0.0, 1.25, 1.5);
      chk.b_mode = BMode::JohnAverage;
      p.checks.push_back(std::move(chk));
    }
    {
      PresetCheck chk;
      chk.theorem = TheoremId::PoincareSobolev;
      chk.domain = dom;
      chk.functions = {TestFunction::fourier_field(seed + 73, 3, 1.0)};
      chk.params = detail::ineq_params(2.0, 0.25, 1.1, 1.5);
      chk.b_mode = BMode::JohnAverage;
      p.checks.push_back(std::move(chk));
    }
    {
      PresetCheck chk;
      chk.theorem = TheoremId::WeakType;
      chk.domain = dom;
      chk.functions = {TestFunction::fourier_field(seed + 74, 3, 1.0)};
      chk.params = detail::ineq_params(2.0, 0.0, 1.0, 1.5);
      chk.params.t_grid = detail::dyadic_thresholds(-6, 0);
      chk.b_mode = BMode::JohnAverage;
      p.checks.push_back(std::move(chk));
    }
    out.push_back(std::move(p));
  }

  return out;
}

inline const Preset* find_preset(const std::vector<Preset>& catalog, const std::string& name) {
  for (const Preset& p : catalog)
    if (p.name == name) return &p;
  return nullptr;
}

}  // namespace choquet
