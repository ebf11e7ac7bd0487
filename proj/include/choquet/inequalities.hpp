// Empirical checkers for distance-weighted inequalities on rasterized
// domains: pointwise and integral Hardy bounds (with an optional content
// dimension drop on the gradient side), pointwise Riesz-kernel bounds on
// s-John domains, Poincare and Poincare-Sobolev inequalities, and a
// weak-type endpoint estimate. Every checker evaluates both sides on the
// sampled grid and reports the observed constant; nothing is assumed to
// hold, and an unbounded ratio is reported rather than clipped.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "choquet/common.hpp"
#include "choquet/content.hpp"
#include "choquet/domains.hpp"
#include "choquet/functions.hpp"
#include "choquet/grid.hpp"
#include "choquet/integral.hpp"
#include "choquet/operators.hpp"

namespace choquet {

enum class TheoremId {
  HardyPointwise,
  Hardy,
  HardyEpsilon,
  SJohnPointwise,
  Poincare,
  PoincareSobolev,
  WeakType,
};

inline const char* theorem_name(TheoremId id) {
  switch (id) {
    case TheoremId::HardyPointwise: return "hardy-pointwise";
    case TheoremId::Hardy: return "hardy";
    case TheoremId::HardyEpsilon: return "hardy-epsilon";
    case TheoremId::SJohnPointwise: return "sjohn-pointwise";
    case TheoremId::Poincare: return "poincare";
    case TheoremId::PoincareSobolev: return "poincare-sobolev";
    case TheoremId::WeakType: return "weak-type";
  }
  throw std::logic_error("unknown theorem id");
}

// Choice of the free constant b where an inequality allows any translation:
// a global minimization over b, or the average over the John ball.
enum class BMode { Infimum, JohnAverage };

// Exponent bundle. Checkers read only the fields their inequality uses and
// echo them into the report; poincare_sobolev_check writes q back from its
// exponent formula, weak_type_check writes the worst threshold into t.
struct InequalityParams {
  double delta = 0.0;
  double kappa = 0.0;
  double p = 0.0;
  double q = 0.0;
  double s = 1.0;
  double epsilon = 0.0;
  double t = 0.0;
  std::vector<double> t_grid;
  double k = 0.5;  // John ball radius as a fraction of the center's boundary distance
};

struct InequalityReport {
  TheoremId theorem = TheoremId::Hardy;
  InequalityParams params;
  // For integral checks, the two full sides. For pointwise and weak-type
  // checks, the sides at the worst cell or threshold.
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // observed constant; 0 when both sides vanish
  bool finite = true;  // false when a positive left side meets a vanishing right side
  double b_used = 0.0;
  bool b_is_infimum = false;
  int level = 0;
  int quantize_levels = 0;  // 0 = exact layer cake throughout
  std::vector<std::pair<double, double>> curve;  // weak-type: (t, c(t)) samples
  double rearranged_sup = 0.0;  // weak-type: sup of the content^{(n-1)/delta} form
};

namespace detail {

// Cells where both sides fall below this are vacuous 0/0 points outside the
// support of u and are skipped.
inline constexpr double kPointwiseGuard = 1e-14;

// Same support, values channel replaced by the gradient magnitudes.
inline GridFunction gradient_field(const GridFunction& f) {
  return GridFunction(f.geometry(), f.support(), f.gradients());
}

// delta-content integral of f^power: exact layer cake, or the midpoint of a
// level-quantized bracket when quantize_levels > 0 (large grids).
inline double power_integral(const GridFunction& f, double power, double delta, int quantize_levels) {
  LayerCake lc = LayerCake::from(f);
  if (power != 1.0)
    for (double& v : lc.values) v = std::pow(v, power);
  if (quantize_levels > 0) return lc.quantized(delta, quantize_levels).midpoint();
  return lc.accumulate(delta, [](double t) { return t; }, nullptr);
}

// |u - b| as a grid function on the occupied set.
inline GridFunction abs_shift(const RasterizedDomain& dom, const std::vector<double>& signed_u,
                              double b) {
  const GridGeometry& g = dom.geometry();
  std::vector<double> v(g.cell_count(), 0.0);
  for (std::uint64_t i : dom.set.indices()) v[i] = std::abs(signed_u[i] - b);
  return GridFunction(g, dom.set, std::move(v));
}

// Cell-count average of the signed samples over the John ball.
inline double john_average(const RasterizedDomain& dom, const std::vector<double>& signed_u,
                           double k) {
  GridSet ball = john_ball(dom, k);
  KahanSum sum;
  std::uint64_t count = 0;
  for (std::uint64_t i : ball.indices()) {
    sum.add(signed_u[i]);
    ++count;
  }
  return sum.value() / static_cast<double>(count);
}

// Distinct sampled values of u, thinned to evenly spaced order statistics
// when there are many, plus the John average. Adding a constant to u shifts
// the candidate set by exactly that constant, which is what makes the
// b-search translation invariant.
inline std::vector<double> b_candidates(const RasterizedDomain& dom,
                                        const std::vector<double>& signed_u, double u_b,
                                        std::size_t cap = 129) {
  std::vector<double> v;
  v.reserve(dom.set.count() + 1);
  for (std::uint64_t i : dom.set.indices()) v.push_back(signed_u[i]);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  if (v.size() > cap) {
    std::vector<double> thin;
    thin.reserve(cap);
    for (std::size_t j = 0; j < cap; ++j) thin.push_back(v[j * (v.size() - 1) / (cap - 1)]);
    v = std::move(thin);
  }
  v.push_back(u_b);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

struct BChoice {
  double b = 0.0;
  double objective = 0.0;
};

// Minimizes b -> integral of |u-b|^power against H^delta. The objective is
// piecewise smooth but not convex in general (contents jump as superlevel
// sets change), so the candidate scan is global over the sampled values;
// golden section only polishes the bracket around the best candidate. The
// John average is always evaluated at full precision last, with ties going
// to it, so the returned minimum never exceeds that choice.
inline BChoice minimize_over_b(const RasterizedDomain& dom, const std::vector<double>& signed_u,
                               double power, double delta, double u_b, int quantize_levels) {
  const int coarse_levels = 64;
  auto coarse = [&](double b) {
    return power_integral(abs_shift(dom, signed_u, b), power, delta, coarse_levels);
  };
  auto fine = [&](double b) {
    return power_integral(abs_shift(dom, signed_u, b), power, delta, quantize_levels);
  };
  std::vector<double> cand = b_candidates(dom, signed_u, u_b);
  std::size_t best = 0;
  double best_val = coarse(cand[0]);
  for (std::size_t j = 1; j < cand.size(); ++j) {
    double v = coarse(cand[j]);
    if (v < best_val) {
      best_val = v;
      best = j;
    }
  }
  BChoice out;
  out.b = cand[best];
  out.objective = fine(out.b);
  double lo = cand[best > 0 ? best - 1 : 0];
  double hi = cand[std::min(best + 1, cand.size() - 1)];
  if (hi > lo) {
    double refined = golden_section_min(coarse, lo, hi, 40);
    double rv = fine(refined);
    if (rv < out.objective) {
      out.b = refined;
      out.objective = rv;
    }
  }
  double jv = fine(u_b);
  if (jv <= out.objective) {
    out.b = u_b;
    out.objective = jv;
  }
  return out;
}

inline void set_sides(InequalityReport& rep, double lhs, double rhs) {
  rep.lhs = lhs;
  rep.rhs = rhs;
  if (rhs > 0.0) {
    rep.ratio = lhs / rhs;
    rep.finite = std::isfinite(rep.ratio);
  } else if (lhs == 0.0) {
    rep.ratio = 0.0;
  } else {
    rep.ratio = std::numeric_limits<double>::infinity();
    rep.finite = false;
  }
}

// Running max of per-cell ratios under the vacuous-0/0 guard.
struct PointwiseMax {
  double ratio = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool finite = true;
  double bad_lhs = 0.0;

  void feed(double l, double r) {
    if (l < kPointwiseGuard && r < kPointwiseGuard) return;
    if (r < kPointwiseGuard) {
      if (finite) {
        finite = false;
        bad_lhs = l;
      }
      return;
    }
    double q = l / r;
    if (q > ratio) {
      ratio = q;
      lhs = l;
      rhs = r;
    }
  }

  void commit(InequalityReport& rep) const {
    if (!finite) {
      rep.finite = false;
      rep.ratio = std::numeric_limits<double>::infinity();
      rep.lhs = bad_lhs;
      rep.rhs = 0.0;
    } else {
      rep.ratio = ratio;
      rep.lhs = lhs;
      rep.rhs = rhs;
    }
  }
};

inline void validate_delta_dim(double delta, int n) {
  if (!(delta > 0.0 && delta <= static_cast<double>(n)))
    throw std::domain_error("delta must lie in (0, n]");
}

inline void require_compact_support(const TestFunction& u, const RasterizedDomain& dom) {
  if (!u.compact_support_inside(dom.spec, dom.geometry().dim()))
    throw std::invalid_argument("Hardy checks need u compactly supported inside the domain");
}

// The domain must actually be s-John for the requested s, and s must stay
// below n/(n-1) (above it even the Riesz kernel bound degenerates).
inline void validate_sjohn(const DomainSpec& spec, double s, int n) {
  if (!(s >= 1.0 && s * (n - 1) < static_cast<double>(n)))
    throw std::domain_error("s must lie in [1, n/(n-1))");
  if (!(s >= spec.john_exponent()))
    throw std::invalid_argument("domain is not s-John for the requested s");
}

}  // namespace detail

// Pointwise bound |u(x)| <= c dist(x)^{1-kappa} M_kappa|grad u|(x) for
// compactly supported u and kappa in [0, 1). Reports the worst cell.
inline InequalityReport hardy_pointwise_check(const RasterizedDomain& dom, const TestFunction& u,
                                              double kappa) {
  const GridGeometry& g = dom.geometry();
  if (!(kappa >= 0.0 && kappa < 1.0)) throw std::domain_error("kappa must lie in [0, 1)");
  detail::require_compact_support(u, dom);
  GridFunction f = sample_function(u, dom);
  GridFunction mgrad = fractional_maximal(detail::gradient_field(f),
                                          OperatorParams::with_default_radii(g, kappa));
  InequalityReport rep;
  rep.theorem = TheoremId::HardyPointwise;
  rep.params.kappa = kappa;
  rep.level = g.level();
  detail::PointwiseMax best;
  for (std::uint64_t i : dom.set.indices())
    best.feed(f.value(i), std::pow(dom.dist(i), 1.0 - kappa) * mgrad.value(i));
  best.commit(rep);
  return rep;
}

// Integral Hardy bound for compactly supported u. Without epsilon:
//   int |u|^p dist^{-p(1-kappa)} dH^{delta-kappa p} <= c int |grad u|^p dH^delta,
// with p in (delta/n, delta/kappa), the right end infinite at kappa = 0.
// With epsilon in (0, delta) the gradient side drops to content dimension
// delta-epsilon and exponent p(delta-epsilon)/delta, raised back to the
// power delta/(delta-epsilon); that outer power is the one produced by the
// content embedding and keeps both sides homogeneous of degree p in u.
inline InequalityReport hardy_check(const RasterizedDomain& dom, const TestFunction& u, double delta,
                                    double kappa, double p,
                                    std::optional<double> epsilon = std::nullopt,
                                    int quantize_levels = 0) {
  const GridGeometry& g = dom.geometry();
  const int n = g.dim();
  detail::validate_delta_dim(delta, n);
  if (!(kappa >= 0.0 && kappa < 1.0)) throw std::domain_error("kappa must lie in [0, 1)");
  if (!(p * n > delta)) throw std::domain_error("p must exceed delta/n");
  if (kappa > 0.0 && !(p * kappa < delta)) throw std::domain_error("p must stay below delta/kappa");
  if (epsilon && !(*epsilon > 0.0 && *epsilon < delta))
    throw std::domain_error("epsilon must lie in (0, delta)");
  detail::require_compact_support(u, dom);

  GridFunction f = sample_function(u, dom);
  std::vector<double> weighted(g.cell_count(), 0.0);
  for (std::uint64_t i : dom.set.indices())
    if (f.value(i) > 0.0)
      weighted[i] = std::pow(f.value(i), p) * std::pow(dom.dist(i), -p * (1.0 - kappa));
  double lhs = detail::power_integral(GridFunction(g, dom.set, std::move(weighted)), 1.0,
                                      delta - kappa * p, quantize_levels);
  GridFunction grad = detail::gradient_field(f);

  InequalityReport rep;
  rep.level = g.level();
  rep.quantize_levels = quantize_levels;
  rep.params.delta = delta;
  rep.params.kappa = kappa;
  rep.params.p = p;
  double rhs = 0.0;
  if (epsilon) {
    double pe = p * (delta - *epsilon) / delta;
    rhs = std::pow(detail::power_integral(grad, pe, delta - *epsilon, quantize_levels),
                   delta / (delta - *epsilon));
    rep.theorem = TheoremId::HardyEpsilon;
    rep.params.epsilon = *epsilon;
  } else {
    rhs = detail::power_integral(grad, p, delta, quantize_levels);
    rep.theorem = TheoremId::Hardy;
  }
  detail::set_sides(rep, lhs, rhs);
  return rep;
}

// Pointwise bound on an s-John domain:
//   |u(x) - u_B| <= c int |grad u(y)| |x-y|^{-s(n-1)} dy,
// where u_B averages u over the John ball B(x0, k dist(x0)). u need not be
// compactly supported. Reports the worst cell.
inline InequalityReport sjohn_pointwise_check(const RasterizedDomain& dom, const TestFunction& u,
                                              double s, double k = 0.5) {
  const GridGeometry& g = dom.geometry();
  const int n = g.dim();
  detail::validate_sjohn(dom.spec, s, n);
  GridFunction f = sample_function(u, dom);
  std::vector<double> su = sample_signed(u, dom);
  double u_b = detail::john_average(dom, su, k);
  GridFunction grad = detail::gradient_field(f);
  detail::RieszTables tables(g, s * (n - 1));
  InequalityReport rep;
  rep.theorem = TheoremId::SJohnPointwise;
  rep.params.s = s;
  rep.params.k = k;
  rep.level = g.level();
  rep.b_used = u_b;
  detail::PointwiseMax best;
  for (std::uint64_t i : dom.set.indices())
    best.feed(std::abs(su[i] - u_b), tables.evaluate(g, grad.values(), i));
  best.commit(rep);
  return rep;
}

// Poincare bound inf_b int |u-b|^p dH^delta <= c int |grad u|^p dH^delta on
// an s-John domain with s < n/(n-1). Requires p > delta/n; p below 1 is
// allowed. JohnAverage mode fixes b = u_B instead of minimizing.
inline InequalityReport poincare_check(const RasterizedDomain& dom, const TestFunction& u,
                                       double delta, double p, BMode b_mode = BMode::Infimum,
                                       double k = 0.5, int quantize_levels = 0) {
  const GridGeometry& g = dom.geometry();
  const int n = g.dim();
  detail::validate_delta_dim(delta, n);
  if (!(p > 0.0 && p * n > delta)) throw std::domain_error("p must exceed delta/n");
  if (!(dom.spec.john_exponent() * (n - 1) < static_cast<double>(n)))
    throw std::invalid_argument("domain is not s-John for any s < n/(n-1)");

  GridFunction f = sample_function(u, dom);
  std::vector<double> su = sample_signed(u, dom);
  double u_b = detail::john_average(dom, su, k);
  InequalityReport rep;
  rep.theorem = TheoremId::Poincare;
  rep.params.delta = delta;
  rep.params.p = p;
  rep.params.k = k;
  rep.level = g.level();
  rep.quantize_levels = quantize_levels;
  double lhs = 0.0;
  if (b_mode == BMode::Infimum) {
    detail::BChoice choice = detail::minimize_over_b(dom, su, p, delta, u_b, quantize_levels);
    lhs = choice.objective;
    rep.b_used = choice.b;
    rep.b_is_infimum = true;
  } else {
    lhs = detail::power_integral(detail::abs_shift(dom, su, u_b), p, delta, quantize_levels);
    rep.b_used = u_b;
  }
  double rhs = detail::power_integral(detail::gradient_field(f), p, delta, quantize_levels);
  detail::set_sides(rep, lhs, rhs);
  return rep;
}

// Poincare-Sobolev bound on an s-John domain:
//   (inf_b int |u-b|^q dH^{delta-kappa p})^{1/q} <= c (int |grad u|^p dH^delta)^{1/p}
// with q = (delta-kappa p) p / (delta - p(n+s(1-n))), p in
// (delta/n, delta/(n+s(1-n))) and kappa in [0, n+s(1-n)). The report carries
// the normed sides, so the ratio is homogeneous of degree 0 in u.
inline InequalityReport poincare_sobolev_check(const RasterizedDomain& dom, const TestFunction& u,
                                               double delta, double kappa, double p, double s,
                                               BMode b_mode = BMode::Infimum, double k = 0.5,
                                               int quantize_levels = 0) {
  const GridGeometry& g = dom.geometry();
  const int n = g.dim();
  detail::validate_delta_dim(delta, n);
  detail::validate_sjohn(dom.spec, s, n);
  const double e = n + s * (1.0 - n);  // positive below the s < n/(n-1) threshold
  if (!(kappa >= 0.0 && kappa < e)) throw std::domain_error("kappa must lie in [0, n+s(1-n))");
  if (!(p * n > delta)) throw std::domain_error("p must exceed delta/n");
  if (!(p * e < delta)) throw std::domain_error("p must stay below delta/(n+s(1-n))");
  const double q = (delta - kappa * p) * p / (delta - p * e);

  GridFunction f = sample_function(u, dom);
  std::vector<double> su = sample_signed(u, dom);
  double u_b = detail::john_average(dom, su, k);
  InequalityReport rep;
  rep.theorem = TheoremId::PoincareSobolev;
  rep.params.delta = delta;
  rep.params.kappa = kappa;
  rep.params.p = p;
  rep.params.q = q;
  rep.params.s = s;
  rep.params.k = k;
  rep.level = g.level();
  rep.quantize_levels = quantize_levels;
  const double content_dim = delta - kappa * p;
  double lhs_q = 0.0;
  if (b_mode == BMode::Infimum) {
    detail::BChoice choice = detail::minimize_over_b(dom, su, q, content_dim, u_b, quantize_levels);
    lhs_q = choice.objective;
    rep.b_used = choice.b;
    rep.b_is_infimum = true;
  } else {
    lhs_q = detail::power_integral(detail::abs_shift(dom, su, u_b), q, content_dim, quantize_levels);
    rep.b_used = u_b;
  }
  double rhs_p = detail::power_integral(detail::gradient_field(f), p, delta, quantize_levels);
  detail::set_sides(rep, std::pow(lhs_q, 1.0 / q), std::pow(rhs_p, 1.0 / p));
  return rep;
}

// Weak-type endpoint bound at the boundary exponent p = delta/n:
//   H^delta({|u-b| > t}) <= c t^{-delta/(s(n-1))} (int |grad u|^{delta/n} dH^delta)^{n/(s(n-1))}.
// Default b is the John average; Infimum mode minimizes the content over b
// separately for each threshold (the content is a step function of b, so the
// candidate scan is the whole search). The report carries the per-threshold
// constants c(t), their sup, and the sup of the rearranged form
//   H^delta({|u-b| > t})^{(n-1)/delta} <= c t^{-1/s} (int ...)^{n/(s delta)}.
inline InequalityReport weak_type_check(const RasterizedDomain& dom, const TestFunction& u,
                                        double delta, double s, const std::vector<double>& t_grid,
                                        BMode b_mode = BMode::JohnAverage, double k = 0.5,
                                        int quantize_levels = 0) {
  const GridGeometry& g = dom.geometry();
  const int n = g.dim();
  detail::validate_delta_dim(delta, n);
  detail::validate_sjohn(dom.spec, s, n);
  if (t_grid.empty()) throw std::domain_error("weak-type check needs a nonempty threshold grid");
  for (double t : t_grid)
    if (!(t > 0.0) || !std::isfinite(t))
      throw std::domain_error("weak-type thresholds must be positive and finite");

  const double beta = s * (n - 1);
  GridFunction f = sample_function(u, dom);
  std::vector<double> su = sample_signed(u, dom);
  double u_b = detail::john_average(dom, su, k);
  double grad_int =
      detail::power_integral(detail::gradient_field(f), delta / n, delta, quantize_levels);

  InequalityReport rep;
  rep.theorem = TheoremId::WeakType;
  rep.params.delta = delta;
  rep.params.p = delta / n;
  rep.params.s = s;
  rep.params.k = k;
  rep.params.t_grid = t_grid;
  rep.level = g.level();
  rep.quantize_levels = quantize_levels;
  rep.b_used = u_b;
  rep.b_is_infimum = (b_mode == BMode::Infimum);

  // Superlevel contents per threshold; Infimum mode takes the min over the
  // candidate set, which contains u_B, so inf <= the John-average content.
  std::vector<double> content(t_grid.size(), 0.0);
  if (b_mode == BMode::Infimum) {
    std::vector<double> cand = detail::b_candidates(dom, su, u_b);
    content.assign(t_grid.size(), std::numeric_limits<double>::infinity());
    for (double b : cand) {
      GridFunction shifted = detail::abs_shift(dom, su, b);
      for (std::size_t j = 0; j < t_grid.size(); ++j)
        content[j] =
            std::min(content[j], dyadic_content_value(superlevel_set(shifted, t_grid[j]), delta));
    }
  } else {
    GridFunction shifted = detail::abs_shift(dom, su, u_b);
    for (std::size_t j = 0; j < t_grid.size(); ++j)
      content[j] = dyadic_content_value(superlevel_set(shifted, t_grid[j]), delta);
  }

  const double rhs_pow = std::pow(grad_int, static_cast<double>(n) / beta);
  const double re_pow = std::pow(grad_int, static_cast<double>(n) / (s * delta));
  bool unbounded = false;
  double sup = -1.0;
  double sup_t = t_grid.front();
  double sup_lhs = 0.0;
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    double t = t_grid[j];
    double ct = 0.0;
    double re = 0.0;
    if (grad_int > 0.0) {
      ct = content[j] * std::pow(t, delta / beta) / rhs_pow;
      re = std::pow(content[j], (n - 1) / delta) * std::pow(t, 1.0 / s) / re_pow;
    } else if (content[j] > 0.0) {
      ct = std::numeric_limits<double>::infinity();
      re = ct;
      unbounded = true;
    }
    rep.curve.emplace_back(t, ct);
    rep.rearranged_sup = std::max(rep.rearranged_sup, re);
    if (ct > sup) {
      sup = ct;
      sup_t = t;
      sup_lhs = content[j];
    }
  }
  rep.params.t = sup_t;
  if (unbounded) {
    rep.finite = false;
    rep.ratio = std::numeric_limits<double>::infinity();
    rep.lhs = sup_lhs;
    rep.rhs = 0.0;
  } else {
    rep.ratio = sup;
    rep.lhs = sup_lhs;
    rep.rhs = std::pow(sup_t, -delta / beta) * rhs_pow;
  }
  return rep;
}

// Dispatch by theorem id with exponents drawn from prm. HardyEpsilon falls
// back to epsilon = delta/4 when none is set; WeakType falls back to the
// dyadic threshold grid {2^-6, ..., 2^0}.
inline InequalityReport run_check(TheoremId id, const RasterizedDomain& dom, const TestFunction& u,
                                  const InequalityParams& prm, BMode b_mode = BMode::Infimum,
                                  int quantize_levels = 0) {
  switch (id) {
    case TheoremId::HardyPointwise:
      return hardy_pointwise_check(dom, u, prm.kappa);
    case TheoremId::Hardy:
      return hardy_check(dom, u, prm.delta, prm.kappa, prm.p, std::nullopt, quantize_levels);
    case TheoremId::HardyEpsilon: {
      double eps = prm.epsilon > 0.0 ? prm.epsilon : prm.delta / 4.0;
      return hardy_check(dom, u, prm.delta, prm.kappa, prm.p, eps, quantize_levels);
    }
    case TheoremId::SJohnPointwise:
      return sjohn_pointwise_check(dom, u, prm.s, prm.k);
    case TheoremId::Poincare:
      return poincare_check(dom, u, prm.delta, prm.p, b_mode, prm.k, quantize_levels);
    case TheoremId::PoincareSobolev:
      return poincare_sobolev_check(dom, u, prm.delta, prm.kappa, prm.p, prm.s, b_mode, prm.k,
                                    quantize_levels);
    case TheoremId::WeakType: {
      std::vector<double> ts = prm.t_grid;
      if (ts.empty())
        for (int j = -6; j <= 0; ++j) ts.push_back(std::ldexp(1.0, j));
      return weak_type_check(dom, u, prm.delta, prm.s, ts, b_mode, prm.k, quantize_levels);
    }
  }
  throw std::logic_error("unknown theorem id");
}

// One-parameter family sweep for the observed constant of a theorem.
struct ConstantEstimate {
  TheoremId theorem = TheoremId::Hardy;
  double sup_ratio = 0.0;
  double argmax_parameter = 0.0;
  double ratio_base_level = 0.0;    // ratio of the argmax member at the base level
  double ratio_refine_level = 0.0;  // same member one level finer
  bool finite = true;
  std::vector<std::pair<double, double>> sweep;  // (parameter, ratio) at the base level
};

// Evaluates the check across parameter_grid at `level`, keeps the largest
// observed constant, polishes the best parameter by golden section on its
// bracketing interval, and re-evaluates the winner at refine_level for a
// stability factor. The estimate is a lower bound for any admissible
// constant of the theorem; nothing about convergence is claimed.
inline ConstantEstimate estimate_constant(TheoremId id, const DomainSpec& spec, int dim,
                                          const std::vector<double>& parameter_grid,
                                          const std::function<TestFunction(double)>& family,
                                          const InequalityParams& prm, int level, int refine_level,
                                          BMode b_mode = BMode::Infimum, int quantize_levels = 0,
                                          int golden_iterations = 8) {
  if (parameter_grid.empty()) throw std::domain_error("parameter sweep must be nonempty");
  RasterizedDomain dom = rasterize(spec, GridGeometry(dim, level));
  ConstantEstimate out;
  out.theorem = id;
  auto ratio_at = [&](double param) {
    InequalityReport r = run_check(id, dom, family(param), prm, b_mode, quantize_levels);
    if (!r.finite) out.finite = false;
    return r.ratio;
  };
  double best = -1.0;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < parameter_grid.size(); ++i) {
    double r = ratio_at(parameter_grid[i]);
    out.sweep.emplace_back(parameter_grid[i], r);
    if (r > best) {
      best = r;
      best_index = i;
    }
  }
  out.sup_ratio = best;
  out.argmax_parameter = parameter_grid[best_index];
  double lo = parameter_grid[best_index > 0 ? best_index - 1 : 0];
  double hi = parameter_grid[std::min(best_index + 1, parameter_grid.size() - 1)];
  if (hi > lo && golden_iterations > 0) {
    double polished = golden_section_max(ratio_at, lo, hi, golden_iterations);
    double r = ratio_at(polished);
    if (r > out.sup_ratio) {
      out.sup_ratio = r;
      out.argmax_parameter = polished;
    }
  }
  out.ratio_base_level = out.sup_ratio;
  RasterizedDomain fine = rasterize(spec, GridGeometry(dim, refine_level));
  InequalityReport refined = run_check(id, fine, family(out.argmax_parameter), prm, b_mode,
                                       quantize_levels);
  if (!refined.finite) out.finite = false;
  out.ratio_refine_level = refined.ratio;
  return out;
}

}  // namespace choquet
