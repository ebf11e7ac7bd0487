#ifndef CHOQUET_DOMAINS_HPP
#define CHOQUET_DOMAINS_HPP

// Analytic domain generators and their rasterization onto the dyadic grid.
// Each generator answers membership, exact distance to the boundary, and the
// closest boundary point; rasterization marks cells whose center lies inside
// and caches the analytic boundary distance per occupied cell.
//
// Generators (all live strictly inside the unit cube):
//   annulus(i, o)      {i < |x - c| < o}, c the cube center
//   ball(c, r)         {|x - c| < r}
//   box(lo, hi)        open axis-aligned box
//   spire(s)           {0 < x1 < 1, |x_perp - m| < x1^s / 2}; the model
//                      s-John domain, cusp tip at x1 = 0
//   room_with_cusp     square room with a power cusp of exponent gamma,
//                      either an inward notch cut out of the room (its thin
//                      complement defeats outer regularity) or an outward
//                      spike attached to it (a gamma-John domain)

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "choquet/grid.hpp"

namespace choquet {

namespace detail {

// Global 1-D minimization by coarse scan plus golden refinement on the best
// bracket. The profiles are smooth power curves, so a dense scan isolates
// the global basin reliably.
template <class F>
double scan_min(F&& f, double a, double b, int samples = 257, int iters = 70) {
  double best = a;
  double best_val = f(a);
  for (int i = 1; i <= samples; ++i) {
    double t = a + (b - a) * i / samples;
    double v = f(t);
    if (v < best_val) {
      best_val = v;
      best = t;
    }
  }
  double lo = std::max(a, best - (b - a) / samples);
  double hi = std::min(b, best + (b - a) / samples);
  return golden_section_min(f, lo, hi, iters);
}

inline double point_segment_dist2(const Vec& p, double ax, double ay, double bx, double by) {
  double vx = bx - ax, vy = by - ay;
  double wx = p[0] - ax, wy = p[1] - ay;
  double t = (vx * wx + vy * wy) / (vx * vx + vy * vy);
  t = std::clamp(t, 0.0, 1.0);
  double dx = wx - t * vx, dy = wy - t * vy;
  return dx * dx + dy * dy;
}

inline Vec segment_closest(const Vec& p, double ax, double ay, double bx, double by) {
  double vx = bx - ax, vy = by - ay;
  double wx = p[0] - ax, wy = p[1] - ay;
  double t = std::clamp((vx * wx + vy * wy) / (vx * vx + vy * vy), 0.0, 1.0);
  return Vec{ax + t * vx, ay + t * vy};
}

}  // namespace detail

class DomainSpec {
 public:
  enum class Kind { Annulus, Spire, Ball, Box, RoomWithCusp };

  static DomainSpec annulus(double inner, double outer) {
    DomainSpec d;
    d.kind_ = Kind::Annulus;
    d.a_ = inner;
    d.b_ = outer;
    return d;
  }

  static DomainSpec spire(double s) {
    DomainSpec d;
    d.kind_ = Kind::Spire;
    d.a_ = s;
    return d;
  }

  static DomainSpec ball(const Vec& center, double radius) {
    DomainSpec d;
    d.kind_ = Kind::Ball;
    d.center_ = center;
    d.a_ = radius;
    return d;
  }

  static DomainSpec box(const Vec& lo, const Vec& hi) {
    DomainSpec d;
    d.kind_ = Kind::Box;
    d.center_ = lo;
    d.hi_ = hi;
    return d;
  }

  // gamma >= 1 is the cusp exponent; position in (0, 1) places the tip
  // (inward) or the attachment face (outward) along the room width.
  static DomainSpec room_with_cusp(double gamma, double position, bool inward) {
    DomainSpec d;
    d.kind_ = Kind::RoomWithCusp;
    d.a_ = gamma;
    d.b_ = position;
    d.inward_ = inward;
    return d;
  }

  Kind kind() const { return kind_; }
  double cusp_exponent() const { return a_; }
  double cusp_position() const { return b_; }
  bool cusp_inward() const { return inward_; }
  double spire_exponent() const { return a_; }
  double inner_radius() const { return a_; }
  double outer_radius() const { return b_; }
  double ball_radius() const { return a_; }
  const Vec& ball_center() const { return center_; }
  const Vec& box_lo() const { return center_; }
  const Vec& box_hi() const { return hi_; }

  void validate(int n) const {
    switch (kind_) {
      case Kind::Annulus:
        if (!(a_ > 0.0 && a_ < b_ && b_ <= 0.5))
          throw std::domain_error("annulus needs 0 < inner < outer <= 1/2");
        break;
      case Kind::Spire:
        if (!(a_ >= 1.0) || !(a_ * (n - 1) < n))
          throw std::domain_error("spire exponent must lie in [1, n/(n-1))");
        break;
      case Kind::Ball:
        if (!(a_ > 0.0)) throw std::domain_error("ball radius must be positive");
        for (int d = 0; d < n; ++d)
          if (!(center_[d] - a_ >= 0.0 && center_[d] + a_ <= 1.0))
            throw std::domain_error("ball must lie inside the unit cube");
        break;
      case Kind::Box:
        for (int d = 0; d < n; ++d)
          if (!(center_[d] >= 0.0 && center_[d] < hi_[d] && hi_[d] <= 1.0))
            throw std::domain_error("box needs 0 <= lo < hi <= 1 per axis");
        break;
      case Kind::RoomWithCusp:
        if (n != 2) throw std::domain_error("cusped rooms are two-dimensional");
        if (!(a_ >= 1.0)) throw std::domain_error("cusp exponent must be >= 1");
        if (!(b_ > 0.0 && b_ < 1.0)) throw std::domain_error("cusp position must lie in (0, 1)");
        break;
    }
  }

  std::string name() const {
    char buf[96];
    switch (kind_) {
      case Kind::Annulus:
        std::snprintf(buf, sizeof(buf), "annulus(%g,%g)", a_, b_);
        break;
      case Kind::Spire:
        std::snprintf(buf, sizeof(buf), "spire(%g)", a_);
        break;
      case Kind::Ball:
        std::snprintf(buf, sizeof(buf), "ball(%g)", a_);
        break;
      case Kind::Box:
        std::snprintf(buf, sizeof(buf), "box(%g,%g)", center_[0], hi_[0]);
        break;
      case Kind::RoomWithCusp:
        std::snprintf(buf, sizeof(buf), "room(%g,%g,%s)", a_, b_, inward_ ? "inward" : "outward");
        break;
    }
    return buf;
  }

  // Smallest s for which the domain is s-John. Inward notches leave the room
  // 1-John (paths go around the notch); an outward spike of exponent gamma
  // is exactly gamma-John at its tip.
  double john_exponent() const {
    switch (kind_) {
      case Kind::Spire:
        return a_;
      case Kind::RoomWithCusp:
        return inward_ ? 1.0 : a_;
      default:
        return 1.0;
    }
  }

  // Whether the complement is uniformly fat at every boundary point. The
  // inward cusp pinches its complement wedge and fails.
  bool outer_regular() const { return !(kind_ == Kind::RoomWithCusp && inward_); }

  bool contains(const Vec& x, int n) const {
    switch (kind_) {
      case Kind::Annulus: {
        double r = dist(x, cube_center(n), n);
        return r > a_ && r < b_;
      }
      case Kind::Ball:
        return dist(x, center_, n) < a_;
      case Kind::Box: {
        for (int d = 0; d < n; ++d)
          if (!(x[d] > center_[d] && x[d] < hi_[d])) return false;
        return true;
      }
      case Kind::Spire: {
        if (!(x[0] > 0.0 && x[0] < 1.0)) return false;
        return perp_radius(x, n) < half_width(x[0]);
      }
      case Kind::RoomWithCusp: {
        bool in_box = x[0] > kRoomLo && x[0] < room_right() && x[1] > kRoomLo && x[1] < kRoomHi;
        if (inward_) {
          if (!in_box) return false;
          double tip = tip_x();
          if (x[0] < tip) return true;
          return std::abs(x[1] - 0.5) > notch_width(x[0]);
        }
        if (in_box) return true;
        if (x[0] >= room_right() && x[0] < kRoomHi) return std::abs(x[1] - 0.5) < spike_width(x[0]);
        return false;
      }
    }
    return false;
  }

  double boundary_distance(const Vec& x, int n) const { return boundary(x, n, nullptr); }

  Vec closest_boundary_point(const Vec& x, int n) const {
    Vec y{};
    boundary(x, n, &y);
    return y;
  }

  Vec john_center(int n) const {
    Vec c{};
    switch (kind_) {
      case Kind::Annulus:
        c = cube_center(n);
        c[0] += 0.5 * (a_ + b_);
        return c;
      case Kind::Ball:
        return center_;
      case Kind::Box:
        for (int d = 0; d < n; ++d) c[d] = 0.5 * (center_[d] + hi_[d]);
        return c;
      case Kind::Spire:
        c = cube_center(n);
        c[0] = 0.75;
        return c;
      case Kind::RoomWithCusp:
        c[1] = 0.5;
        c[0] = inward_ ? 0.5 * (kRoomLo + tip_x()) : 0.5 * (kRoomLo + room_right());
        return c;
    }
    return c;
  }

 private:
  static constexpr double kRoomLo = 0.125;
  static constexpr double kRoomHi = 0.875;

  static Vec cube_center(int n) {
    Vec c{};
    for (int d = 0; d < n; ++d) c[d] = 0.5;
    return c;
  }

  double half_width(double t) const { return 0.5 * std::pow(t, a_); }

  double perp_radius(const Vec& x, int n) const {
    double r2 = 0.0;
    for (int d = 1; d < n; ++d) r2 += sqr(x[d] - 0.5);
    return std::sqrt(r2);
  }

  double tip_x() const { return kRoomLo + b_ * (kRoomHi - kRoomLo); }
  double room_right() const { return inward_ ? kRoomHi : kRoomLo + b_ * (kRoomHi - kRoomLo); }

  // Inward: half-width of the removed wedge at abscissa x >= tip_x.
  double notch_width(double x) const {
    double tip = tip_x();
    return 0.25 * std::pow((x - tip) / (kRoomHi - tip), a_);
  }

  // Outward: half-width of the attached spike at abscissa x in [xa, 7/8].
  double spike_width(double x) const {
    double xa = room_right();
    return 0.25 * std::pow((kRoomHi - x) / (kRoomHi - xa), a_);
  }

  // Distance to the boundary, optionally reporting the closest point.
  double boundary(const Vec& x, int n, Vec* closest) const {
    switch (kind_) {
      case Kind::Annulus: {
        Vec c = cube_center(n);
        double r = dist(x, c, n);
        double d_in = std::abs(r - a_);
        double d_out = std::abs(b_ - r);
        if (closest) *closest = radial_point(x, c, n, d_in <= d_out ? a_ : b_);
        return std::min(d_in, d_out);
      }
      case Kind::Ball: {
        double r = dist(x, center_, n);
        if (closest) *closest = radial_point(x, center_, n, a_);
        return std::abs(a_ - r);
      }
      case Kind::Box: {
        bool inside = true;
        double outside2 = 0.0;
        for (int d = 0; d < n; ++d) {
          if (x[d] < center_[d]) {
            inside = false;
            outside2 += sqr(center_[d] - x[d]);
          } else if (x[d] > hi_[d]) {
            inside = false;
            outside2 += sqr(x[d] - hi_[d]);
          }
        }
        if (!inside) {
          if (closest) {
            for (int d = 0; d < n; ++d) (*closest)[d] = std::clamp(x[d], center_[d], hi_[d]);
          }
          return std::sqrt(outside2);
        }
        double best = std::numeric_limits<double>::infinity();
        int axis = 0;
        double face = 0.0;
        for (int d = 0; d < n; ++d) {
          if (x[d] - center_[d] < best) {
            best = x[d] - center_[d];
            axis = d;
            face = center_[d];
          }
          if (hi_[d] - x[d] < best) {
            best = hi_[d] - x[d];
            axis = d;
            face = hi_[d];
          }
        }
        if (closest) {
          *closest = x;
          (*closest)[axis] = face;
        }
        return best;
      }
      case Kind::Spire:
        return spire_boundary(x, n, closest);
      case Kind::RoomWithCusp:
        return room_boundary(x, closest);
    }
    return 0.0;
  }

  Vec radial_point(const Vec& x, const Vec& c, int n, double radius) const {
    Vec y = c;
    double r = dist(x, c, n);
    if (r < 1e-300) {
      y[0] += radius;
      return y;
    }
    for (int d = 0; d < n; ++d) y[d] = c[d] + (x[d] - c[d]) * (radius / r);
    return y;
  }

  double spire_boundary(const Vec& x, int n, Vec* closest) const {
    double rho = perp_radius(x, n);
    double a = x[0];
    auto curve2 = [&](double t) { return sqr(t - a) + sqr(half_width(t) - rho); };
    double t_star = detail::scan_min(curve2, 0.0, 1.0);
    double d_curve = std::sqrt(curve2(t_star));
    // Right face: the disc {x1 = 1, rho <= 1/2}.
    double d_face = std::hypot(1.0 - a, std::max(0.0, rho - 0.5));
    double d = std::min(d_curve, d_face);
    if (closest) {
      Vec y{};
      if (d_curve <= d_face) {
        y[0] = t_star;
        fill_perp(y, x, n, rho, half_width(t_star));
      } else {
        y[0] = 1.0;
        fill_perp(y, x, n, rho, std::min(rho, 0.5));
      }
      *closest = y;
    }
    return d;
  }

  // Writes the perpendicular components of a boundary point at distance
  // `target` from the axis, in the direction of x (or along axis 1 if x sits
  // on the axis).
  void fill_perp(Vec& y, const Vec& x, int n, double rho, double target) const {
    if (rho < 1e-300) {
      for (int d = 1; d < n; ++d) y[d] = 0.5;
      y[1] += target;
      return;
    }
    for (int d = 1; d < n; ++d) y[d] = 0.5 + (x[d] - 0.5) * (target / rho);
  }

  double room_boundary(const Vec& x, Vec* closest) const {
    struct Piece {
      double d2;
      Vec point;
    };
    Piece best{std::numeric_limits<double>::infinity(), {}};
    auto consider_segment = [&](double ax, double ay, double bx, double by) {
      double d2 = detail::point_segment_dist2(x, ax, ay, bx, by);
      if (d2 < best.d2) best = {d2, detail::segment_closest(x, ax, ay, bx, by)};
    };
    auto consider_curve = [&](double ta, double tb, auto&& width, double sign) {
      auto obj = [&](double t) { return sqr(t - x[0]) + sqr(0.5 + sign * width(t) - x[1]); };
      double t_star = detail::scan_min(obj, ta, tb);
      double d2 = obj(t_star);
      if (d2 < best.d2) best = {d2, Vec{t_star, 0.5 + sign * width(t_star)}};
    };

    consider_segment(kRoomLo, kRoomLo, kRoomLo, kRoomHi);  // left face
    if (inward_) {
      consider_segment(kRoomLo, kRoomHi, kRoomHi, kRoomHi);  // top
      consider_segment(kRoomLo, kRoomLo, kRoomHi, kRoomLo);  // bottom
      consider_segment(kRoomHi, 0.75, kRoomHi, kRoomHi);     // right face above the notch mouth
      consider_segment(kRoomHi, kRoomLo, kRoomHi, 0.25);     // right face below
      double tip = tip_x();
      consider_curve(tip, kRoomHi, [&](double t) { return notch_width(t); }, +1.0);
      consider_curve(tip, kRoomHi, [&](double t) { return notch_width(t); }, -1.0);
    } else {
      double xa = room_right();
      consider_segment(kRoomLo, kRoomHi, xa, kRoomHi);  // top
      consider_segment(kRoomLo, kRoomLo, xa, kRoomLo);  // bottom
      consider_segment(xa, 0.75, xa, kRoomHi);          // attachment face above the mouth
      consider_segment(xa, kRoomLo, xa, 0.25);          // attachment face below
      consider_curve(xa, kRoomHi, [&](double t) { return spike_width(t); }, +1.0);
      consider_curve(xa, kRoomHi, [&](double t) { return spike_width(t); }, -1.0);
    }
    if (closest) *closest = best.point;
    return std::sqrt(best.d2);
  }

  Kind kind_ = Kind::Box;
  Vec center_{};
  Vec hi_{};
  double a_ = 0.0;
  double b_ = 0.0;
  bool inward_ = true;
};

struct RasterizedDomain {
  GridSet set;
  std::vector<double> distance;  // analytic boundary distance per occupied cell center
  DomainSpec spec;
  std::uint64_t john_cell = 0;

  const GridGeometry& geometry() const { return set.geometry(); }
  double dist(std::uint64_t idx) const { return distance[idx]; }
};

// Center-membership rasterization at level >= 3. Occupied cells carry a
// strictly positive analytic distance; centers landing within 1e-13 of the
// boundary are dropped so the cached distances stay trustworthy.
inline RasterizedDomain rasterize(const DomainSpec& spec, const GridGeometry& g) {
  if (g.level() < 3) throw std::domain_error("domain rasterization needs level >= 3");
  spec.validate(g.dim());
  RasterizedDomain dom{GridSet(g), std::vector<double>(g.cell_count(), 0.0), spec, 0};
  const int n = g.dim();
  std::vector<std::uint8_t> occupied(g.cell_count(), 0);
  parallel_for(g.cell_count(), [&](std::size_t i) {
    Vec c = g.center_of(i);
    if (!spec.contains(c, n)) return;
    double d = spec.boundary_distance(c, n);
    if (d <= 1e-13) return;
    occupied[i] = 1;
    dom.distance[i] = d;
  });
  for (std::uint64_t i = 0; i < g.cell_count(); ++i)
    if (occupied[i]) dom.set.insert(i);
  if (dom.set.empty()) throw std::runtime_error("domain rasterized to the empty set");

  Vec jc = spec.john_center(n);
  std::uint64_t cell = g.index_of(g.cell_at(jc));
  if (!dom.set.contains(cell)) {
    // Fall back to the occupied cell nearest the analytic center.
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t i : dom.set.indices()) {
      double d = dist2(g.center_of(i), jc, n);
      if (d < best) {
        best = d;
        cell = i;
      }
    }
  }
  dom.john_cell = cell;
  return dom;
}

// Grid ball around the analytic John center with radius k * dist(center).
inline GridSet john_ball(const RasterizedDomain& dom, double k = 0.5) {
  if (!(k > 0.0 && k < 1.0)) throw std::domain_error("John ball fraction must lie in (0, 1)");
  const GridGeometry& g = dom.geometry();
  const int n = g.dim();
  Vec c = dom.spec.john_center(n);
  double radius = k * dom.spec.boundary_distance(c, n);
  GridSet ball(g);
  for (std::uint64_t i : dom.set.indices())
    if (dist(g.center_of(i), c, n) < radius) ball.insert(i);
  if (ball.empty()) ball.insert(dom.john_cell);
  return ball;
}

// Complement-density estimate: for sampled boundary points y and each listed
// radius r, the fraction of in-grid cell centers in B(y, r) that lie outside
// the domain. b_hat is the minimum over samples and radii; outer-regular
// domains keep it bounded away from zero, an inward cusp sends it toward
// zero at points deep in the notch.
struct OuterRegularityEstimate {
  double b_hat = 1.0;
  std::vector<std::pair<double, double>> per_radius;  // radius -> min ratio over samples
  int samples_used = 0;
};

inline OuterRegularityEstimate outer_regularity_estimate(const RasterizedDomain& dom,
                                                         const std::vector<double>& radii,
                                                         int max_samples = 256) {
  if (radii.empty()) throw std::domain_error("radius list must be nonempty");
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1])))
      throw std::domain_error("radii must be positive and strictly increasing");
  if (max_samples < 1) throw std::domain_error("sample budget must be >= 1");

  const GridGeometry& g = dom.geometry();
  const int n = g.dim();
  const double h = g.cell_side();
  const double cell_reach = 0.5 * std::sqrt(static_cast<double>(n)) * h;

  // Boundary cells: occupied cells whose closed cube can meet the analytic
  // boundary, or with an unoccupied face neighbor (grid-visible boundary).
  std::vector<std::uint64_t> boundary;
  for (std::uint64_t i : dom.set.indices()) {
    bool near = dom.distance[i] <= cell_reach;
    if (!near) {
      Coords c = g.coords_of(i);
      for (int d = 0; d < n && !near; ++d) {
        for (int step : {-1, +1}) {
          Coords nb = c;
          nb[d] += step;
          if (nb[d] < 0 || nb[d] >= g.cells_per_axis() || !dom.set.contains(nb)) {
            near = true;
            break;
          }
        }
      }
    }
    if (near) boundary.push_back(i);
  }
  if (boundary.empty()) throw std::runtime_error("domain has no boundary cells to sample");

  std::size_t stride = std::max<std::size_t>(1, boundary.size() / static_cast<std::size_t>(max_samples));
  std::vector<Vec> samples;
  for (std::size_t k = 0; k < boundary.size(); k += stride)
    samples.push_back(dom.spec.closest_boundary_point(g.center_of(boundary[k]), n));

  OuterRegularityEstimate est;
  est.samples_used = static_cast<int>(samples.size());
  const std::int64_t axis_cells = g.cells_per_axis();
  for (double r : radii) {
    double worst = 1.0;
    for (const Vec& y : samples) {
      std::int64_t total = 0;
      std::int64_t outside = 0;
      // Bounding box of B(y, r) on the extended lattice; centers beyond the
      // unit cube exist there and always count as complement.
      Coords lo{}, hi{};
      for (int d = 0; d < n; ++d) {
        lo[d] = static_cast<std::int32_t>(std::floor((y[d] - r) / h - 0.5));
        hi[d] = static_cast<std::int32_t>(std::ceil((y[d] + r) / h + 0.5));
      }
      Coords c = lo;
      while (true) {
        Vec center{};
        bool in_grid = true;
        for (int d = 0; d < n; ++d) {
          center[d] = (c[d] + 0.5) * h;
          if (c[d] < 0 || c[d] >= axis_cells) in_grid = false;
        }
        if (dist2(center, y, n) < r * r) {
          ++total;
          if (!in_grid || !dom.set.contains(c)) ++outside;
        }
        int d = 0;
        while (d < n) {
          if (c[d] < hi[d]) {
            ++c[d];
            break;
          }
          c[d] = lo[d];
          ++d;
        }
        if (d == n) break;
      }
      if (total > 0) worst = std::min(worst, static_cast<double>(outside) / static_cast<double>(total));
    }
    est.per_radius.emplace_back(r, worst);
    est.b_hat = std::min(est.b_hat, worst);
  }
  return est;
}

}  // namespace choquet

#endif
