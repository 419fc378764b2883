#include "equizero/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "equizero/errors.hpp"

namespace equizero {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_finite(PointView z) {
  for (const cplx& c : z)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw ArgumentError("point has non-finite coordinates");
}

double norm2(PointView z) {
  double s = 0.0;
  for (const cplx& c : z) s += std::norm(c);
  return std::sqrt(s);
}

double log_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

// Joukowski-type conformal map for K = [-1,1]: with principal square
// roots, |z + sqrt(z-1)sqrt(z+1)| >= 1 everywhere and = 1 on the segment.
double interval_green(cplx z) {
  const cplx w = z + std::sqrt(z - 1.0) * std::sqrt(z + 1.0);
  return std::log(std::max(1.0, std::abs(w)));
}

double dist_to_segment(cplx z) {
  const double dx = std::max(std::abs(z.real()) - 1.0, 0.0);
  return std::hypot(dx, z.imag());
}

// Gauss-Legendre nodes/weights on [0,1].
void gauss_legendre01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = 0.5 * (1.0 + t);
    w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double hash_normal(std::uint64_t& state) {
  state = splitmix64(state);
  const double u1 = (double(state >> 11) + 0.5) * 0x1p-53;
  state = splitmix64(state);
  const double u2 = (double(state >> 11) + 0.5) * 0x1p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace

std::string domain_kind_name(DomainKind k) {
  switch (k) {
    case DomainKind::PolydiskTorus: return "polydisk";
    case DomainKind::BallSphere: return "ball";
    case DomainKind::UnitCircle: return "circle";
    case DomainKind::Interval: return "interval";
  }
  return "?";
}

DomainModel DomainModel::polydisk(int m) {
  if (m < 1) throw ArgumentError("polydisk: m >= 1 required");
  return {DomainKind::PolydiskTorus, m, "unit polydisk in C^" + std::to_string(m)};
}

DomainModel DomainModel::ball(int m) {
  if (m < 1) throw ArgumentError("ball: m >= 1 required");
  return {DomainKind::BallSphere, m, "unit ball in C^" + std::to_string(m)};
}

DomainModel DomainModel::unit_circle() {
  return {DomainKind::UnitCircle, 1, "unit circle in C"};
}

DomainModel DomainModel::interval() {
  return {DomainKind::Interval, 1, "interval [-1,1] in C"};
}

double DomainModel::green_function(PointView z) const {
  require_finite(z);
  if (static_cast<int>(z.size()) != m)
    throw ArgumentError("green_function: point dimension mismatch");
  switch (kind) {
    case DomainKind::PolydiskTorus: {
      double v = 0.0;
      for (const cplx& c : z) v = std::max(v, log_plus(std::abs(c)));
      return v;
    }
    case DomainKind::BallSphere:
      return log_plus(norm2(z));
    case DomainKind::UnitCircle:
      return log_plus(std::abs(z[0]));
    case DomainKind::Interval:
      return interval_green(z[0]);
  }
  throw UnimplementedDomainError("green_function: unknown domain kind");
}

double DomainModel::green_function(cplx z) const {
  const Point p{z};
  return green_function(PointView{p});
}

RegionSpec RegionSpec::annulus(double r_lo, double r_hi) {
  if (!(r_lo < r_hi)) throw ArgumentError("annulus: r_lo < r_hi required");
  RegionSpec r{Kind::Annulus};
  r.lo = r_lo;
  r.hi = r_hi;
  return r;
}

RegionSpec RegionSpec::sector(double theta_lo, double theta_hi, int coordinate) {
  if (!(theta_lo < theta_hi)) throw ArgumentError("sector: theta_lo < theta_hi required");
  if (theta_lo < 0.0 || theta_hi > kTwoPi + 1e-12)
    throw ArgumentError("sector: angles must lie in [0, 2pi]");
  if (coordinate < 0) throw ArgumentError("sector: coordinate must be >= 0");
  RegionSpec r{Kind::Sector};
  r.lo = theta_lo;
  r.hi = theta_hi;
  r.coordinate = coordinate;
  return r;
}

RegionSpec RegionSpec::hemisphere(int coordinate, bool imaginary_part, int sign) {
  if (sign != 1 && sign != -1) throw ArgumentError("hemisphere: sign must be +1 or -1");
  if (coordinate < 0) throw ArgumentError("hemisphere: coordinate must be >= 0");
  RegionSpec r{Kind::Hemisphere};
  r.coordinate = coordinate;
  r.imaginary_part = imaginary_part;
  r.sign = sign;
  return r;
}

RegionSpec RegionSpec::subinterval_angle(double theta_lo, double theta_hi) {
  if (!(theta_lo < theta_hi)) throw ArgumentError("subinterval_angle: theta_lo < theta_hi");
  if (theta_lo < 0.0 || theta_hi > kPi + 1e-12)
    throw ArgumentError("subinterval_angle: angles must lie in [0, pi]");
  RegionSpec r{Kind::SubintervalAngle};
  r.lo = theta_lo;
  r.hi = theta_hi;
  return r;
}

RegionSpec RegionSpec::everything() { return annulus(0.0, 1e30); }

std::string RegionSpec::name() const {
  switch (kind) {
    case Kind::Annulus: return "annulus";
    case Kind::Sector: return "sector";
    case Kind::Hemisphere: return "hemisphere";
    case Kind::SubintervalAngle: return "subinterval_angle";
  }
  return "?";
}

bool RegionSpec::contains(const DomainModel& model, cplx z) const {
  switch (kind) {
    case Kind::Annulus:
      if (model.kind == DomainKind::Interval) return lo <= z.real() && z.real() <= hi;
      return lo <= std::abs(z) && std::abs(z) <= hi;
    case Kind::Sector: {
      double a = std::arg(z);
      if (a < 0.0) a += kTwoPi;
      return lo <= a && a <= hi;
    }
    case Kind::Hemisphere: {
      const double v = imaginary_part ? z.imag() : z.real();
      return sign > 0 ? v >= 0.0 : v <= 0.0;
    }
    case Kind::SubintervalAngle:
      return std::cos(hi) <= z.real() && z.real() <= std::cos(lo);
  }
  return false;
}

double equilibrium_mass(const DomainModel& model, const RegionSpec& region) {
  const bool circle_like = model.kind == DomainKind::PolydiskTorus ||
                           model.kind == DomainKind::BallSphere ||
                           model.kind == DomainKind::UnitCircle;
  switch (region.kind) {
    case RegionSpec::Kind::Annulus: {
      if (model.kind == DomainKind::Interval) {
        const double a = std::clamp(region.lo, -1.0, 1.0);
        const double b = std::clamp(region.hi, -1.0, 1.0);
        if (b <= a) return 0.0;
        return (std::asin(b) - std::asin(a)) / kPi;  // arcsine law
      }
      // Silov boundary sits at radius 1 in every radial functional used here
      return (region.lo <= 1.0 && 1.0 <= region.hi) ? 1.0 : 0.0;
    }
    case RegionSpec::Kind::Sector: {
      if (!circle_like)
        throw RegionMismatchError("sector region requires a circle-like domain");
      if (region.coordinate >= model.m)
        throw RegionMismatchError("sector: coordinate exceeds dimension");
      return (region.hi - region.lo) / kTwoPi;
    }
    case RegionSpec::Kind::Hemisphere: {
      if (region.coordinate >= model.m)
        throw RegionMismatchError("hemisphere: coordinate exceeds dimension");
      if (model.kind == DomainKind::Interval) {
        if (region.imaginary_part)
          throw RegionMismatchError("hemisphere on Im z is degenerate for the interval");
        return 0.5;
      }
      return 0.5;  // all built-in equilibrium measures are sign-symmetric per part
    }
    case RegionSpec::Kind::SubintervalAngle: {
      if (model.kind != DomainKind::Interval)
        throw RegionMismatchError("subinterval_angle region requires the interval domain");
      return (region.hi - region.lo) / kPi;
    }
  }
  throw ArgumentError("equilibrium_mass: unknown region kind");
}

namespace {

QuadratureRule circle_rule(int n) {
  QuadratureRule rule;
  rule.kind = DomainKind::UnitCircle;
  rule.m = 1;
  rule.resolution = n;
  rule.max_exact_gram_degree = n - 1;  // needs the trig gap |j - l| < n
  rule.nodes.reserve(n);
  rule.weights.assign(n, 1.0 / n);
  for (int k = 0; k < n; ++k)
    rule.nodes.push_back({std::polar(1.0, kTwoPi * k / n)});
  return rule;
}

QuadratureRule polydisk_rule(int m, int n) {
  const double count = std::pow(double(n), m);
  if (count > 4e6) throw CapacityError("quadrature: polydisk tensor rule too large");
  QuadratureRule rule;
  rule.kind = DomainKind::PolydiskTorus;
  rule.m = m;
  rule.resolution = n;
  rule.max_exact_gram_degree = n - 1;
  const int total = static_cast<int>(count);
  rule.weights.assign(total, 1.0 / total);
  rule.nodes.reserve(total);
  std::vector<int> idx(m, 0);
  for (int t = 0; t < total; ++t) {
    Point p(m);
    for (int i = 0; i < m; ++i) p[i] = std::polar(1.0, kTwoPi * idx[i] / n);
    rule.nodes.push_back(std::move(p));
    for (int i = m - 1; i >= 0; --i) {
      if (++idx[i] < n) break;
      idx[i] = 0;
    }
  }
  return rule;
}

QuadratureRule interval_rule(int n) {
  QuadratureRule rule;
  rule.kind = DomainKind::Interval;
  rule.m = 1;
  rule.resolution = n;
  rule.max_exact_gram_degree = n - 1;  // exact for polynomial degree <= 2n-1
  rule.weights.assign(n, 1.0 / n);
  rule.nodes.reserve(n);
  for (int k = 1; k <= n; ++k)
    rule.nodes.push_back({cplx(std::cos((2 * k - 1) * kPi / (2 * n)), 0.0)});
  return rule;
}

// Invariant measure on S^3 via z = (sqrt(1-t) e^{i a}, sqrt(t) e^{i b}),
// t uniform on [0,1], angles uniform.
QuadratureRule ball2_rule(int res) {
  const int nt = res;
  const int na = 2 * res + 1;
  if (double(nt) * na * na > 4e6) throw CapacityError("quadrature: sphere product rule too large");
  std::vector<double> tx, tw;
  gauss_legendre01(nt, tx, tw);
  QuadratureRule rule;
  rule.kind = DomainKind::BallSphere;
  rule.m = 2;
  rule.resolution = res;
  rule.max_exact_gram_degree = std::min(2 * nt - 1, na - 1);
  rule.nodes.reserve(std::size_t(nt) * na * na);
  rule.weights.reserve(std::size_t(nt) * na * na);
  for (int it = 0; it < nt; ++it) {
    const double r1 = std::sqrt(1.0 - tx[it]);
    const double r2 = std::sqrt(tx[it]);
    for (int ia = 0; ia < na; ++ia)
      for (int ib = 0; ib < na; ++ib) {
        rule.nodes.push_back({std::polar(r1, kTwoPi * ia / na), std::polar(r2, kTwoPi * ib / na)});
        rule.weights.push_back(tw[it] / (double(na) * na));
      }
  }
  return rule;
}

// m >= 3: antipodally symmetrized pseudo-random sphere nodes.  Only used
// for sup-norm sampling; the Gram path uses closed-form moments.
QuadratureRule ball_sampled_rule(int m, int res) {
  const int half = std::max(res * res, 128);
  QuadratureRule rule;
  rule.kind = DomainKind::BallSphere;
  rule.m = m;
  rule.resolution = res;
  rule.exact = false;
  rule.max_exact_gram_degree = 0;
  std::uint64_t state = 0x5eed0cafeULL + std::uint64_t(m);
  for (int i = 0; i < half; ++i) {
    Point p(m);
    double n2 = 0.0;
    for (int j = 0; j < m; ++j) {
      const double re = hash_normal(state), im = hash_normal(state);
      p[j] = cplx(re, im);
      n2 += std::norm(p[j]);
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (int j = 0; j < m; ++j) p[j] *= inv;
    Point q(m);
    for (int j = 0; j < m; ++j) q[j] = -p[j];
    rule.nodes.push_back(std::move(p));
    rule.nodes.push_back(std::move(q));
  }
  rule.weights.assign(rule.nodes.size(), 1.0 / double(rule.nodes.size()));
  return rule;
}

}  // namespace

QuadratureRule quadrature(const DomainModel& model, int resolution) {
  if (resolution < 1) throw ArgumentError("quadrature: resolution >= 1 required");
  switch (model.kind) {
    case DomainKind::UnitCircle: return circle_rule(resolution);
    case DomainKind::PolydiskTorus:
      return model.m == 1 ? circle_rule(resolution) : polydisk_rule(model.m, resolution);
    case DomainKind::Interval: return interval_rule(resolution);
    case DomainKind::BallSphere:
      if (model.m == 1) return circle_rule(resolution);
      if (model.m == 2) return ball2_rule(resolution);
      return ball_sampled_rule(model.m, resolution);
  }
  throw UnimplementedDomainError("quadrature: unknown domain kind");
}

int min_resolution_for_degree(const DomainModel& model, int N) {
  switch (model.kind) {
    case DomainKind::UnitCircle:
    case DomainKind::PolydiskTorus:
      return N + 1;
    case DomainKind::Interval:
      return N + 1;
    case DomainKind::BallSphere:
      if (model.m == 1) return N + 1;
      if (model.m == 2) return N / 2 + 1;
      throw UnimplementedDomainError("no exact sphere rule for m >= 3; use exact moments");
  }
  throw UnimplementedDomainError("min_resolution_for_degree: unknown domain kind");
}

std::vector<Point> default_test_grid(const DomainModel& model, double radius,
                                     double exclusion) {
  const std::vector<double> radii = {0.3, 0.6, 0.9, 1.1, 1.5, 2.0, radius};
  std::vector<Point> grid;
  if (model.m == 1) {
    const int n_angles = 8;
    for (double r : radii) {
      if (r > radius + 1e-12) continue;
      for (int a = 0; a < n_angles; ++a) {
        const cplx z = std::polar(r, kTwoPi * (a + 0.5) / n_angles);
        if (model.kind == DomainKind::Interval) {
          if (dist_to_segment(z) < exclusion) continue;
        } else if (std::abs(std::abs(z) - 1.0) < exclusion) {
          continue;
        }
        grid.push_back({z});
      }
    }
    return grid;
  }
  // a few complex lines through the origin, sampled radially
  std::vector<Point> directions;
  for (int i = 0; i < model.m; ++i) {
    Point e(model.m, cplx(0.0));
    e[i] = 1.0;
    directions.push_back(e);
  }
  {
    Point d(model.m, cplx(0.0));
    const double s = 1.0 / std::sqrt(double(model.m));
    for (int i = 0; i < model.m; ++i) d[i] = s;
    directions.push_back(d);
    Point dz = d;
    dz[model.m - 1] *= cplx(0.0, 1.0);
    directions.push_back(dz);
  }
  for (const Point& d : directions)
    for (double r : radii) {
      if (r > radius + 1e-12) continue;
      bool skip = false;
      Point p(model.m);
      double n2 = 0.0, maxmod = 0.0;
      for (int i = 0; i < model.m; ++i) {
        p[i] = r * std::polar(1.0, 0.37) * d[i];
        n2 += std::norm(p[i]);
        maxmod = std::max(maxmod, std::abs(p[i]));
      }
      if (model.kind == DomainKind::BallSphere && std::abs(std::sqrt(n2) - 1.0) < exclusion)
        skip = true;
      if (model.kind == DomainKind::PolydiskTorus && std::abs(maxmod - 1.0) < exclusion)
        skip = true;
      if (!skip) grid.push_back(std::move(p));
    }
  return grid;
}

}  // namespace equizero
