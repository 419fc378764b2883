#include "equizero/sphere_scaling.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "equizero/csvio.hpp"
#include "equizero/dd.hpp"
#include "equizero/errors.hpp"

namespace equizero {

namespace {

constexpr double kPi = std::numbers::pi;

double binom_coeff(int k, int m) {
  // C(k+m-1, m-1), by multiplicative recurrence
  double c = 1.0;
  for (int i = 1; i <= m - 1; ++i) c = c * double(k + i) / double(i);
  return c;
}

}  // namespace

GnValues g_N(double x, int N, int m) {
  if (x < 0.0) throw ArgumentError("g_N: x >= 0 required");
  // Horner on g, g', g'' simultaneously
  GnValues v;
  double a = binom_coeff(N, m);
  v.g = a;
  for (int k = N - 1; k >= 0; --k) {
    a = binom_coeff(k, m);
    v.g2 = v.g2 * x + 2.0 * v.g1;
    v.g1 = v.g1 * x + v.g;
    v.g = v.g * x + a;
  }
  if (!std::isfinite(v.g))
    throw ArgumentError("g_N overflow: use log_g_N_derivatives for large x");
  return v;
}

LogGnDerivatives log_g_N_derivatives(double t, int N, int m) {
  if (t <= 0.0) throw ArgumentError("log_g_N_derivatives: t > 0 required");
  const double log_t = std::log(t);
  // log-terms: log C(k+m-1, m-1) + k log t
  std::vector<double> lt(N + 1);
  double lc = 0.0, best = -1e300;
  for (int k = 0; k <= N; ++k) {
    if (k > 0) {
      // log C(k+m-1,m-1) - log C(k-1+m-1,m-1) = log((k+m-1)/k)
      lc += std::log(double(k + m - 1) / double(k));
    }
    lt[k] = lc + k * log_t;
    best = std::max(best, lt[k]);
  }
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (int k = 0; k <= N; ++k) {
    const double w = std::exp(lt[k] - best);
    s0 += w;
    s1 += k * w;
    s2 += double(k) * k * w;
  }
  const double mean = s1 / s0;
  const double var = s2 / s0 - mean * mean;
  LogGnDerivatives out;
  out.log_g = best + std::log(s0);
  out.h1 = mean / t;
  out.h2 = (var - mean) / (t * t);
  return out;
}

double G_N(double x, int N, int m) {
  if (x == 1.0) return double(N + m);
  if (std::abs(x - 1.0) < 1e-9) {
    // geometric sum near the removable singularity
    double s = 0.0, p = 1.0;
    for (int k = 0; k < N + m; ++k) {
      s += p;
      p *= x;
    }
    return s;
  }
  return (1.0 - std::pow(x, N + m)) / (1.0 - x);
}

double scaled_G_N(double u, int N, int m) { return G_N(1.0 + u / N, N, m) / N; }

SeriesFunction::SeriesFunction(int m_, double u_max_) : m(m_), u_max(u_max_) {
  if (m < 1) throw ArgumentError("SeriesFunction: m >= 1");
  truncation_order = int(std::ceil(u_max)) + 40;
}

namespace {

// the differentiated series sum_p c_p u^p, c_p = (p+m-1)!/(p!(p+m)!), with
// its first two derivatives; double-double accumulation because the terms
// alternate hard for u < 0
struct InnerValues {
  double f, f1, f2;
};

InnerValues inner_series(double u, int m, int order) {
  DD c = DD(1.0) / DD(double(m));  // c_0 = (m-1)!/m!
  DD f(0.0), f1(0.0), f2(0.0);
  DD up(1.0), up1(0.0), up2(0.0);  // u^p, u^{p-1}, u^{p-2}
  for (int p = 0; p <= order; ++p) {
    f = f + c * up;
    if (p >= 1) f1 = f1 + c * DD(double(p)) * up1;
    if (p >= 2) f2 = f2 + c * DD(double(p) * double(p - 1)) * up2;
    up2 = up1;
    up1 = up;
    up = up * DD(u);
    c = c * DD(double(p + m)) / (DD(double(p + 1)) * DD(double(p + m + 1)));
  }
  return {f.value(), f1.value(), f2.value()};
}

}  // namespace

double SeriesFunction::inner(double u) const {
  return inner_series(u, m, truncation_order).f;
}

double SeriesFunction::value(double u) const {
  const double f = inner(u);
  if (!(f > 0.0)) throw ArgumentError("F_m: inner series not positive at u=" + std::to_string(u));
  return std::log(f);
}

double SeriesFunction::first(double u) const {
  const auto v = inner_series(u, m, truncation_order);
  return v.f1 / v.f;
}

double SeriesFunction::second(double u) const {
  const auto v = inner_series(u, m, truncation_order);
  const double r = v.f1 / v.f;
  return v.f2 / v.f - r * r;
}

double exact_radial_density(double u, int N, int m) {
  const double t = std::exp(u);
  const auto d = log_g_N_derivatives(t, N, m);
  return std::pow(d.h1, m - 1) * (d.h1 + t * d.h2) / std::pow(kPi, m);
}

double ScalingProfile::max_err() const {
  double worst = 0.0;
  for (double e : err) worst = std::max(worst, e);
  return worst;
}

ScalingProfile scaling_profile(int m, int N, const std::vector<double>& u_grid) {
  double u_max = 5.0;
  for (double u : u_grid) u_max = std::max(u_max, std::abs(u));
  SeriesFunction F(m, u_max);
  ScalingProfile profile;
  profile.m = m;
  profile.N = N;
  profile.u_max = u_max;
  profile.truncation_order = F.truncation_order;
  profile.u_grid = u_grid;
  const double nm1 = std::pow(double(N), m + 1);
  for (double u : u_grid) {
    const double exact = exact_radial_density(u / N, N, m) / nm1;
    const double limit = F.second(u) * std::pow(F.first(u), m - 1) / std::pow(kPi, m);
    profile.exact.push_back(exact);
    profile.limit.push_back(limit);
    profile.err.push_back(std::abs(exact - limit));
  }
  return profile;
}

std::vector<double> uniform_grid(double lo, double hi, int points) {
  if (points < 2) throw ArgumentError("uniform_grid: points >= 2");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = lo + (hi - lo) * i / (points - 1);
  return g;
}

std::string scaling_profile_csv(const ScalingProfile& profile) {
  CsvFile csv({"u", "exact_scaled", "limit", "abs_err"});
  for (std::size_t i = 0; i < profile.u_grid.size(); ++i)
    csv.push_row({csv_cell(profile.u_grid[i]), csv_cell(profile.exact[i]),
                  csv_cell(profile.limit[i]), csv_cell(profile.err[i])});
  return csv.body();
}

std::string scaling_profile_meta_json(const ScalingProfile& profile) {
  nlohmann::json j;
  j["m"] = profile.m;
  j["N"] = profile.N;
  j["U"] = profile.u_max;
  j["truncation_order"] = profile.truncation_order;
  return j.dump(2);
}

}  // namespace equizero
