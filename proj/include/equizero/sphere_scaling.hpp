#pragma once

#include <string>
#include <vector>

namespace equizero {

// g_N(x) = sum_{k=0}^N C(k+m-1, m-1) x^k, with first two derivatives.
struct GnValues {
  double g = 0.0, g1 = 0.0, g2 = 0.0;
};

GnValues g_N(double x, int N, int m);

// h = log g_N evaluated through normalized term weights (log-sum-exp), so
// arbitrarily large x and N are safe:  t h'(t) and t^2 h''(t) are the mean
// and (variance - mean) of the degree distribution w_k ~ C(k+m-1,m-1) t^k.
struct LogGnDerivatives {
  double log_g = 0.0;
  double h1 = 0.0;  // h'(t)
  double h2 = 0.0;  // h''(t)
};

LogGnDerivatives log_g_N_derivatives(double t, int N, int m);

// G_N(x) = (1 - x^{N+m})/(1 - x); x = 1 gives the limit N + m.
double G_N(double x, int N, int m);

// (1/N) G_N(1 + u/N), the quantity converging to (e^u - 1)/u.
double scaled_G_N(double u, int N, int m);

// F_m(u) = log[d^{m-1}/du^{m-1} (e^u - 1)/u] via the truncated series
// sum_{j >= m-1} j!/((j-m+1)!(j+1)!) u^{j-m+1}, accumulated in
// double-double (the series alternates hard for u < 0).
struct SeriesFunction {
  int m = 1;
  int truncation_order = 0;  // number of retained series terms
  double u_max = 10.0;

  explicit SeriesFunction(int m, double u_max = 10.0);

  double inner(double u) const;         // the differentiated series itself
  double value(double u) const;         // F_m
  double first(double u) const;         // F_m'
  double second(double u) const;        // F_m''
};

// D_N(u): density of E(Z_{f_1..f_m}) against (i/2 del dbar ||z||^2)^m at
// ||z||^2 = e^u, from the rank-one-plus-scalar Hessian of log g_N(||z||^2):
//   D_N(u) = pi^{-m} h'(t)^{m-1} (h'(t) + t h''(t)),  t = e^u.
double exact_radial_density(double u, int N, int m);

struct ScalingProfile {
  int m = 1;
  int N = 0;
  double u_max = 5.0;
  int truncation_order = 0;
  std::vector<double> u_grid;
  std::vector<double> exact;  // N^{-(m+1)} D_N(u/N)
  std::vector<double> limit;  // pi^{-m} F_m''(u) F_m'(u)^{m-1}
  std::vector<double> err;    // |exact - limit|

  double max_err() const;
};

ScalingProfile scaling_profile(int m, int N, const std::vector<double>& u_grid);
std::vector<double> uniform_grid(double lo, double hi, int points);

std::string scaling_profile_csv(const ScalingProfile& profile);
std::string scaling_profile_meta_json(const ScalingProfile& profile);

}  // namespace equizero
