#pragma once

#include <optional>
#include <string>
#include <vector>

#include "equizero/multi_index.hpp"

namespace equizero {

// Built-in compact sets with closed-form pluricomplex Green functions.
// mu is always the equilibrium measure of K (a regular/Bernstein-Markov
// pair for every kind here).
enum class DomainKind { PolydiskTorus, BallSphere, UnitCircle, Interval };

std::string domain_kind_name(DomainKind k);

struct DomainModel {
  DomainKind kind;
  int m = 1;
  std::string description;

  static DomainModel polydisk(int m);
  static DomainModel ball(int m);
  static DomainModel unit_circle();
  static DomainModel interval();

  // V_K(z): zero on K, log-growth at infinity.
  double green_function(PointView z) const;
  double green_function(cplx z) const;  // m = 1 convenience
};

// Test regions for mass comparisons.  Interpretation is per-domain:
//   Annulus(r_lo, r_hi)   circle/ball: radius band; polydisk: band of
//                         max_j |z_j|; interval: the strip r_lo <= Re z <= r_hi.
//   Sector(lo, hi, coord) angular band of arg z_coord, [lo, hi] in [0, 2pi].
//   Hemisphere            half-space re/im z_coord >= 0 (sign +1) or <= 0.
//   SubintervalAngle      interval only: {cos t : t in [lo, hi] subset [0, pi]}.
struct RegionSpec {
  enum class Kind { Annulus, Sector, Hemisphere, SubintervalAngle };

  Kind kind;
  double lo = 0.0, hi = 0.0;  // radii, angles or strip bounds
  int coordinate = 0;         // 0-based, Sector/Hemisphere
  bool imaginary_part = false;  // Hemisphere: re (false) or im (true)
  int sign = +1;                // Hemisphere

  static RegionSpec annulus(double r_lo, double r_hi);
  static RegionSpec sector(double theta_lo, double theta_hi, int coordinate = 0);
  static RegionSpec hemisphere(int coordinate, bool imaginary_part, int sign);
  static RegionSpec subinterval_angle(double theta_lo, double theta_hi);
  static RegionSpec everything();  // Annulus(0, huge): full-plane accounting

  // Membership for empirical root counting (m = 1).
  bool contains(const DomainModel& model, cplx z) const;

  std::string name() const;
};

// Closed-form mu_eq mass of the region; RegionMismatchError when the
// region kind does not apply to the domain.
double equilibrium_mass(const DomainModel& model, const RegionSpec& region);

// Nodes on the Silov boundary with probability weights.
struct QuadratureRule {
  std::vector<Point> nodes;
  std::vector<double> weights;
  DomainKind kind;
  int m = 1;
  int resolution = 0;
  bool exact = true;  // false only for the sampled m>=3 sphere rule

  // Largest N such that all Gram moments z^J conj(z)^L, |J|,|L| <= N are
  // integrated exactly (0 when the rule is sampling-only).
  int max_exact_gram_degree = 0;
};

// PolydiskTorus/UnitCircle: tensor equispaced angles; Interval:
// Gauss-Chebyshev; BallSphere m<=2: product rule in (t, angles) with
// Gauss-Legendre in t = |z_2|^2; BallSphere m>=3: symmetrized pseudo-random
// sphere nodes (sup-norm sampling only, exact=false).
QuadratureRule quadrature(const DomainModel& model, int resolution);

// Smallest resolution whose rule integrates Gram moments up to degree N
// exactly (InsufficientResolutionError carries this).
int min_resolution_for_degree(const DomainModel& model, int N);

// Default evaluation grid: points of the closed ball of radius `radius`
// staying `exclusion` away from the non-smooth set of V_K.
std::vector<Point> default_test_grid(const DomainModel& model, double radius = 3.0,
                                     double exclusion = 1e-3);

}  // namespace equizero
