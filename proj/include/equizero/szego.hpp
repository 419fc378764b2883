#pragma once

#include <memory>
#include <vector>

#include "equizero/orthopoly.hpp"

namespace equizero {

// Evaluator for S_N(z,w) = sum_j p_j(z) conj(p_j(w)) over a fixed basis.
class KernelField {
 public:
  explicit KernelField(std::shared_ptr<const OrthonormalBasis> basis)
      : basis_(std::move(basis)) {}

  const OrthonormalBasis& basis() const { return *basis_; }
  int degree() const { return basis_->N; }
  int dimension() const { return basis_->m; }

  // log S_N(z,z); never overflows for ||z|| <= 1e6
  double log_diag(PointView z) const { return basis_->log_kernel_diag(z); }
  double diag(PointView z) const { return std::exp(log_diag(z)); }
  cplx offdiag(PointView z, PointView w) const { return basis_->kernel_offdiag(z, w); }

  // (1/2N) log S_N(z,z)
  double normalized_log(PointView z) const;

 private:
  std::shared_ptr<const OrthonormalBasis> basis_;
};

// log Phi_N(z) in closed form: N V_K for circle/torus/ball, Chebyshev
// extremality log|T_N(z)| on |Re z| >= 1 for the interval.  The interval
// inside that strip has no closed form; use extremal_estimate_grid.
double log_extremal_function(const DomainModel& model, PointView z, int N);
double extremal_function(const DomainModel& model, PointView z, int N);

struct LawsonInfo {
  int iterations = 0;
  bool converged = false;
  double grid_sup = 0.0;
};

// Lower-bound estimator for Phi_N(z): maximize |f(z)| subject to |f| <= 1
// on a Silov grid, by Lawson-weighted least squares (every iterate is
// feasible after rescaling, so the best value is a true grid lower bound).
double extremal_estimate_grid(const DomainModel& model, PointView z, int N,
                              int grid_resolution, LawsonInfo* info = nullptr);

struct SandwichResult {
  bool lower_ok = false;
  double ratio = 0.0;  // S_N(z,z) / Phi_N(z)^2
};

// Both sides of 1/d(N) <= S_N/Phi_N^2 <= C e^{eps N} d(N).
SandwichResult sandwich_check(const KernelField& field, const DomainModel& model,
                              PointView z);

struct ConvergenceTable {
  std::vector<Point> grid;
  struct Row {
    int N;
    double sup_dev_logkernel;        // sup |(1/2N) log S_N - V_K|
    double sup_dev_phi = -1.0;       // sup |(1/N) log Phi_N - V_K|, -1 if absent
  };
  std::vector<Row> rows;
};

ConvergenceTable convergence_table(const DomainModel& model, const std::vector<int>& N_list,
                                   const std::vector<Point>& grid, bool phi_column);

std::string convergence_table_csv(const ConvergenceTable& table);

// columns re_z1, im_z1, ..., S_N, normalized_log
std::string kernel_slice_csv(const KernelField& field, const std::vector<Point>& points);

}  // namespace equizero
