#pragma once

#include "halltorus/neass.hpp"
#include "halltorus/quasifree.hpp"

namespace halltorus {

// current interaction J_j = i[H + eps V, X_j]; term map built from translates
// of the origin term (J_j)_0 = -i L_{X_j}(h_0 + eps v_0)
Interaction current_interaction(const ManyBodyModel& model, double eps, int direction);

// origin term of the current alone
Mat current_origin(const ManyBodyModel& model, double eps, int direction);

// sigma_H = i sum_gamma omega_0([T_gamma (X_1^OD)_0, (X_2^OD)_0]);
// imag_residue receives the discarded imaginary part when non-null
double hall_conductivity(const ManyBodyModel& model, const SpectralCache& cache,
                         const FilterKernel& kernel, double* imag_residue = nullptr);

struct ResponseReport {
  std::vector<double> eps;
  std::vector<double> j1, j2;      // per-volume currents
  double sigma_h = 0.0;
  double hall_slope_fit = 0.0;     // sigma_H estimate: -(linear coeff of cubic model)
  double hall_slope_linear = 0.0;  // raw linear fit of J_2 vs eps, negated
  double hall_fit_residual = 0.0;
  double longitudinal_slope = 0.0;  // log-log slope of |J_1|; NaN when suppressed
  bool longitudinal_suppressed = false;
  double max_abs_j1 = 0.0;
};

ResponseReport response_scan(const ManyBodyModel& model, const SpectralCache& cache,
                             const NeassGenerators& gens, const FilterKernel& kernel,
                             const std::vector<double>& eps_grid);

struct CsCheckResult {
  double sigma_before = 0.0;
  double sigma_after = 0.0;
  double delta = 0.0;
};

// recomputes sigma_H for omega_0 transported by the time-1 flow of the given
// T-periodic generator, using the alpha-dressed OD maps
CsCheckResult chern_simons_check(const ManyBodyModel& model, const SpectralCache& cache,
                                 const FilterKernel& kernel, const Interaction& generator,
                                 double strength);

struct ConductanceStats {
  int l_segment = 0;
  double eps = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  std::vector<std::pair<int, double>> correlations;
  double corr_decay_rate = 0.0;
  double corr_r2 = 0.0;
};

// ED path on the many-body torus (state = dressed or ground)
ConductanceStats conductance_stats_ed(const ManyBodyModel& model, const State& omega,
                                      double eps, int l_segment);

// Wick evaluation of the same segment observable from a two-point matrix
ConductanceStats conductance_stats_wick(const TorusLattice& lat, const Mat& h,
                                        const Mat& gamma, double eps, int l_segment);

}  // namespace halltorus
