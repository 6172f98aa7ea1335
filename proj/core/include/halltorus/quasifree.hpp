#pragma once

#include "halltorus/spectral_flow.hpp"

namespace halltorus {

// One-body mirror of the many-body pipeline for quasi-free states: at
// lambda = 0 the second quantization intertwines the spectral filter maps,
// so the torus formulas collapse to one-body traces (Wick's theorem).

// one-body kernel of the intrinsic current sum: (D_j o h)(u,v) = m_j(u-v) h(u,v)
Mat displacement_current(const TorusLattice& lat, const Mat& h, int direction);

// one-body kernel of the origin current term -i L_{X_j} h0
Mat origin_current_kernel(const TorusLattice& lat, const Mat& h, int direction);

// Wick collapse of the many-body Hall formula
// sigma = Re i tr( P [ w((e_a - e_b)) o (i D_1 h),  w o (i l_2) ] )
double sigma_quasi_free(const OneBodyModel& model, const FilterKernel& kernel);

// dressed two-point matrix of the first-order NEASS at lambda = 0 and
// X_1-only driving: Gamma_eps from the one-body generator k1 = -I(X_1)
Mat dressed_two_point(const OneBodyModel& model, const FilterKernel& kernel, double eps);

struct QuasiFreeConductance {
  int l_segment = 0;
  double eps = 0.0;
  double mean = 0.0;          // omega(J_L)/(eps L)
  double variance = 0.0;      // var(G) = var(J_L)/(eps L)^2
  double var_scaled = 0.0;    // var(G) * eps^2 * L = var(J_L)/L
  double corr_decay_rate = 0.0;
  double corr_r2 = 0.0;
  std::vector<std::pair<int, double>> correlations;  // (distance, connected corr)
};

// connected expectations of quadratic observables in a (possibly dressed)
// quasi-free state with two-point matrix Gamma_{uv} = omega(a^+_u a_v)
double quasi_free_expectation(const Mat& gamma, const Mat& kernel);
double quasi_free_connected(const Mat& gamma, const Mat& a, const Mat& b);

QuasiFreeConductance conductance_quasi_free(const OneBodyModel& model,
                                            const FilterKernel& kernel, double eps,
                                            int l_segment);

}  // namespace halltorus
