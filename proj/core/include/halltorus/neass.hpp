#pragma once

#include "halltorus/spectral_flow.hpp"

namespace halltorus {

// Order-m generators of the dressed almost-stationary state: K_1 = -I(X_1+V)
// and, inductively, K_mu = -I(L_mu + V_mu) with L_mu / V_mu the order-mu
// iterated-commutator blocks of the exponential-adjoint expansion.
struct NeassGenerators {
  int order = 0;
  std::vector<Mat> k_star;  // origin representatives, index mu-1
  std::vector<Mat> k_sum;   // summed operators
  std::vector<Mat> block_sum;  // assembled L_mu + V_mu (summed), per order
};

NeassGenerators neass_generators(const ManyBodyModel& model, const SpectralCache& cache,
                                 int order, const FilterKernel& kernel);

struct DressedState {
  double eps = 0.0;
  Mat s_eps;      // summed generator sum_mu eps^mu K_mu
  State omega;    // dressed state
};

DressedState dress_state(const ManyBodyModel& model, const State& omega0,
                         const NeassGenerators& gens, double eps);

// max over random local probes A of |omega_eps(L_{H_eps} A)| / ||A||_{5},
// where L_{H_eps}A = L_H A + eps L_V A + eps L_{X_1} A (minimal-image probe
// convention for the position part)
double stationarity_residual(const ManyBodyModel& model, const DressedState& state,
                             int probe_count, std::uint64_t seed);

// residual of the order-mu condition: omega_0(L_{i[K_mu,H] + L_mu + V_mu} B)
// over random local probes; exact (up to roundoff) for the bounded blocks
double order_condition_residual(const ManyBodyModel& model, const SpectralCache& cache,
                                const NeassGenerators& gens, int mu, int probe_count,
                                std::uint64_t seed);

}  // namespace halltorus
