#pragma once

#include <cstdint>
#include <memory>

#include "halltorus/interaction.hpp"

namespace halltorus {

// Discrete Landau operator on the torus. Vertical bonds have amplitude 1,
// horizontal bonds carry the Landau-gauge phase; the flux sign convention is
// fixed so that the lowest band at b = 2*pi/3 has Chern number +1 with the
// counterclockwise Brillouin-zone orientation used by kspace_chern.
struct OneBodyModel {
  TorusLattice lat;
  double mu = 0.0;
  Mat h;       // num_sites x num_sites, hermitian
  RVec evals;  // ascending
  Mat evecs;

  double gap_at_mu() const;  // dist(mu, spectrum)
  int occupied() const;      // # eigenvalues below mu
};

OneBodyModel one_body_hamiltonian(double b, int side, double mu = 0.0);
Mat one_body_kernel(const TorusLattice& lat);

// spectral projector onto eigenvalues < mu; requires dist(mu, spec) > 1e-8
Mat fermi_projection(const OneBodyModel& model);

// (1/L^2) Tr( i P [[x1,P],[x2,P]] ) with minimal-image coordinate kernels
double one_body_chern_dc(const TorusLattice& lat, const Mat& p);
double one_body_chern_dc(const OneBodyModel& model);

// Fukui-Hatsugai-Suzuki plaquette Berry-phase Chern number for flux p/q with
// `bands` filled bands; refines the k-grid until the integer stabilizes.
int kspace_chern(int p, int q, int bands);

// many-body model: H_lambda = dGamma(h - mu) + lambda V on the full Fock space
struct ManyBodyModel {
  std::shared_ptr<FockSpace> fock;
  std::shared_ptr<MagneticTranslation> trans;
  Interaction ham;   // T-periodic term map of H_lambda
  Interaction pot;   // term map of V
  Mat h_sum;         // summed H_lambda
  Mat h0;            // origin term of H_lambda (incl. lambda * v0)
  Mat v_sum;
  Mat v0;
  SiteSet h0_support;
  double b = 0.0, mu = 0.0, lambda = 0.0;
};

// V defaults to the nearest-neighbour density-density interaction; a custom
// T-periodic interaction may be supplied (its translates are generated here).
ManyBodyModel many_body_hamiltonian(double b, double mu, double lambda, int side,
                                    const Mat* user_v0 = nullptr,
                                    const SiteSet* user_v0_support = nullptr);

struct SpectralCache {
  RVec evals;
  Mat evecs;
  double ground_energy = 0.0;
  int ground_multiplicity = 1;
  double gap = 0.0;
  bool degenerate = false;
  double reconstruction_error = 0.0;

  Mat ground_projector() const;
  Mat to_eigenbasis(const Mat& a) const { return evecs.adjoint() * a * evecs; }
  Mat from_eigenbasis(const Mat& at) const { return evecs * at * evecs.adjoint(); }

  // entrywise spectral kernel f(E_m - E_n) in the eigenbasis
  template <typename F>
  Mat apply_kernel(const Mat& a, F f) const {
    Mat at = to_eigenbasis(a);
    for (Eigen::Index m = 0; m < at.rows(); ++m)
      for (Eigen::Index n = 0; n < at.cols(); ++n) at(m, n) *= f(evals(m) - evals(n));
    return from_eigenbasis(at);
  }
};

SpectralCache diagonalize(const Mat& h, double degeneracy_tol = 1e-9);
State ground_state(const SpectralCache& cache);

struct GapCertificate {
  double min_ratio = 0.0;
  double threshold = 0.0;
  int samples_used = 0;
  int skipped = 0;
  bool pass = false;
};

// ratio omega(A* L_H A) / var(A) over random local gauge-invariant probes
GapCertificate gap_certificate(const FockSpace& fock, const State& omega,
                               const Mat& h_sum, double g, int samples,
                               std::uint64_t seed);

}  // namespace halltorus
