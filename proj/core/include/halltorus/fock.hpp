#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <random>
#include <vector>

#include "halltorus/lattice.hpp"

namespace halltorus {

using Cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

constexpr double kGaugeTol = 1e-12;
constexpr double kSelfAdjointTol = 1e-12;

// Dense CAR representation on the full Fock space of a torus lattice.
// Mode order is the lattice's lexicographic site order; Jordan-Wigner signs
// count occupied modes below the acted-on mode.
class FockSpace {
 public:
  explicit FockSpace(TorusLattice lat);

  const TorusLattice& lattice() const { return lat_; }
  int modes() const { return n_; }
  long dim() const { return dim_; }

  Mat annihilation(int mode) const;
  Mat creation(int mode) const { return annihilation(mode).adjoint(); }
  Mat annihilation(Site s) const { return annihilation(lat_.mode(s)); }
  Mat creation(Site s) const { return creation(lat_.mode(s)); }

  Mat number_op(Site s) const;
  Mat total_number() const;
  Mat identity() const { return Mat::Identity(dim_, dim_); }

  // second quantization of a one-body matrix (modes x modes)
  Mat d_gamma(const Mat& one_body) const;

  // hopping term  amp * a^+_u a_v + h.c.
  Mat hop(Site u, Site v, Cx amp = Cx(1.0, 0.0)) const;

  // Slater determinant over the given one-body orbital columns
  Vec slater(const Mat& orbitals) const;
  Vec vacuum() const;

 private:
  TorusLattice lat_;
  int n_;
  long dim_;
};

// A Fock-space operator with its declared support and consistency flags.
struct FockOperator {
  Mat matrix;
  SiteSet support;             // sorted
  bool self_adjoint = false;
  bool gauge_invariant = false;
  std::optional<Site> center;  // anchor for position-commutator weights
};

FockOperator make_fock_operator(const FockSpace& fock, Mat m, SiteSet support);

bool is_gauge_invariant(const FockSpace& fock, const Mat& a, double tol = kGaugeTol);
bool is_self_adjoint(const Mat& a, double tol = kSelfAdjointTol);

// largest singular value via dense decomposition
double operator_norm(const Mat& a);

// normalized trace, omega^tr(A) = tr(A)/dim
Cx tracial_expectation(const Mat& a);

// E_M: normalized partial trace over the modes outside M.
// Rejects non-gauge-invariant input (the artifact restricts E_M to A^N).
Mat conditional_expectation(const FockSpace& fock, const SiteSet& m, const Mat& a);

// decay norm  ||A|| + max_k ||A - E_{Lambda_k} A|| (1+k)^nu, boxes at `center`
double decay_norm(const FockSpace& fock, const Mat& a, int nu, Site center);

// modes of a site set
std::vector<int> modes_of(const TorusLattice& lat, const SiteSet& m);

SiteSet sorted_sites(SiteSet m);
SiteSet union_sites(const SiteSet& a, const SiteSet& b);

// random local gauge-invariant self-adjoint probe on a 2x2 patch at a random
// position (quadratic plus a quartic density-density piece)
Mat random_local_probe(const FockSpace& fock, std::mt19937_64& rng,
                       SiteSet* support_out = nullptr);

}  // namespace halltorus
