#pragma once

#include <map>
#include <memory>
#include <vector>

#include "halltorus/fock.hpp"

namespace halltorus {

// Magnetic translations acting on the Fock space.
// Convention: T_gamma(a_y) = e^{i b y1 gamma2} a_{y+gamma}; the sign of the
// phase is tied to the flux-orientation convention of hofstadter.hpp.
class MagneticTranslation {
 public:
  MagneticTranslation(const FockSpace& fock, double flux);

  const FockSpace& fock() const { return *fock_; }
  double flux() const { return flux_; }

  const Mat& unitary(Site gamma) const;
  Mat apply(Site gamma, const Mat& a) const;
  FockOperator apply(Site gamma, const FockOperator& a) const;
  Mat sum_translates(const Mat& a) const;

  // T-compatibility test: T_g T_g' A == T_{g+g'} A on a sample of shifts
  bool is_compatible(const Mat& a, double tol = 1e-10) const;

 private:
  const FockSpace* fock_;
  double flux_;
  mutable std::map<std::pair<int, int>, Mat> cache_;
};

// Interaction: map from finite site sets to local self-adjoint
// gauge-invariant operators. Terms are stored sparsely by support.
class Interaction {
 public:
  struct Term {
    SiteSet sites;
    Mat op;
  };

  Interaction() = default;

  void add(SiteSet sites, Mat op, double drop_tol = 1e-14);
  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  Mat summed(long dim) const;
  // standard representative at the origin: sum of terms with s(M) = 0
  Mat origin_term(const TorusLattice& lat, long dim) const;

  const MagneticTranslation* translation_tag = nullptr;

 private:
  std::vector<Term> terms_;
};

// checks T_gamma Phi(M) = Phi(M + gamma) for all stored terms
bool is_t_periodic(const TorusLattice& lat, const Interaction& phi,
                   const MagneticTranslation& t, double tol = 1e-10);

// max over sites x of sum_{M contains x} (1+diam(M))^nu ||Phi(M)||
double interaction_norm(const TorusLattice& lat, const Interaction& phi, int nu);

Mat magnetic_translate(const MagneticTranslation& t, Site gamma, const Mat& a);

// telescoping interaction with origin term A (boxes centered at the origin)
Interaction periodize(const FockSpace& fock, const MagneticTranslation& t,
                      const Mat& a, double drop_tol = 1e-12);

// admissible generator  Psi = p*Phi + q*X_j
struct LiouvillianSpec {
  double p = 0.0;
  const Interaction* phi = nullptr;
  double q = 0.0;
  int direction = 1;  // j in {1,2}
};

// L_Psi A = p sum_M [Phi(M),A] + q sum_{x in supp A} w_j(x) [n_x, A],
// with w_j the minimal-image coordinate relative to the support centroid
// (or relative to A.center when declared).
Mat liouvillian_apply(const FockSpace& fock, const LiouvillianSpec& spec,
                      const FockOperator& a);

// position part alone, on a plain matrix with explicit support/center
Mat position_liouvillian(const FockSpace& fock, const Mat& a, const SiteSet& support,
                         int direction, std::optional<Site> center = std::nullopt);

Interaction commutator_interaction(const Interaction& phi, const Interaction& psi,
                                   long dim, double drop_tol = 1e-13);

// states at ED scale
struct State {
  enum class Kind { pure, projector, quasi_free };
  Kind kind = Kind::pure;
  Vec vector;     // pure
  Mat density;    // projector (normalized, trace one)
  Mat two_point;  // quasi-free: Gamma_{uv} = omega(a^+_u a_v)

  static State pure(Vec v);
  static State projector(Mat rho);
  static State quasi_free(Mat gamma);

  // expectation of a Fock-space operator (quasi-free requires projector Gamma,
  // realized as the corresponding Slater determinant)
  Cx expect(const FockSpace& fock, const Mat& a) const;
};

bool is_t_periodic_state(const FockSpace& fock, const State& omega,
                         const MagneticTranslation& t, double tol = 1e-9);

// omega(Phi_0); throws if the state fails the T-periodicity sampling test
double per_volume_expectation(const FockSpace& fock, const State& omega,
                              const Interaction& phi, const MagneticTranslation& t);

// the full-torus average (1/|L|) sum_M omega(Phi(M)), for cross-checks
double per_volume_via_average(const FockSpace& fock, const State& omega,
                              const Interaction& phi);

}  // namespace halltorus
