#pragma once

#include "halltorus/hofstadter.hpp"

namespace halltorus {

enum class FilterProfile { cubic, smooth };

struct QuadratureSpec {
  double t_max = 400.0;
  int node_count = 200001;  // uniform grid on (0, t_max], composite Simpson
};

// The spectral filter W_g through its Fourier data: weight(k) = i/k outside
// [-g, g], an odd smooth profile inside, weight(0) = 0.
class FilterKernel {
 public:
  FilterKernel(double g, FilterProfile profile = FilterProfile::cubic,
               QuadratureSpec quad = {});

  double g() const { return g_; }
  FilterProfile profile() const { return profile_; }
  const QuadratureSpec& quadrature() const { return quad_; }

  Cx weight(double k) const;          // int W_g(s) e^{iks} ds
  Cx inverse_kernel(double de) const; // -weight(de)/(i de), continuous at 0

  // real-time samples W_g(s), s > 0, from the inverse Fourier transform of
  // the weight (profile part by quadrature, i/k tail via the sine integral)
  double time_sample(double s) const;

 private:
  double inside_profile(double k) const;  // odd real f with weight = i f
  double g_;
  FilterProfile profile_;
  QuadratureSpec quad_;
};

struct FlowSpec {
  LiouvillianSpec psi;                        // p*Phi + q*X_j
  const Mat* alpha = nullptr;                 // unitary; nullptr = identity
  const SpectralCache* cache = nullptr;       // eigendecomposition of H
  const ManyBodyModel* model = nullptr;       // h0, translations, Fock space
};

// I_H A: entrywise weight(E_m - E_n) in the H eigenbasis
Mat i_map(const SpectralCache& cache, const Mat& a, const FilterKernel& kernel);

// (Psi^{OD,alpha})_* = alpha^{-1} I_H( alpha i L_Psi alpha^{-1} h0 )
FockOperator od_map(const FlowSpec& spec, const FilterKernel& kernel);

// I(Psi)_*: entrywise inverse kernel on i L_Psi h0
FockOperator inverse_liouvillian(const FlowSpec& spec, const FilterKernel& kernel);

enum class QuadMode { i_map, od, inverse };

struct QuadratureResult {
  Mat value;
  double est_error = 0.0;   // coarse-vs-fine difference
  bool converged = true;    // est_error <= 1e-6
};

// evaluates the corresponding time integral by composite-Simpson quadrature;
// cross-validation path for the spectral maps above
QuadratureResult time_quadrature_filter(const SpectralCache& cache, const Mat& a,
                                        const FilterKernel& kernel, QuadMode mode);

}  // namespace halltorus
