#include "halltorus/spectral_flow.hpp"

#include <gsl/gsl_sf_expint.h>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace halltorus {

namespace {

constexpr double kPi = 3.14159265358979323846;

double bump01(double u) {
  // smooth 0 -> 1 transition on [0,1]
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  double a = std::exp(-1.0 / u);
  double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

// int_x^inf sin(u)/u du
double si_tail(double x) { return 0.5 * kPi - gsl_sf_Si(x); }

const double kGlX[8] = {-0.9602898564975363, -0.7966664774136267,
                        -0.5255324099163290, -0.1834346424956498,
                        0.1834346424956498,  0.5255324099163290,
                        0.7966664774136267,  0.9602898564975363};
const double kGlW[8] = {0.1012285362903763, 0.2223810344533745,
                        0.3137066458778873, 0.3626837833783620,
                        0.3626837833783620, 0.3137066458778873,
                        0.2223810344533745, 0.1012285362903763};

}  // namespace

FilterKernel::FilterKernel(double g, FilterProfile profile, QuadratureSpec quad)
    : g_(g), profile_(profile), quad_(quad) {
  if (g <= 0.0) throw std::invalid_argument("FilterKernel: gap parameter must be positive");
  if (quad_.node_count < 5) throw std::invalid_argument("FilterKernel: too few nodes");
  if (quad_.node_count % 2 == 0) ++quad_.node_count;  // composite Simpson needs odd
}

double FilterKernel::inside_profile(double k) const {
  double a = std::abs(k);
  double sign = (k >= 0.0) ? 1.0 : -1.0;
  switch (profile_) {
    case FilterProfile::cubic:
      return (k / (g_ * g_)) * (2.0 - k * k / (g_ * g_));
    case FilterProfile::smooth:
      if (a <= 0.5 * g_) return 0.0;
      return sign * bump01(2.0 * a / g_ - 1.0) / a;
  }
  return 0.0;
}

Cx FilterKernel::weight(double k) const {
  if (std::abs(k) >= g_) return Cx(0.0, 1.0 / k);
  return Cx(0.0, inside_profile(k));
}

Cx FilterKernel::inverse_kernel(double de) const {
  if (std::abs(de) < 1e-12) {
    // limit of -weight(de)/(i de): minus the slope of the inside profile at 0
    switch (profile_) {
      case FilterProfile::cubic:
        return Cx(-2.0 / (g_ * g_), 0.0);
      case FilterProfile::smooth:
        return Cx(0.0, 0.0);
    }
  }
  return -weight(de) / Cx(0.0, de);
}

double FilterKernel::time_sample(double s) const {
  if (s == 0.0) return 0.0;
  double sign = (s > 0.0) ? 1.0 : -1.0;
  double as = std::abs(s);
  double lo = (profile_ == FilterProfile::smooth) ? 0.5 * g_ : 0.0;
  int panels = std::max(8, 4 * static_cast<int>(std::ceil((g_ - lo) * as / kTwoPi)));
  double h = (g_ - lo) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    double mid = lo + (p + 0.5) * h;
    for (int i = 0; i < 8; ++i) {
      double k = mid + 0.5 * h * kGlX[i];
      acc += 0.5 * h * kGlW[i] * inside_profile(k) * std::sin(k * as);
    }
  }
  return sign * (acc + si_tail(g_ * as)) / kPi;
}

Mat i_map(const SpectralCache& cache, const Mat& a, const FilterKernel& kernel) {
  return cache.apply_kernel(a, [&](double de) { return kernel.weight(de); });
}

namespace {

Mat psi_liouvillian_on(const FlowSpec& spec, const Mat& b) {
  const FockSpace& fock = *spec.model->fock;
  Mat out = Mat::Zero(fock.dim(), fock.dim());
  if (spec.psi.p != 0.0 && spec.psi.phi != nullptr) {
    Mat phi_sum = spec.psi.phi->summed(fock.dim());
    out += spec.psi.p * (phi_sum * b - b * phi_sum);
  }
  if (spec.psi.q != 0.0)
    out += spec.psi.q * position_liouvillian(fock, b, fock.lattice().all_sites(),
                                             spec.psi.direction, Site{0, 0});
  return out;
}

FockOperator flow_output(const FlowSpec& spec, Mat m) {
  const FockSpace& fock = *spec.model->fock;
  FockOperator out;
  out.support = fock.lattice().all_sites();
  out.center = Site{0, 0};
  out.self_adjoint = is_self_adjoint(m, 1e-10);
  out.gauge_invariant = is_gauge_invariant(fock, m, 1e-10);
  out.matrix = std::move(m);
  return out;
}

void check_gap(const FlowSpec& spec, const FilterKernel& kernel) {
  if (spec.cache == nullptr || spec.model == nullptr)
    throw std::invalid_argument("flow map: spec needs a cache and a model");
  if (spec.cache->gap < kernel.g() - 1e-12)
    throw std::invalid_argument("flow map: spectral gap smaller than the kernel parameter");
}

// W_g samples on the uniform grid i*h, i=0..nodes-1, with a fixed
// Gauss-Legendre k-grid shared by all s (profile part) plus the exact tail.
std::vector<double> sample_w_grid(const FilterKernel& kernel, int nodes, double h) {
  const double g = kernel.g();
  double lo = (kernel.profile() == FilterProfile::smooth) ? 0.5 * g : 0.0;
  const double t_max = (nodes - 1) * h;
  int panels = std::max(8, 4 * static_cast<int>(std::ceil((g - lo) * t_max / kTwoPi)));
  double hk = (g - lo) / panels;
  std::vector<double> knode, kfw;
  knode.reserve(8 * panels);
  kfw.reserve(8 * panels);
  for (int p = 0; p < panels; ++p) {
    double mid = lo + (p + 0.5) * hk;
    for (int i = 0; i < 8; ++i) {
      double k = mid + 0.5 * hk * kGlX[i];
      knode.push_back(k);
      // reuse the kernel's profile through weight(): f(k) = Im weight(k) inside
      kfw.push_back(0.5 * hk * kGlW[i] * kernel.weight(k).imag());
    }
  }
  std::vector<double> w(nodes, 0.0);
  for (int i = 1; i < nodes; ++i) {
    double s = i * h;
    double acc = 0.0;
    for (std::size_t k = 0; k < knode.size(); ++k) acc += kfw[k] * std::sin(knode[k] * s);
    w[i] = (acc + si_tail(g * s)) / kPi;
  }
  return w;
}

Mat quadrature_eval(const SpectralCache& cache, const Mat& a, QuadMode mode,
                    const std::vector<double>& w, int stride, double h) {
  const int nodes = (static_cast<int>(w.size()) - 1) / stride + 1;
  const double hs = h * stride;
  // composite Simpson weights on the strided grid
  std::vector<double> sw(nodes);
  for (int i = 0; i < nodes; ++i) {
    if (i == 0 || i == nodes - 1)
      sw[i] = hs / 3.0;
    else
      sw[i] = (i % 2 == 1) ? 4.0 * hs / 3.0 : 2.0 * hs / 3.0;
  }
  Mat at = cache.to_eigenbasis(a);
  const Eigen::Index n = at.rows();
  Mat kerm(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index q = 0; q < n; ++q) {
      double de = cache.evals(m) - cache.evals(q);
      double acc = 0.0;
      if (mode == QuadMode::inverse && std::abs(de) < 1e-12) {
        for (int i = 1; i < nodes; ++i) acc += sw[i] * w[static_cast<std::size_t>(i) * stride] * (i * hs);
        kerm(m, q) = Cx(-2.0 * acc, 0.0);
        continue;
      }
      for (int i = 1; i < nodes; ++i)
        acc += sw[i] * w[static_cast<std::size_t>(i) * stride] * std::sin(de * i * hs);
      if (mode == QuadMode::inverse)
        kerm(m, q) = Cx(-2.0 * acc / de, 0.0);
      else
        kerm(m, q) = Cx(0.0, 2.0 * acc);
    }
  }
  return cache.from_eigenbasis(kerm.cwiseProduct(at));
}

}  // namespace

FockOperator od_map(const FlowSpec& spec, const FilterKernel& kernel) {
  check_gap(spec, kernel);
  const Mat& h0 = spec.model->h0;
  Mat b = h0;
  if (spec.alpha != nullptr) b = spec.alpha->adjoint() * h0 * (*spec.alpha);
  Mat c = Cx(0.0, 1.0) * psi_liouvillian_on(spec, b);
  if (spec.alpha != nullptr) c = (*spec.alpha) * c * spec.alpha->adjoint();
  Mat filtered = i_map(*spec.cache, c, kernel);
  if (spec.alpha != nullptr) filtered = spec.alpha->adjoint() * filtered * (*spec.alpha);
  return flow_output(spec, std::move(filtered));
}

FockOperator inverse_liouvillian(const FlowSpec& spec, const FilterKernel& kernel) {
  check_gap(spec, kernel);
  Mat c = Cx(0.0, 1.0) * psi_liouvillian_on(spec, spec.model->h0);
  Mat out = spec.cache->apply_kernel(c, [&](double de) { return kernel.inverse_kernel(de); });
  return flow_output(spec, std::move(out));
}

QuadratureResult time_quadrature_filter(const SpectralCache& cache, const Mat& a,
                                        const FilterKernel& kernel, QuadMode mode) {
  int nodes = kernel.quadrature().node_count;
  if ((nodes - 1) % 4 != 0) nodes += 4 - (nodes - 1) % 4;  // strided grid stays odd
  const double h = kernel.quadrature().t_max / (nodes - 1);
  std::vector<double> w = sample_w_grid(kernel, nodes, h);
  QuadratureResult res;
  res.value = quadrature_eval(cache, a, mode, w, 1, h);
  Mat coarse = quadrature_eval(cache, a, mode, w, 2, h);
  res.est_error = (res.value - coarse).norm() / std::max(1.0, a.norm());
  res.converged = res.est_error <= 1e-6;
  return res;
}

}  // namespace halltorus
