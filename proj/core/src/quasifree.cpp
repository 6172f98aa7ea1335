#include "halltorus/quasifree.hpp"

#include <cmath>

namespace halltorus {

Mat displacement_current(const TorusLattice& lat, const Mat& h, int direction) {
  const int n = lat.num_sites();
  Mat out = Mat::Zero(n, n);
  for (int u = 0; u < n; ++u) {
    Site su = lat.site(u);
    for (int v = 0; v < n; ++v) {
      Site d = lat.displacement(su, lat.site(v));
      out(u, v) = static_cast<double>(direction == 1 ? d.x1 : d.x2) * h(u, v);
    }
  }
  return out;
}

Mat origin_current_kernel(const TorusLattice& lat, const Mat& h, int direction) {
  // bonds of the origin term: (0,0)->(1,0) and (0,0)->(0,1) with h's amplitudes
  const int n = lat.num_sites();
  Mat out = Mat::Zero(n, n);
  int o = lat.mode(Site{0, 0});
  int e1 = lat.mode(Site{1, 0});
  int e2 = lat.mode(Site{0, 1});
  auto add_bond = [&](int u, int v, double w) {
    out(u, v) += w * h(u, v);
    out(v, u) -= w * h(v, u);
  };
  if (direction == 1) {
    add_bond(e1, o, 1.0);
  } else {
    add_bond(e2, o, 1.0);
  }
  // returns the kernel of L_{X_j} h0 (bond-displacement weighted h0);
  // callers multiply by -i for the current or by i for the filter input
  return out;
}

namespace {

Mat weight_filter_1b(const OneBodyModel& model, const Mat& a, const FilterKernel& kernel) {
  Mat at = model.evecs.adjoint() * a * model.evecs;
  for (Eigen::Index m = 0; m < at.rows(); ++m)
    for (Eigen::Index q = 0; q < at.cols(); ++q)
      at(m, q) *= kernel.weight(model.evals(m) - model.evals(q));
  return model.evecs * at * model.evecs.adjoint();
}

Mat inverse_filter_1b(const OneBodyModel& model, const Mat& a, const FilterKernel& kernel) {
  Mat at = model.evecs.adjoint() * a * model.evecs;
  for (Eigen::Index m = 0; m < at.rows(); ++m)
    for (Eigen::Index q = 0; q < at.cols(); ++q)
      at(m, q) *= kernel.inverse_kernel(model.evals(m) - model.evals(q));
  return model.evecs * at * model.evecs.adjoint();
}

}  // namespace

double sigma_quasi_free(const OneBodyModel& model, const FilterKernel& kernel) {
  Mat p = fermi_projection(model);
  const Cx iu(0.0, 1.0);
  Mat od1 = weight_filter_1b(model, iu * displacement_current(model.lat, model.h, 1), kernel);
  Mat l2 = iu * origin_current_kernel(model.lat, model.h, 2);
  Mat od2 = weight_filter_1b(model, l2, kernel);
  Cx val = iu * (p * (od1 * od2 - od2 * od1)).trace();
  return val.real();
}

Mat dressed_two_point(const OneBodyModel& model, const FilterKernel& kernel, double eps) {
  Mat p = fermi_projection(model);
  const Cx iu(0.0, 1.0);
  // one-body generator k1 = -I(X_1): inverse kernel applied to i * (D_1 o h)
  Mat k1 = -inverse_filter_1b(model, iu * displacement_current(model.lat, model.h, 1), kernel);
  Eigen::SelfAdjointEigenSolver<Mat> es(k1);
  Vec phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases(i) = std::exp(iu * eps * es.eigenvalues()(i));
  Mat e = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  // Gamma_{uv} = omega_eps(a^+_u a_v): the Fermi-sea value is P^T and the
  // creation operators transform with E = e^{i eps k1}
  return e.transpose() * p.transpose() * e.conjugate();
}

double quasi_free_expectation(const Mat& gamma, const Mat& kernel) {
  // omega(dGamma(a)) = sum_{uv} a_{uv} Gamma_{uv}
  return (gamma.cwiseProduct(kernel).sum()).real();
}

double quasi_free_connected(const Mat& gamma, const Mat& a, const Mat& b) {
  // connected Wick pairing: sum a_{uv} b_{wz} Gamma_{uz} (delta_{vw} - Gamma_{wv})
  Mat q = Mat::Identity(gamma.rows(), gamma.cols()) - gamma.transpose();
  return (a * q * b * gamma.transpose()).trace().real();
}

QuasiFreeConductance conductance_quasi_free(const OneBodyModel& model,
                                            const FilterKernel& kernel, double eps,
                                            int l_segment) {
  if (l_segment > model.lat.l1())
    throw std::invalid_argument("conductance_quasi_free: segment longer than the torus");
  const TorusLattice& lat = model.lat;
  const Cx iu(0.0, 1.0);

  // one-body kernels of the bond currents j_{m,2} = T_{(m,0)} (J_2)_0
  auto j2_at = [&](int m) {
    const int n = lat.num_sites();
    Mat out = Mat::Zero(n, n);
    int o = lat.mode(Site{m, 0});
    int up = lat.mode(Site{m, 1});
    out(up, o) = -iu * model.h(up, o);
    out(o, up) = iu * model.h(o, up);
    return out;
  };

  Mat gamma = dressed_two_point(model, kernel, eps);

  Mat jl = Mat::Zero(lat.num_sites(), lat.num_sites());
  for (int m = 1; m <= l_segment; ++m) jl += j2_at(m);

  QuasiFreeConductance out;
  out.l_segment = l_segment;
  out.eps = eps;
  double mean_jl = quasi_free_expectation(gamma, jl);
  double var_jl = quasi_free_connected(gamma, jl, jl);
  out.mean = mean_jl / (eps * l_segment);
  out.variance = var_jl / (eps * eps * l_segment * l_segment);
  out.var_scaled = var_jl / l_segment;

  // connected current correlations vs distance, exponential fit
  Mat j0 = j2_at(0);
  int dmax = lat.l1() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int cnt = 0;
  for (int d = 1; d <= dmax; ++d) {
    double c = quasi_free_connected(gamma, j0, j2_at(d));
    out.correlations.emplace_back(d, c);
    if (std::abs(c) > 1e-14) {
      double lx = d, ly = std::log(std::abs(c));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      syy += ly * ly;
      ++cnt;
    }
  }
  if (cnt >= 3) {
    double denom = cnt * sxx - sx * sx;
    double slope = (cnt * sxy - sx * sy) / denom;
    double inter = (sy - slope * sx) / cnt;
    double ss_res = 0, ss_tot = 0, mean_y = sy / cnt;
    for (auto& [d, c] : out.correlations) {
      if (std::abs(c) <= 1e-14) continue;
      double ly = std::log(std::abs(c));
      ss_res += std::pow(ly - (inter + slope * d), 2);
      ss_tot += std::pow(ly - mean_y, 2);
    }
    out.corr_decay_rate = slope;
    out.corr_r2 = (ss_tot > 0) ? 1.0 - ss_res / ss_tot : 1.0;
  }
  return out;
}

}  // namespace halltorus
