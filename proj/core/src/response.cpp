#include "halltorus/response.hpp"

#include <cmath>
#include <stdexcept>

namespace halltorus {

Mat current_origin(const ManyBodyModel& model, double eps, int direction) {
  const FockSpace& fock = *model.fock;
  Mat j0 = Cx(0.0, -1.0) *
           position_liouvillian(fock, model.h0, model.h0_support, direction);
  if (eps != 0.0) {
    SiteSet v_supp = sorted_sites({Site{0, 0}, Site{1, 0}, Site{0, 1}});
    j0 += eps * Cx(0.0, -1.0) *
          position_liouvillian(fock, model.v0, v_supp, direction);
  }
  return j0;
}

Interaction current_interaction(const ManyBodyModel& model, double eps, int direction) {
  const TorusLattice& lat = model.fock->lattice();
  Mat j0 = current_origin(model, eps, direction);
  Interaction out;
  out.translation_tag = model.trans.get();
  for (const Site& g : lat.all_sites())
    out.add(shifted(lat, model.h0_support, g), model.trans->apply(g, j0));
  return out;
}

namespace {

Mat od_star(const ManyBodyModel& model, const SpectralCache& cache,
            const FilterKernel& kernel, int direction, const Mat* alpha = nullptr) {
  FlowSpec spec;
  spec.psi.q = 1.0;
  spec.psi.direction = direction;
  spec.cache = &cache;
  spec.model = &model;
  spec.alpha = alpha;
  return od_map(spec, kernel).matrix;
}

}  // namespace

double hall_conductivity(const ManyBodyModel& model, const SpectralCache& cache,
                         const FilterKernel& kernel, double* imag_residue) {
  const FockSpace& fock = *model.fock;
  State omega0 = ground_state(cache);
  Mat od1 = od_star(model, cache, kernel, 1);
  Mat od2 = od_star(model, cache, kernel, 2);
  Mat od1_sum = model.trans->sum_translates(od1);
  Cx val = Cx(0.0, 1.0) * omega0.expect(fock, (od1_sum * od2 - od2 * od1_sum).eval());
  if (imag_residue) *imag_residue = std::abs(val.imag());
  return val.real();
}

namespace {

struct PolyFit {
  std::vector<double> coef;
  double residual = 0.0;
};

// least squares for y ~ sum_k coef_k * x^{pow_k}
PolyFit fit_powers(const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<int>& powers) {
  Eigen::MatrixXd a(x.size(), powers.size());
  Eigen::VectorXd b(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    b(i) = y[i];
    for (std::size_t k = 0; k < powers.size(); ++k) a(i, k) = std::pow(x[i], powers[k]);
  }
  Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  PolyFit fit;
  fit.coef.assign(c.data(), c.data() + c.size());
  fit.residual = (a * c - b).norm();
  return fit;
}

}  // namespace

ResponseReport response_scan(const ManyBodyModel& model, const SpectralCache& cache,
                             const NeassGenerators& gens, const FilterKernel& kernel,
                             const std::vector<double>& eps_grid) {
  const FockSpace& fock = *model.fock;
  State omega0 = ground_state(cache);
  ResponseReport rep;
  rep.sigma_h = hall_conductivity(model, cache, kernel);
  for (double eps : eps_grid) {
    DressedState ds = dress_state(model, omega0, gens, eps);
    Mat j1 = current_origin(model, eps, 1);
    Mat j2 = current_origin(model, eps, 2);
    rep.eps.push_back(eps);
    rep.j1.push_back(ds.omega.expect(fock, j1).real());
    rep.j2.push_back(ds.omega.expect(fock, j2).real());
  }
  for (double v : rep.j1) rep.max_abs_j1 = std::max(rep.max_abs_j1, std::abs(v));
  double scale = 0.0;
  for (double v : rep.j2) scale = std::max(scale, std::abs(v));
  rep.longitudinal_suppressed = rep.max_abs_j1 <= 1e-12 * std::max(1.0, scale);
  if (rep.longitudinal_suppressed) {
    rep.longitudinal_slope = std::numeric_limits<double>::quiet_NaN();
  } else {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < rep.eps.size(); ++i) {
      if (std::abs(rep.j1[i]) < 1e-300) continue;
      lx.push_back(std::log10(rep.eps[i]));
      ly.push_back(std::log10(std::abs(rep.j1[i])));
    }
    PolyFit f = fit_powers(lx, ly, {1, 0});
    rep.longitudinal_slope = f.coef[0];
  }
  PolyFit lin = fit_powers(rep.eps, rep.j2, {1});
  PolyFit cubic = fit_powers(rep.eps, rep.j2, {1, 2, 3});
  rep.hall_slope_linear = -lin.coef[0];
  rep.hall_slope_fit = -cubic.coef[0];
  rep.hall_fit_residual = cubic.residual;
  return rep;
}

CsCheckResult chern_simons_check(const ManyBodyModel& model, const SpectralCache& cache,
                                 const FilterKernel& kernel, const Interaction& generator,
                                 double strength) {
  const FockSpace& fock = *model.fock;
  if (!is_t_periodic(fock.lattice(), generator, *model.trans))
    throw std::invalid_argument("chern_simons_check: generator is not T-periodic");
  CsCheckResult out;
  out.sigma_before = hall_conductivity(model, cache, kernel);
  if (strength == 0.0) {
    out.sigma_after = out.sigma_before;
    out.delta = 0.0;
    return out;
  }
  Mat gen_sum = generator.summed(fock.dim());
  Eigen::SelfAdjointEigenSolver<Mat> es(gen_sum);
  Vec phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases(i) = std::exp(Cx(0.0, strength * es.eigenvalues()(i)));
  Mat u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();

  Mat od1 = od_star(model, cache, kernel, 1, &u);
  Mat od2 = od_star(model, cache, kernel, 2, &u);
  Mat od1_sum = model.trans->sum_translates(od1);
  State omega0 = ground_state(cache);
  Mat rho_alpha;  // omega_alpha(A) = omega_0(alpha(A)) = tr(rho0 U A U+)
  if (omega0.kind == State::Kind::pure) {
    Vec psi = u.adjoint() * omega0.vector;
    out.sigma_after =
        (Cx(0.0, 1.0) * psi.dot((od1_sum * od2 - od2 * od1_sum) * psi)).real();
  } else {
    Mat rho = u.adjoint() * omega0.density * u;
    out.sigma_after =
        (Cx(0.0, 1.0) * (rho * (od1_sum * od2 - od2 * od1_sum)).trace()).real();
  }
  out.delta = std::abs(out.sigma_after - out.sigma_before);
  return out;
}

namespace {

void fit_correlations(ConductanceStats& st) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (auto& [d, c] : st.correlations) {
    if (std::abs(c) <= 1e-14) continue;
    double lx = d, ly = std::log(std::abs(c));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  if (cnt < 3) return;
  double denom = cnt * sxx - sx * sx;
  double slope = (cnt * sxy - sx * sy) / denom;
  double inter = (sy - slope * sx) / cnt;
  double ss_res = 0, ss_tot = 0, mean_y = sy / cnt;
  for (auto& [d, c] : st.correlations) {
    if (std::abs(c) <= 1e-14) continue;
    double ly = std::log(std::abs(c));
    ss_res += std::pow(ly - (inter + slope * d), 2);
    ss_tot += std::pow(ly - mean_y, 2);
  }
  st.corr_decay_rate = slope;
  st.corr_r2 = (ss_tot > 0) ? 1.0 - ss_res / ss_tot : 1.0;
}

}  // namespace

ConductanceStats conductance_stats_ed(const ManyBodyModel& model, const State& omega,
                                      double eps, int l_segment) {
  const FockSpace& fock = *model.fock;
  const TorusLattice& lat = fock.lattice();
  if (l_segment > lat.l1())
    throw std::invalid_argument("conductance_stats_ed: segment longer than the torus");
  Mat j0 = current_origin(model, eps, 2);
  Mat jl = Mat::Zero(fock.dim(), fock.dim());
  std::vector<Mat> jm;
  for (int m = 1; m <= l_segment; ++m) {
    jm.push_back(model.trans->apply(Site{m, 0}, j0));
    jl += jm.back();
  }
  ConductanceStats st;
  st.l_segment = l_segment;
  st.eps = eps;
  double mean_jl = omega.expect(fock, jl).real();
  double sq = omega.expect(fock, (jl * jl).eval()).real();
  double el = (eps != 0.0) ? eps * l_segment : l_segment;  // eps=0: report raw mean
  st.mean = mean_jl / el;
  st.variance = (sq - mean_jl * mean_jl) / (el * el);
  for (int d = 1; d < l_segment; ++d) {
    Cx c = omega.expect(fock, (jm[0] * jm[d]).eval()) -
           omega.expect(fock, jm[0]) * omega.expect(fock, jm[d]);
    st.correlations.emplace_back(d, c.real());
  }
  fit_correlations(st);
  return st;
}

ConductanceStats conductance_stats_wick(const TorusLattice& lat, const Mat& h,
                                        const Mat& gamma, double eps, int l_segment) {
  if (l_segment > lat.l1())
    throw std::invalid_argument("conductance_stats_wick: segment longer than the torus");
  const Cx iu(0.0, 1.0);
  auto j2_at = [&](int m) {
    const int n = lat.num_sites();
    Mat out = Mat::Zero(n, n);
    int o = lat.mode(Site{m, 0});
    int up = lat.mode(Site{m, 1});
    out(up, o) = -iu * h(up, o);
    out(o, up) = iu * h(o, up);
    return out;
  };
  Mat jl = Mat::Zero(lat.num_sites(), lat.num_sites());
  std::vector<Mat> jm;
  for (int m = 1; m <= l_segment; ++m) {
    jm.push_back(j2_at(m));
    jl += jm.back();
  }
  ConductanceStats st;
  st.l_segment = l_segment;
  st.eps = eps;
  double mean_jl = quasi_free_expectation(gamma, jl);
  double var_jl = quasi_free_connected(gamma, jl, jl);
  double el = (eps != 0.0) ? eps * l_segment : l_segment;
  st.mean = mean_jl / el;
  st.variance = var_jl / (el * el);
  for (int d = 1; d < l_segment; ++d) {
    st.correlations.emplace_back(d, quasi_free_connected(gamma, jm[0], jm[d]));
  }
  fit_correlations(st);
  return st;
}

}  // namespace halltorus
