#include "halltorus/neass.hpp"

#include <cmath>
#include <stdexcept>

namespace halltorus {

namespace {

Mat ad_i(const Mat& k, const Mat& b) { return Cx(0.0, 1.0) * (k * b - b * k); }

// branch position operator sum_x w_1(x) n_x (minimal-image weights at origin);
// enters only through commutators with bounded operators
Mat branch_position(const FockSpace& fock, int direction) {
  const TorusLattice& lat = fock.lattice();
  Mat out = Mat::Zero(fock.dim(), fock.dim());
  for (const Site& s : lat.all_sites()) {
    int w = (direction == 1) ? lat.min_image1(s.x1) : lat.min_image2(s.x2);
    if (w != 0) out += static_cast<double>(w) * fock.number_op(s);
  }
  return out;
}

// ordered compositions of `total` into parts in [1, max_part]
void compositions(int total, int max_part, std::vector<int>& current,
                  std::vector<std::vector<int>>& out) {
  if (total == 0) {
    out.push_back(current);
    return;
  }
  for (int part = 1; part <= std::min(total, max_part); ++part) {
    current.push_back(part);
    compositions(total - part, max_part, current, out);
    current.pop_back();
  }
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

NeassGenerators neass_generators(const ManyBodyModel& model, const SpectralCache& cache,
                                 int order, const FilterKernel& kernel) {
  if (order < 1 || order > 4)
    throw std::invalid_argument("neass_generators: order must be in 1..4");
  if (cache.gap < kernel.g() - 1e-12)
    throw std::invalid_argument("neass_generators: gap smaller than the kernel parameter");

  const FockSpace& fock = *model.fock;
  NeassGenerators gens;
  gens.order = order;

  auto inverse_map = [&](const Mat& b, const Mat& anchor) {
    Mat c = Cx(0.0, 1.0) * (b * anchor - anchor * b);
    return cache.apply_kernel(c, [&](double de) { return kernel.inverse_kernel(de); });
  };

  // K_1 = -I(X_1 + V):  i L_{X_1+V} h_0 with the origin-centered position part
  Mat lx_h0 = position_liouvillian(fock, model.h0, model.h0_support, 1);
  Mat lv_h0 = model.v_sum * model.h0 - model.h0 * model.v_sum;
  Mat b1 = lx_h0 + lv_h0;
  Mat k1_star = -cache.apply_kernel(Cx(0.0, 1.0) * b1,
                                    [&](double de) { return kernel.inverse_kernel(de); });
  gens.k_star.push_back(k1_star);
  gens.k_sum.push_back(model.trans->sum_translates(k1_star));
  gens.block_sum.push_back(Mat());  // no bounded block at order 1

  Mat w1 = branch_position(fock, 1);
  Mat drive = w1 + model.v_sum;  // X_1 + V in commutators (Prop (iii) form)

  for (int mu = 2; mu <= order; ++mu) {
    Mat block = Mat::Zero(fock.dim(), fock.dim());
    // L_mu: k >= 2 iterated commutators on H
    for (int k = 2; k <= mu; ++k) {
      std::vector<std::vector<int>> comps;
      std::vector<int> cur;
      compositions(mu, mu - 1, cur, comps);
      for (const auto& tup : comps) {
        if (static_cast<int>(tup.size()) != k) continue;
        Mat m = ad_i(gens.k_sum[tup.back() - 1], model.h_sum);
        for (int j = static_cast<int>(tup.size()) - 2; j >= 0; --j)
          m = ad_i(gens.k_sum[tup[j] - 1], m);
        block += m / factorial(k);
      }
    }
    // V_mu: k >= 1 iterated commutators on X_1 + V at total order mu - 1
    for (int k = 1; k <= mu - 1; ++k) {
      std::vector<std::vector<int>> comps;
      std::vector<int> cur;
      compositions(mu - 1, mu - 1, cur, comps);
      for (const auto& tup : comps) {
        if (static_cast<int>(tup.size()) != k) continue;
        Mat m = ad_i(gens.k_sum[tup.back() - 1], drive);
        for (int j = static_cast<int>(tup.size()) - 2; j >= 0; --j)
          m = ad_i(gens.k_sum[tup[j] - 1], m);
        block += m / factorial(k);
      }
    }
    gens.block_sum.push_back(block);
    gens.k_star.push_back(-inverse_map(block, model.h0));
    gens.k_sum.push_back(-inverse_map(block, model.h_sum));
  }
  return gens;
}

DressedState dress_state(const ManyBodyModel& model, const State& omega0,
                         const NeassGenerators& gens, double eps) {
  if (std::abs(eps) > 1.0)
    throw std::invalid_argument("dress_state: |eps| must be at most 1");
  const long dim = model.fock->dim();
  DressedState out;
  out.eps = eps;
  out.s_eps = Mat::Zero(dim, dim);
  double p = 1.0;
  for (int mu = 1; mu <= gens.order; ++mu) {
    p *= eps;
    out.s_eps += p * gens.k_sum[mu - 1];
  }
  if (eps == 0.0) {
    out.omega = omega0;
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(out.s_eps);
  Vec phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases(i) = std::exp(Cx(0.0, -es.eigenvalues()(i)));
  Mat u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  switch (omega0.kind) {
    case State::Kind::pure:
      out.omega = State::pure(u * omega0.vector);
      break;
    case State::Kind::projector:
      out.omega = State::projector(u * omega0.density * u.adjoint());
      break;
    default:
      throw std::invalid_argument("dress_state: unsupported state kind");
  }
  return out;
}

double stationarity_residual(const ManyBodyModel& model, const DressedState& state,
                             int probe_count, std::uint64_t seed) {
  const FockSpace& fock = *model.fock;
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < probe_count; ++i) {
    SiteSet supp;
    Mat a = random_local_probe(fock, rng, &supp);
    Mat la = model.h_sum * a - a * model.h_sum;
    if (state.eps != 0.0) {
      la += state.eps * (model.v_sum * a - a * model.v_sum);
      la += state.eps * position_liouvillian(fock, a, supp, 1);
    }
    double val = std::abs(state.omega.expect(fock, la));
    double nrm = decay_norm(fock, a, 5, supp.front());
    worst = std::max(worst, val / nrm);
  }
  return worst;
}

double order_condition_residual(const ManyBodyModel& model, const SpectralCache& cache,
                                const NeassGenerators& gens, int mu, int probe_count,
                                std::uint64_t seed) {
  if (mu < 1 || mu > gens.order) throw std::invalid_argument("order_condition_residual: bad mu");
  const FockSpace& fock = *model.fock;
  State omega0 = ground_state(cache);
  Mat lhs = ad_i(gens.k_sum[mu - 1], model.h_sum);
  if (mu >= 2) lhs += gens.block_sum[mu - 1];
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < probe_count; ++i) {
    SiteSet supp;
    Mat b = random_local_probe(fock, rng, &supp);
    Mat total = lhs * b - b * lhs;
    if (mu == 1) {
      total += model.v_sum * b - b * model.v_sum;
      total += position_liouvillian(fock, b, supp, 1);
    }
    worst = std::max(worst, std::abs(omega0.expect(fock, total)) / operator_norm(b));
  }
  return worst;
}

}  // namespace halltorus
