#include "halltorus/fock.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace halltorus {

FockSpace::FockSpace(TorusLattice lat) : lat_(lat), n_(lat.num_sites()) {
  if (n_ > 20) throw std::invalid_argument("FockSpace: too many modes for dense work");
  dim_ = 1L << n_;
}

namespace {

// parity of occupied modes strictly below `mode` in state `s`
inline int jw_sign(unsigned long s, int mode) {
  unsigned long below = s & ((1UL << mode) - 1UL);
  return (std::popcount(below) & 1) ? -1 : 1;
}

}  // namespace

Mat FockSpace::annihilation(int mode) const {
  if (mode < 0 || mode >= n_) throw std::out_of_range("annihilation: mode out of range");
  Mat out = Mat::Zero(dim_, dim_);
  const unsigned long bit = 1UL << mode;
  for (long s = 0; s < dim_; ++s) {
    if (s & bit) {
      long t = s & ~bit;
      out(t, s) = static_cast<double>(jw_sign(s, mode));
    }
  }
  return out;
}

Mat FockSpace::number_op(Site site) const {
  const unsigned long bit = 1UL << lat_.mode(site);
  Mat out = Mat::Zero(dim_, dim_);
  for (long s = 0; s < dim_; ++s)
    if (s & bit) out(s, s) = 1.0;
  return out;
}

Mat FockSpace::total_number() const {
  Mat out = Mat::Zero(dim_, dim_);
  for (long s = 0; s < dim_; ++s) out(s, s) = static_cast<double>(std::popcount(static_cast<unsigned long>(s)));
  return out;
}

Mat FockSpace::d_gamma(const Mat& one_body) const {
  if (one_body.rows() != n_ || one_body.cols() != n_)
    throw std::invalid_argument("d_gamma: one-body matrix has wrong size");
  Mat out = Mat::Zero(dim_, dim_);
  // a^+_u a_v applied to basis states, accumulated directly
  for (int u = 0; u < n_; ++u) {
    for (int v = 0; v < n_; ++v) {
      Cx c = one_body(u, v);
      if (std::abs(c) < 1e-300) continue;
      const unsigned long bu = 1UL << u, bv = 1UL << v;
      for (long s = 0; s < dim_; ++s) {
        if (!(s & bv)) continue;
        long t = s & ~bv;
        int sign = jw_sign(s, v);
        if (t & bu) continue;
        long r = t | bu;
        sign *= jw_sign(t, u);
        out(r, s) += c * static_cast<double>(sign);
      }
    }
  }
  return out;
}

Mat FockSpace::hop(Site u, Site v, Cx amp) const {
  Mat term = amp * (creation(u) * annihilation(v));
  return term + term.adjoint().eval();
}

Vec FockSpace::vacuum() const {
  Vec v = Vec::Zero(dim_);
  v(0) = 1.0;
  return v;
}

Vec FockSpace::slater(const Mat& orbitals) const {
  Vec v = vacuum();
  for (int k = 0; k < orbitals.cols(); ++k) {
    Mat adag = Mat::Zero(dim_, dim_);
    for (int m = 0; m < n_; ++m)
      if (std::abs(orbitals(m, k)) > 1e-300) adag += orbitals(m, k) * creation(m);
    v = (adag * v).eval();
  }
  double nrm = v.norm();
  if (nrm < 1e-14) throw std::runtime_error("slater: dependent orbitals");
  return v / nrm;
}

FockOperator make_fock_operator(const FockSpace& fock, Mat m, SiteSet support) {
  FockOperator op;
  op.support = sorted_sites(std::move(support));
  op.self_adjoint = is_self_adjoint(m);
  op.gauge_invariant = is_gauge_invariant(fock, m);
  op.matrix = std::move(m);
  return op;
}

bool is_gauge_invariant(const FockSpace& fock, const Mat& a, double tol) {
  Mat n = fock.total_number();
  return (n * a - a * n).norm() <= tol * std::max(1.0, a.norm());
}

bool is_self_adjoint(const Mat& a, double tol) {
  return (a - a.adjoint()).norm() <= tol * std::max(1.0, a.norm());
}

double operator_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
  double top = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(0.0, top));
}

Cx tracial_expectation(const Mat& a) { return a.trace() / static_cast<double>(a.rows()); }

namespace {

// trace out a single mode: (1/2) sum over the two diagonal blocks of that mode
Mat trace_out_mode(const Mat& a, int mode, long dim) {
  const unsigned long bit = 1UL << mode;
  Mat out = Mat::Zero(dim, dim);
  for (long r = 0; r < dim; ++r) {
    if (r & bit) continue;
    for (long c = 0; c < dim; ++c) {
      if (c & bit) continue;
      out(r, c) = 0.5 * (a(r, c) + a(r | bit, c | bit));
      out(r | bit, c | bit) = out(r, c);
    }
  }
  return out;
}

}  // namespace

Mat conditional_expectation(const FockSpace& fock, const SiteSet& m, const Mat& a) {
  if (!is_gauge_invariant(fock, a))
    throw std::invalid_argument("conditional_expectation: input must be gauge invariant");
  std::vector<bool> keep(fock.modes(), false);
  for (int md : modes_of(fock.lattice(), m)) keep[md] = true;
  Mat out = a;
  for (int md = 0; md < fock.modes(); ++md)
    if (!keep[md]) out = trace_out_mode(out, md, fock.dim());
  return out;
}

double decay_norm(const FockSpace& fock, const Mat& a, int nu, Site center) {
  if (!is_gauge_invariant(fock, a))
    throw std::invalid_argument("decay_norm: input must be gauge invariant");
  const TorusLattice& lat = fock.lattice();
  double base = operator_norm(a);
  double sup = 0.0;
  for (int k = 0; k <= lat.max_box_radius(); ++k) {
    Mat ek = conditional_expectation(fock, lat.box(center, k), a);
    double tail = operator_norm(a - ek) * std::pow(1.0 + k, nu);
    sup = std::max(sup, tail);
  }
  return base + sup;
}

std::vector<int> modes_of(const TorusLattice& lat, const SiteSet& m) {
  std::vector<int> out;
  out.reserve(m.size());
  for (const Site& s : m) out.push_back(lat.mode(s));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SiteSet sorted_sites(SiteSet m) {
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
  return m;
}

SiteSet union_sites(const SiteSet& a, const SiteSet& b) {
  SiteSet out = a;
  out.insert(out.end(), b.begin(), b.end());
  return sorted_sites(std::move(out));
}

Mat random_local_probe(const FockSpace& fock, std::mt19937_64& rng, SiteSet* support_out) {
  const TorusLattice& lat = fock.lattice();
  std::uniform_int_distribution<int> dx1(0, lat.l1() - 1), dx2(0, lat.l2() - 1);
  Site c{dx1(rng), dx2(rng)};
  SiteSet patch = sorted_sites({c, lat.shift(c, Site{1, 0}), lat.shift(c, Site{0, 1}),
                                lat.shift(c, Site{1, 1})});
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat a = Mat::Zero(fock.dim(), fock.dim());
  for (const Site& u : patch) {
    for (const Site& v : patch) {
      Cx amp(gauss(rng), gauss(rng));
      a += amp * (fock.creation(u) * fock.annihilation(v));
    }
  }
  a = (a + a.adjoint()).eval();
  a += gauss(rng) * (fock.number_op(patch[0]) * fock.number_op(patch.back()));
  if (support_out) *support_out = patch;
  return a;
}

}  // namespace halltorus
