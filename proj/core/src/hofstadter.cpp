#include "halltorus/hofstadter.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace halltorus {

Mat one_body_kernel(const TorusLattice& lat) {
  const int n = lat.num_sites();
  const double b = lat.flux();
  Mat h = Mat::Zero(n, n);
  for (const Site& x : lat.all_sites()) {
    int m = lat.mode(x);
    // vertical neighbour, amplitude 1
    int mv = lat.mode(lat.shift(x, Site{0, 1}));
    h(mv, m) += 1.0;
    h(m, mv) += 1.0;
    // horizontal neighbour, Landau-gauge phase (orientation-pinned)
    int mh = lat.mode(lat.shift(x, Site{1, 0}));
    Cx ph = std::exp(Cx(0.0, -b * x.x2));
    h(mh, m) += ph;
    h(m, mh) += std::conj(ph);
  }
  return h;
}

OneBodyModel one_body_hamiltonian(double b, int side, double mu) {
  OneBodyModel model{TorusLattice(side, b), mu, Mat(), RVec(), Mat()};
  model.h = one_body_kernel(model.lat);
  Eigen::SelfAdjointEigenSolver<Mat> es(model.h);
  model.evals = es.eigenvalues();
  model.evecs = es.eigenvectors();
  return model;
}

double OneBodyModel::gap_at_mu() const {
  double d = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < evals.size(); ++i) d = std::min(d, std::abs(evals(i) - mu));
  return d;
}

int OneBodyModel::occupied() const {
  int n = 0;
  for (Eigen::Index i = 0; i < evals.size(); ++i)
    if (evals(i) < mu) ++n;
  return n;
}

Mat fermi_projection(const OneBodyModel& model) {
  if (model.gap_at_mu() <= 1e-8)
    throw std::invalid_argument("fermi_projection: mu lies in the spectrum");
  int nocc = model.occupied();
  Mat occ = model.evecs.leftCols(nocc);
  return occ * occ.adjoint();
}

double one_body_chern_dc(const TorusLattice& lat, const Mat& p) {
  const int n = lat.num_sites();
  Mat c1 = Mat::Zero(n, n), c2 = Mat::Zero(n, n);
  for (int um = 0; um < n; ++um) {
    Site u = lat.site(um);
    for (int vm = 0; vm < n; ++vm) {
      Site d = lat.displacement(u, lat.site(vm));
      c1(um, vm) = static_cast<double>(d.x1) * p(um, vm);
      c2(um, vm) = static_cast<double>(d.x2) * p(um, vm);
    }
  }
  Cx tr = (Cx(0.0, 1.0) * (p * (c1 * c2 - c2 * c1))).trace();
  return tr.real() / static_cast<double>(n);
}

double one_body_chern_dc(const OneBodyModel& model) {
  return one_body_chern_dc(model.lat, fermi_projection(model));
}

namespace {

// Bloch Hamiltonian of the flux-p/q model on a 1 x q magnetic cell (cell
// coordinate = x2); k1 in [0,2pi), k2 in [0,2pi/q).
Mat bloch_h(int p, int q, double k1, double k2) {
  const double b = kTwoPi * p / q;
  Mat h = Mat::Zero(q, q);
  for (int j = 0; j < q; ++j) {
    int jn = (j + 1) % q;
    Cx vert = (jn == 0) ? std::exp(Cx(0.0, -k2 * q)) : Cx(1.0, 0.0);
    h(jn, j) += vert;
    h(j, jn) += std::conj(vert);
    h(j, j) += 2.0 * std::cos(k1 - b * j);
  }
  return h;
}

double fhs_sum(int p, int q, int bands, int nk) {
  std::vector<Mat> occ(static_cast<std::size_t>(nk) * nk);
  for (int i = 0; i < nk; ++i) {
    for (int j = 0; j < nk; ++j) {
      double k1 = kTwoPi * i / nk;
      double k2 = (kTwoPi / q) * j / nk;
      Eigen::SelfAdjointEigenSolver<Mat> es(bloch_h(p, q, k1, k2));
      occ[static_cast<std::size_t>(i) * nk + j] = es.eigenvectors().leftCols(bands);
    }
  }
  auto link = [&](int i1, int j1, int i2, int j2) {
    Mat o = occ[static_cast<std::size_t>(i1) * nk + j1].adjoint() *
            occ[static_cast<std::size_t>(i2) * nk + j2];
    return o.determinant();
  };
  double total = 0.0;
  for (int i = 0; i < nk; ++i) {
    for (int j = 0; j < nk; ++j) {
      int i2 = (i + 1) % nk, j2 = (j + 1) % nk;
      Cx loop = link(i, j, i2, j) * link(i2, j, i2, j2) * link(i2, j2, i, j2) *
                link(i, j2, i, j);
      total += std::arg(loop);
    }
  }
  return total / kTwoPi;
}

}  // namespace

int kspace_chern(int p, int q, int bands) {
  if (q <= 0 || bands <= 0 || bands > q)
    throw std::invalid_argument("kspace_chern: need 0 < bands <= q");
  int prev = 0;
  bool have_prev = false;
  for (int nk = 6; nk <= 96; nk *= 2) {
    double s = fhs_sum(p, q, bands, nk);
    int rounded = static_cast<int>(std::lround(s));
    if (std::abs(s - rounded) < 1e-2) {
      if (have_prev && rounded == prev) return rounded;
      prev = rounded;
      have_prev = true;
    } else {
      have_prev = false;
    }
  }
  throw std::runtime_error("kspace_chern: integer did not stabilize (gap closed?)");
}

ManyBodyModel many_body_hamiltonian(double b, double mu, double lambda, int side,
                                    const Mat* user_v0, const SiteSet* user_v0_support) {
  TorusLattice lat(side, b);
  if (lat.num_sites() > 12)
    throw std::invalid_argument("many_body_hamiltonian: lattice exceeds the dense cap");

  ManyBodyModel m;
  m.b = b;
  m.mu = mu;
  m.lambda = lambda;
  m.fock = std::make_shared<FockSpace>(lat);
  m.trans = std::make_shared<MagneticTranslation>(*m.fock, b);
  const FockSpace& fock = *m.fock;
  const MagneticTranslation& t = *m.trans;

  // origin pieces of H0: two bonds and the chemical-potential term
  Mat hx = fock.hop(Site{1, 0}, Site{0, 0});
  Mat hy = fock.hop(Site{0, 1}, Site{0, 0});
  Mat onsite = -mu * fock.number_op(Site{0, 0});

  m.ham.translation_tag = &t;
  m.pot.translation_tag = &t;
  for (const Site& g : lat.all_sites()) {
    m.ham.add({g, lat.shift(g, Site{1, 0})}, t.apply(g, hx));
    m.ham.add({g, lat.shift(g, Site{0, 1})}, t.apply(g, hy));
    if (mu != 0.0) m.ham.add({g}, t.apply(g, onsite));
  }

  Mat v0;
  SiteSet v0_support;
  if (user_v0 != nullptr) {
    v0 = *user_v0;
    v0_support = user_v0_support ? *user_v0_support : lat.all_sites();
  } else {
    Mat n00 = fock.number_op(Site{0, 0});
    v0 = n00 * fock.number_op(Site{1, 0}) + n00 * fock.number_op(Site{0, 1});
    v0_support = sorted_sites({Site{0, 0}, Site{1, 0}, Site{0, 1}});
  }
  if (!is_gauge_invariant(fock, v0) || !is_self_adjoint(v0))
    throw std::invalid_argument("many_body_hamiltonian: V must be self-adjoint and gauge invariant");
  for (const Site& g : lat.all_sites())
    m.pot.add(shifted(lat, v0_support, g), t.apply(g, v0));

  if (lambda != 0.0) {
    for (const Site& g : lat.all_sites())
      m.ham.add(shifted(lat, v0_support, g), lambda * t.apply(g, v0));
  }

  m.v0 = std::move(v0);
  m.v_sum = m.pot.summed(fock.dim());
  m.h_sum = m.ham.summed(fock.dim());
  m.h0 = m.ham.origin_term(lat, fock.dim());
  m.h0_support = sorted_sites({Site{0, 0}, Site{1, 0}, Site{0, 1}});
  return m;
}

Mat SpectralCache::ground_projector() const {
  Mat occ = evecs.leftCols(ground_multiplicity);
  return occ * occ.adjoint();
}

SpectralCache diagonalize(const Mat& h, double degeneracy_tol) {
  SpectralCache c;
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  c.evals = es.eigenvalues();
  c.evecs = es.eigenvectors();
  c.ground_energy = c.evals(0);
  int mult = 1;
  while (mult < c.evals.size() && c.evals(mult) - c.evals(0) < degeneracy_tol) ++mult;
  c.ground_multiplicity = mult;
  c.degenerate = mult > 1;
  c.gap = (mult < c.evals.size()) ? c.evals(mult) - c.evals(0) : 0.0;
  Mat recon = c.evecs * c.evals.asDiagonal() * c.evecs.adjoint();
  c.reconstruction_error = (recon - h).norm() / std::max(1.0, h.norm());
  return c;
}

State ground_state(const SpectralCache& cache) {
  if (cache.degenerate) return State::projector(cache.ground_projector());
  return State::pure(cache.evecs.col(0));
}

GapCertificate gap_certificate(const FockSpace& fock, const State& omega,
                               const Mat& h_sum, double g, int samples,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GapCertificate cert;
  cert.threshold = g;
  cert.min_ratio = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    Mat a = random_local_probe(fock, rng, nullptr);
    Cx mean = omega.expect(fock, a);
    Cx sq = omega.expect(fock, (a.adjoint() * a).eval());
    double var = sq.real() - std::norm(mean);
    if (var < 1e-14) {
      ++cert.skipped;
      continue;
    }
    Mat lha = h_sum * a - a * h_sum;
    double num = omega.expect(fock, (a.adjoint() * lha).eval()).real();
    cert.min_ratio = std::min(cert.min_ratio, num / var);
    ++cert.samples_used;
  }
  cert.pass = cert.min_ratio >= g - 1e-9;
  return cert;
}

}  // namespace halltorus
