#include "halltorus/interaction.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace halltorus {

MagneticTranslation::MagneticTranslation(const FockSpace& fock, double flux)
    : fock_(&fock), flux_(flux) {}

const Mat& MagneticTranslation::unitary(Site gamma) const {
  const TorusLattice& lat = fock_->lattice();
  gamma = Site{lat.wrap1(gamma.x1), lat.wrap2(gamma.x2)};
  auto key = std::make_pair(gamma.x1, gamma.x2);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  const int n = fock_->modes();
  const long dim = fock_->dim();
  // mode permutation and per-mode creation phase: U a^+_y U^+ = e^{-i b y1 g2} a^+_{y+g}
  std::vector<int> perm(n);
  std::vector<Cx> phase(n);
  for (int m = 0; m < n; ++m) {
    Site y = lat.site(m);
    perm[m] = lat.mode(lat.shift(y, gamma));
    phase[m] = std::exp(Cx(0.0, -flux_ * y.x1 * gamma.x2));
  }

  Mat u = Mat::Zero(dim, dim);
  std::vector<int> occ, img;
  for (long s = 0; s < dim; ++s) {
    occ.clear();
    img.clear();
    Cx amp(1.0, 0.0);
    for (int m = 0; m < n; ++m) {
      if (s & (1L << m)) {
        occ.push_back(m);
        img.push_back(perm[m]);
        amp *= phase[m];
      }
    }
    // fermionic sign from sorting the image modes ascending
    int inversions = 0;
    for (std::size_t i = 0; i < img.size(); ++i)
      for (std::size_t j = i + 1; j < img.size(); ++j)
        if (img[i] > img[j]) ++inversions;
    if (inversions & 1) amp = -amp;
    long t = 0;
    for (int m : img) t |= 1L << m;
    u(t, s) = amp;
  }
  return cache_.emplace(key, std::move(u)).first->second;
}

Mat MagneticTranslation::apply(Site gamma, const Mat& a) const {
  const Mat& u = unitary(gamma);
  return u * a * u.adjoint();
}

FockOperator MagneticTranslation::apply(Site gamma, const FockOperator& a) const {
  FockOperator out;
  out.matrix = apply(gamma, a.matrix);
  out.support = shifted(fock_->lattice(), a.support, gamma);
  out.self_adjoint = a.self_adjoint;
  out.gauge_invariant = a.gauge_invariant;
  if (a.center) out.center = fock_->lattice().shift(*a.center, gamma);
  return out;
}

Mat MagneticTranslation::sum_translates(const Mat& a) const {
  Mat out = Mat::Zero(a.rows(), a.cols());
  for (const Site& g : fock_->lattice().all_sites()) out += apply(g, a);
  return out;
}

bool MagneticTranslation::is_compatible(const Mat& a, double tol) const {
  const TorusLattice& lat = fock_->lattice();
  const std::vector<std::pair<Site, Site>> samples = {
      {Site{1, 0}, Site{0, 1}},
      {Site{1, 1}, Site{lat.l1() - 1, 0}},
      {Site{0, 1}, Site{0, 1}},
  };
  double scale = std::max(1.0, a.norm());
  for (const auto& [g1, g2] : samples) {
    Mat lhs = apply(g1, apply(g2, a));
    Mat rhs = apply(Site{g1.x1 + g2.x1, g1.x2 + g2.x2}, a);
    if ((lhs - rhs).norm() > tol * scale) return false;
  }
  return true;
}

void Interaction::add(SiteSet sites, Mat op, double drop_tol) {
  if (op.norm() <= drop_tol) return;
  sites = sorted_sites(std::move(sites));
  for (Term& t : terms_) {
    if (t.sites == sites) {
      t.op += op;
      return;
    }
  }
  terms_.push_back(Term{std::move(sites), std::move(op)});
}

Mat Interaction::summed(long dim) const {
  Mat out = Mat::Zero(dim, dim);
  for (const Term& t : terms_) out += t.op;
  return out;
}

Mat Interaction::origin_term(const TorusLattice& lat, long dim) const {
  Mat out = Mat::Zero(dim, dim);
  for (const Term& t : terms_) {
    Site s = standard_shift(lat, t.sites);
    if (s.x1 == 0 && s.x2 == 0) out += t.op;
  }
  return out;
}

bool is_t_periodic(const TorusLattice& lat, const Interaction& phi,
                   const MagneticTranslation& t, double tol) {
  for (const auto& term : phi.terms()) {
    for (Site g : {Site{1, 0}, Site{0, 1}}) {
      SiteSet target = shifted(lat, term.sites, g);
      Mat expect = t.apply(g, term.op);
      bool found = false;
      for (const auto& other : phi.terms()) {
        if (other.sites == target) {
          if ((other.op - expect).norm() > tol * std::max(1.0, expect.norm())) return false;
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
  }
  return true;
}

double interaction_norm(const TorusLattice& lat, const Interaction& phi, int nu) {
  double best = 0.0;
  for (const Site& x : lat.all_sites()) {
    double acc = 0.0;
    for (const auto& term : phi.terms()) {
      if (std::find(term.sites.begin(), term.sites.end(), x) == term.sites.end()) continue;
      acc += std::pow(1.0 + lat.diameter(term.sites), nu) * operator_norm(term.op);
    }
    best = std::max(best, acc);
  }
  return best;
}

Mat magnetic_translate(const MagneticTranslation& t, Site gamma, const Mat& a) {
  return t.apply(gamma, a);
}

Interaction periodize(const FockSpace& fock, const MagneticTranslation& t,
                      const Mat& a, double drop_tol) {
  if (!t.is_compatible(a))
    throw std::invalid_argument("periodize: operator is not T-compatible");
  const TorusLattice& lat = fock.lattice();
  Interaction out;
  out.translation_tag = &t;
  Mat prev = Mat::Zero(fock.dim(), fock.dim());
  const Site origin{0, 0};
  for (int k = 0; k <= lat.max_box_radius(); ++k) {
    SiteSet box = lat.box(origin, k);
    Mat ek = conditional_expectation(fock, box, a);
    Mat dk = ek - prev;
    prev = ek;
    if (dk.norm() <= drop_tol) continue;
    for (const Site& g : lat.all_sites())
      out.add(shifted(lat, box, g), t.apply(g, dk), drop_tol);
  }
  return out;
}

namespace {

// unwrapped coordinates of a support around its first site; throws on wrap
std::vector<std::pair<double, double>> unwrap_support(const TorusLattice& lat,
                                                      const SiteSet& support) {
  std::vector<std::pair<double, double>> pos;
  pos.reserve(support.size());
  for (const Site& s : support) {
    Site d = lat.displacement(s, support.front());
    pos.emplace_back(d.x1, d.x2);
  }
  // consistency: pairwise displacements must agree with the unwrap
  for (std::size_t i = 0; i < support.size(); ++i) {
    for (std::size_t j = i + 1; j < support.size(); ++j) {
      Site d = lat.displacement(support[i], support[j]);
      double e1 = pos[i].first - pos[j].first - d.x1;
      double e2 = pos[i].second - pos[j].second - d.x2;
      if (std::abs(e1) > 0.5 || std::abs(e2) > 0.5)
        throw std::invalid_argument(
            "position Liouvillian: support wraps the torus and no center is declared");
    }
  }
  return pos;
}

}  // namespace

Mat position_liouvillian(const FockSpace& fock, const Mat& a, const SiteSet& support,
                         int direction, std::optional<Site> center) {
  const TorusLattice& lat = fock.lattice();
  Mat out = Mat::Zero(fock.dim(), fock.dim());
  if (support.empty()) return out;
  if (center) {
    for (const Site& s : support) {
      Site d = lat.displacement(s, *center);
      double w = (direction == 1) ? d.x1 : d.x2;
      Mat nx = fock.number_op(s);
      out += w * (nx * a - a * nx);
    }
    return out;
  }
  auto pos = unwrap_support(lat, support);
  double c = 0.0;
  for (const auto& p : pos) c += (direction == 1) ? p.first : p.second;
  c /= static_cast<double>(pos.size());
  for (std::size_t i = 0; i < support.size(); ++i) {
    double w = ((direction == 1) ? pos[i].first : pos[i].second) - c;
    Mat nx = fock.number_op(support[i]);
    out += w * (nx * a - a * nx);
  }
  return out;
}

Mat liouvillian_apply(const FockSpace& fock, const LiouvillianSpec& spec,
                      const FockOperator& a) {
  if (!a.gauge_invariant)
    throw std::invalid_argument("liouvillian_apply: operator must be gauge invariant");
  Mat out = Mat::Zero(fock.dim(), fock.dim());
  if (spec.p != 0.0 && spec.phi != nullptr) {
    Mat phi_sum = spec.phi->summed(fock.dim());
    out += spec.p * (phi_sum * a.matrix - a.matrix * phi_sum);
  }
  if (spec.q != 0.0)
    out += spec.q *
           position_liouvillian(fock, a.matrix, a.support, spec.direction, a.center);
  return out;
}

Interaction commutator_interaction(const Interaction& phi, const Interaction& psi,
                                   long dim, double drop_tol) {
  if (phi.translation_tag != psi.translation_tag)
    throw std::invalid_argument("commutator_interaction: mismatched translations");
  (void)dim;
  Interaction out;
  out.translation_tag = phi.translation_tag;
  for (const auto& t1 : phi.terms()) {
    for (const auto& t2 : psi.terms()) {
      Mat c = t1.op * t2.op - t2.op * t1.op;
      if (c.norm() <= drop_tol) continue;
      out.add(union_sites(t1.sites, t2.sites), std::move(c), drop_tol);
    }
  }
  return out;
}

State State::pure(Vec v) {
  State s;
  s.kind = Kind::pure;
  double n = v.norm();
  if (n < 1e-14) throw std::invalid_argument("State::pure: zero vector");
  s.vector = v / n;
  return s;
}

State State::projector(Mat rho) {
  State s;
  s.kind = Kind::projector;
  double tr = rho.trace().real();
  if (tr < 1e-14) throw std::invalid_argument("State::projector: zero trace");
  s.density = rho / tr;
  return s;
}

State State::quasi_free(Mat gamma) {
  State s;
  s.kind = Kind::quasi_free;
  Eigen::SelfAdjointEigenSolver<Mat> es(gamma);
  if (es.eigenvalues().minCoeff() < -1e-10 || es.eigenvalues().maxCoeff() > 1.0 + 1e-10)
    throw std::invalid_argument("State::quasi_free: need 0 <= Gamma <= 1");
  s.two_point = std::move(gamma);
  return s;
}

Cx State::expect(const FockSpace& fock, const Mat& a) const {
  switch (kind) {
    case Kind::pure:
      return vector.dot(a * vector);
    case Kind::projector:
      return (density * a).trace();
    case Kind::quasi_free: {
      // projector Gamma: realize as the Slater determinant of its range.
      // Gamma_{uv} = omega(a^+_u a_v), so the occupied orbitals are the
      // conjugates of Gamma's unit-eigenvalue eigenvectors.
      Eigen::SelfAdjointEigenSolver<Mat> es(two_point);
      int n = static_cast<int>(two_point.rows());
      std::vector<int> occ;
      for (int i = 0; i < n; ++i) {
        double v = es.eigenvalues()(i);
        if (v > 0.5) occ.push_back(i);
        if (v > 1e-8 && v < 1.0 - 1e-8)
          throw std::invalid_argument("quasi-free expectation needs a projector Gamma");
      }
      Mat orbitals(n, static_cast<int>(occ.size()));
      for (std::size_t k = 0; k < occ.size(); ++k)
        orbitals.col(k) = es.eigenvectors().col(occ[k]).conjugate();
      Vec psi = fock.slater(orbitals);
      return psi.dot(a * psi);
    }
  }
  throw std::logic_error("unreachable");
}

bool is_t_periodic_state(const FockSpace& fock, const State& omega,
                         const MagneticTranslation& t, double tol) {
  Mat probes[2] = {fock.number_op(Site{0, 0}), fock.hop(Site{1, 0}, Site{0, 0})};
  for (const Mat& a : probes) {
    Cx base = omega.expect(fock, a);
    for (Site g : {Site{1, 0}, Site{0, 1}, Site{1, 1}}) {
      Cx shifted_val = omega.expect(fock, t.apply(g, a));
      if (std::abs(shifted_val - base) > tol) return false;
    }
  }
  return true;
}

double per_volume_expectation(const FockSpace& fock, const State& omega,
                              const Interaction& phi, const MagneticTranslation& t) {
  if (!is_t_periodic_state(fock, omega, t))
    throw std::invalid_argument("per_volume_expectation: state is not T-periodic");
  Cx val = omega.expect(fock, phi.origin_term(fock.lattice(), fock.dim()));
  return val.real();
}

double per_volume_via_average(const FockSpace& fock, const State& omega,
                              const Interaction& phi) {
  Cx acc(0.0, 0.0);
  for (const auto& term : phi.terms()) acc += omega.expect(fock, term.op);
  return acc.real() / static_cast<double>(fock.lattice().num_sites());
}

}  // namespace halltorus
