#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace halltorus {

struct Site {
  int x1 = 0;
  int x2 = 0;
  friend auto operator<=>(const Site&, const Site&) = default;
};

using SiteSet = std::vector<Site>;  // kept sorted and unique

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Finite torus with (optionally) magnetic periodic boundary conditions.
// Sites are (x1, x2), 0 <= xi < Li, mode order lexicographic in (x1, x2).
// The spec's lattice is square; the rectangular constructor exists for tests
// that need anisotropic minimal-image distances within the dense-Fock cap.
class TorusLattice {
 public:
  TorusLattice(int side, double flux, bool magnetic_pbc = true)
      : TorusLattice(side, side, flux, magnetic_pbc) {}

  static TorusLattice rectangular(int l1, int l2, double flux,
                                  bool magnetic_pbc = true) {
    return TorusLattice(l1, l2, flux, magnetic_pbc);
  }

  int l1() const { return l1_; }
  int l2() const { return l2_; }
  int side() const {
    if (l1_ != l2_) throw std::logic_error("side(): lattice is not square");
    return l1_;
  }
  int num_sites() const { return l1_ * l2_; }
  double flux() const { return flux_; }
  bool magnetic_pbc() const { return magnetic_pbc_; }

  int mode(Site s) const { return wrap1(s.x1) * l2_ + wrap2(s.x2); }
  Site site(int m) const { return Site{m / l2_, m % l2_}; }

  int wrap1(int x) const { return ((x % l1_) + l1_) % l1_; }
  int wrap2(int x) const { return ((x % l2_) + l2_) % l2_; }

  // minimal-image representative of a displacement, window (-L/2, L/2]
  int min_image1(int d) const { return min_image(d, l1_); }
  int min_image2(int d) const { return min_image(d, l2_); }

  Site shift(Site s, Site gamma) const {
    return Site{wrap1(s.x1 + gamma.x1), wrap2(s.x2 + gamma.x2)};
  }

  Site displacement(Site a, Site b) const {  // minimal image of a - b
    return Site{min_image1(a.x1 - b.x1), min_image2(a.x2 - b.x2)};
  }

  int dist_inf(Site a, Site b) const {
    Site d = displacement(a, b);
    return std::max(std::abs(d.x1), std::abs(d.x2));
  }

  int max_box_radius() const { return std::min(l1_, l2_) / 2; }

  std::vector<Site> all_sites() const {
    std::vector<Site> out;
    out.reserve(num_sites());
    for (int x1 = 0; x1 < l1_; ++x1)
      for (int x2 = 0; x2 < l2_; ++x2) out.push_back(Site{x1, x2});
    return out;
  }

  // box Lambda_k around `center` in torus-minimal-image geometry
  SiteSet box(Site center, int k) const {
    SiteSet out;
    for (const Site& s : all_sites())
      if (dist_inf(s, center) <= k) out.push_back(s);
    return out;
  }

  // diameter of a finite site set, minimal-image inf-distance, capped at L-1
  int diameter(const SiteSet& m) const {
    int d = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = i + 1; j < m.size(); ++j)
        d = std::max(d, dist_inf(m[i], m[j]));
    return std::min(d, std::max(l1_, l2_) - 1);
  }

 private:
  TorusLattice(int l1, int l2, double flux, bool magnetic_pbc)
      : l1_(l1), l2_(l2), flux_(flux), magnetic_pbc_(magnetic_pbc) {
    if (l1 < 1 || l2 < 1) throw std::invalid_argument("lattice sides must be positive");
    if (magnetic_pbc_) {
      check_quantized(flux_ * l1_, l1);
      check_quantized(flux_ * l2_, l2);
    }
  }

  static void check_quantized(double phi, int side) {
    double r = phi / kTwoPi;
    if (std::abs(r - std::round(r)) > 1e-12)
      throw std::invalid_argument(
          "flux quantization violated: b*" + std::to_string(side) +
          " must be an integer multiple of 2*pi");
  }

  static int min_image(int d, int period) {
    int r = ((d % period) + period) % period;
    if (2 * r > period) r -= period;
    return r;
  }

  int l1_, l2_;
  double flux_;
  bool magnetic_pbc_;
};

// centroid-based standard-representative shift: the unique torus shift whose
// application puts the (minimal-image) center of mass of M in (-1/2, 1/2]^2
inline Site standard_shift(const TorusLattice& lat, const SiteSet& m) {
  if (m.empty()) throw std::invalid_argument("standard_shift: empty site set");
  // unwrap relative to the first site so the centroid is well defined
  double c1 = 0.0, c2 = 0.0;
  for (const Site& s : m) {
    Site d = lat.displacement(s, m.front());
    c1 += d.x1;
    c2 += d.x2;
  }
  c1 = c1 / static_cast<double>(m.size()) + m.front().x1;
  c2 = c2 / static_cast<double>(m.size()) + m.front().x2;
  // shift s(M) with c + s(M) in (-1/2, 1/2]^2:  s = -ceil(c - 1/2)
  auto shift_of = [](double c) { return -static_cast<int>(std::ceil(c - 0.5)); };
  return Site{shift_of(c1), shift_of(c2)};
}

inline SiteSet shifted(const TorusLattice& lat, const SiteSet& m, Site gamma) {
  SiteSet out;
  out.reserve(m.size());
  for (const Site& s : m) out.push_back(lat.shift(s, gamma));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace halltorus
