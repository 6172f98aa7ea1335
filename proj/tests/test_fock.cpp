#include <doctest.h>

#include <random>

#include "halltorus/fock.hpp"

using namespace halltorus;

namespace {

Mat anticomm(const Mat& a, const Mat& b) { return a * b + b * a; }

FockSpace small_fock() { return FockSpace(TorusLattice(2, 0.0)); }

Mat random_gauge_invariant(const FockSpace& fock, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat a = Mat::Zero(fock.dim(), fock.dim());
  int n = fock.modes();
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      a += Cx(g(rng), g(rng)) * (fock.creation(u) * fock.annihilation(v));
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      a += g(rng) * (fock.creation(u) * fock.annihilation(u) * fock.creation(v) *
                     fock.annihilation(v));
  return a;
}

}  // namespace

TEST_CASE("CAR relations") {
  FockSpace fock = small_fock();
  Mat id = fock.identity();
  for (int x = 0; x < fock.modes(); ++x) {
    Mat ax = fock.annihilation(x);
    CHECK((anticomm(ax, ax.adjoint().eval()) - id).norm() < 1e-14);
    CHECK((ax.adjoint() * ax.adjoint()).norm() < 1e-14);  // Pauli exclusion
    for (int y = x + 1; y < fock.modes(); ++y) {
      Mat ay = fock.annihilation(y);
      CHECK(anticomm(ax, ay).norm() < 1e-14);
      CHECK(anticomm(ax, ay.adjoint().eval()).norm() < 1e-14);
    }
  }
}

TEST_CASE("tracial state basics") {
  FockSpace fock = small_fock();
  CHECK(tracial_expectation(fock.identity()) == Cx(1.0, 0.0));
  CHECK(std::abs(tracial_expectation(fock.number_op(Site{0, 0})) - 0.5) < 1e-14);
  // two-mode evaluation of a hopping monomial
  Mat hop = fock.creation(Site{0, 0}) * fock.annihilation(Site{1, 1});
  CHECK(std::abs(tracial_expectation(hop)) < 1e-14);
}

TEST_CASE("tracial state is tracial and automorphism invariant") {
  FockSpace fock = small_fock();
  std::mt19937_64 rng(42);
  Mat a = random_gauge_invariant(fock, rng);
  Mat b = random_gauge_invariant(fock, rng);
  CHECK(std::abs(tracial_expectation((a * b).eval()) -
                 tracial_expectation((b * a).eval())) < 1e-12);
}

TEST_CASE("conditional expectation defining property") {
  // omega^tr(A B) = omega^tr(E_M(A) B) for all B supported in M
  FockSpace fock = small_fock();
  std::mt19937_64 rng(7);
  SiteSet m = {Site{0, 0}, Site{0, 1}};
  Mat a = random_gauge_invariant(fock, rng);
  Mat ea = conditional_expectation(fock, m, a);
  // B ranges over a basis of the gauge-invariant algebra on M
  std::vector<Mat> basis;
  for (const Site& u : m)
    for (const Site& v : m) basis.push_back(fock.creation(u) * fock.annihilation(v));
  basis.push_back(fock.number_op(m[0]) * fock.number_op(m[1]));
  basis.push_back(fock.identity());
  for (const Mat& b : basis) {
    Cx lhs = tracial_expectation((a * b).eval());
    Cx rhs = tracial_expectation((ea * b).eval());
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("conditional expectation properties") {
  FockSpace fock = small_fock();
  std::mt19937_64 rng(11);
  SiteSet m1 = {Site{0, 0}, Site{0, 1}};
  SiteSet m2 = {Site{0, 1}, Site{1, 0}};
  SiteSet m12 = {Site{0, 1}};
  Mat a = random_gauge_invariant(fock, rng);

  SUBCASE("acts as identity on A_M") {
    Mat local = fock.creation(Site{0, 0}) * fock.annihilation(Site{0, 1});
    local += local.adjoint().eval();
    CHECK((conditional_expectation(fock, m1, local) - local).norm() < 1e-13);
  }
  SUBCASE("empty region gives the tracial state") {
    Mat e = conditional_expectation(fock, {}, a);
    Mat expected = tracial_expectation(a) * fock.identity();
    CHECK((e - expected).norm() < 1e-12);
  }
  SUBCASE("composition gives the intersection") {
    Mat e12 = conditional_expectation(fock, m1, conditional_expectation(fock, m2, a));
    Mat ei = conditional_expectation(fock, m12, a);
    CHECK((e12 - ei).norm() < 1e-12);
  }
  SUBCASE("norm does not increase") {
    CHECK(operator_norm(conditional_expectation(fock, m1, a)) <= operator_norm(a) + 1e-12);
  }
  SUBCASE("module property E_M(ABC) = A E_M(B) C") {
    Mat loc1 = fock.number_op(Site{0, 0});
    Mat loc2 = fock.creation(Site{0, 0}) * fock.annihilation(Site{0, 1});
    loc2 += loc2.adjoint().eval();
    Mat lhs = conditional_expectation(fock, m1, (loc1 * a * loc2).eval());
    Mat rhs = loc1 * conditional_expectation(fock, m1, a) * loc2;
    CHECK((lhs - rhs).norm() < 1e-12);
  }
  SUBCASE("rejects odd input") {
    Mat odd = fock.creation(Site{0, 0});
    CHECK_THROWS_AS(conditional_expectation(fock, m1, odd), std::invalid_argument);
  }
  SUBCASE("E_x(a+_x a_y) vanishes for y outside") {
    Mat hop = fock.creation(Site{0, 0}) * fock.annihilation(Site{1, 1});
    Mat e = conditional_expectation(fock, {Site{0, 0}}, hop);
    CHECK(e.norm() < 1e-13);
  }
}

TEST_CASE("gauge-invariant operators with disjoint supports commute") {
  FockSpace fock = small_fock();
  Mat a = fock.creation(Site{0, 0}) * fock.annihilation(Site{0, 1});  // support column 0
  a += a.adjoint().eval();
  Mat b = fock.creation(Site{1, 0}) * fock.annihilation(Site{1, 1});
  b += b.adjoint().eval();
  CHECK((a * b - b * a).norm() < 1e-14);
  CHECK(is_gauge_invariant(fock, a));
}

TEST_CASE("decay norm examples") {
  SUBCASE("strictly local operators have no tail") {
    FockSpace fock(TorusLattice(2, 0.0));
    Mat n00 = fock.number_op(Site{0, 0});
    CHECK(decay_norm(fock, n00, 3, Site{0, 0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(decay_norm(fock, fock.identity(), 2, Site{0, 0}) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("distance-2 hop, nu = 1") {
    // ||A|| + contributions (1+0)*||A|| at k=0 and (1+1)*||A|| at k=1
    FockSpace fock(TorusLattice::rectangular(5, 2, 0.0, false));
    Site x{0, 0}, y{2, 0};
    Mat a = fock.creation(x) * fock.annihilation(y);
    a += a.adjoint().eval();
    double expected = operator_norm(a) * 3.0;
    CHECK(decay_norm(fock, a, 1, x) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("decay norm submultiplicativity on the 2x2 torus") {
  FockSpace fock = small_fock();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    Mat a = random_gauge_invariant(fock, rng);
    Mat b = random_gauge_invariant(fock, rng);
    for (int nu : {0, 1, 2}) {
      double na = decay_norm(fock, a, nu, Site{0, 0});
      double nb = decay_norm(fock, b, nu, Site{0, 0});
      CHECK(decay_norm(fock, (a * b).eval(), nu, Site{0, 0}) <= 2.0 * na * nb + 1e-9);
      Mat comm = a * b - b * a;
      CHECK(decay_norm(fock, comm, nu, Site{0, 0}) <= 4.0 * na * nb + 1e-9);
    }
  }
}

TEST_CASE("slater determinants reproduce one-body data") {
  // two-point function of a Slater sea: omega(a^+_u a_v) = P^T(u,v)
  FockSpace fock = small_fock();
  Mat h = Mat::Random(4, 4);
  h = (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Mat orbitals = es.eigenvectors().leftCols(2);
  Vec psi = fock.slater(orbitals);
  Mat gamma = (orbitals * orbitals.adjoint()).transpose();
  for (int u = 0; u < 4; ++u) {
    for (int v = 0; v < 4; ++v) {
      Cx val = psi.dot((fock.creation(u) * fock.annihilation(v)) * psi);
      CHECK(std::abs(val - gamma(u, v)) < 1e-12);
    }
  }
}
