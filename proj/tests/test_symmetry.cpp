#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>
#include <vector>

#include "scarlab/basis.hpp"
#include "scarlab/hamiltonian.hpp"
#include "scarlab/symmetry.hpp"

using namespace scarlab;

namespace {

std::vector<double> random_unit(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<double> v(n);
  double norm = 0.0;
  for (double& x : v) {
    x = gauss(rng);
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

}  // namespace

TEST_CASE("sector dimensions at zero momentum and even parity", "[symmetry]") {
  const std::pair<int, std::size_t> expected[] = {
      {4, 3}, {8, 8}, {10, 14}, {12, 26}};
  for (auto [L, dim] : expected) {
    ConstrainedBasis basis(L, Boundary::PBC);
    REQUIRE(SymmetrySector(basis, 0, +1).size() == dim);
  }
}

TEST_CASE("momentum sectors tile the whole space", "[symmetry]") {
  for (int L : {9, 12}) {
    ConstrainedBasis basis(L, Boundary::PBC);
    std::size_t total = 0;
    for (int k = 0; k < L; ++k) {
      const bool split = k == 0 || (L % 2 == 0 && k == L / 2);
      if (split) {
        total += SymmetrySector(basis, k, +1).size();
        total += SymmetrySector(basis, k, -1).size();
      } else {
        total += SymmetrySector(basis, k).size();
      }
    }
    REQUIRE(total == basis.size());
  }
}

TEST_CASE("invalid sector requests are rejected", "[symmetry]") {
  ConstrainedBasis open_chain(8, Boundary::OBC);
  REQUIRE_THROWS_AS(SymmetrySector(open_chain, 0), std::invalid_argument);
  ConstrainedBasis ring(8, Boundary::PBC);
  REQUIRE_THROWS_AS(SymmetrySector(ring, 8), std::invalid_argument);
  REQUIRE_THROWS_AS(SymmetrySector(ring, -1), std::invalid_argument);
  // inversion only commutes with translation at the self-conjugate momenta
  REQUIRE_THROWS_AS(SymmetrySector(ring, 1, +1), std::invalid_argument);
  REQUIRE_THROWS_AS(SymmetrySector(ring, 0, 2), std::invalid_argument);
  REQUIRE_NOTHROW(SymmetrySector(ring, 4, -1));
  REQUIRE_NOTHROW(SymmetrySector(ring, 3));
}

TEST_CASE("embedding and projection round-trip", "[symmetry]") {
  ConstrainedBasis basis(10, Boundary::PBC);

  SECTION("real sector") {
    SymmetrySector sec(basis, 0, +1);
    const auto v = random_unit(sec.size(), 7);
    const auto full = sec.embed_real(v);
    REQUIRE(full.size() == basis.size());
    double norm = 0.0;
    for (double x : full) norm += x * x;
    REQUIRE_THAT(norm, Catch::Matchers::WithinAbs(1.0, 1e-12));
    const auto back = sec.project_real(full);
    REQUIRE(back.size() == v.size());
    for (std::size_t a = 0; a < v.size(); ++a) {
      REQUIRE_THAT(back[a], Catch::Matchers::WithinAbs(v[a], 1e-12));
    }
  }

  SECTION("complex sector") {
    SymmetrySector sec(basis, 3);
    const auto vr = random_unit(sec.size(), 11);
    const auto vi = random_unit(sec.size(), 13);
    std::vector<std::complex<double>> v(sec.size());
    for (std::size_t a = 0; a < v.size(); ++a) {
      v[a] = std::complex<double>(vr[a], vi[a]) / std::sqrt(2.0);
    }
    const auto full = sec.embed(v);
    const auto back = sec.project(full);
    for (std::size_t a = 0; a < v.size(); ++a) {
      REQUIRE_THAT(std::abs(back[a] - v[a]),
                   Catch::Matchers::WithinAbs(0.0, 1e-12));
    }
  }
}

TEST_CASE("embedded sector states carry the right quantum numbers",
          "[symmetry]") {
  const int L = 10;
  ConstrainedBasis basis(L, Boundary::PBC);
  SymmetrySector sec(basis, 0, +1);
  const auto v = random_unit(sec.size(), 3);
  const auto full = sec.embed_real(v);
  // translation by one site and reflection both act trivially at k=0, I=+1
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const std::size_t jt = basis.index_of(rotate_left(basis.state(j), L));
    const std::size_t jr = basis.index_of(reflect(basis.state(j), L));
    REQUIRE_THAT(full[jt], Catch::Matchers::WithinAbs(full[j], 1e-12));
    REQUIRE_THAT(full[jr], Catch::Matchers::WithinAbs(full[j], 1e-12));
  }
}

TEST_CASE("every orbit appears in the fully symmetric sector", "[symmetry]") {
  ConstrainedBasis basis(12, Boundary::PBC);
  SymmetrySector sec(basis, 0, +1);
  std::size_t covered = 0;
  for (std::size_t a = 0; a < sec.size(); ++a) covered += sec.orbit_sizes()[a];
  REQUIRE(covered == basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    REQUIRE(sec.orbit_of(j) != kNoOrbit);
  }
}

TEST_CASE("the kinetic operator is block diagonal across sectors",
          "[symmetry]") {
  const int L = 10;
  ConstrainedBasis basis(L, Boundary::PBC);
  SymmetrySector a(basis, 0, +1);
  SymmetrySector b(basis, 0, -1);
  SymmetrySector c(basis, 2);

  const auto v = random_unit(a.size(), 19);
  std::vector<double> full = a.embed_real(v);
  std::vector<double> hv = apply_operator({}, basis, full);

  // the image stays inside the source sector: other sectors see nothing
  const auto leak_b = b.project_real(hv);
  for (double x : leak_b) REQUIRE_THAT(x, Catch::Matchers::WithinAbs(0.0, 1e-12));
  std::vector<std::complex<double>> hv_c(hv.begin(), hv.end());
  const auto leak_c = c.project(hv_c);
  for (auto x : leak_c) {
    REQUIRE_THAT(std::abs(x), Catch::Matchers::WithinAbs(0.0, 1e-12));
  }

  // and the sector matrix reproduces the projected action
  const auto mat = sector_matrix(a);
  const auto pa = a.project_real(hv);
  for (std::size_t r = 0; r < a.size(); ++r) {
    double acc = 0.0;
    for (std::size_t s = 0; s < a.size(); ++s) acc += mat[r + s * a.size()] * v[s];
    REQUIRE_THAT(pa[r], Catch::Matchers::WithinAbs(acc, 1e-11));
  }
}

TEST_CASE("sector matrices are Hermitian", "[symmetry]") {
  ConstrainedBasis basis(10, Boundary::PBC);

  SymmetrySector re(basis, 5, +1);
  const auto m = sector_matrix(re);
  for (std::size_t r = 0; r < re.size(); ++r) {
    for (std::size_t c = 0; c < re.size(); ++c) {
      REQUIRE_THAT(m[r + c * re.size()],
                   Catch::Matchers::WithinAbs(m[c + r * re.size()], 1e-12));
    }
  }

  SymmetrySector cx(basis, 4);
  const auto mc = sector_matrix_complex(cx);
  for (std::size_t r = 0; r < cx.size(); ++r) {
    for (std::size_t c = 0; c < cx.size(); ++c) {
      REQUIRE_THAT(std::abs(mc[r + c * cx.size()] -
                            std::conj(mc[c + r * cx.size()])),
                   Catch::Matchers::WithinAbs(0.0, 1e-12));
    }
  }
}
