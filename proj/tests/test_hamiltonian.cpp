#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <map>
#include <random>
#include <vector>

#include "scarlab/basis.hpp"
#include "scarlab/hamiltonian.hpp"

using namespace scarlab;

namespace {

std::map<std::pair<std::size_t, std::size_t>, double> sparse_entries(
    const SparseOperator& op) {
  std::map<std::pair<std::size_t, std::size_t>, double> m;
  for (std::size_t r = 0; r < op.dimension; ++r) {
    for (std::size_t p = op.row_start[r]; p < op.row_start[r + 1]; ++p) {
      m[{r, op.col[p]}] += op.val[p];
    }
  }
  return m;
}

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<double> v(n);
  for (double& x : v) x = gauss(rng);
  return v;
}

}  // namespace

TEST_CASE("kinetic matrix is symmetric with unit off-diagonal entries",
          "[hamiltonian]") {
  ConstrainedBasis basis(10, Boundary::PBC);
  const auto entries = sparse_entries(assemble({}, basis));
  REQUIRE_FALSE(entries.empty());
  for (const auto& [rc, v] : entries) {
    const auto [r, c] = rc;
    REQUIRE(r != c);  // no diagonal without a staggered field
    REQUIRE(v == 1.0);
    const Word diff = basis.state(r) ^ basis.state(c);
    REQUIRE(std::popcount(diff) == 1);  // single-site moves only
    auto t = entries.find({c, r});
    REQUIRE(t != entries.end());
    REQUIRE(t->second == v);
  }
}

TEST_CASE("matrix-free application agrees with the assembled matrix",
          "[hamiltonian]") {
  ConstrainedBasis basis(11, Boundary::PBC);
  const OperatorSpec spec{OperatorKind::H, 0.37};
  const SparseOperator op = assemble(spec, basis);
  const auto v = random_vector(basis.size(), 23);
  const auto via_free = apply_operator(spec, basis, v);
  std::vector<double> via_matrix(basis.size());
  op.apply(v.data(), via_matrix.data());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    REQUIRE_THAT(via_free[j],
                 Catch::Matchers::WithinAbs(via_matrix[j], 1e-12));
  }
}

TEST_CASE("staggered field weights sublattices with opposite signs",
          "[hamiltonian]") {
  // period-2 crystal: excited even sites give z = +1, empty odd sites give
  // -z = +1, so every site contributes +1 and the value is the maximal L
  REQUIRE(staggered_diagonal(z2_state(8), 8) == 8);
  REQUIRE(staggered_diagonal(z2_prime_state(8), 8) == -8);
  REQUIRE(staggered_diagonal(Word(0), 8) == 0);  // signs cancel on the vacuum
  REQUIRE(staggered_diagonal(Word(0), 9) == -1);  // odd chain has a leftover

  ConstrainedBasis basis(9, Boundary::OBC);
  const auto entries = sparse_entries(assemble({OperatorKind::StaggeredZ}, basis));
  for (const auto& [rc, v] : entries) {
    REQUIRE(rc.first == rc.second);
    REQUIRE(v == staggered_diagonal(basis.state(rc.first), 9));
  }
}

TEST_CASE("particle-hole conjugation anticommutes with the kinetic term",
          "[hamiltonian]") {
  for (Boundary bc : {Boundary::PBC, Boundary::OBC}) {
    ConstrainedBasis basis(10, bc);
    auto v = random_vector(basis.size(), 5);
    // C H C = -H  <=>  C H C v + H v = 0
    auto chcv = v;
    apply_particle_hole(basis, chcv);
    chcv = apply_operator({}, basis, chcv);
    apply_particle_hole(basis, chcv);
    const auto hv = apply_operator({}, basis, v);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      REQUIRE_THAT(chcv[j] + hv[j], Catch::Matchers::WithinAbs(0.0, 1e-12));
    }
  }
}

TEST_CASE("raising and lowering parts grade the crystal distance",
          "[hamiltonian]") {
  ConstrainedBasis basis(12, Boundary::PBC);
  auto [hp, hm] = decompose_pm(basis);

  // H = H+ + H-, and H+ maps distance d to d+1 exactly
  const auto full = sparse_entries(assemble({}, basis));
  const auto plus = sparse_entries(hp);
  const auto minus = sparse_entries(hm);
  REQUIRE(plus.size() + minus.size() == full.size());
  for (const auto& [rc, v] : plus) {
    REQUIRE(full.count(rc) == 1);
    REQUIRE(basis.hamming(rc.first) == basis.hamming(rc.second) + 1);
  }
  for (const auto& [rc, v] : minus) {
    REQUIRE(basis.hamming(rc.first) == basis.hamming(rc.second) - 1);
  }

  // the two parts are mutual transposes
  for (const auto& [rc, v] : plus) {
    auto t = minus.find({rc.second, rc.first});
    REQUIRE(t != minus.end());
    REQUIRE(t->second == v);
  }

  REQUIRE_THROWS_AS(decompose_pm(ConstrainedBasis(9, Boundary::PBC)),
                    std::invalid_argument);
}

TEST_CASE("operator application validates vector length", "[hamiltonian]") {
  ConstrainedBasis basis(8, Boundary::PBC);
  std::vector<double> wrong(basis.size() + 1, 0.0);
  REQUIRE_THROWS_AS(apply_operator({}, basis, wrong), std::invalid_argument);
  REQUIRE_THROWS_AS(apply_particle_hole(basis, wrong), std::invalid_argument);
}
