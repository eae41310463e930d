#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "scarlab/basis.hpp"
#include "scarlab/fsa.hpp"

using namespace scarlab;

TEST_CASE("ladder closes after exactly L steps", "[fsa]") {
  for (int L = 4; L <= 16; L += 2) {
    ConstrainedBasis basis(L, Boundary::PBC);
    const auto f = run_fsa(basis);
    INFO("L=" << L);
    REQUIRE(f.beta.size() == static_cast<std::size_t>(L));
    REQUIRE(f.energies.size() == static_cast<std::size_t>(L) + 1);
    REQUIRE(f.step_error.size() == static_cast<std::size_t>(L) + 1);
    REQUIRE(f.closure_residual < 1e-12);
    // the walk starts and ends on single product states
    REQUIRE(f.support.front().size() == 1);
    REQUIRE(f.support.back().size() == 1);
    REQUIRE(basis.state(f.support.front()[0]) == z2_state(L));
    REQUIRE(basis.state(f.support.back()[0]) == z2_prime_state(L));
  }
}

TEST_CASE("ladder construction rejects unsupported geometries", "[fsa]") {
  REQUIRE_THROWS_AS(run_fsa(ConstrainedBasis(8, Boundary::OBC)),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(run_fsa(ConstrainedBasis(7, Boundary::PBC)),
                    std::invalid_argument);
}

TEST_CASE("frozen ladder spectrum at eight sites", "[fsa]") {
  ConstrainedBasis basis(8, Boundary::PBC);
  const auto f = run_fsa(basis);
  const double expected[] = {-4.82695618453558, -3.854861300822952,
                             -2.642256588731415, -1.340758218598655, 0.0};
  for (std::size_t i = 0; i < 5; ++i) {
    REQUIRE_THAT(f.energies[i],
                 Catch::Matchers::WithinAbs(expected[i], 1e-10));
    REQUIRE_THAT(f.energies[8 - i],
                 Catch::Matchers::WithinAbs(-expected[i], 1e-10));
  }
  REQUIRE_THAT(f.beta[0], Catch::Matchers::WithinAbs(2.0, 1e-12));
  REQUIRE_THAT(f.beta[1],
               Catch::Matchers::WithinAbs(std::sqrt(6.0), 1e-12));
}

TEST_CASE("frozen accuracy against the exact eigenstates", "[fsa]") {
  const struct {
    int L;
    double mean, max;
  } cases[] = {{8, 0.00196396, 0.00692042},
               {12, 0.00308581, 0.00986741},
               {16, 0.0030538, 0.00920307}};
  for (const auto& c : cases) {
    ConstrainedBasis basis(c.L, Boundary::PBC);
    const auto f = run_fsa(basis);
    INFO("L=" << c.L);
    REQUIRE_THAT(f.mean_error(), Catch::Matchers::WithinAbs(c.mean, 1e-6));
    REQUIRE_THAT(f.max_error(), Catch::Matchers::WithinAbs(c.max, 1e-6));
    // the first spinwave beta is exactly sqrt(L / 2)
    REQUIRE_THAT(f.beta[0],
                 Catch::Matchers::WithinAbs(std::sqrt(c.L / 2.0), 1e-12));
  }
}

TEST_CASE("layers are disjoint normalized Krylov states", "[fsa]") {
  ConstrainedBasis basis(10, Boundary::PBC);
  const auto f = run_fsa(basis);
  std::set<std::uint32_t> seen;
  for (std::size_t n = 0; n < f.support.size(); ++n) {
    REQUIRE(f.support[n].size() == f.coeff[n].size());
    double norm = 0.0;
    for (std::size_t m = 0; m < f.support[n].size(); ++m) {
      REQUIRE(seen.insert(f.support[n][m]).second);  // layers never overlap
      norm += f.coeff[n][m] * f.coeff[n][m];
      // each layer lives at its own crystal distance
      REQUIRE(basis.hamming(f.support[n][m]) == static_cast<int>(n));
    }
    REQUIRE_THAT(norm, Catch::Matchers::WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("eigenmode embeddings and overlap bookkeeping", "[fsa]") {
  ConstrainedBasis basis(12, Boundary::PBC);
  const auto f = run_fsa(basis);

  const auto ov = fsa_reference_overlaps(f);
  double total = 0.0;
  for (double x : ov) total += x;
  REQUIRE_THAT(total, Catch::Matchers::WithinAbs(1.0, 1e-12));

  const auto mode = fsa_embedded_mode(f, basis, 3);
  double norm = 0.0;
  for (double x : mode) norm += x * x;
  REQUIRE_THAT(norm, Catch::Matchers::WithinAbs(1.0, 1e-12));

  // the profile of an embedded eigenmode is its own squared coordinates
  const auto prof = fsa_profile(f, mode);
  double ptotal = 0.0;
  for (std::size_t n = 0; n < prof.size(); ++n) {
    const double c = f.modes[n + 3 * prof.size()];
    REQUIRE_THAT(prof[n], Catch::Matchers::WithinAbs(c * c, 1e-12));
    ptotal += prof[n];
  }
  REQUIRE_THAT(ptotal, Catch::Matchers::WithinAbs(1.0, 1e-12));

  REQUIRE_THROWS_AS(fsa_embedded_mode(f, basis, 13), std::invalid_argument);
}
