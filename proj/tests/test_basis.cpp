#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "scarlab/basis.hpp"
#include "scarlab/fibonacci.hpp"

using namespace scarlab;

namespace {

std::size_t brute_force_count(int L, Boundary bc) {
  std::size_t n = 0;
  for (std::uint64_t s = 0; s < (std::uint64_t(1) << L); ++s) {
    if (is_valid(static_cast<Word>(s), L, bc)) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("dimension matches brute force and the closed forms", "[basis]") {
  for (int L = 2; L <= 14; ++L) {
    for (Boundary bc : {Boundary::PBC, Boundary::OBC}) {
      ConstrainedBasis basis(L, bc);
      const std::size_t formula =
          bc == Boundary::PBC ? dimension_pbc(L) : dimension_obc(L);
      INFO("L=" << L << " bc=" << (bc == Boundary::PBC ? "pbc" : "obc"));
      REQUIRE(basis.size() == brute_force_count(L, bc));
      REQUIRE(basis.size() == formula);
    }
  }
  REQUIRE(ConstrainedBasis(6, Boundary::PBC).size() == 18);
  REQUIRE(dimension_pbc(32) == 4870847);
}

TEST_CASE("states are ascending, unique, and constraint-respecting", "[basis]") {
  for (Boundary bc : {Boundary::PBC, Boundary::OBC}) {
    ConstrainedBasis basis(10, bc);
    const auto& st = basis.states();
    REQUIRE(std::is_sorted(st.begin(), st.end()));
    REQUIRE(std::adjacent_find(st.begin(), st.end()) == st.end());
    for (std::size_t j = 0; j < st.size(); ++j) {
      REQUIRE(is_valid(st[j], 10, bc));
      REQUIRE(basis.hamming(j) == hamming_to_z2(st[j], 10));
    }
  }
}

TEST_CASE("index lookup round-trips and rejects foreign words", "[basis]") {
  ConstrainedBasis basis(12, Boundary::PBC);
  for (std::size_t j = 0; j < basis.size(); ++j) {
    REQUIRE(basis.index_of(basis.state(j)) == j);
  }
  REQUIRE_FALSE(basis.contains(Word(0b11)));              // adjacent pair
  REQUIRE_FALSE(basis.contains(Word(1) << 11 | Word(1)));  // wrap pair
  REQUIRE_THROWS_AS(basis.index_of(Word(0b11)), std::invalid_argument);
}

TEST_CASE("site count limits are enforced", "[basis]") {
  REQUIRE_THROWS_AS(ConstrainedBasis(1, Boundary::PBC), std::invalid_argument);
  REQUIRE_THROWS_AS(ConstrainedBasis(33, Boundary::OBC), std::invalid_argument);
  REQUIRE_NOTHROW(ConstrainedBasis(2, Boundary::PBC));
}

TEST_CASE("reference product states sit on the expected sites", "[basis]") {
  REQUIRE(z2_state(8) == Word(0b01010101));
  REQUIRE(z2_prime_state(8) == Word(0b10101010));
  REQUIRE(product_state(Pattern::Z3, 12) == Word(0b001001001001));
  REQUIRE(product_state(Pattern::Z4, 12) == Word(0b000100010001));
  REQUIRE(product_state(Pattern::Vacuum, 12) == Word(0));
  REQUIRE(product_state(Pattern::Z2Prime, 8) == z2_prime_state(8));
  // periodic chains require the pattern period to divide the length
  REQUIRE_THROWS_AS(product_state(Pattern::Z3, 8, Boundary::PBC),
                    std::invalid_argument);
  REQUIRE_NOTHROW(product_state(Pattern::Z3, 8, Boundary::OBC));
}

TEST_CASE("string rendering is most-significant-site first", "[basis]") {
  REQUIRE(to_string(z2_state(6), 6) == "oxoxox");
  REQUIRE(to_string(Word(0), 4) == "oooo");
  REQUIRE(to_string(Word(1) << 3, 4) == "xooo");
  ConstrainedBasis basis(9, Boundary::OBC);
  for (std::size_t j = 0; j < basis.size(); ++j) {
    REQUIRE(parse_state(to_string(basis.state(j), 9)) == basis.state(j));
  }
  REQUIRE_THROWS_AS(parse_state("oxq"), std::invalid_argument);
}

TEST_CASE("rotation and reflection behave as group elements", "[basis]") {
  const int L = 11;
  ConstrainedBasis basis(L, Boundary::PBC);
  for (Word s : basis.states()) {
    REQUIRE(reflect(reflect(s, L), L) == s);
    REQUIRE(rotate_left(s, L, L) == s);
    REQUIRE(rotate_left(rotate_left(s, L, 3), L, L - 3) == s);
    REQUIRE(excitation_count(rotate_left(s, L)) == excitation_count(s));
    // the constraint is invariant under both symmetries
    REQUIRE(basis.contains(rotate_left(s, L)));
    REQUIRE(basis.contains(reflect(s, L)));
  }
}

TEST_CASE("single-flip moves stay inside the constrained space", "[basis]") {
  ConstrainedBasis basis(10, Boundary::PBC);
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const Word s = basis.state(j);
    basis.for_each_flip(s, [&](int i, Word t) {
      REQUIRE(basis.contains(t));
      REQUIRE(t == (s ^ (Word(1) << i)));
      // both neighbors of the flipped site are unexcited in either state
      REQUIRE(((s >> ((i + 1) % 10)) & 1) == 0);
      REQUIRE(((s >> ((i + 9) % 10)) & 1) == 0);
    });
  }
}

TEST_CASE("adjacency graph layers partition the space", "[basis]") {
  ConstrainedBasis basis(8, Boundary::PBC);
  HilbertGraph g = build_graph(basis);
  REQUIRE(g.nodes == basis.size());
  std::size_t layered = 0;
  for (std::size_t h = 0; h < g.layers.size(); ++h) {
    for (std::size_t j : g.layers[h]) {
      REQUIRE(static_cast<std::size_t>(basis.hamming(j)) == h);
      ++layered;
    }
  }
  REQUIRE(layered == basis.size());
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto [a, b] : g.edges) {
    REQUIRE(a < b);
    // every edge changes the excitation number by exactly one
    REQUIRE(std::abs(basis.hamming(a) - basis.hamming(b)) == 1);
    seen.insert({a, b});
  }
  REQUIRE(seen.size() == g.edges.size());
}
