#pragma once

// Constrained basis of the kinetically blockaded chain.
//
// Conventions (fixed once, everything downstream depends on them):
//   * a configuration is a machine word; bit i = site i (0-based), 1 = excited
//   * no two adjacent sites excited; under PBC sites L-1 and 0 are adjacent
//   * the Neel-like reference state Z2 occupies the even sites 0,2,4,...
//   * basis states are sorted ascending by integer value
//   * text form is over {o,x} with site L-1 leftmost (most significant first)

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "scarlab/common.hpp"
#include "scarlab/fibonacci.hpp"

namespace scarlab {

using Word = std::uint32_t;  // L <= 32 sites fit one word

enum class Boundary { PBC, OBC };

inline int site_count_check(int L) {
  if (L < 2 || L > 32) throw std::invalid_argument("site count must be in [2, 32]");
  return L;
}

inline Word word_mask(int L) { return L == 32 ? ~Word(0) : ((Word(1) << L) - 1); }

// Blockade test: no two adjacent excited sites (plus wrap pair for PBC).
inline bool is_valid(Word s, int L, Boundary bc) {
  if (s & ~word_mask(L)) return false;
  if (s & (s << 1) & word_mask(L)) return false;
  if (bc == Boundary::PBC && L > 1 && (s & 1) && ((s >> (L - 1)) & 1)) return false;
  return true;
}

inline Word rotate_left(Word s, int L, int r = 1) {
  r %= L;
  if (r == 0) return s & word_mask(L);
  return ((s << r) | (s >> (L - r))) & word_mask(L);
}

// Spatial inversion: site i -> L-1-i (bit reversal within the L-bit window).
inline Word reflect(Word s, int L) {
  Word r = 0;
  for (int i = 0; i < L; ++i)
    if ((s >> i) & 1) r |= Word(1) << (L - 1 - i);
  return r;
}

inline int excitation_count(Word s) { return std::popcount(s); }

// Period-2 reference states.
inline Word z2_state(int L) {
  Word s = 0;
  for (int i = 0; i < L; i += 2) s |= Word(1) << i;
  return s;
}
inline Word z2_prime_state(int L) { return rotate_left(z2_state(L), L); }

// Number of sites at which s differs from Z2.
inline int hamming_to_z2(Word s, int L) { return std::popcount(s ^ z2_state(L)); }

inline std::string to_string(Word s, int L) {
  std::string out(L, 'o');
  for (int i = 0; i < L; ++i)
    if ((s >> i) & 1) out[L - 1 - i] = 'x';  // site L-1 printed first
  return out;
}

inline Word parse_state(const std::string& text) {
  int L = static_cast<int>(text.size());
  site_count_check(L);
  Word s = 0;
  for (int pos = 0; pos < L; ++pos) {
    char c = text[pos];
    if (c == 'x')
      s |= Word(1) << (L - 1 - pos);
    else if (c != 'o')
      throw std::invalid_argument("state string must use only 'o' and 'x'");
  }
  return s;
}

// Density-wave and vacuum product states.
enum class Pattern { Z2, Z2Prime, Z3, Z4, Vacuum };

inline Word product_state(Pattern p, int L, Boundary bc = Boundary::PBC) {
  site_count_check(L);
  auto period_state = [&](int k) {
    if (bc == Boundary::PBC && L % k != 0)
      throw std::invalid_argument("period-" + std::to_string(k) +
                                  " density wave needs L divisible by " + std::to_string(k) +
                                  " under PBC");
    Word s = 0;
    for (int i = 0; i < L; i += k) s |= Word(1) << i;
    return s;
  };
  switch (p) {
    case Pattern::Z2: return period_state(2);
    case Pattern::Z2Prime: return rotate_left(period_state(2), L);
    case Pattern::Z3: return period_state(3);
    case Pattern::Z4: return period_state(4);
    case Pattern::Vacuum: return 0;
  }
  throw std::invalid_argument("unknown pattern");
}

// Complete sorted constrained basis with O(1)-ish index lookups and the
// Hamming-layer metadata used by the forward-scattering construction.
class ConstrainedBasis {
 public:
  ConstrainedBasis(int L, Boundary bc) : L_(site_count_check(L)), bc_(bc) {
    states_.reserve(static_cast<std::size_t>(bc == Boundary::PBC ? dimension_pbc(L)
                                                                 : dimension_obc(L)));
    // Recursive enumeration site-by-site keeps this O(D) instead of O(2^L).
    // grow(s, i, last): s has sites < i assigned, `last` = occupation of i-1.
    enumerate_from(0, 0, false);
    std::sort(states_.begin(), states_.end());
    index_.reserve(states_.size() * 2);
    hamming_.resize(states_.size());
    for (std::size_t j = 0; j < states_.size(); ++j) {
      index_.emplace(states_[j], j);
      hamming_[j] = hamming_to_z2(states_[j], L_);
    }
  }

  int length() const { return L_; }
  Boundary boundary() const { return bc_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<Word>& states() const { return states_; }
  Word state(std::size_t j) const { return states_[j]; }
  int hamming(std::size_t j) const { return hamming_[j]; }

  bool contains(Word s) const { return index_.find(s) != index_.end(); }

  std::size_t index_of(Word s) const {
    auto it = index_.find(s);
    if (it == index_.end()) throw std::invalid_argument("state not in basis: " + to_string(s, L_));
    return it->second;
  }

  // Allowed single-site flips out of s: both neighbors of site i must be in
  // the ground state (missing neighbors at an open edge count as ground).
  template <typename Fn>
  void for_each_flip(Word s, Fn&& fn) const {
    for (int i = 0; i < L_; ++i) {
      bool left_ok, right_ok;
      if (bc_ == Boundary::PBC) {
        left_ok = ((s >> ((i + L_ - 1) % L_)) & 1) == 0;
        right_ok = ((s >> ((i + 1) % L_)) & 1) == 0;
      } else {
        left_ok = (i == 0) || (((s >> (i - 1)) & 1) == 0);
        right_ok = (i == L_ - 1) || (((s >> (i + 1)) & 1) == 0);
      }
      if (left_ok && right_ok) fn(i, s ^ (Word(1) << i));
    }
  }

 private:
  void enumerate_from(Word s, int i, bool last) {
    if (i == L_) {
      // PBC: the wrap pair (L-1, 0) must not both be excited.
      if (bc_ == Boundary::PBC && (s & 1) && ((s >> (L_ - 1)) & 1)) return;
      states_.push_back(s);
      return;
    }
    enumerate_from(s, i + 1, false);
    if (!last) enumerate_from(s | (Word(1) << i), i + 1, true);
  }

  int L_;
  Boundary bc_;
  std::vector<Word> states_;
  std::unordered_map<Word, std::size_t> index_;
  std::vector<int> hamming_;
};

// Adjacency structure of the Hamiltonian in the product basis: one edge per
// allowed single flip. Nodes group into layers by Hamming distance to Z2;
// every edge joins consecutive layers and changes excitation parity.
struct HilbertGraph {
  std::size_t nodes = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // (i, j) with i < j
  std::vector<std::vector<std::size_t>> layers;            // layers[d] = nodes at distance d
};

inline HilbertGraph build_graph(const ConstrainedBasis& basis) {
  HilbertGraph g;
  g.nodes = basis.size();
  g.layers.assign(static_cast<std::size_t>(basis.length()) + 1, {});
  for (std::size_t j = 0; j < basis.size(); ++j) {
    g.layers[static_cast<std::size_t>(basis.hamming(j))].push_back(j);
    basis.for_each_flip(basis.state(j), [&](int, Word t) {
      std::size_t tj = basis.index_of(t);
      if (j < tj) g.edges.emplace_back(j, tj);
    });
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

}  // namespace scarlab
