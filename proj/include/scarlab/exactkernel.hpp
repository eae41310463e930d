#pragma once
// Exact integer kernel (zero-mode) computation.
//
// The kinetic operator has integer entries, so its kernel dimension is a
// well-defined integer quantity that floating-point spectra can only
// estimate.  Here the matrix (optionally with a rational staggered field
// folded in as num/den) is eliminated modulo several 31-bit primes; the
// canonical reduced-echelon kernel basis is lifted to the rationals by CRT
// plus rational reconstruction, scaled to primitive integer vectors, and
// finally verified exactly with bignum arithmetic.  The count is certified
// by a sandwich: m exactly verified independent vectors give nullity >= m,
// while a mod-p rank gives nullity <= D - rank = m.
//
// For the pure kinetic case the excitation-parity grading makes the matrix
// block-anti-diagonal, H = [[0, C], [C^T, 0]], so the kernel splits into
// ker(C) on the odd-parity coordinates and ker(C^T) on the even ones; both
// blocks are eliminated at half the size.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "scarlab/basis.hpp"
#include "scarlab/common.hpp"
#include "scarlab/fibonacci.hpp"
#include "scarlab/hamiltonian.hpp"

namespace scarlab {

// Nearest rational with bounded denominator (continued-fraction expansion);
// used to interpret a floating-point staggered coupling exactly.
struct Rational {
  long long num = 0;
  unsigned long long den = 1;
};

inline Rational rational_from_double(double x,
                                     unsigned long long max_den = 1000000) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("coupling must be finite");
  }
  const double sign = x < 0 ? -1.0 : 1.0;
  double v = std::abs(x);
  // Convergents p/q of the continued fraction of v.
  unsigned long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int it = 0; it < 64; ++it) {
    const double fl = std::floor(frac);
    if (fl > 9e18) break;
    const auto a = static_cast<unsigned long long>(fl);
    if (q0 > 0 && a > (max_den - q0) / (q1 > 0 ? q1 : 1)) break;
    const unsigned long long p2 = a * p1 + p0;
    const unsigned long long q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double rem = frac - fl;
    if (rem < 1e-12) break;
    frac = 1.0 / rem;
  }
  if (q1 == 0) {
    throw std::invalid_argument("coupling has no small rational form");
  }
  const double approx = static_cast<double>(p1) / static_cast<double>(q1);
  if (std::abs(approx - v) > 1e-9 * std::max(1.0, v)) {
    throw std::invalid_argument(
        "coupling is not close to a rational with denominator <= 1e6");
  }
  Rational r;
  r.num = static_cast<long long>(sign * static_cast<double>(p1));
  r.den = q1;
  return r;
}

namespace modarith {

// Primes just below 2^31: products of two reduced residues fit comfortably
// in 64 bits, so the elimination inner loop needs no 128-bit products.
// The canonical kernel entries are quotients of large minors and can need
// many hundreds of bits, hence the long list.
inline constexpr std::uint64_t kPrimes[] = {
    2147483647ull, 2147483629ull, 2147483587ull, 2147483579ull,
    2147483563ull, 2147483549ull, 2147483543ull, 2147483497ull,
    2147483489ull, 2147483477ull, 2147483423ull, 2147483399ull,
    2147483353ull, 2147483323ull, 2147483269ull, 2147483249ull,
    2147483237ull, 2147483179ull, 2147483171ull, 2147483137ull,
    2147483123ull, 2147483077ull, 2147483069ull, 2147483059ull,
    2147483053ull, 2147483033ull, 2147483029ull, 2147482951ull,
    2147482949ull, 2147482943ull, 2147482937ull, 2147482921ull,
    2147482877ull, 2147482873ull, 2147482867ull, 2147482859ull,
    2147482819ull, 2147482817ull, 2147482811ull, 2147482801ull,
    2147482763ull, 2147482739ull, 2147482697ull, 2147482693ull,
    2147482681ull, 2147482663ull, 2147482661ull, 2147482621ull,
    2147482591ull, 2147482583ull, 2147482577ull, 2147482507ull,
    2147482501ull, 2147482481ull, 2147482417ull, 2147482409ull,
    2147482367ull, 2147482361ull, 2147482349ull, 2147482343ull,
    2147482327ull, 2147482291ull, 2147482273ull, 2147482237ull,
    2147482231ull, 2147482223ull, 2147482121ull, 2147482093ull,
    2147482091ull, 2147482081ull, 2147482063ull, 2147482021ull,
    2147481997ull, 2147481967ull, 2147481949ull, 2147481937ull,
    2147481907ull, 2147481901ull, 2147481899ull, 2147481893ull,
    2147481883ull, 2147481863ull, 2147481827ull, 2147481811ull,
    2147481797ull, 2147481793ull, 2147481673ull, 2147481629ull,
    2147481571ull, 2147481563ull, 2147481529ull, 2147481509ull,
    2147481499ull, 2147481491ull, 2147481487ull, 2147481373ull,
    2147481367ull, 2147481359ull, 2147481353ull, 2147481337ull,
    2147481317ull, 2147481311ull, 2147481283ull, 2147481269ull,
    2147481263ull, 2147481247ull, 2147481209ull, 2147481199ull,
    2147481179ull, 2147481173ull, 2147481151ull, 2147481143ull,
    2147481139ull, 2147481071ull, 2147481053ull, 2147481031ull,
    2147481019ull, 2147480989ull, 2147480971ull, 2147480969ull,
    2147480957ull, 2147480941ull, 2147480927ull, 2147480921ull,
    2147480899ull, 2147480897ull, 2147480893ull, 2147480849ull,
    2147480843ull, 2147480837ull, 2147480791ull, 2147480747ull,
    2147480743ull, 2147480723ull, 2147480707ull, 2147480683ull,
    2147480677ull, 2147480651ull, 2147480641ull, 2147480623ull,
    2147480611ull, 2147480591ull, 2147480551ull, 2147480527ull,
    2147480519ull, 2147480507ull, 2147480471ull, 2147480459ull,
    2147480437ull, 2147480429ull, 2147480369ull, 2147480327ull,
    2147480311ull, 2147480299ull, 2147480297ull, 2147480227ull,
    2147480219ull, 2147480207ull, 2147480197ull, 2147480161ull,
    2147480039ull, 2147480011ull, 2147480009ull, 2147479991ull,
    2147479937ull, 2147479907ull, 2147479897ull, 2147479891ull,
    2147479879ull, 2147479823ull, 2147479819ull, 2147479787ull,
    2147479781ull, 2147479757ull, 2147479753ull, 2147479751ull,
    2147479681ull, 2147479657ull, 2147479643ull, 2147479637ull,
    2147479619ull, 2147479601ull, 2147479589ull, 2147479573ull,
    2147479549ull, 2147479547ull, 2147479531ull, 2147479517ull,
    2147479513ull, 2147479507ull, 2147479489ull, 2147479447ull,
    2147479421ull, 2147479403ull, 2147479381ull, 2147479361ull,
    2147479349ull, 2147479339ull, 2147479307ull, 2147479273ull,
    2147479259ull, 2147479231ull, 2147479189ull, 2147479171ull,
    2147479133ull, 2147479129ull, 2147479121ull, 2147479097ull,
    2147479091ull, 2147479079ull, 2147479063ull, 2147479057ull,
    2147479031ull, 2147479013ull, 2147478997ull, 2147478967ull,
    2147478961ull, 2147478959ull, 2147478937ull, 2147478919ull,
    2147478911ull, 2147478899ull, 2147478889ull, 2147478863ull,
    2147478859ull, 2147478821ull, 2147478791ull, 2147478763ull,
    2147478733ull, 2147478731ull, 2147478727ull, 2147478721ull,
    2147478719ull, 2147478703ull, 2147478701ull, 2147478673ull,
    2147478661ull, 2147478659ull, 2147478653ull, 2147478649ull,
    2147478647ull, 2147478611ull, 2147478601ull, 2147478581ull,
    2147478569ull, 2147478563ull, 2147478521ull, 2147478517ull,
    2147478503ull, 2147478497ull, 2147478491ull, 2147478481ull,
    2147478461ull, 2147478373ull, 2147478349ull, 2147478331ull,
    2147478299ull, 2147478293ull, 2147478259ull, 2147478253ull,
    2147478149ull, 2147478133ull, 2147478127ull, 2147478089ull,
    2147478083ull, 2147478079ull, 2147478049ull, 2147478017ull,
    2147478013ull, 2147477989ull, 2147477953ull, 2147477933ull,
    2147477881ull, 2147477879ull, 2147477873ull, 2147477861ull,
    2147477851ull, 2147477833ull, 2147477809ull, 2147477807ull,
    2147477737ull, 2147477701ull, 2147477699ull, 2147477687ull,
    2147477681ull, 2147477627ull, 2147477599ull, 2147477533ull,
    2147477531ull, 2147477513ull, 2147477503ull, 2147477473ull,
    2147477467ull, 2147477443ull, 2147477419ull, 2147477399ull,
    2147477393ull, 2147477323ull, 2147477273ull, 2147477249ull,
    2147477237ull, 2147477209ull, 2147477207ull, 2147477203ull,
    2147477201ull, 2147477191ull, 2147477159ull, 2147477113ull,
    2147477107ull, 2147477093ull, 2147477063ull, 2147477029ull,
    2147477021ull, 2147476979ull, 2147476963ull, 2147476951ull,
    2147476943ull, 2147476937ull, 2147476931ull, 2147476927ull};

inline constexpr std::size_t kPrimeCount =
    sizeof(kPrimes) / sizeof(kPrimes[0]);

// Barrett reduction for x < 2^63 against a fixed p < 2^31; the elimination
// inner loop is dominated by this reduction, and hardware division is an
// order of magnitude slower.
struct Barrett {
  std::uint64_t p;
  std::uint64_t magic;  // floor(2^64 / p)

  explicit Barrett(std::uint64_t prime)
      : p(prime), magic(~std::uint64_t(0) / prime) {}

  std::uint64_t reduce(std::uint64_t x) const {
    std::uint64_t q = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(x) * magic) >> 64);
    std::uint64_t r = x - q * p;
    while (r >= p) r -= p;
    return r;
  }
};

inline std::uint64_t mod_reduce(long long v, std::uint64_t p) {
  long long m = v % static_cast<long long>(p);
  if (m < 0) m += static_cast<long long>(p);
  return static_cast<std::uint64_t>(m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp,
                             std::uint64_t p) {
  std::uint64_t acc = 1;
  base %= p;
  while (exp > 0) {
    if (exp & 1) acc = acc * base % p;
    base = base * base % p;
    exp >>= 1;
  }
  return acc;
}

inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  return pow_mod(a, p - 2, p);
}

}  // namespace modarith

namespace detail {

// Reduced row echelon form over GF(p) and the canonical kernel basis.
// The matrix is row-major rows x cols and is consumed in place.
struct ModKernel {
  std::uint64_t prime = 0;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
  std::vector<std::size_t> free_cols;
  // One vector per free column (same order), each of length cols.
  std::vector<std::vector<std::uint64_t>> vectors;
};

inline ModKernel kernel_mod_p(std::vector<std::uint64_t>& a, std::size_t rows,
                              std::size_t cols, std::uint64_t p) {
  ModKernel out;
  out.prime = p;
  const modarith::Barrett bar(p);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols; ++col) {
    std::size_t sel = rows;
    for (std::size_t i = rank; i < rows; ++i) {
      if (a[i * cols + col] != 0) {
        sel = i;
        break;
      }
    }
    if (sel == rows) {
      out.free_cols.push_back(col);
      continue;
    }
    if (sel != rank) {
      for (std::size_t j = col; j < cols; ++j) {
        std::swap(a[sel * cols + j], a[rank * cols + j]);
      }
    }
    std::uint64_t* piv = &a[rank * cols];
    const std::uint64_t inv = modarith::inv_mod(piv[col], p);
    for (std::size_t j = col; j < cols; ++j) piv[j] = bar.reduce(piv[j] * inv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank) continue;
      std::uint64_t* row = &a[i * cols];
      const std::uint64_t m = row[col];
      if (m == 0) continue;
      const std::uint64_t mm = p - m;
      for (std::size_t j = col; j < cols; ++j) {
        row[j] = bar.reduce(row[j] + mm * piv[j]);
      }
    }
    out.pivot_cols.push_back(col);
    ++rank;
    if (rank == rows) {
      for (std::size_t j = col + 1; j < cols; ++j) out.free_cols.push_back(j);
      break;
    }
  }
  out.rank = rank;
  out.vectors.reserve(out.free_cols.size());
  for (std::size_t f : out.free_cols) {
    std::vector<std::uint64_t> v(cols, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < rank; ++i) {
      const std::uint64_t r = a[i * cols + f];
      if (r != 0) v[out.pivot_cols[i]] = p - r;
    }
    out.vectors.push_back(std::move(v));
  }
  return out;
}

// Rational reconstruction of residue r mod m with |num|, den <= sqrt(m/2).
inline bool reconstruct_rational(const mpz_class& r, const mpz_class& m,
                                 mpz_class& num, mpz_class& den) {
  mpz_class bound = sqrt(m / 2);
  mpz_class r0 = m, r1 = r % m;
  if (r1 < 0) r1 += m;
  mpz_class t0 = 0, t1 = 1;
  while (r1 > bound) {
    mpz_class q = r0 / r1;
    mpz_class r2 = r0 - q * r1;
    mpz_class t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  if (t1 == 0) return false;
  if (t1 < 0) {
    t1 = -t1;
    r1 = -r1;
  }
  if (t1 > bound) return false;
  if (gcd(r1, t1) != 1) return false;
  num = r1;
  den = t1;
  return true;
}

}  // namespace detail

struct ZeroModeOptions {
  double stagger = 0.0;
  bool keep_vectors = true;
  std::size_t max_primes = modarith::kPrimeCount;
};

struct ZeroModeReport {
  int L = 0;
  Boundary boundary = Boundary::OBC;
  std::size_t dimension = 0;
  std::size_t nullity = 0;  // certified exact kernel dimension
  Rational stagger;
  std::size_t primes_used = 0;
  bool used_parity_blocks = false;
  // Primitive integer kernel vectors over the full constrained basis,
  // ordered by their defining free column.
  std::vector<std::vector<mpz_class>> kernel;
  // Closed-form prediction where one is known (open chains); SIZE_MAX
  // otherwise.
  std::size_t prediction = std::numeric_limits<std::size_t>::max();
};

namespace detail {

// Integer matrix rows for den*H + num*S over the constrained basis, reduced
// mod p, restricted to the given row/column index subsets (empty subset
// vectors mean "all states").
inline std::vector<std::uint64_t> matrix_mod_p(
    const ConstrainedBasis& basis, const Rational& lambda,
    const std::vector<std::uint32_t>& row_states,
    const std::vector<std::uint32_t>& col_states,
    const std::vector<std::uint32_t>& col_slot, std::uint64_t p) {
  const std::size_t rows = row_states.size();
  const std::size_t cols = col_states.size();
  std::vector<std::uint64_t> a(rows * cols, 0);
  const std::uint64_t den_mod =
      modarith::mod_reduce(static_cast<long long>(lambda.den), p);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t j = row_states[r];
    const Word s = basis.state(j);
    if (lambda.num != 0) {
      const long long diag =
          lambda.num * static_cast<long long>(
                           staggered_diagonal(s, basis.length()));
      const std::uint32_t slot = col_slot[j];
      if (slot != std::numeric_limits<std::uint32_t>::max()) {
        a[r * cols + slot] = modarith::mod_reduce(diag, p);
      }
    }
    basis.for_each_flip(s, [&](int, Word target) {
      const std::uint32_t slot = col_slot[basis.index_of(target)];
      if (slot != std::numeric_limits<std::uint32_t>::max()) {
        a[r * cols + slot] = den_mod;
      }
    });
  }
  return a;
}

// Exact sparse apply of den*H + num*S to a bignum vector.
inline bool verify_kernel_vector(const ConstrainedBasis& basis,
                                 const Rational& lambda,
                                 const std::vector<mpz_class>& v) {
  const std::size_t dim = basis.size();
  const mpz_class den(static_cast<long>(lambda.den));
  const mpz_class num(static_cast<long>(lambda.num));
  for (std::size_t j = 0; j < dim; ++j) {
    mpz_class acc = 0;
    const Word s = basis.state(j);
    if (lambda.num != 0) {
      acc += num * staggered_diagonal(s, basis.length()) * v[j];
    }
    basis.for_each_flip(s, [&](int, Word target) {
      acc += den * v[basis.index_of(target)];
    });
    if (acc != 0) return false;
  }
  return true;
}

struct LiftedKernel {
  std::size_t rank = 0;
  std::size_t primes_used = 0;
  std::vector<std::vector<mpz_class>> vectors;  // primitive integer vectors
};

// One attempt to CRT-combine a structurally consistent group of mod-p
// kernels and reconstruct primitive integer vectors.  Returns false if any
// entry fails rational reconstruction (modulus still too small).
inline bool try_reconstruct(const std::vector<ModKernel>& kernels,
                            std::vector<std::vector<mpz_class>>& out) {
  const std::size_t nfree = kernels[0].free_cols.size();
  const std::size_t cols = kernels[0].vectors.empty()
                               ? 0
                               : kernels[0].vectors[0].size();
  mpz_class modulus = 1;
  for (const auto& kk : kernels) modulus *= static_cast<unsigned long>(kk.prime);
  out.clear();
  out.reserve(nfree);
  for (std::size_t v = 0; v < nfree; ++v) {
    std::vector<mpz_class> nums(cols), dens(cols);
    for (std::size_t e = 0; e < cols; ++e) {
      // Incremental CRT across the group's primes.
      mpz_class residue = 0, part = 1;
      for (const auto& kk : kernels) {
        const mpz_class pk(static_cast<unsigned long>(kk.prime));
        const mpz_class rk(static_cast<unsigned long>(kk.vectors[v][e]));
        if (part == 1) {
          residue = rk;
          part = pk;
          continue;
        }
        mpz_class inv;
        mpz_class part_mod = part % pk;
        mpz_invert(inv.get_mpz_t(), part_mod.get_mpz_t(), pk.get_mpz_t());
        mpz_class delta = ((rk - residue % pk) % pk + pk) % pk;
        residue += part * (delta * inv % pk);
        part *= pk;
      }
      if (!reconstruct_rational(residue, modulus, nums[e], dens[e])) {
        return false;
      }
    }
    mpz_class lcm_den = 1;
    for (std::size_t e = 0; e < cols; ++e) lcm_den = lcm(lcm_den, dens[e]);
    std::vector<mpz_class> vec(cols);
    mpz_class content = 0;
    for (std::size_t e = 0; e < cols; ++e) {
      vec[e] = nums[e] * (lcm_den / dens[e]);
      content = gcd(content, vec[e]);
    }
    if (content > 1) {
      for (auto& x : vec) x /= content;
    }
    out.push_back(std::move(vec));
  }
  return true;
}

// Eliminate a rows x cols integer matrix (delivered mod p by `build`) modulo
// an increasing set of primes until every kernel entry reconstructs to a
// rational AND the resulting integer vectors pass the caller's exact
// verification.  Primes are grouped by (rank, pivot structure); a prime
// disagreeing with the dominant group is unlucky (it divides a relevant
// minor).  The entries are quotients of large minors, so reconstruction is
// attempted on a growing schedule rather than after every prime.
inline LiftedKernel lift_kernel(
    std::size_t rows, std::size_t cols,
    const std::function<std::vector<std::uint64_t>(std::uint64_t)>& build,
    std::size_t max_primes,
    const std::function<bool(const std::vector<std::vector<mpz_class>>&)>&
        verify) {
  max_primes = std::min(max_primes, modarith::kPrimeCount);
  std::vector<std::vector<ModKernel>> groups;  // same (rank, pivots) per group
  std::size_t next_attempt = 1;
  for (std::size_t pi = 0; pi < max_primes; ++pi) {
    const std::uint64_t p = modarith::kPrimes[pi];
    std::vector<std::uint64_t> a = build(p);
    ModKernel k = kernel_mod_p(a, rows, cols, p);
    bool placed = false;
    for (auto& g : groups) {
      if (g[0].rank == k.rank && g[0].pivot_cols == k.pivot_cols) {
        g.push_back(std::move(k));
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({std::move(k)});

    // The true kernel is reproduced by every prime that does not divide a
    // structural minor; those primes agree with each other and achieve the
    // maximal rank.  Use the largest such group, preferring higher rank.
    std::vector<ModKernel>* best = &groups[0];
    for (auto& g : groups) {
      if (g[0].rank > (*best)[0].rank ||
          (g[0].rank == (*best)[0].rank && g.size() > best->size())) {
        best = &g;
      }
    }
    const bool last_prime = pi + 1 == max_primes;
    if (best->size() < next_attempt && !last_prime) continue;
    // double up to 16 primes, then grow by 3/2: a failed attempt is cheap
    // (it aborts on the first entry that does not reconstruct), so a denser
    // schedule wastes little and avoids large overshoots
    next_attempt = best->size() < 16 ? best->size() * 2
                                     : best->size() + (best->size() + 1) / 2;

    LiftedKernel lifted;
    lifted.rank = (*best)[0].rank;
    lifted.primes_used = best->size();
    if (try_reconstruct(*best, lifted.vectors) &&
        lifted.vectors.size() == (*best)[0].free_cols.size() &&
        verify(lifted.vectors)) {
      return lifted;
    }
  }
  throw ConsistencyError(
      "exact kernel: rational reconstruction failed with all primes");
}

// A column basis adapted to a signed involution: singleton units on the
// self-reflected configurations and two-term units |s> +- sigma |reflect(s)>
// on the pairs.  The first member is the unit's representative; reading a
// vector known to lie in the span at the representatives recovers its
// coordinates.
struct SignedUnits {
  std::vector<std::vector<std::pair<std::uint32_t, int>>> units;
  std::vector<std::uint32_t> rep_slot;  // full index -> unit slot, else kNone

  static constexpr std::uint32_t kNone =
      std::numeric_limits<std::uint32_t>::max();

  void add(std::vector<std::pair<std::uint32_t, int>> members) {
    rep_slot[members.front().first] = static_cast<std::uint32_t>(units.size());
    units.push_back(std::move(members));
  }
};

// Mod-p matrix of den*H + num*S restricted to map the `col` units into the
// span of the `row` units (which it does exactly when the units are the +-1
// eigenspaces of a signed involution anticommuting with the operator).
inline std::vector<std::uint64_t> signed_block_mod_p(
    const ConstrainedBasis& basis, const Rational& lambda,
    const SignedUnits& rows, const SignedUnits& cols, std::uint64_t p) {
  const std::size_t nr = rows.units.size();
  const std::size_t nc = cols.units.size();
  std::vector<std::uint64_t> a(nr * nc, 0);
  std::vector<long long> w(basis.size(), 0);
  std::vector<std::uint32_t> touched;
  for (std::size_t c = 0; c < nc; ++c) {
    for (const auto& [j, coef] : cols.units[c]) {
      const Word s = basis.state(j);
      if (lambda.num != 0) {
        if (w[j] == 0) touched.push_back(j);
        w[j] += coef * lambda.num * staggered_diagonal(s, basis.length());
      }
      basis.for_each_flip(s, [&](int, Word target) {
        const std::size_t t = basis.index_of(target);
        if (w[t] == 0) touched.push_back(static_cast<std::uint32_t>(t));
        w[t] += coef * static_cast<long long>(lambda.den);
      });
    }
    for (const std::uint32_t f : touched) {
      const std::uint32_t r = rows.rep_slot[f];
      if (r != SignedUnits::kNone && w[f] != 0) {
        a[static_cast<std::size_t>(r) * nc + c] = modarith::mod_reduce(w[f], p);
      }
      w[f] = 0;
    }
    touched.clear();
  }
  return a;
}

}  // namespace detail

inline ZeroModeReport exact_zero_modes(const ConstrainedBasis& basis,
                                       const ZeroModeOptions& options = {}) {
  ZeroModeReport report;
  report.L = basis.length();
  report.boundary = basis.boundary();
  report.dimension = basis.size();
  report.stagger = rational_from_double(options.stagger);
  const std::size_t dim = basis.size();
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  if (basis.boundary() == Boundary::OBC) {
    const int L = report.L;
    if (report.stagger.num == 0) {
      report.prediction = L % 2 == 0
                              ? fibonacci(L / 2 + 1)
                              : fibonacci((L - 1) / 2);
    } else {
      report.prediction =
          L % 2 == 0 ? fibonacci(L / 2 + 1) : static_cast<std::size_t>(0);
    }
  }

  std::vector<std::vector<mpz_class>> kernel_full;
  std::size_t rank_total = 0;
  std::size_t primes_used = 0;

  if (report.stagger.num == 0) {
    // Parity grading: H maps even-excitation states to odd ones and back.
    report.used_parity_blocks = true;
    std::vector<std::uint32_t> even, odd;
    for (std::size_t j = 0; j < dim; ++j) {
      (basis.hamming(j) % 2 == 0 ? even : odd)
          .push_back(static_cast<std::uint32_t>(j));
    }
    const Rational unit{0, 1};
    for (int half = 0; half < 2; ++half) {
      // half 0: rows even, kernel over odd coordinates (ker C);
      // half 1: rows odd, kernel over even coordinates (ker C^T).
      const auto& rows = half == 0 ? even : odd;
      const auto& cols = half == 0 ? odd : even;
      std::vector<std::uint32_t> slot(dim, kNone);
      for (std::size_t c = 0; c < cols.size(); ++c) {
        slot[cols[c]] = static_cast<std::uint32_t>(c);
      }
      auto pad = [&](const std::vector<mpz_class>& v) {
        std::vector<mpz_class> full(dim, 0);
        for (std::size_t c = 0; c < cols.size(); ++c) full[cols[c]] = v[c];
        return full;
      };
      auto verify = [&](const std::vector<std::vector<mpz_class>>& vs) {
        for (const auto& v : vs) {
          if (!detail::verify_kernel_vector(basis, unit, pad(v))) return false;
        }
        return true;
      };
      auto build = [&](std::uint64_t p) {
        return detail::matrix_mod_p(basis, unit, rows, cols, slot, p);
      };
      detail::LiftedKernel part = detail::lift_kernel(
          rows.size(), cols.size(), build, options.max_primes, verify);
      rank_total += part.rank;
      primes_used = std::max(primes_used, part.primes_used);
      for (auto& v : part.vectors) kernel_full.push_back(pad(v));
    }
  } else if (report.L % 2 == 0) {
    // With the staggered diagonal the excitation-parity grading is lost, but
    // reflection composed with the excitation-parity sign still anticommutes
    // with den*H + num*S on even-length chains, so the same two-block kernel
    // split applies in the adapted signed basis.
    detail::SignedUnits plus, minus;
    plus.rep_slot.assign(dim, detail::SignedUnits::kNone);
    minus.rep_slot.assign(dim, detail::SignedUnits::kNone);
    for (std::size_t j = 0; j < dim; ++j) {
      const Word s = basis.state(j);
      const std::size_t rj = basis.index_of(reflect(s, report.L));
      const int sigma = excitation_count(s) % 2 == 0 ? 1 : -1;
      if (rj == j) {
        (sigma > 0 ? plus : minus).add({{static_cast<std::uint32_t>(j), 1}});
      } else if (j < rj) {
        plus.add({{static_cast<std::uint32_t>(j), 1},
                  {static_cast<std::uint32_t>(rj), sigma}});
        minus.add({{static_cast<std::uint32_t>(j), 1},
                   {static_cast<std::uint32_t>(rj), -sigma}});
      }
    }
    for (int half = 0; half < 2; ++half) {
      const detail::SignedUnits& rows = half == 0 ? minus : plus;
      const detail::SignedUnits& cols = half == 0 ? plus : minus;
      auto pad = [&](const std::vector<mpz_class>& v) {
        std::vector<mpz_class> full(dim, 0);
        for (std::size_t c = 0; c < cols.units.size(); ++c) {
          for (const auto& [j, coef] : cols.units[c]) full[j] += coef * v[c];
        }
        return full;
      };
      auto verify = [&](const std::vector<std::vector<mpz_class>>& vs) {
        for (const auto& v : vs) {
          if (!detail::verify_kernel_vector(basis, report.stagger, pad(v))) {
            return false;
          }
        }
        return true;
      };
      auto build = [&](std::uint64_t p) {
        return detail::signed_block_mod_p(basis, report.stagger, rows, cols,
                                          p);
      };
      detail::LiftedKernel part =
          detail::lift_kernel(rows.units.size(), cols.units.size(), build,
                              options.max_primes, verify);
      rank_total += part.rank;
      primes_used = std::max(primes_used, part.primes_used);
      for (auto& v : part.vectors) kernel_full.push_back(pad(v));
    }
  } else {
    std::vector<std::uint32_t> all(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      all[j] = static_cast<std::uint32_t>(j);
    }
    auto verify = [&](const std::vector<std::vector<mpz_class>>& vs) {
      for (const auto& v : vs) {
        if (!detail::verify_kernel_vector(basis, report.stagger, v)) {
          return false;
        }
      }
      return true;
    };
    auto build = [&](std::uint64_t p) {
      return detail::matrix_mod_p(basis, report.stagger, all, all, all, p);
    };
    detail::LiftedKernel part = detail::lift_kernel(
        dim, dim, build, options.max_primes, verify);
    rank_total = part.rank;
    primes_used = part.primes_used;
    kernel_full = std::move(part.vectors);
  }

  // Certified sandwich: the verified vectors are independent by their unit
  // free-coordinate pattern, so nullity >= count; the mod-p rank gives
  // nullity <= dim - rank; the two must meet.
  if (kernel_full.size() != dim - rank_total) {
    throw ConsistencyError("exact kernel: rank bound and basis size disagree");
  }
  report.nullity = kernel_full.size();
  report.primes_used = primes_used;
  if (options.keep_vectors) report.kernel = std::move(kernel_full);
  return report;
}

}  // namespace scarlab
