#pragma once
// Quench dynamics: evolve a product state under the constrained Hamiltonian
// and track return fidelity, the nearest-neighbour correlator, and the
// half-chain entanglement entropy.
//
// Three interchangeable propagators are provided: an adaptive Lanczos
// (Krylov) integrator that only needs sparse applies, a dense spectral
// propagator over the full basis, and a spectral propagator that works
// momentum sector by momentum sector and sums the embedded pieces.  The
// latter two serve as exact cross-checks for the first.

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "scarlab/basis.hpp"
#include "scarlab/common.hpp"
#include "scarlab/hamiltonian.hpp"
#include "scarlab/linalg.hpp"
#include "scarlab/spectral.hpp"
#include "scarlab/symmetry.hpp"

namespace scarlab {

enum class EvolveMethod { Krylov, SpectralFull, SpectralSectors };

struct QuenchOptions {
  double tmax = 30.0;
  double dt = 0.1;
  EvolveMethod method = EvolveMethod::Krylov;
  std::size_t krylov_dim = 30;
  double krylov_tol = 1e-10;  // local step error target
  int entropy_cut = -1;       // bond index; -1 means L/2
  bool track_entropy = true;
  std::size_t cap = dense_cap();  // spectral propagators only
};

struct QuenchResult {
  int L = 0;
  Boundary boundary = Boundary::PBC;
  Word initial = 0;
  int entropy_cut = 0;
  std::vector<double> t;
  std::vector<double> fidelity;
  std::vector<double> correlator;
  std::vector<double> entropy;  // empty when not tracked
  double max_norm_error = 0.0;
  double max_energy_drift = 0.0;
};

namespace detail {

// Open-chain substrings of a given length with no adjacent excitations,
// ascending.  (Lengths down to 1 appear as halves of an entropy bipartition,
// so this cannot reuse the full-basis builder and its length floor.)
inline std::vector<Word> obc_words(int len) {
  std::vector<Word> out;
  const Word lim = len >= 32 ? 0xffffffffu : ((Word{1} << len) - 1u);
  for (std::uint64_t s = 0; s <= lim; ++s) {
    const auto w = static_cast<Word>(s);
    if ((w & (w >> 1)) == 0u) out.push_back(w);
  }
  return out;
}

inline std::size_t word_slot(const std::vector<Word>& words, Word w) {
  const auto it = std::lower_bound(words.begin(), words.end(), w);
  return static_cast<std::size_t>(it - words.begin());
}

}  // namespace detail

// Half-cut entanglement entropy (natural log) of a normalized state over the
// constrained basis.  The cut sits between sites cut-1 and cut; the left
// block is the low `cut` bits.
inline double entanglement_entropy(const std::vector<std::complex<double>>& psi,
                                   const ConstrainedBasis& basis, int cut) {
  const int L = basis.length();
  if (cut < 1 || cut >= L) {
    throw std::invalid_argument("entropy cut must lie strictly inside [1, L)");
  }
  if (psi.size() != basis.size()) {
    throw std::invalid_argument("state vector has wrong dimension");
  }
  double norm2 = 0.0;
  for (const auto& c : psi) norm2 += std::norm(c);
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-8) {
    throw std::invalid_argument("entropy requires a normalized state");
  }
  const std::vector<Word> left = detail::obc_words(cut);
  const std::vector<Word> right = detail::obc_words(L - cut);
  const std::size_t rows = left.size(), cols = right.size();
  std::vector<std::complex<double>> m(rows * cols, 0.0);
  const Word mask = cut >= 32 ? 0xffffffffu : ((Word{1} << cut) - 1u);
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const Word s = basis.state(j);
    const std::size_t r = detail::word_slot(left, s & mask);
    const std::size_t c = detail::word_slot(right, s >> cut);
    m[r + c * rows] = psi[j];
  }
  std::vector<double> sv = singular_values(m, rows, cols);
  double total = 0.0;
  for (double s : sv) total += s * s;
  double entropy = 0.0;
  for (double s : sv) {
    const double p = s * s / total;
    if (p > 1e-14) entropy -= p * std::log(p);
  }
  return entropy;
}

// Bond-averaged nearest-neighbour alignment weight of each basis state:
// (1/L) sum_i z_i z_{i+1}, with the wrap bond included on a ring.
inline std::vector<double> correlator_weights(const ConstrainedBasis& basis) {
  const int L = basis.length();
  std::vector<double> w(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const Word s = basis.state(j);
    int disagree;
    int bonds;
    if (basis.boundary() == Boundary::PBC) {
      disagree = std::popcount(s ^ rotate_left(s, L));
      bonds = L;
    } else {
      const Word mask = (Word{1} << (L - 1)) - 1u;
      disagree = std::popcount((s ^ (s >> 1)) & mask);
      bonds = L - 1;
    }
    w[j] = static_cast<double>(bonds - 2 * disagree) / static_cast<double>(L);
  }
  return w;
}

namespace detail {

struct ObservableTracker {
  const ConstrainedBasis* basis;
  const SparseOperator* op;
  std::size_t initial_index;
  std::vector<double> corr;
  int cut;
  bool track_entropy;
  double energy0 = 0.0;
  std::vector<std::complex<double>> scratch;

  void sample(double t, const std::vector<std::complex<double>>& psi,
              QuenchResult& out) {
    out.t.push_back(t);
    out.fidelity.push_back(std::norm(psi[initial_index]));
    double c = 0.0, n2 = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
      const double w = std::norm(psi[j]);
      c += w * corr[j];
      n2 += w;
    }
    out.correlator.push_back(c);
    out.max_norm_error =
        std::max(out.max_norm_error, std::abs(std::sqrt(n2) - 1.0));
    scratch.assign(psi.size(), 0.0);
    op->apply(psi.data(), scratch.data());
    double e = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
      e += (std::conj(psi[j]) * scratch[j]).real();
    }
    if (out.t.size() == 1) {
      energy0 = e;
    } else {
      out.max_energy_drift =
          std::max(out.max_energy_drift, std::abs(e - energy0));
    }
    if (track_entropy) {
      out.entropy.push_back(entanglement_entropy(psi, *basis, cut));
    }
  }
};

// One adaptive Lanczos step: advance psi by tau (subdividing as needed so
// the a-posteriori estimate stays under tol).
inline void krylov_advance(const SparseOperator& op,
                           std::vector<std::complex<double>>& psi, double tau,
                           std::size_t m, double tol) {
  const std::size_t dim = psi.size();
  std::vector<std::vector<std::complex<double>>> v;
  std::vector<double> alpha, beta;
  double remaining = tau;
  while (remaining > 1e-15) {
    // Build (or rebuild) the Krylov basis from the current psi.
    v.assign(1, psi);
    double nrm = 0.0;
    for (const auto& c : v[0]) nrm += std::norm(c);
    nrm = std::sqrt(nrm);
    for (auto& c : v[0]) c /= nrm;
    alpha.clear();
    beta.clear();
    std::vector<std::complex<double>> w(dim);
    bool happy = false;
    for (std::size_t j = 0; j < m; ++j) {
      w.assign(dim, 0.0);
      op.apply(v[j].data(), w.data());
      if (j > 0) {
        for (std::size_t i = 0; i < dim; ++i) w[i] -= beta[j - 1] * v[j - 1][i];
      }
      std::complex<double> a(0.0, 0.0);
      for (std::size_t i = 0; i < dim; ++i) a += std::conj(v[j][i]) * w[i];
      alpha.push_back(a.real());
      for (std::size_t i = 0; i < dim; ++i) w[i] -= alpha[j] * v[j][i];
      // One full re-orthogonalization pass keeps the basis clean.
      for (const auto& prev : v) {
        std::complex<double> ov(0.0, 0.0);
        for (std::size_t i = 0; i < dim; ++i) ov += std::conj(prev[i]) * w[i];
        for (std::size_t i = 0; i < dim; ++i) w[i] -= ov * prev[i];
      }
      double b2 = 0.0;
      for (const auto& c : w) b2 += std::norm(c);
      const double b = std::sqrt(b2);
      beta.push_back(b);
      if (b < 1e-12) {
        happy = true;  // invariant subspace: propagation is exact
        break;
      }
      if (j + 1 < m) {
        auto& nxt = v.emplace_back(dim);
        for (std::size_t i = 0; i < dim; ++i) nxt[i] = w[i] / b;
      }
    }
    const std::size_t k = alpha.size();
    // exp(-i T dt) e1 via the tridiagonal eigen decomposition.
    std::vector<double> d(alpha), e(beta.begin(), beta.begin() + (k - 1));
    std::vector<double> z;
    tridiag_eig(d, e, &z);
    double step = remaining;
    while (true) {
      std::vector<std::complex<double>> y(k, 0.0);
      for (std::size_t col = 0; col < k; ++col) {
        const std::complex<double> ph =
            std::polar(1.0, -d[col] * step) * z[0 + col * k];
        for (std::size_t row = 0; row < k; ++row) {
          y[row] += z[row + col * k] * ph;
        }
      }
      const double est = happy ? 0.0 : beta[k - 1] * std::abs(y[k - 1]);
      if (est <= tol || step <= 1e-8) {
        for (std::size_t i = 0; i < dim; ++i) {
          std::complex<double> acc(0.0, 0.0);
          for (std::size_t j = 0; j < k; ++j) acc += v[j][i] * y[j];
          psi[i] = acc * nrm;
        }
        remaining -= step;
        break;
      }
      step *= 0.5;
    }
  }
}

}  // namespace detail

inline QuenchResult quench(const ConstrainedBasis& basis, Word initial,
                           const QuenchOptions& opt = {}) {
  if (!(opt.tmax > 0.0) || !(opt.dt > 0.0) || opt.dt > opt.tmax) {
    throw std::invalid_argument("need 0 < dt <= tmax");
  }
  if (opt.krylov_dim < 2) {
    throw std::invalid_argument("krylov dimension must be at least 2");
  }
  QuenchResult out;
  out.L = basis.length();
  out.boundary = basis.boundary();
  out.initial = initial;
  out.entropy_cut = opt.entropy_cut < 0 ? out.L / 2 : opt.entropy_cut;
  if (opt.track_entropy &&
      (out.entropy_cut < 1 || out.entropy_cut >= out.L)) {
    throw std::invalid_argument("entropy cut out of range");
  }

  const std::size_t idx0 = basis.index_of(initial);
  const SparseOperator op = assemble(OperatorSpec{}, basis);
  detail::ObservableTracker tracker{&basis,
                                    &op,
                                    idx0,
                                    correlator_weights(basis),
                                    out.entropy_cut,
                                    opt.track_entropy,
                                    0.0,
                                    {}};

  const auto steps = static_cast<std::size_t>(std::llround(opt.tmax / opt.dt));
  std::vector<std::complex<double>> psi(basis.size(), 0.0);
  psi[idx0] = 1.0;

  if (opt.method == EvolveMethod::Krylov) {
    tracker.sample(0.0, psi, out);
    for (std::size_t i = 1; i <= steps; ++i) {
      detail::krylov_advance(op, psi, opt.dt, opt.krylov_dim, opt.krylov_tol);
      tracker.sample(static_cast<double>(i) * opt.dt, psi, out);
    }
    return out;
  }

  if (opt.method == EvolveMethod::SpectralFull) {
    const SpectrumResult spec = diagonalize_full(basis, {}, true, opt.cap);
    const std::size_t dim = spec.dimension;
    // c = V^T psi0 is just the initial row of V.
    std::vector<double> c(dim);
    for (std::size_t j = 0; j < dim; ++j) c[j] = spec.vectors[idx0 + j * dim];
    for (std::size_t i = 0; i <= steps; ++i) {
      const double t = static_cast<double>(i) * opt.dt;
      std::vector<std::complex<double>> phase(dim);
      for (std::size_t j = 0; j < dim; ++j) {
        phase[j] = std::polar(c[j], -spec.energies[j] * t);
      }
      psi.assign(dim, 0.0);
      for (std::size_t j = 0; j < dim; ++j) {
        const std::complex<double> pj = phase[j];
        if (std::abs(pj.real()) + std::abs(pj.imag()) < 1e-300) continue;
        const double* col = &spec.vectors[j * dim];
        for (std::size_t i2 = 0; i2 < dim; ++i2) psi[i2] += col[i2] * pj;
      }
      tracker.sample(t, psi, out);
    }
    return out;
  }

  // SpectralSectors: momentum-resolved evolution summed over all k.  Any
  // product state decomposes over the momentum sectors alone, so no parity
  // labels are needed for completeness.
  if (basis.boundary() != Boundary::PBC) {
    throw std::invalid_argument("sector evolution requires a ring");
  }
  struct Piece {
    SymmetrySector sec;
    SpectrumResult spec;
    std::vector<std::complex<double>> w0;  // eigenbasis coefficients at t=0
  };
  std::vector<Piece> pieces;
  std::vector<std::complex<double>> psi0(basis.size(), 0.0);
  psi0[idx0] = 1.0;
  for (int k = 0; k < out.L; ++k) {
    SymmetrySector sec(basis, k);
    std::vector<std::complex<double>> w = sec.project(psi0);
    double wn = 0.0;
    for (const auto& x : w) wn += std::norm(x);
    if (wn < 1e-28) continue;  // incompatible momentum
    SpectrumResult spec = diagonalize(sec, true, opt.cap);
    const std::size_t dim = spec.dimension;
    std::vector<std::complex<double>> w0(dim, 0.0);
    if (!spec.vectors.empty()) {
      for (std::size_t col = 0; col < dim; ++col) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
          acc += spec.vectors[i + col * dim] * w[i];
        }
        w0[col] = acc;
      }
    } else {
      for (std::size_t col = 0; col < dim; ++col) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
          acc += std::conj(spec.vectors_c[i + col * dim]) * w[i];
        }
        w0[col] = acc;
      }
    }
    pieces.push_back(Piece{std::move(sec), std::move(spec), std::move(w0)});
  }
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * opt.dt;
    psi.assign(basis.size(), 0.0);
    for (const auto& piece : pieces) {
      const std::size_t dim = piece.spec.dimension;
      std::vector<std::complex<double>> w(dim, 0.0);
      for (std::size_t col = 0; col < dim; ++col) {
        const std::complex<double> coef =
            piece.w0[col] * std::polar(1.0, -piece.spec.energies[col] * t);
        if (!piece.spec.vectors.empty()) {
          for (std::size_t r = 0; r < dim; ++r) {
            w[r] += piece.spec.vectors[r + col * dim] * coef;
          }
        } else {
          for (std::size_t r = 0; r < dim; ++r) {
            w[r] += piece.spec.vectors_c[r + col * dim] * coef;
          }
        }
      }
      const std::vector<std::complex<double>> part = piece.sec.embed(w);
      for (std::size_t r = 0; r < part.size(); ++r) psi[r] += part[r];
    }
    tracker.sample(t, psi, out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Oscillation analysis
// ---------------------------------------------------------------------------

struct OscillationAnalysis {
  double fit_lo = 0.0, fit_hi = 0.0;
  double entropy_slope = 0.0;
  double entropy_intercept = 0.0;
  double residual_rms = 0.0;
  double period_entropy_residual = 0.0;  // 0 means no peak found
  double period_correlator = 0.0;
};

namespace detail {

// Dominant period of a uniformly sampled trace from a zero-padded
// periodogram, restricted to periods <= max_period, with a parabolic peak
// refinement.  Returns 0 when the trace carries no signal.
inline double dominant_period(const std::vector<double>& t,
                              const std::vector<double>& y,
                              double max_period) {
  const std::size_t n = y.size();
  if (n < 8) throw std::invalid_argument("trace too short for a periodogram");
  const double dt = t[1] - t[0];
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(n);

  const std::size_t pad = 16 * n;
  std::vector<double> in(pad, 0.0);
  for (std::size_t i = 0; i < n; ++i) in[i] = y[i] - mean;
  std::vector<std::complex<double>> spec(pad / 2 + 1);
  fftw_plan plan = fftw_plan_dft_r2c_1d(
      static_cast<int>(pad), in.data(),
      reinterpret_cast<fftw_complex*>(spec.data()), FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  const double df = 1.0 / (static_cast<double>(pad) * dt);
  const double fmin = 1.0 / max_period;
  std::size_t kbest = 0;
  double best = -1.0;
  for (std::size_t k = 0; k <= pad / 2; ++k) {
    if (static_cast<double>(k) * df < fmin) continue;
    const double p = std::norm(spec[k]);
    if (p > best) {
      best = p;
      kbest = k;
    }
  }
  if (best <= 1e-18) return 0.0;
  double dk = 0.0;
  if (kbest > 0 && kbest < pad / 2) {
    const double a = std::norm(spec[kbest - 1]);
    const double b = std::norm(spec[kbest]);
    const double c = std::norm(spec[kbest + 1]);
    const double denom = a - 2.0 * b + c;
    if (denom != 0.0) dk = 0.5 * (a - c) / denom;
  }
  return 1.0 / ((static_cast<double>(kbest) + dk) * df);
}

}  // namespace detail

// Linear fit of the entropy growth plus dominant oscillation periods of the
// detrended entropy and of the correlator, all over [fit_lo, fit_hi].  When
// a nonzero expected_period is supplied, the window must hold at least three
// of them.  Period searches are capped at a third of the window so the
// detrending residual's slow bow cannot masquerade as the oscillation.
inline OscillationAnalysis oscillation_analysis(const QuenchResult& run,
                                                double fit_lo, double fit_hi,
                                                double expected_period = 0.0) {
  if (!(fit_hi > fit_lo)) {
    throw std::invalid_argument("empty fit window");
  }
  if (expected_period > 0.0 && fit_hi - fit_lo < 3.0 * expected_period) {
    throw std::invalid_argument(
        "fit window shorter than three expected periods");
  }
  if (run.entropy.empty()) {
    throw std::invalid_argument("run carries no entropy trace");
  }
  std::vector<double> t, s, c;
  for (std::size_t i = 0; i < run.t.size(); ++i) {
    if (run.t[i] >= fit_lo - 1e-12 && run.t[i] <= fit_hi + 1e-12) {
      t.push_back(run.t[i]);
      s.push_back(run.entropy[i]);
      c.push_back(run.correlator[i]);
    }
  }
  if (t.size() < 8) {
    throw std::invalid_argument("fit window holds too few samples");
  }
  OscillationAnalysis out;
  out.fit_lo = fit_lo;
  out.fit_hi = fit_hi;

  // Least-squares line through (t, S).
  double st = 0.0, ss = 0.0, stt = 0.0, sts = 0.0;
  const auto n = static_cast<double>(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    ss += s[i];
    stt += t[i] * t[i];
    sts += t[i] * s[i];
  }
  const double denom = n * stt - st * st;
  out.entropy_slope = (n * sts - st * ss) / denom;
  out.entropy_intercept = (ss * stt - st * sts) / denom;

  std::vector<double> resid(t.size());
  double rss = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    resid[i] = s[i] - (out.entropy_slope * t[i] + out.entropy_intercept);
    rss += resid[i] * resid[i];
  }
  out.residual_rms = std::sqrt(rss / n);

  const double cap_period = (fit_hi - fit_lo) / 3.0;
  out.period_entropy_residual = detail::dominant_period(t, resid, cap_period);
  out.period_correlator = detail::dominant_period(t, c, cap_period);
  return out;
}

}  // namespace scarlab
