#pragma once
// Thin wrappers around the LAPACKE dense solvers used throughout the library.
// All matrices are column-major.  Solver failures surface as ConsistencyError
// (the inputs we hand over are well formed by construction, so a nonzero info
// means the computation itself broke down).

#include <algorithm>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "scarlab/common.hpp"

namespace scarlab {

namespace detail {
inline void check_info(lapack_int info, const char* routine) {
  if (info != 0) {
    throw ConsistencyError(std::string(routine) + " failed with info = " +
                           std::to_string(info));
  }
}
}  // namespace detail

// Symmetric eigensolve; eigenvalues ascending into w, eigenvectors overwrite
// a (column j holds the vector for w[j]) when vectors is set.
inline void sym_eig(std::vector<double>& a, std::size_t n,
                    std::vector<double>& w, bool vectors = true) {
  if (a.size() != n * n) {
    throw std::invalid_argument("sym_eig: matrix size mismatch");
  }
  w.resize(n);
  if (n == 0) return;
  const lapack_int info = LAPACKE_dsyevd(
      LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', static_cast<lapack_int>(n),
      a.data(), static_cast<lapack_int>(n), w.data());
  detail::check_info(info, "dsyevd");
}

// Hermitian analogue for the complex momentum sectors.
inline void herm_eig(std::vector<std::complex<double>>& a, std::size_t n,
                     std::vector<double>& w, bool vectors = true) {
  if (a.size() != n * n) {
    throw std::invalid_argument("herm_eig: matrix size mismatch");
  }
  w.resize(n);
  if (n == 0) return;
  const lapack_int info = LAPACKE_zheevd(
      LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', static_cast<lapack_int>(n),
      a.data(), static_cast<lapack_int>(n), w.data());
  detail::check_info(info, "zheevd");
}

// Symmetric tridiagonal eigensolve (diagonal d, subdiagonal e with n-1
// entries).  Eigenvalues replace d; when z is non-null it receives the
// column-major eigenvector matrix.
inline void tridiag_eig(std::vector<double>& d, std::vector<double>& e,
                        std::vector<double>* z = nullptr) {
  const std::size_t n = d.size();
  if (n > 0 && e.size() != n - 1) {
    throw std::invalid_argument("tridiag_eig: subdiagonal size mismatch");
  }
  if (n == 0) return;
  lapack_int info;
  if (z != nullptr) {
    z->assign(n * n, 0.0);
    info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'V', static_cast<lapack_int>(n),
                         d.data(), e.data(), z->data(),
                         static_cast<lapack_int>(n));
  } else {
    info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'N', static_cast<lapack_int>(n),
                         d.data(), e.data(), nullptr, 1);
  }
  detail::check_info(info, "dstev");
}

// Singular values (descending) of a rows x cols matrix; contents of a are
// destroyed.
inline std::vector<double> singular_values(std::vector<double>& a,
                                           std::size_t rows,
                                           std::size_t cols) {
  if (a.size() != rows * cols) {
    throw std::invalid_argument("singular_values: matrix size mismatch");
  }
  std::vector<double> s(std::min(rows, cols));
  if (s.empty()) return s;
  const lapack_int info = LAPACKE_dgesdd(
      LAPACK_COL_MAJOR, 'N', static_cast<lapack_int>(rows),
      static_cast<lapack_int>(cols), a.data(), static_cast<lapack_int>(rows),
      s.data(), nullptr, 1, nullptr, 1);
  detail::check_info(info, "dgesdd");
  return s;
}

inline std::vector<double> singular_values(
    std::vector<std::complex<double>>& a, std::size_t rows, std::size_t cols) {
  if (a.size() != rows * cols) {
    throw std::invalid_argument("singular_values: matrix size mismatch");
  }
  std::vector<double> s(std::min(rows, cols));
  if (s.empty()) return s;
  const lapack_int info = LAPACKE_zgesdd(
      LAPACK_COL_MAJOR, 'N', static_cast<lapack_int>(rows),
      static_cast<lapack_int>(cols), a.data(), static_cast<lapack_int>(rows),
      s.data(), nullptr, 1, nullptr, 1);
  detail::check_info(info, "zgesdd");
  return s;
}

// Least-squares polynomial fit.  The abscissa is shifted and scaled to
// [-1, 1] before building the Vandermonde system so that high degrees stay
// well conditioned; operator() evaluates in the original variable.
struct Polynomial {
  double shift = 0.0;
  double scale = 1.0;
  std::vector<double> coeff;  // ascending powers of the scaled variable

  double operator()(double x) const {
    const double u = (x - shift) / scale;
    double acc = 0.0;
    for (std::size_t p = coeff.size(); p-- > 0;) acc = acc * u + coeff[p];
    return acc;
  }
};

inline Polynomial fit_polynomial(const std::vector<double>& x,
                                 const std::vector<double>& y, int degree) {
  if (degree < 0 || x.size() != y.size() ||
      x.size() < static_cast<std::size_t>(degree) + 1) {
    throw std::invalid_argument("fit_polynomial: bad degree or sample count");
  }
  const std::size_t n = x.size();
  const std::size_t m = static_cast<std::size_t>(degree) + 1;
  Polynomial poly;
  double lo = x[0], hi = x[0];
  for (double v : x) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  poly.shift = 0.5 * (lo + hi);
  poly.scale = hi > lo ? 0.5 * (hi - lo) : 1.0;

  std::vector<double> vand(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (x[i] - poly.shift) / poly.scale;
    double pw = 1.0;
    for (std::size_t p = 0; p < m; ++p) {
      vand[i + p * n] = pw;
      pw *= u;
    }
  }
  std::vector<double> rhs(y);
  std::vector<double> sv(m);
  lapack_int rank = 0;
  const lapack_int info = LAPACKE_dgelsd(
      LAPACK_COL_MAJOR, static_cast<lapack_int>(n),
      static_cast<lapack_int>(m), 1, vand.data(), static_cast<lapack_int>(n),
      rhs.data(), static_cast<lapack_int>(n), sv.data(), -1.0, &rank);
  detail::check_info(info, "dgelsd");
  poly.coeff.assign(rhs.begin(), rhs.begin() + static_cast<long>(m));
  return poly;
}

}  // namespace scarlab
