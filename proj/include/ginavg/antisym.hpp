#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ginavg/combinat.hpp"
#include "ginavg/errors.hpp"

namespace ginavg::antisym {

namespace detail {
inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& z) { return std::abs(z); }
}  // namespace detail

// Dense antisymmetric matrix.  Entries satisfy a(j,k) == -a(k,j) exactly:
// construction either writes mirrored pairs (from_upper, set_upper) or
// validates and then antisymmetrizes (from_entries).
template <typename Scalar>
class AntisymmetricMatrix {
 public:
  explicit AntisymmetricMatrix(int dim) : dim_(dim), e_(size_t(dim) * dim) {
    if (dim < 0) throw std::invalid_argument("AntisymmetricMatrix: dim < 0");
  }

  // Validates a = -a^T within tol * max|entry| (tol 0 demands exact input),
  // then stores (a - a^T)/2 so the invariant holds exactly downstream.
  static AntisymmetricMatrix from_entries(int dim,
                                          const std::vector<Scalar>& rowmajor,
                                          double tol = 0.0) {
    if (static_cast<int>(rowmajor.size()) != dim * dim)
      throw std::invalid_argument("from_entries: need dim*dim entries");
    double scale = 0.0;
    for (const Scalar& v : rowmajor) scale = std::max(scale, detail::magnitude(v));
    AntisymmetricMatrix a(dim);
    for (int j = 0; j < dim; ++j)
      for (int k = j; k < dim; ++k) {
        const Scalar ujk = rowmajor[size_t(j) * dim + k];
        const Scalar ukj = rowmajor[size_t(k) * dim + j];
        if (detail::magnitude(ujk + ukj) > tol * scale)
          throw std::invalid_argument("from_entries: matrix is not antisymmetric");
        if (k > j) a.set_upper(j, k, (ujk - ukj) / 2.0);
      }
    return a;
  }

  // f(j, k) supplies the strict upper triangle, 0-based j < k.
  template <typename F>
  static AntisymmetricMatrix from_upper(int dim, F&& f) {
    AntisymmetricMatrix a(dim);
    for (int j = 0; j < dim; ++j)
      for (int k = j + 1; k < dim; ++k) a.set_upper(j, k, f(j, k));
    return a;
  }

  int dim() const { return dim_; }
  Scalar at(int j, int k) const { return e_[size_t(j) * dim_ + k]; }

  void set_upper(int j, int k, Scalar v) {
    if (j >= k) throw std::invalid_argument("set_upper: need j < k");
    e_[size_t(j) * dim_ + k] = v;
    e_[size_t(k) * dim_ + j] = -v;
  }

  // Restriction to the rows and columns selected by u (1-based values).
  AntisymmetricMatrix minor(const combinat::IncreasingMap& u) const {
    if (u.n() != dim_)
      throw std::invalid_argument("minor: selection ambient size mismatch");
    const auto& im = u.image();
    AntisymmetricMatrix m(u.k());
    for (int j = 0; j < u.k(); ++j)
      for (int k = j + 1; k < u.k(); ++k)
        m.set_upper(j, k, at(combinat::idx0(im[j]), combinat::idx0(im[k])));
    return m;
  }

  friend AntisymmetricMatrix operator+(const AntisymmetricMatrix& a,
                                       const AntisymmetricMatrix& b) {
    if (a.dim_ != b.dim_)
      throw std::invalid_argument("operator+: dimension mismatch");
    AntisymmetricMatrix s(a.dim_);
    for (size_t i = 0; i < a.e_.size(); ++i) s.e_[i] = a.e_[i] + b.e_[i];
    return s;
  }

 private:
  int dim_;
  std::vector<Scalar> e_;
};

enum class PfMethod { combinatorial, elimination };

// value == unit * exp(log_abs) when the Pfaffian is nonzero and in range;
// log_abs survives when value itself would overflow.  unit has modulus 1
// (or is 0 for a vanishing Pfaffian).
template <typename Scalar>
struct PfaffianResult {
  Scalar value;
  std::optional<double> log_abs;
  Scalar unit;
  PfMethod method;
};

namespace detail {

inline void check_even(int dim) {
  if (dim % 2 != 0)
    throw std::invalid_argument("pfaffian: dimension must be even");
}

template <typename Scalar>
PfaffianResult<Scalar> make_result(Scalar value, PfMethod m) {
  const double mag = magnitude(value);
  if (mag == 0.0) return {Scalar(0), std::nullopt, Scalar(0), m};
  return {value, std::log(mag), value / mag, m};
}

}  // namespace detail

// Direct sum over the pair-ordered permutations, divided by J!.  Exact for
// sign matrices; factorial cost caps the dimension.
template <typename Scalar>
PfaffianResult<Scalar> pfaffian_combinatorial(const AntisymmetricMatrix<Scalar>& a) {
  detail::check_even(a.dim());
  if (a.dim() > 12)
    throw std::invalid_argument("pfaffian_combinatorial: dim > 12");
  const int j = a.dim() / 2;
  Scalar sum(0);
  combinat::for_each_pi(j, [&](const std::vector<int>& sigma, int sign) {
    Scalar term(static_cast<double>(sign));
    for (int p = 0; p < j; ++p)
      term *= a.at(combinat::idx0(sigma[2 * p]), combinat::idx0(sigma[2 * p + 1]));
    sum += term;
  });
  double jfact = 1.0;
  for (int i = 2; i <= j; ++i) jfact *= i;
  return detail::make_result(Scalar(sum / jfact), PfMethod::combinatorial);
}

// Cubic-time Pfaffian by congruence tridiagonalization with partial
// pivoting; the product of superdiagonal pivots is accumulated in log space
// so magnitudes beyond the double range keep a usable (unit, log_abs) pair.
template <typename Scalar>
PfaffianResult<Scalar> pfaffian_elimination(const AntisymmetricMatrix<Scalar>& a) {
  detail::check_even(a.dim());
  const int n = a.dim();
  if (n == 0) return detail::make_result(Scalar(1), PfMethod::elimination);

  std::vector<Scalar> m(size_t(n) * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m[size_t(r) * n + c] = a.at(r, c);
  auto at = [&](int r, int c) -> Scalar& { return m[size_t(r) * n + c]; };

  double log_abs = 0.0;
  Scalar unit(1);

  for (int k = 0; k + 1 < n; k += 2) {
    int kp = k + 1;
    for (int i = k + 2; i < n; ++i)
      if (detail::magnitude(at(i, k)) > detail::magnitude(at(kp, k))) kp = i;

    if (kp != k + 1) {
      for (int i = 0; i < n; ++i) std::swap(at(k + 1, i), at(kp, i));
      for (int i = 0; i < n; ++i) std::swap(at(i, k + 1), at(i, kp));
      unit = -unit;
    }

    const Scalar pivot = at(k, k + 1);
    if (pivot == Scalar(0))
      return {Scalar(0), std::nullopt, Scalar(0), PfMethod::elimination};
    const double mag = detail::magnitude(pivot);
    log_abs += std::log(mag);
    unit *= pivot / mag;

    if (k + 2 < n) {
      std::vector<Scalar> tau(n - (k + 2));
      for (int i = k + 2; i < n; ++i) tau[i - (k + 2)] = at(k, i) / pivot;
      // Rank-two congruence update; reads only column k+1, which it never
      // writes, so the trailing block stays exactly antisymmetric.
      for (int i = k + 2; i < n; ++i)
        for (int jj = k + 2; jj < n; ++jj)
          at(i, jj) += tau[i - (k + 2)] * at(jj, k + 1) -
                       tau[jj - (k + 2)] * at(i, k + 1);
    }
  }

  return {unit * std::exp(log_abs), log_abs, unit, PfMethod::elimination};
}

// Minor expansion of Pf(r + c) over even-size column selections:
//   sum over M, u of sgn(u) Pf(r restricted to complement(u)) Pf(c restricted to u).
template <typename Scalar>
Scalar pfaffian_sum_expansion(const AntisymmetricMatrix<Scalar>& r,
                              const AntisymmetricMatrix<Scalar>& c) {
  if (r.dim() != c.dim())
    throw std::invalid_argument("pfaffian_sum_expansion: dimension mismatch");
  detail::check_even(r.dim());
  const int two_j = r.dim();
  Scalar sum(0);
  for (int m = 0; 2 * m <= two_j; ++m) {
    combinat::for_each_increasing(2 * m, two_j, [&](const combinat::IncreasingMap& u) {
      const double sgn = u.sign();
      const Scalar pf_r = pfaffian_elimination(r.minor(u.complement())).value;
      const Scalar pf_c = pfaffian_elimination(c.minor(u)).value;
      sum += sgn * pf_r * pf_c;
    });
  }
  return sum;
}

// Sign matrix for a list of reals: entries sgn(alpha_k - alpha_j) in the
// leading L x L block, sgn(k - j) in the padding row/column that rounds the
// dimension up to 2 * floor((L+1)/2).
AntisymmetricMatrix<double> sign_matrix(const std::vector<double>& alpha);
double sign_matrix_pf(const std::vector<double>& alpha);
double sign_matrix_pf(const std::vector<double>& alpha, int padded_dim);

// Plain-text dense format: first line the dimension, then n rows of n
// entries.  Reading tolerates roundoff-level asymmetry (1e-12 relative).
AntisymmetricMatrix<double> read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const AntisymmetricMatrix<double>& a);

}  // namespace ginavg::antisym
