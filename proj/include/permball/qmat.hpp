// Copyright 2026 The permball Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Doubly-stochastic matrices supported on the band A_{r,n}.
//
// Three families are provided, each both as an implicit kernel (entries
// computed on demand, usable for n in the tens of thousands) and as a
// materialized matrix:
//
//   * first class   - piecewise constant, denominators 2r+1 or n; exact.
//   * second, low   - geometric profile in alpha_r, 1 <= r <= (n-2)/2.
//   * second, high  - separable profile in alpha_{r,n}, (n-1)/2 < r < n-1.
//
// sinkhorn_balance() scales an arbitrary non-negative matrix with total
// support to doubly-stochastic form.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "permball/core.hpp"
#include "permball/errors.hpp"
#include "permball/scalar.hpp"

namespace permball {

// Anything indexable as m(i, j) with one-based indices and a size().
template <typename M>
concept MatrixLike = requires(const M& m, int i, int j) {
  { m.size() } -> std::convertible_to<int>;
  { m(i, j) } -> std::convertible_to<double>;
};

// A MatrixLike whose nonzeros are known to lie inside a band.
template <typename M>
concept BandSupported = MatrixLike<M> && requires(const M& m) {
  { m.support() } -> std::convertible_to<BallSpec>;
};

// Dense n x n real matrix, row-major, one-based accessors.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(int n, double fill = 0.0)
      : n_(n), data_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), fill) {}

  template <MatrixLike M>
  static DenseMatrix from(const M& m) {
    DenseMatrix out(m.size());
    for (int i = 1; i <= out.n_; ++i)
      for (int j = 1; j <= out.n_; ++j) out.at(i, j) = m(i, j);
    return out;
  }

  int size() const noexcept { return n_; }
  double operator()(int i, int j) const { return data_[index(i, j)]; }
  double& at(int i, int j) { return data_[index(i, j)]; }

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j - 1);
  }

  int n_ = 0;
  std::vector<double> data_;
};

// A dense non-negative matrix that is doubly stochastic up to `residual`.
class StochasticMatrix {
 public:
  StochasticMatrix() = default;
  StochasticMatrix(DenseMatrix entries, std::optional<BallSpec> support)
      : entries_(std::move(entries)), support_(support) {
    residual_ = max_sum_deviation();
  }

  int size() const noexcept { return entries_.size(); }
  double operator()(int i, int j) const { return entries_(i, j); }
  const DenseMatrix& entries() const noexcept { return entries_; }
  const std::optional<BallSpec>& support_spec() const noexcept { return support_; }
  double residual() const noexcept { return residual_; }

  double row_sum(int i) const {
    detail::CompensatedSum s;
    for (int j = 1; j <= size(); ++j) s.add(entries_(i, j));
    return s.value();
  }
  double col_sum(int j) const {
    detail::CompensatedSum s;
    for (int i = 1; i <= size(); ++i) s.add(entries_(i, j));
    return s.value();
  }

  double max_sum_deviation() const {
    double worst = 0.0;
    for (int k = 1; k <= size(); ++k) {
      worst = std::max({worst, std::fabs(row_sum(k) - 1.0), std::fabs(col_sum(k) - 1.0)});
    }
    return worst;
  }

  // entries(i,j) > 0 exactly where band_entry(spec,i,j) = 1.
  bool support_equals(const BallSpec& spec) const {
    if (spec.n != size()) return false;
    for (int i = 1; i <= size(); ++i)
      for (int j = 1; j <= size(); ++j)
        if ((entries_(i, j) > 0.0) != (band_entry(spec, i, j) == 1)) return false;
    return true;
  }

  bool is_symmetric(double tol = 0.0) const {
    for (int i = 1; i <= size(); ++i)
      for (int j = i + 1; j <= size(); ++j)
        if (std::fabs(entries_(i, j) - entries_(j, i)) > tol) return false;
    return true;
  }

  double max_abs_difference(const StochasticMatrix& o) const {
    if (o.size() != size()) throw DimensionError("matrices differ in size");
    double worst = 0.0;
    for (int i = 1; i <= size(); ++i)
      for (int j = 1; j <= size(); ++j) worst = std::max(worst, std::fabs(entries_(i, j) - o(i, j)));
    return worst;
  }

 private:
  DenseMatrix entries_;
  std::optional<BallSpec> support_;
  double residual_ = 0.0;
};

// ---------------------------------------------------------------------------
// First class: q = 2/d on the two corner triangles, a_ij/d elsewhere, with
// d = 2r+1 when r <= (n-1)/2 and d = n when r >= (n-1)/2.

enum class FirstClassBranch { low, high };

class FirstClassKernel {
 public:
  FirstClassKernel(BallSpec spec, FirstClassBranch branch) : spec_(spec), branch_(branch) {
    if (branch == FirstClassBranch::low && !spec.low_regime())
      throw DomainError("first-class low branch needs r <= (n-1)/2, got " + permball::to_string(spec));
    if (branch == FirstClassBranch::high && !spec.high_regime())
      throw DomainError("first-class high branch needs r >= (n-1)/2, got " + permball::to_string(spec));
  }

  explicit FirstClassKernel(BallSpec spec)
      : FirstClassKernel(spec, spec.low_regime() ? FirstClassBranch::low : FirstClassBranch::high) {}

  int size() const noexcept { return spec_.n; }
  BallSpec support() const noexcept { return spec_; }
  FirstClassBranch branch() const noexcept { return branch_; }

  std::int64_t denominator() const noexcept {
    return branch_ == FirstClassBranch::low ? 2 * spec_.r + 1 : spec_.n;
  }

  std::int64_t numerator(int i, int j) const {
    const int n = spec_.n;
    const int r = spec_.r;
    const bool corner = branch_ == FirstClassBranch::low ? (i + j <= r + 1 || i + j >= 2 * n - r + 1)
                                                         : (i + j <= n - r || i + j >= n + r + 2);
    if (corner) return 2;
    return std::abs(i - j) <= r ? 1 : 0;
  }

  double operator()(int i, int j) const {
    return static_cast<double>(numerator(i, j)) / static_cast<double>(denominator());
  }

 private:
  BallSpec spec_;
  FirstClassBranch branch_;
};

// Exact rational matrix: integer numerators over one common denominator.
class ExactStochasticMatrix {
 public:
  ExactStochasticMatrix(BallSpec spec, std::int64_t denominator, std::vector<std::int64_t> numerators)
      : spec_(spec), denominator_(denominator), numerators_(std::move(numerators)) {}

  int size() const noexcept { return spec_.n; }
  const BallSpec& support_spec() const noexcept { return spec_; }
  BallSpec support() const noexcept { return spec_; }
  std::int64_t denominator() const noexcept { return denominator_; }

  std::int64_t numerator(int i, int j) const {
    return numerators_[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(spec_.n) +
                       static_cast<std::size_t>(j - 1)];
  }
  double operator()(int i, int j) const {
    return static_cast<double>(numerator(i, j)) / static_cast<double>(denominator_);
  }

  std::int64_t row_numerator_sum(int i) const {
    std::int64_t s = 0;
    for (int j = 1; j <= size(); ++j) s += numerator(i, j);
    return s;
  }
  std::int64_t col_numerator_sum(int j) const {
    std::int64_t s = 0;
    for (int i = 1; i <= size(); ++i) s += numerator(i, j);
    return s;
  }

  // Every row and column sums to exactly 1.
  bool exactly_doubly_stochastic() const {
    for (int k = 1; k <= size(); ++k) {
      if (row_numerator_sum(k) != denominator_ || col_numerator_sum(k) != denominator_) return false;
    }
    return true;
  }

  bool support_equals(const BallSpec& spec) const {
    if (spec.n != size()) return false;
    for (int i = 1; i <= size(); ++i)
      for (int j = 1; j <= size(); ++j)
        if ((numerator(i, j) > 0) != (band_entry(spec, i, j) == 1)) return false;
    return true;
  }

  StochasticMatrix to_real() const { return StochasticMatrix(DenseMatrix::from(*this), spec_); }

  bool operator==(const ExactStochasticMatrix& o) const {
    // Compare as rationals: a/d == b/e  <=>  a*e == b*d.
    if (o.spec_ != spec_) return false;
    for (std::size_t k = 0; k < numerators_.size(); ++k) {
      if (numerators_[k] * o.denominator_ != o.numerators_[k] * denominator_) return false;
    }
    return true;
  }

 private:
  BallSpec spec_;
  std::int64_t denominator_;
  std::vector<std::int64_t> numerators_;
};

inline ExactStochasticMatrix materialize_exact(const FirstClassKernel& k) {
  const int n = k.size();
  std::vector<std::int64_t> num(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      num[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j - 1)] =
          k.numerator(i, j);
  return ExactStochasticMatrix(k.support(), k.denominator(), std::move(num));
}

// Both branches apply when r = (n-1)/2 and must coincide there.
inline ExactStochasticMatrix q_first_class(const BallSpec& spec) {
  if (spec.low_regime() && spec.high_regime()) {
    ExactStochasticMatrix low = materialize_exact(FirstClassKernel(spec, FirstClassBranch::low));
    ExactStochasticMatrix high = materialize_exact(FirstClassKernel(spec, FirstClassBranch::high));
    if (!(low == high)) {
      throw std::logic_error("first-class branches disagree at the regime boundary " + permball::to_string(spec));
    }
    return low;
  }
  return materialize_exact(FirstClassKernel(spec));
}

// ---------------------------------------------------------------------------
// Second class, 1 <= r <= (n-2)/2: q = a_ij * C * alpha^e(i,j) where the
// exponent is measured from the corner blocks' inner edges and equals
// |i-j| elsewhere; C = (alpha-1)/(alpha+1).

class SecondLowKernel {
 public:
  explicit SecondLowKernel(BallSpec spec) : spec_(spec) {
    if (!(spec.r >= 1 && 2 * spec.r <= spec.n - 2)) {
      throw DomainError("second-class low family needs 1 <= r <= (n-2)/2, got " + permball::to_string(spec));
    }
    root_ = alpha_low_root(spec.r);
    log_alpha_ = std::log1p(root_.excess);
    c_ = root_.excess / (2.0 + root_.excess);
  }

  int size() const noexcept { return spec_.n; }
  BallSpec support() const noexcept { return spec_; }
  const AlphaRoot& alpha() const noexcept { return root_; }
  double c() const noexcept { return c_; }

  // Exponent of alpha at (i, j); only meaningful inside the band.
  int exponent(int i, int j) const {
    const int n = spec_.n;
    const int r = spec_.r;
    if (i <= r + 1 && j <= r + 1) return (r + 1 - i) + (r + 1 - j);
    if (i >= n - r && j >= n - r) return (i - (n - r)) + (j - (n - r));
    return std::abs(i - j);
  }

  double operator()(int i, int j) const {
    if (std::abs(i - j) > spec_.r) return 0.0;
    return c_ * std::exp(exponent(i, j) * log_alpha_);
  }

  // q log2 q at an in-band cell, without forming q log q from a rounded q.
  double q_log2_q(int i, int j) const {
    const double log2q = std::log2(c_) + exponent(i, j) * log_alpha_ * kLog2E;
    return std::exp2(log2q) * log2q;
  }

 private:
  BallSpec spec_;
  AlphaRoot root_;
  double log_alpha_ = 0.0;
  double c_ = 0.0;
};

// ---------------------------------------------------------------------------
// Second class, (n-1)/2 < r < n-1: q = a_ij * C * 2^(lambda_i + lambda_j)
// with lambda piecewise linear in log2(alpha), zero on [n-r, r+1], and
// C = (alpha-1) alpha^-(n-r).

class SecondHighKernel {
 public:
  explicit SecondHighKernel(BallSpec spec) : spec_(spec) {
    if (!spec.strictly_high()) {
      throw DomainError("second-class high family needs (n-1)/2 < r < n-1, got " + permball::to_string(spec));
    }
    root_ = alpha_high_root(spec.n, spec.r);
    log2_alpha_ = std::log1p(root_.excess) * kLog2E;
    log2_c_ = std::log2(root_.excess) - (spec.n - spec.r) * log2_alpha_;
  }

  int size() const noexcept { return spec_.n; }
  BallSpec support() const noexcept { return spec_; }
  const AlphaRoot& alpha() const noexcept { return root_; }
  double c() const noexcept { return std::exp2(log2_c_); }

  double lambda(int i) const {
    const int n = spec_.n;
    const int r = spec_.r;
    if (i <= n - r) return ((n - r) - i) * log2_alpha_;
    if (i >= r + 1) return (i - (r + 1)) * log2_alpha_;
    return 0.0;
  }

  double operator()(int i, int j) const {
    if (std::abs(i - j) > spec_.r) return 0.0;
    return std::exp2(log2_c_ + lambda(i) + lambda(j));
  }

  double q_log2_q(int i, int j) const {
    const double log2q = log2_c_ + lambda(i) + lambda(j);
    return std::exp2(log2q) * log2q;
  }

 private:
  BallSpec spec_;
  AlphaRoot root_;
  double log2_alpha_ = 0.0;
  double log2_c_ = 0.0;
};

inline StochasticMatrix q_second_low(const BallSpec& spec) {
  return StochasticMatrix(DenseMatrix::from(SecondLowKernel(spec)), spec);
}

inline StochasticMatrix q_second_high(const BallSpec& spec) {
  return StochasticMatrix(DenseMatrix::from(SecondHighKernel(spec)), spec);
}

// ---------------------------------------------------------------------------
// Sinkhorn balancing.

struct ScalingVectors {
  std::vector<double> row_scale;
  std::vector<double> col_scale;
  int iterations = 0;
  double residual = 0.0;
};

enum class SinkhornOrder { rows_first, columns_first };

struct SinkhornResult {
  StochasticMatrix matrix;
  ScalingVectors scaling;
};

// Alternating normalization until the largest row/column-sum deviation is
// at most `tol`. Throws ConvergenceError after `max_iter` sweeps.
template <MatrixLike M>
SinkhornResult sinkhorn_balance(const M& m, double tol = 1e-12, int max_iter = 200'000,
                                SinkhornOrder order = SinkhornOrder::rows_first,
                                std::optional<BallSpec> support = std::nullopt) {
  const int n = m.size();
  const DenseMatrix a = DenseMatrix::from(m);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (!(a(i, j) >= 0.0)) throw DomainError("sinkhorn_balance expects non-negative entries");

  std::vector<double> d(static_cast<std::size_t>(n), 1.0);
  std::vector<double> e(static_cast<std::size_t>(n), 1.0);
  auto normalize_rows = [&] {
    for (int i = 1; i <= n; ++i) {
      double s = 0.0;
      for (int j = 1; j <= n; ++j) s += a(i, j) * e[static_cast<std::size_t>(j - 1)];
      if (s <= 0.0) throw DomainError("sinkhorn_balance: zero row " + std::to_string(i));
      d[static_cast<std::size_t>(i - 1)] = 1.0 / s;
    }
  };
  auto normalize_cols = [&] {
    for (int j = 1; j <= n; ++j) {
      double s = 0.0;
      for (int i = 1; i <= n; ++i) s += d[static_cast<std::size_t>(i - 1)] * a(i, j);
      if (s <= 0.0) throw DomainError("sinkhorn_balance: zero column " + std::to_string(j));
      e[static_cast<std::size_t>(j - 1)] = 1.0 / s;
    }
  };
  // After a sweep the last-normalized side is exact; measure the other.
  auto deviation = [&] {
    double worst = 0.0;
    for (int k = 1; k <= n; ++k) {
      double row = 0.0, col = 0.0;
      for (int l = 1; l <= n; ++l) {
        row += d[static_cast<std::size_t>(k - 1)] * a(k, l) * e[static_cast<std::size_t>(l - 1)];
        col += d[static_cast<std::size_t>(l - 1)] * a(l, k) * e[static_cast<std::size_t>(k - 1)];
      }
      worst = std::max({worst, std::fabs(row - 1.0), std::fabs(col - 1.0)});
    }
    return worst;
  };

  ScalingVectors scaling;
  double dev = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    if (order == SinkhornOrder::rows_first) {
      normalize_rows();
      normalize_cols();
    } else {
      // d is the only free vector at the start; seed it from the columns.
      for (int j = 1; j <= n; ++j) {
        double s = 0.0;
        for (int i = 1; i <= n; ++i) s += d[static_cast<std::size_t>(i - 1)] * a(i, j);
        if (s <= 0.0) throw DomainError("sinkhorn_balance: zero column " + std::to_string(j));
        e[static_cast<std::size_t>(j - 1)] = 1.0 / s;
      }
      normalize_rows();
    }
    dev = deviation();
    scaling.iterations = it;
    if (dev <= tol) break;
    if (it == max_iter) {
      throw ConvergenceError("sinkhorn_balance: no convergence after " + std::to_string(max_iter) +
                                 " iterations, residual " + std::to_string(dev),
                             dev);
    }
  }
  DenseMatrix out(n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      out.at(i, j) = d[static_cast<std::size_t>(i - 1)] * a(i, j) * e[static_cast<std::size_t>(j - 1)];
  scaling.row_scale = std::move(d);
  scaling.col_scale = std::move(e);
  scaling.residual = dev;
  if (!support) {
    if constexpr (BandSupported<M>) support = m.support();
  }
  return SinkhornResult{StochasticMatrix(std::move(out), support), std::move(scaling)};
}

}  // namespace permball
