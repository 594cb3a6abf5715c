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

// Scalar special functions and the algebraic constants shared by the bound
// formulas: Lambert W (principal branch, x >= 0), binary entropy, log2 n!,
// mu*, the band roots alpha_r and alpha_{r,n}, t-hat, Omega_r and the
// geometric sums S_r^(0..2).

#include <algorithm>
#include <cmath>
#include <compare>
#include <limits>
#include <numbers>
#include <string>

#include <gmpxx.h>

#include "permball/errors.hpp"
#include "permball/oracle.hpp"

namespace permball {

// A quantity in log2 units.
struct Bits {
  double value = 0.0;

  constexpr Bits() = default;
  constexpr explicit Bits(double v) : value(v) {}

  constexpr Bits operator+(Bits o) const { return Bits(value + o.value); }
  constexpr Bits operator-(Bits o) const { return Bits(value - o.value); }
  constexpr auto operator<=>(const Bits&) const = default;
};

inline constexpr double kLog2E = std::numbers::log2e;
inline constexpr double kLn2 = std::numbers::ln2;

namespace detail {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace detail

// Principal branch of W on [0, inf): Halley iteration from ln(1+x) below e
// and ln x - ln ln x above.
inline double lambert_w(double x) {
  if (std::isnan(x) || x < 0.0) throw DomainError("lambert_w: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;
  double w = x < std::numbers::e ? std::log1p(x) : std::log(x) - std::log(std::log(x));
  const double scale = std::max(1.0, x);
  for (int step = 0; step < 50; ++step) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    if (std::fabs(f) <= 1e-12 * scale * 0.25) return w;
    const double wp1 = w + 1.0;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double next = w - f / denom;
    if (next == w) break;
    w = next;
  }
  const double residual = std::fabs(w * std::exp(w) - x);
  if (residual > 1e-12 * scale) {
    throw ConvergenceError("lambert_w did not reach tolerance at x=" + std::to_string(x), residual);
  }
  return w;
}

// W(exp(log_x)) for arguments too large to form; Newton on w + ln w = log_x.
inline double lambert_w_exp(double log_x) {
  if (log_x < 700.0) return lambert_w(std::exp(log_x));
  double w = log_x - std::log(log_x);
  for (int step = 0; step < 100; ++step) {
    const double g = w + std::log(w) - log_x;
    const double next = w - g / (1.0 + 1.0 / w);
    if (std::fabs(next - w) <= 4 * std::numeric_limits<double>::epsilon() * w) return next;
    w = next;
  }
  return w;
}

// h(x) in bits, with 0 log 0 = 0.
inline Bits binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("binary_entropy: x must lie in [0,1]");
  auto term = [](double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; };
  return Bits(term(x) + term(1.0 - x));
}

inline constexpr long kLog2FactorialExactLimit = 1'000'000;

// Exact summation of log2 k up to kLog2FactorialExactLimit, log-gamma beyond.
inline Bits log2_factorial(long n) {
  if (n < 0) throw DomainError("log2_factorial: n must be >= 0");
  if (n > kLog2FactorialExactLimit) return Bits(std::lgamma(static_cast<double>(n) + 1.0) * kLog2E);
  detail::CompensatedSum sum;
  for (long k = 2; k <= n; ++k) sum.add(std::log2(static_cast<double>(k)));
  return Bits(sum.value());
}

inline Bits log2_factorial_lgamma(long n) {
  return Bits(std::lgamma(static_cast<double>(n) + 1.0) * kLog2E);
}

// mu* = 1 / (1 + W(1/e)) ~ 0.782.
inline double mu_star() { return 1.0 / (1.0 + lambert_w(std::exp(-1.0))); }

// A positive root together with the value of its defining polynomial there.
struct AlphaRoot {
  double value = 1.0;
  double excess = 0.0;  // value - 1, carried separately for precision near 1
  double residual = 0.0;
  int degree = 1;

  // |residual| <= 1e-12 * max(1, value^degree)
  bool within_tolerance() const {
    return std::fabs(residual) <= 1e-12 * std::max(1.0, std::pow(value, degree));
  }
};

namespace detail {

// Bisection then Newton on a function of u = alpha - 1 that is negative at lo
// and positive at hi. `g` returns the value, `dg` the derivative.
template <typename G, typename DG>
double bracketed_root(G g, DG dg, double lo, double hi) {
  for (int k = 0; k < 200 && hi - lo > 1e-3 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  double u = 0.5 * (lo + hi);
  for (int k = 0; k < 100; ++k) {
    const double step = g(u) / dg(u);
    double next = u - step;
    if (!(next > lo && next < hi)) {
      // Newton left the bracket; fall back to bisection for this step.
      (g(u) < 0.0 ? lo : hi) = u;
      next = 0.5 * (lo + hi);
    } else {
      (g(next) < 0.0 ? lo : hi) = next;
    }
    if (std::fabs(next - u) <= 2 * std::numeric_limits<double>::epsilon() * next) return next;
    u = next;
  }
  return u;
}

}  // namespace detail

// The positive root of a^(r+1) - a - 1 = 0. Solved as
// (r+1) log1p(u) - log(2+u) = 0 in u = a-1 on [0, 1], which avoids overflow
// of 2^(r+1) for large r.
inline AlphaRoot alpha_low_root(int r) {
  if (r < 1) throw DomainError("alpha_low_root: r must be >= 1");
  const double k = r + 1.0;
  auto g = [k](double u) { return k * std::log1p(u) - std::log(2.0 + u); };
  auto dg = [k](double u) { return k / (1.0 + u) - 1.0 / (2.0 + u); };
  const double u = detail::bracketed_root(g, dg, 0.0, 1.0);
  AlphaRoot root;
  root.excess = u;
  root.value = 1.0 + u;
  root.degree = r + 1;
  // Evaluated from u rather than 1+u, whose rounding a^(r+1) would amplify.
  root.residual = std::exp(k * std::log1p(u)) - 2.0 - u;
  return root;
}

// The positive root of a^(n-r) + (2r-n) a - (2r-n+2) = 0 for (n-1)/2 < r < n-1,
// bracketed on [1, 2^(1/(n-r))]. In u = a-1 the polynomial becomes
// expm1((n-r) log1p u) + (2r-n) u - 1.
inline AlphaRoot alpha_high_root(int n, int r) {
  if (!(2 * r > n - 1 && r < n - 1)) {
    throw DomainError("alpha_high_root: need (n-1)/2 < r < n-1, got n=" + std::to_string(n) +
                      " r=" + std::to_string(r));
  }
  const double m = n - r;
  const double lin = 2.0 * r - n;
  auto g = [m, lin](double u) { return std::expm1(m * std::log1p(u)) + lin * u - 1.0; };
  auto dg = [m, lin](double u) { return m * std::exp((m - 1.0) * std::log1p(u)) + lin; };
  const double hi = std::expm1(kLn2 / m);
  double u;
  if (lin == 0.0) {
    u = hi;  // a^(n-r) = 2 exactly
  } else {
    u = detail::bracketed_root(g, dg, 0.0, hi);
  }
  AlphaRoot root;
  root.excess = u;
  root.value = 1.0 + u;
  root.degree = n - r;
  root.residual = std::exp(m * std::log1p(u)) + lin * u - 2.0;
  return root;
}

// t-hat(rho) = log2(e) * (a - W(a/2 * e^a)) with a = 2(1-rho)/(2rho-1).
// The difference u = a - W solves log(1 - u/a) - u + ln 2 = 0 on (0, a);
// solving for u directly avoids cancellation as rho -> 1/2.
inline double t_hat(double rho) {
  if (!(rho > 0.5 && rho < 1.0)) throw DomainError("t_hat: rho must lie in (1/2, 1)");
  const double a = 2.0 * (1.0 - rho) / (2.0 * rho - 1.0);
  // g = -f is increasing, g(0) < 0, and g(min(a, ln 2)) > 0.
  auto g = [a](double u) { return u - kLn2 - std::log1p(-u / a); };
  auto dg = [a](double u) { return 1.0 + 1.0 / (a - u); };
  return kLog2E * detail::bracketed_root(g, dg, 0.0, std::min(a, kLn2));
}

// Omega_r = sum_m binom(r,m) (m+1)^r, exact.
inline constexpr int kOmegaExactLimit = 10'000;

inline mpz_class omega_r(int r) {
  if (r < 0) throw DomainError("omega_r: r must be >= 0");
  if (r > kOmegaExactLimit) {
    throw CapacityError("omega_r exact mode limited to r <= " + std::to_string(kOmegaExactLimit) +
                        "; use log2_omega_r");
  }
  mpz_class total = 0;
  mpz_class binom = 1;
  mpz_class power;
  for (int m = 0; m <= r; ++m) {
    mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(m + 1), static_cast<unsigned long>(r));
    total += binom * power;
    binom *= (r - m);
    binom /= (m + 1);
  }
  return total;
}

// log2 Omega_r; exact big-integer path up to kOmegaExactLimit, log-sum-exp beyond.
inline Bits log2_omega_r(int r) {
  if (r <= kOmegaExactLimit) return Bits(log2_big(omega_r(r)));
  auto term = [r](int m) {
    return (std::lgamma(r + 1.0) - std::lgamma(m + 1.0) - std::lgamma(r - m + 1.0)) * kLog2E +
           r * std::log2(m + 1.0);
  };
  double peak = -std::numeric_limits<double>::infinity();
  for (int m = 0; m <= r; ++m) peak = std::max(peak, term(m));
  detail::CompensatedSum sum;
  for (int m = 0; m <= r; ++m) sum.add(std::exp2(term(m) - peak));
  return Bits(peak + std::log2(sum.value()));
}

// S_r^(k) = sum_{l=0}^r l^k alpha_r^l for k = 0, 1, 2.
struct SrSums {
  double s0 = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
};

// Closed forms simplified with alpha^(r+1) = alpha + 1.
inline SrSums sr_sums(int r) {
  const AlphaRoot root = alpha_low_root(r);
  const double a = root.value;
  const double d = root.excess;
  const double rr = r;
  // r a^2 - r - 1 written as r (a-1)(a+1) - 1 to avoid cancellation.
  const double num1 = rr * d * (a + 1.0) - 1.0;
  SrSums s;
  s.s0 = a / d;
  s.s1 = num1 / (d * d);
  s.s2 = rr * rr * (a + 1.0) / d + 1.0 / (d * d) - 2.0 * num1 / (d * d * d);
  return s;
}

// Direct summation of the same three sums.
inline SrSums sr_sums_direct(int r) {
  const double a = alpha_low_root(r).value;
  detail::CompensatedSum s0, s1, s2;
  double p = 1.0;
  for (int l = 0; l <= r; ++l) {
    s0.add(p);
    s1.add(l * p);
    s2.add(static_cast<double>(l) * l * p);
    p *= a;
  }
  return SrSums{s0.value(), s1.value(), s2.value()};
}

}  // namespace permball
