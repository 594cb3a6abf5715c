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

// Permutations over [n] = {1..n}, the infinity metric, ball specifications
// and the implicit band matrix A_{r,n}. Indices are one-based everywhere in
// the public API.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "permball/errors.hpp"

namespace permball {

using Rational = boost::rational<std::int64_t>;

// Largest denominator accepted when a decimal is converted to a rational.
inline constexpr std::int64_t kMaxRationalDenominator = 1'000'000;

class Permutation {
 public:
  // `image[i-1]` is f(i).
  explicit Permutation(std::vector<int> image) : image_(std::move(image)) {
    const int n = size();
    if (n < 1) throw ValidationError("permutation must have at least one entry");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int v : image_) {
      if (v < 1 || v > n || seen[static_cast<std::size_t>(v - 1)]) {
        throw ValidationError("not a permutation of {1.." + std::to_string(n) +
                              "}: entry " + std::to_string(v));
      }
      seen[static_cast<std::size_t>(v - 1)] = true;
    }
  }

  static Permutation identity(int n) {
    std::vector<int> image(static_cast<std::size_t>(std::max(n, 0)));
    for (int i = 0; i < n; ++i) image[static_cast<std::size_t>(i)] = i + 1;
    return Permutation(std::move(image));
  }

  // Parses "3,1,2".
  static Permutation parse(std::string_view text) {
    std::vector<int> image;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t comma = std::min(text.find(',', pos), text.size());
      std::string_view token = text.substr(pos, comma - pos);
      while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
      while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
      int value = 0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
        throw ValidationError("bad permutation token '" + std::string(token) + "'");
      }
      image.push_back(value);
      pos = comma + 1;
    }
    return Permutation(std::move(image));
  }

  int size() const noexcept { return static_cast<int>(image_.size()); }

  // f(i), one-based.
  int operator()(int i) const {
    if (i < 1 || i > size()) throw DimensionError("permutation index out of range");
    return image_[static_cast<std::size_t>(i - 1)];
  }

  const std::vector<int>& image() const noexcept { return image_; }

  // (f ∘ g)(i) = f(g(i)).
  Permutation compose(const Permutation& g) const {
    if (g.size() != size()) throw DimensionError("composition of permutations of different length");
    std::vector<int> out(image_.size());
    for (int i = 1; i <= size(); ++i) out[static_cast<std::size_t>(i - 1)] = (*this)(g(i));
    return Permutation(std::move(out));
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < image_.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(image_[i]);
    }
    return out;
  }

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<int> image_;
};

// max_i |f(i) - g(i)|
inline int infinity_distance(const Permutation& f, const Permutation& g) {
  if (f.size() != g.size()) {
    throw DimensionError("infinity_distance: lengths " + std::to_string(f.size()) + " and " +
                         std::to_string(g.size()) + " differ");
  }
  int d = 0;
  for (int i = 1; i <= f.size(); ++i) d = std::max(d, std::abs(f(i) - g(i)));
  return d;
}

struct BallSpec {
  int n = 1;
  int r = 0;

  BallSpec() = default;
  BallSpec(int n_, int r_) : n(n_), r(r_) {
    if (n < 1) throw ValidationError("ball spec needs n >= 1, got n=" + std::to_string(n));
    if (r < 0 || r > n - 1) {
      throw ValidationError("ball spec needs 0 <= r <= n-1, got n=" + std::to_string(n) +
                            " r=" + std::to_string(r));
    }
  }

  // rho = r / (n-1); rho = 0 when n = 1.
  double rho() const noexcept { return n == 1 ? 0.0 : static_cast<double>(r) / (n - 1); }

  // Regime tests used by the Q-matrix families and the bound formulas.
  bool low_regime() const noexcept { return 2 * r <= n - 1; }   // r <= (n-1)/2
  bool high_regime() const noexcept { return 2 * r >= n - 1; }  // r >= (n-1)/2
  bool strictly_high() const noexcept { return 2 * r > n - 1 && r < n - 1; }

  auto operator<=>(const BallSpec&) const = default;
};

inline std::string to_string(const BallSpec& spec) {
  return "(n=" + std::to_string(spec.n) + ", r=" + std::to_string(spec.r) + ")";
}

// The 0/1 Toeplitz matrix with ones on |i-j| <= r. Entries are computed, never stored.
class BandMatrix {
 public:
  explicit BandMatrix(BallSpec spec) : spec_(spec) {}

  int size() const noexcept { return spec_.n; }
  const BallSpec& spec() const noexcept { return spec_; }
  BallSpec support() const noexcept { return spec_; }

  int entry(int i, int j) const {
    if (i < 1 || i > spec_.n || j < 1 || j > spec_.n) {
      throw DimensionError("band index (" + std::to_string(i) + "," + std::to_string(j) +
                           ") outside 1.." + std::to_string(spec_.n));
    }
    return std::abs(i - j) <= spec_.r ? 1 : 0;
  }

  double operator()(int i, int j) const { return entry(i, j); }

  // Column range [lo, hi] of the nonzeros in row i.
  int row_begin(int i) const noexcept { return std::max(1, i - spec_.r); }
  int row_end(int i) const noexcept { return std::min(spec_.n, i + spec_.r); }

 private:
  BallSpec spec_;
};

inline int band_entry(const BallSpec& spec, int i, int j) { return BandMatrix(spec).entry(i, j); }

// Exact normalized radius rho in [0, 1].
class NormalizedRadius {
 public:
  explicit NormalizedRadius(Rational rho) : rho_(rho) {
    if (rho_ < 0 || rho_ > 1) throw ValidationError("normalized radius must lie in [0,1]");
  }
  NormalizedRadius(std::int64_t num, std::int64_t den) : NormalizedRadius(Rational(num, den)) {}

  // Parses "1/2", "0.25" or "3". Decimals are converted exactly when their
  // denominator is at most kMaxRationalDenominator.
  static NormalizedRadius parse(std::string_view text);

  const Rational& value() const noexcept { return rho_; }
  double to_double() const noexcept { return boost::rational_cast<double>(rho_); }

  std::string to_string() const {
    return std::to_string(rho_.numerator()) + "/" + std::to_string(rho_.denominator());
  }

 private:
  Rational rho_;
};

namespace detail {

inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { return ValidationError("cannot parse '" + std::string(text) + "' as a rational"); };
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw fail();
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) throw fail();
    return v;
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const std::int64_t den = parse_int(text.substr(slash + 1));
    if (den == 0) throw fail();
    return Rational(parse_int(text.substr(0, slash)), den);
  }
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return Rational(parse_int(text));
  std::string_view int_part = text.substr(0, dot);
  std::string_view frac_part = text.substr(dot + 1);
  bool negative = !int_part.empty() && int_part.front() == '-';
  if (negative) int_part.remove_prefix(1);
  while (!frac_part.empty() && frac_part.back() == '0') frac_part.remove_suffix(1);
  std::int64_t den = 1;
  for (std::size_t k = 0; k < frac_part.size(); ++k) {
    den *= 10;
    if (den > kMaxRationalDenominator) {
      throw ValidationError("'" + std::string(text) + "' needs a denominator above " +
                            std::to_string(kMaxRationalDenominator));
    }
  }
  const std::int64_t whole = int_part.empty() ? 0 : parse_int(int_part);
  const std::int64_t frac = frac_part.empty() ? 0 : parse_int(frac_part);
  Rational value(whole * den + frac, den);
  return negative ? -value : value;
}

}  // namespace detail

inline NormalizedRadius NormalizedRadius::parse(std::string_view text) {
  return NormalizedRadius(detail::parse_rational(text));
}

// Closest rational with denominator <= kMaxRationalDenominator (continued fractions).
inline Rational to_rational(double x) {
  if (!std::isfinite(x)) throw ValidationError("non-finite value has no rational form");
  const bool negative = x < 0;
  double v = std::fabs(x);
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_d = std::floor(frac);
    if (a_d > 9.0e15) break;
    const auto a = static_cast<std::int64_t>(a_d);
    const std::int64_t q2 = a * q1 + q0;
    if (q2 > kMaxRationalDenominator) break;
    const std::int64_t p2 = a * p1 + p0;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double rem = frac - a_d;
    if (rem < 1e-12 || std::fabs(static_cast<double>(p1) / static_cast<double>(q1) - v) < 1e-15) break;
    frac = 1.0 / rem;
  }
  Rational out(p1, q1);
  return negative ? -out : out;
}

// Nearest n' >= 1 (preferring the smaller on ties) with rho*(n'-1) integral.
inline int nearest_admissible_n(const NormalizedRadius& rho, int n) {
  const std::int64_t q = rho.value().denominator();
  const std::int64_t m = n - 1;
  const std::int64_t below = (m / q) * q;
  const std::int64_t above = below + q;
  const std::int64_t best = (m - below <= above - m) ? below : above;
  return static_cast<int>(best + 1);
}

// (rho, n) -> (n, rho*(n-1)); never rounds.
inline BallSpec radius_from_rho(const NormalizedRadius& rho, int n) {
  if (n < 1) throw ValidationError("n must be positive");
  const Rational product = rho.value() * Rational(n - 1);
  if (product.denominator() != 1) {
    std::ostringstream msg;
    msg << "rho*(n-1)=" << boost::rational_cast<double>(product) << " not integral for rho="
        << rho.to_string() << ", n=" << n << "; nearest admissible n is "
        << nearest_admissible_n(rho, n);
    throw ValidationError(msg.str());
  }
  return BallSpec(n, static_cast<int>(product.numerator()));
}

}  // namespace permball
