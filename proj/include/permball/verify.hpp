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

// Self-verification. Each check is a named function returning pass/fail
// and a one-line detail (the first counterexample on failure). The quick
// suite is a smoke test; the full suite is the acceptance suite proper.
// All tolerances are the constants below.

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "permball/asym.hpp"
#include "permball/bounds.hpp"
#include "permball/cache.hpp"
#include "permball/core.hpp"
#include "permball/oracle.hpp"
#include "permball/qmat.hpp"
#include "permball/rates.hpp"
#include "permball/scalar.hpp"

namespace permball {

namespace tolerance {
inline constexpr double kSandwichSlack = 1e-9;  // non-strict comparisons in bits
inline constexpr double kSecondClassSums = 1e-9;
inline constexpr double kSinkhornEntry = 1e-6;
inline constexpr double kSinkhornSolve = 1e-12;
inline constexpr double kMuStar = 1e-3;
inline constexpr double kXi = 1e-3;
inline constexpr double kPhi3GapConstant = 1e-4;
inline constexpr double kPhi3GapCeiling = 0.029;
inline constexpr double kClosedGap = 1e-9;
inline constexpr double kConvergenceFinal = 0.02;
inline constexpr double kAppendixAlgebra = 1e-9;
inline constexpr double kAlphaAsymptote = 0.01;
inline constexpr double kTHatRoot = 1e-9;
inline constexpr double kOracleSeconds = 60.0;
inline constexpr double kStochasticSeconds = 60.0;
inline constexpr double kConvergenceSeconds = 300.0;
}  // namespace tolerance

struct CheckOutcome {
  bool passed = false;
  std::string detail;
};

struct Check {
  std::string name;
  std::string title;
  std::function<CheckOutcome()> run;
};

struct CheckReport {
  std::string name;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

inline CheckReport run_check(const Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckReport rep{c.name, c.title, false, "", 0.0};
  try {
    CheckOutcome o = c.run();
    rep.passed = o.passed;
    rep.detail = std::move(o.detail);
  } catch (const std::exception& e) {
    rep.passed = false;
    rep.detail = std::string("exception: ") + e.what();
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

namespace detail {

inline std::string fmt(double x, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

inline double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline CheckOutcome oracle_agreement(int max_n, double time_limit) {
  const auto t0 = std::chrono::steady_clock::now();
  int cases = 0;
  for (int n = 1; n <= max_n; ++n) {
    for (int r = 0; r < n; ++r) {
      const BallSpec spec(n, r);
      const ExactCount e = ball_size_enumerate(spec);
      const ExactCount p = permanent_ryser(IntMatrix::from_band(spec));
      const ExactCount d1 = ball_size_band_dp(spec, {}, WindowEncoding::low_to_high);
      const ExactCount d2 = ball_size_band_dp(spec, {}, WindowEncoding::high_to_low);
      if (!(e == p && p == d1 && d1 == d2)) {
        return {false, "disagreement at " + to_string(spec) + ": enumerate=" + e.to_string() + " ryser=" +
                           p.to_string() + " band_dp=" + d1.to_string() + "/" + d2.to_string()};
      }
      ++cases;
    }
  }
  const double secs = elapsed_since(t0);
  if (secs > time_limit) return {false, "took " + fmt(secs) + " s, limit " + fmt(time_limit) + " s"};
  return {true, std::to_string(cases) + " specs, enumerate = ryser = band_dp, " + fmt(secs, 3) + " s"};
}

inline std::vector<Family> lower_families() {
  return {Family::phi1, Family::phi1_prime, Family::phi2, Family::phi3, Family::vdw_generic, Family::bethe_generic};
}

inline CheckOutcome sandwich(int max_n) {
  int comparisons = 0;
  for (int n = 1; n <= max_n; ++n) {
    for (int r = 0; r < n; ++r) {
      const BallSpec spec(n, r);
      const double exact = ball_size_exact(spec).count.log2();
      const BoundValue up = finite_bound(Family::Phi1, spec);
      if (!(exact <= up.bits.value + tolerance::kSandwichSlack)) {
        return {false, "Phi1 below exact at " + to_string(spec) + ": " + fmt(up.bits.value, 12) + " < " +
                           fmt(exact, 12)};
      }
      ++comparisons;
      for (Family f : lower_families()) {
        const BoundValue lo = finite_bound(f, spec);
        if (!lo.valid) continue;
        const bool ok = f == Family::phi1_prime ? lo.bits.value < exact
                                                : lo.bits.value <= exact + tolerance::kSandwichSlack;
        if (!ok) {
          return {false, to_string(f) + " above exact at " + to_string(spec) + ": " + fmt(lo.bits.value, 12) +
                             " vs " + fmt(exact, 12)};
        }
        ++comparisons;
      }
    }
  }
  return {true, std::to_string(comparisons) + " comparisons, zero violations"};
}

// Row/column sums and band support of a kernel, visiting every cell.
template <typename K>
bool kernel_is_stochastic(const K& q, double tol, std::string& why) {
  const int n = q.size();
  const BallSpec spec = q.support();
  std::vector<double> row(static_cast<std::size_t>(n), 0.0), col(static_cast<std::size_t>(n), 0.0);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      const double v = q(i, j);
      const bool inside = std::abs(i - j) <= spec.r;
      if ((v > 0.0) != inside) {
        why = "support mismatch at (" + std::to_string(i) + "," + std::to_string(j) + ") for " + to_string(spec);
        return false;
      }
      row[static_cast<std::size_t>(i - 1)] += v;
      col[static_cast<std::size_t>(j - 1)] += v;
    }
  }
  for (int k = 0; k < n; ++k) {
    const double dev = std::max(std::fabs(row[static_cast<std::size_t>(k)] - 1.0),
                                std::fabs(col[static_cast<std::size_t>(k)] - 1.0));
    if (dev > tol) {
      why = "line " + std::to_string(k + 1) + " deviates by " + fmt(dev) + " for " + to_string(spec);
      return false;
    }
  }
  return true;
}

inline CheckOutcome stochasticity(int max_n, double time_limit) {
  const auto t0 = std::chrono::steady_clock::now();
  int first = 0, low = 0, high = 0;
  std::string why;
  for (int n = 1; n <= max_n; ++n) {
    for (int r = 0; r < n; ++r) {
      const BallSpec spec(n, r);
      const ExactStochasticMatrix q = q_first_class(spec);
      if (!q.exactly_doubly_stochastic()) return {false, "first-class sums differ from 1 at " + to_string(spec)};
      if (!q.support_equals(spec)) return {false, "first-class support differs from the band at " + to_string(spec)};
      ++first;
      if (r >= 1 && 2 * r <= n - 2) {
        if (!kernel_is_stochastic(SecondLowKernel(spec), tolerance::kSecondClassSums, why)) {
          return {false, "second-class low: " + why};
        }
        ++low;
      }
      if (spec.strictly_high()) {
        if (!kernel_is_stochastic(SecondHighKernel(spec), tolerance::kSecondClassSums, why)) {
          return {false, "second-class high: " + why};
        }
        ++high;
      }
    }
  }
  const double secs = elapsed_since(t0);
  if (secs > time_limit) return {false, "took " + fmt(secs) + " s, limit " + fmt(time_limit) + " s"};
  return {true, std::to_string(first) + " first-class (exact), " + std::to_string(low) + " low, " +
                    std::to_string(high) + " high matrices; " + fmt(secs, 3) + " s"};
}

template <typename Build>
CheckOutcome sinkhorn_matches(const std::vector<std::pair<int, int>>& cases, Build build) {
  std::string detail;
  bool ok = true;
  for (auto [n, r] : cases) {
    const BallSpec spec(n, r);
    const SinkhornResult s = sinkhorn_balance(BandMatrix(spec), tolerance::kSinkhornSolve);
    const double diff = s.matrix.max_abs_difference(build(spec));
    detail += (detail.empty() ? "" : ", ") + to_string(spec) + " max|diff|=" + fmt(diff, 3);
    ok = ok && diff <= tolerance::kSinkhornEntry;
  }
  return {ok, detail};
}

inline CheckOutcome closed_constants() {
  const double L = kLog2E;
  const double mu = mu_star();
  if (std::fabs(mu - 0.782) > tolerance::kMuStar) return {false, "mu* = " + fmt(mu, 10)};
  const double xi = crossover_xi();
  if (std::fabs(xi - 0.249) > tolerance::kXi) return {false, "xi = " + fmt(xi, 10)};
  const double target = std::log2(4.0 / (std::numbers::e * L));
  if (std::fabs(target - 0.02854) > tolerance::kPhi3GapConstant) return {false, "phi3 constant " + fmt(target, 10)};
  double phi3_max = 0.0;
  for (double rho : open_unit_grid(0.01)) {
    const double g = gap(GapPair::phi3, rho).gap_bits.value;
    if (rho <= 0.5 && std::fabs(g - 0.02854) > tolerance::kPhi3GapConstant) {
      return {false, "gap(phi3, " + fmt(rho) + ") = " + fmt(g, 10)};
    }
    phi3_max = std::max(phi3_max, g);
  }
  if (phi3_max > tolerance::kPhi3GapCeiling) return {false, "max gap(phi3) = " + fmt(phi3_max, 10)};
  const double g1 = gap(GapPair::phi1, 0.5).gap_bits.value;
  if (std::fabs(g1 - (2.0 - L)) > tolerance::kClosedGap) return {false, "gap(phi1, 1/2) = " + fmt(g1, 15)};
  const double g2 = gap(GapPair::phi2, 0.5).gap_bits.value;
  if (std::fabs(g2 - (3.0 - 2.0 * L) / 2.0) > tolerance::kClosedGap) return {false, "gap(phi2, 1/2) = " + fmt(g2, 15)};
  return {true, "mu*=" + fmt(mu, 6) + " xi=" + fmt(xi, 6) + " gap_phi3=" + fmt(target, 6) + " max_phi3=" +
                    fmt(phi3_max, 6) + " gap_phi1(1/2)=" + fmt(g1, 6) + " gap_phi2(1/2)=" + fmt(g2, 6)};
}

inline CheckOutcome convergence(const std::vector<int>& ns, double time_limit) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  const std::vector<std::pair<std::int64_t, std::int64_t>> rhos = {{1, 4}, {1, 2}, {3, 4}};
  for (Family f : {Family::phi1, Family::Phi1, Family::phi2, Family::phi3}) {
    for (auto [num, den] : rhos) {
      const NormalizedRadius rho(num, den);
      std::vector<double> dev;
      for (int n : ns) {
        const BallSpec spec = radius_from_rho(rho, n);
        const BoundValue b = finite_bound(f, spec);
        if (!b.valid) continue;
        const double e = exponent(f, rho.to_double()).e_value.value;
        dev.push_back(std::fabs((n * std::log2(static_cast<double>(n)) - b.bits.value) / n - e));
      }
      if (dev.empty()) continue;
      const std::string tag = to_string(f) + "@" + rho.to_string();
      for (std::size_t k = 1; k < dev.size(); ++k) {
        if (dev[k] > dev[k - 1]) return {false, tag + " deviation increased: " + fmt(dev[k - 1]) + " -> " + fmt(dev[k])};
      }
      if (dev.size() != ns.size()) return {false, tag + " not valid at every n"};
      if (dev.back() > tolerance::kConvergenceFinal) return {false, tag + " final deviation " + fmt(dev.back())};
      detail += (detail.empty() ? "" : " ") + tag + "=" + fmt(dev.back(), 3);
    }
  }
  const double secs = elapsed_since(t0);
  if (secs > time_limit) return {false, "took " + fmt(secs) + " s, limit " + fmt(time_limit) + " s"};
  return {true, detail + "; " + fmt(secs, 3) + " s"};
}

inline CheckOutcome appendix_algebra() {
  double worst_high = 0.0, worst_t = 0.0;
  for (auto [n, r] : std::vector<std::pair<int, int>>{{4, 2}, {6, 4}, {8, 5}, {10, 7}}) {
    const BallSpec spec(n, r);
    const double closed = finite_bound(Family::phi3, spec).bits.value;
    const double generic = phi3_high_generic(spec).value;
    worst_high = std::max(worst_high, std::fabs(closed - generic));
  }
  for (auto [n, r] : std::vector<std::pair<int, int>>{{8, 2}, {12, 3}, {20, 6}}) {
    const BallSpec spec(n, r);
    const TDecomposition c = t_decomposition_closed(spec);
    const TDecomposition d = t_decomposition_direct(spec);
    for (std::size_t k = 0; k < 5; ++k) worst_t = std::max(worst_t, std::fabs(c.t[k] - d.t[k]));
    worst_t = std::max(worst_t, std::fabs(d.t[0] - d.t[4]));
    worst_t = std::max(worst_t, std::fabs(d.t[1] - d.t[3]));
    // Total against the generic functional as well.
    const double generic = vdw_sinkhorn_bound(BandMatrix(spec), SecondLowKernel(spec)).value;
    worst_t = std::max(worst_t, std::fabs(generic - phi3_low_closed(spec).value));
  }
  const bool ok = worst_high <= tolerance::kAppendixAlgebra && worst_t <= tolerance::kAppendixAlgebra;
  return {ok, "phi3-high closed vs generic max|diff|=" + fmt(worst_high, 3) + ", T decomposition max|diff|=" +
                  fmt(worst_t, 3)};
}

inline CheckOutcome root_quality() {
  for (int r : {1, 2, 3, 5, 10, 100, 1000, 10000}) {
    const AlphaRoot a = alpha_low_root(r);
    if (!a.within_tolerance()) return {false, "alpha_r residual " + fmt(a.residual) + " at r=" + std::to_string(r)};
  }
  for (auto [n, r] : std::vector<std::pair<int, int>>{{4, 2}, {5, 3}, {6, 4}, {8, 5}, {10, 7}, {101, 75},
                                                      {1001, 750}, {10001, 7500}, {10001, 9998}}) {
    const AlphaRoot a = alpha_high_root(n, r);
    if (!a.within_tolerance()) {
      return {false, "alpha_{r,n} residual " + fmt(a.residual) + " at " + to_string(BallSpec(n, r))};
    }
  }
  const double asym = std::fabs(1000.0 * alpha_low_root(1000).excess - kLn2);
  if (asym > tolerance::kAlphaAsymptote) return {false, "|r(alpha_r-1) - ln2| = " + fmt(asym) + " at r=1000"};
  double worst = 0.0;
  for (double rho : {0.6, 0.75, 0.9}) {
    const double t = t_hat(rho);
    worst = std::max(worst, std::fabs(std::exp2(t) + t * (2.0 * rho - 1.0) * kLn2 / (1.0 - rho) - 2.0));
  }
  if (worst > tolerance::kTHatRoot) return {false, "t-hat root residual " + fmt(worst)};
  return {true, "residuals within tolerance; |r(alpha_r-1)-ln2| at r=1000 = " + fmt(asym, 4) +
                    "; t-hat residual " + fmt(worst, 3)};
}

inline CheckOutcome improvement_ordering() {
  std::vector<double> deltas, rhos;
  for (int k = 1; k <= 99; ++k) {
    deltas.push_back(k / 99.0);
    rhos.push_back(k / 100.0);
  }
  double best_ecc = -1.0, best_ecc_x = 0.0, best_cov = -1.0, best_cov_x = 0.0;
  for (double d : deltas) {
    const double diff = ecc_rate_upper(d, RateVariant::old_bound).rate_bits.value -
                        ecc_rate_upper(d, RateVariant::new_bound).rate_bits.value;
    if (diff < 0.0) return {false, "ecc_new > ecc_old at delta=" + fmt(d)};
    if (diff > best_ecc) best_ecc = diff, best_ecc_x = d;
  }
  for (double p : rhos) {
    const double diff = covering_rate_upper(p, RateVariant::old_bound).rate_bits.value -
                        covering_rate_upper(p, RateVariant::new_bound).rate_bits.value;
    if (diff < 0.0) return {false, "cover_new > cover_old at rho=" + fmt(p)};
    if (diff > best_cov) best_cov = diff, best_cov_x = p;
  }
  const bool ok = best_cov_x == 0.5 && best_ecc_x == 1.0;
  return {ok, "max covering improvement " + fmt(best_cov) + " at rho=" + fmt(best_cov_x) +
                  "; max ECC improvement " + fmt(best_ecc) + " at delta=" + fmt(best_ecc_x)};
}

inline CheckOutcome bethe_agreement() {
  std::vector<double> diffs;
  std::string detail;
  const NormalizedRadius rho(3, 4);
  for (int n : {21, 41, 81}) {
    const BallSpec spec = radius_from_rho(rho, n);
    const BandMatrix a(spec);
    const SecondHighKernel q(spec);
    const double d = std::fabs(bethe_bound(a, q).value - vdw_sinkhorn_bound(a, q).value) / n;
    diffs.push_back(d);
    detail += (detail.empty() ? "" : ", ") + std::string("n=") + std::to_string(n) + ": " + fmt(d);
  }
  const bool ok = diffs[1] < diffs[0] && diffs[2] < diffs[1];
  return {ok, "|bethe - vdw|/n " + detail};
}

inline CheckOutcome quick_gap_spots() {
  const double L = kLog2E;
  const double g1 = gap(GapPair::phi1, 0.5).gap_bits.value;
  const double g2 = gap(GapPair::phi2, 0.5).gap_bits.value;
  const double g3 = gap(GapPair::phi3, 0.3).gap_bits.value;
  const bool ok = std::fabs(g1 - (2.0 - L)) <= 1e-9 && std::fabs(g2 - (3.0 - 2.0 * L) / 2.0) <= 1e-9 &&
                  std::fabs(g3 - std::log2(4.0 / (std::numbers::e * L))) <= 1e-9;
  return {ok, "gap(phi1,1/2)=" + fmt(g1) + " gap(phi2,1/2)=" + fmt(g2) + " gap(phi3,0.3)=" + fmt(g3)};
}

}  // namespace detail

// One check per acceptance criterion; criterion 4 is split by family.
inline std::vector<Check> acceptance_checks() {
  return {
      {"c1", "oracle agreement, n <= 8",
       [] { return detail::oracle_agreement(8, tolerance::kOracleSeconds); }},
      {"c2", "sandwich property, n <= 10", [] { return detail::sandwich(10); }},
      {"c3", "doubly stochastic Q families, n <= 200",
       [] { return detail::stochasticity(200, tolerance::kStochasticSeconds); }},
      {"c4a", "Sinkhorn fixed point = second-class high Q",
       [] {
         return detail::sinkhorn_matches({{4, 2}, {6, 4}, {8, 5}, {10, 7}},
                                         [](const BallSpec& s) { return q_second_high(s); });
       }},
      {"c4b", "Sinkhorn fixed point = second-class low Q (n even, r=(n-2)/2)",
       [] {
         return detail::sinkhorn_matches({{6, 2}, {8, 3}, {10, 4}},
                                         [](const BallSpec& s) { return q_second_low(s); });
       }},
      {"c5", "closed constants", [] { return detail::closed_constants(); }},
      {"c6", "finite to asymptotic convergence",
       [] { return detail::convergence({101, 1001, 10001}, tolerance::kConvergenceSeconds); }},
      {"c7", "phi3 closed forms = generic functional", [] { return detail::appendix_algebra(); }},
      {"c8", "root quality", [] { return detail::root_quality(); }},
      {"c9", "rate improvement ordering", [] { return detail::improvement_ordering(); }},
      {"c10", "Bethe/vdw agreement trend at rho=3/4", [] { return detail::bethe_agreement(); }},
  };
}

inline std::vector<Check> quick_checks() {
  return {
      {"q1", "oracle agreement, n <= 6", [] { return detail::oracle_agreement(6, tolerance::kOracleSeconds); }},
      {"q2", "doubly stochastic Q families, n <= 30",
       [] { return detail::stochasticity(30, tolerance::kStochasticSeconds); }},
      {"q3", "gap spot values", [] { return detail::quick_gap_spots(); }},
  };
}

// A check that recomputes every record in a cache directory.
inline Check cache_check(const std::filesystem::path& dir) {
  return {"cache", "cache records recompute exactly (" + dir.string() + ")", [dir] {
            const auto bad = Cache(dir).recheck();
            if (!bad.empty()) return CheckOutcome{false, bad.front().file.string() + ": " + bad.front().message};
            return CheckOutcome{true, std::to_string(Cache(dir).record_files().size()) + " records rechecked"};
          }};
}

inline std::string format_report_line(const CheckReport& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.title << "  [" << detail::fmt(r.seconds, 3) << " s]  "
     << r.detail;
  return os.str();
}

}  // namespace permball
