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

// permball command-line tool.
//
// Exit codes: 0 ok, 1 usage or validation error, 2 capacity exceeded,
// 3 every sweep row failed, 4 verification failure.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "permball/permball.hpp"

namespace {

using namespace permball;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitCapacity = 2;
constexpr int kExitSweepFailed = 3;
constexpr int kExitVerify = 4;

// "4..8" expands to 4,5,6,7,8.
std::vector<int> parse_int_list(const std::vector<std::string>& items, const char* what) {
  std::vector<int> out;
  for (const auto& item : items) {
    try {
      const auto dots = item.find("..");
      if (dots == std::string::npos) {
        std::size_t used = 0;
        out.push_back(std::stoi(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } else {
        const int lo = std::stoi(item.substr(0, dots));
        const int hi = std::stoi(item.substr(dots + 2));
        if (hi < lo) throw std::invalid_argument(item);
        for (int v = lo; v <= hi; ++v) out.push_back(v);
      }
    } catch (const std::logic_error&) {
      throw ValidationError(std::string("bad ") + what + " value '" + item + "'");
    }
  }
  return out;
}

std::vector<Family> parse_families(const std::vector<std::string>& names) {
  std::vector<Family> out;
  for (const auto& name : names) {
    if (name == "all") return {kAllFamilies.begin(), kAllFamilies.end()};
    auto f = family_from_string(name);
    if (!f) throw ValidationError("unknown family '" + name + "'");
    out.push_back(*f);
  }
  return out;
}

void emit(const Table& table, const Schema& schema, const std::string& format, const std::string& out_path) {
  std::string text;
  if (format == "json") {
    text = to_json(table, schema).dump(2) + "\n";
  } else {
    validate(table, schema);
    text = to_csv(table);
  }
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + out_path);
  out << text;
}

std::string generated_line() { return "generated " + utc_timestamp() + " by permball " + kVersion; }

// ---------------------------------------------------------------------------

struct ExactArgs {
  int n = 0;
  std::optional<int> r;
  std::string rho;
  std::string cache_dir;
  bool no_cache = true;
  bool expert = false;
};

int cmd_exact(const ExactArgs& a) {
  BallSpec spec;
  if (a.r && !a.rho.empty()) throw ValidationError("give either --r or --rho, not both");
  if (a.r) {
    spec = BallSpec(a.n, *a.r);
  } else if (!a.rho.empty()) {
    spec = radius_from_rho(NormalizedRadius::parse(a.rho), a.n);
  } else {
    throw ValidationError("exact needs --r or --rho");
  }
  const Capacity cap = a.expert ? Capacity::expert() : Capacity{};
  const ExactResult res = a.no_cache ? ball_size_exact(spec, DispatchMode::cheapest, cap)
                                     : Cache(resolve_cache_dir(a.cache_dir)).get_or_compute(spec, cap);
  std::cout << res.count.to_string() << "\n";
  std::cerr << "backend: " << to_string(res.backend) << "\n";
  return kExitOk;
}

struct SweepArgs {
  std::vector<std::string> n, r, rho, families{"all"};
  std::string out, format = "csv", cache_dir;
  bool no_cache = false;
  bool recheck_cache = false;
  bool expert = false;
  int jobs = 0;
};

int cmd_sweep(const SweepArgs& a) {
  SweepConfig cfg;
  cfg.n_list = parse_int_list(a.n, "--n");
  if (cfg.n_list.empty()) throw ValidationError("sweep needs --n");
  cfg.r_list = parse_int_list(a.r, "--r");
  for (const auto& s : a.rho) cfg.rho_list.push_back(NormalizedRadius::parse(s));
  cfg.families = parse_families(a.families);
  if (!a.no_cache) cfg.cache_dir = resolve_cache_dir(a.cache_dir);
  if (a.expert) cfg.capacity = Capacity::expert();
  cfg.jobs = a.jobs > 0 ? a.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  if (a.recheck_cache && cfg.cache_dir) {
    const auto bad = Cache(*cfg.cache_dir).recheck(cfg.capacity);
    if (!bad.empty()) {
      std::cerr << "cache mismatch: " << bad.front().file.string() << ": " << bad.front().message << "\n";
      return kExitVerify;
    }
  }
  const SweepResult res = run_sweep(cfg);
  Table table = sweep_table(res);
  table.metadata.insert(table.metadata.begin(), generated_line());
  emit(table, schemas::sweep(), a.format, a.out);
  for (const auto& note : res.notices) std::cerr << "notice: " << note << "\n";
  if (res.rows.empty()) {
    std::cerr << "sweep produced no rows\n";
    return kExitSweepFailed;
  }
  if (!res.any_success()) {
    std::cerr << "every sweep row failed\n";
    return kExitSweepFailed;
  }
  if (res.failures) std::cerr << res.failures << " of " << res.rows.size() << " rows failed\n";
  return kExitOk;
}

struct FigureArgs {
  std::string which;
  double grid_step = 0.01;
  std::string layout = "wide";
  std::string out, format = "csv";
};

int cmd_figures(const FigureArgs& a) {
  const std::vector<double> grid = open_unit_grid(a.grid_step);
  const bool wide = a.layout == "wide";
  if (!wide && a.layout != "long") throw ValidationError("--layout must be wide or long");
  Table t;
  t.metadata.push_back(generated_line());
  if (a.which == "fig1") {
    t.metadata.push_back("asymptotic gap to Phi1 in bits per symbol");
    const std::vector<GapPair> pairs(kAllGapPairs.begin(), kAllGapPairs.end());
    const GapCurveTable curves = gap_curve_table(pairs, grid);
    for (const auto& note : curves.notices) t.metadata.push_back(note);
    if (!wide) {
      t.header = schemas::gap_curve().header();
      for (const auto& p : curves.points) t.rows.push_back({to_string(p.pair), format_real(p.rho), format_real(p.gap_bits.value)});
      emit(t, schemas::gap_curve(), a.format, a.out);
      return kExitOk;
    }
    t.header = schemas::fig1_wide().header();
    for (double rho : grid) {
      std::vector<std::string> row{format_real(rho)};
      for (GapPair p : kAllGapPairs) row.push_back(in_gap_range(p, rho) ? format_real(gap(p, rho).gap_bits.value) : "");
      t.rows.push_back(std::move(row));
    }
    emit(t, schemas::fig1_wide(), a.format, a.out);
    return kExitOk;
  }
  t.metadata.push_back("rates in bits per symbol, excluding the log2 n term");
  if (a.which == "fig2") {
    std::vector<double> deltas = grid;
    deltas.push_back(1.0);
    if (!wide) {
      t.header = schemas::rate().header();
      for (const auto& p : rate_table({RateKind::ecc_old, RateKind::ecc_new}, deltas))
        t.rows.push_back({to_string(p.kind), format_real(p.x), format_real(p.rate_bits.value), "asymptotic", ""});
      emit(t, schemas::rate(), a.format, a.out);
      return kExitOk;
    }
    t.metadata.push_back("code_anticode curve not computed (formula not available)");
    t.header = schemas::fig2_wide().header();
    for (double d : deltas) {
      const double o = ecc_rate_upper(d, RateVariant::old_bound).rate_bits.value;
      const double nw = ecc_rate_upper(d, RateVariant::new_bound).rate_bits.value;
      t.rows.push_back({format_real(d), format_real(o), format_real(nw), format_real(o - nw), "unavailable"});
    }
    emit(t, schemas::fig2_wide(), a.format, a.out);
    return kExitOk;
  }
  if (a.which == "fig3") {
    if (!wide) {
      t.header = schemas::rate().header();
      for (const auto& p : rate_table({RateKind::cover_old, RateKind::cover_new}, grid))
        t.rows.push_back({to_string(p.kind), format_real(p.x), format_real(p.rate_bits.value), "asymptotic", ""});
      emit(t, schemas::rate(), a.format, a.out);
      return kExitOk;
    }
    t.metadata.push_back("construction curve not computed (formula not available)");
    t.header = schemas::fig3_wide().header();
    for (double p : grid) {
      const double o = covering_rate_upper(p, RateVariant::old_bound).rate_bits.value;
      const double nw = covering_rate_upper(p, RateVariant::new_bound).rate_bits.value;
      t.rows.push_back({format_real(p), format_real(o), format_real(nw), format_real(o - nw), "unavailable"});
    }
    emit(t, schemas::fig3_wide(), a.format, a.out);
    return kExitOk;
  }
  throw ValidationError("unknown figure '" + a.which + "' (fig1, fig2 or fig3)");
}

struct VerifyArgs {
  std::string level = "quick";
  std::string cache_dir;
};

int cmd_verify(const VerifyArgs& a) {
  std::vector<Check> checks;
  if (a.level == "quick") {
    checks = quick_checks();
  } else if (a.level == "full") {
    checks = acceptance_checks();
  } else {
    throw ValidationError("--level must be quick or full");
  }
  const auto dir = resolve_cache_dir(a.cache_dir);
  std::error_code ec;
  if (std::filesystem::is_directory(dir, ec)) checks.push_back(cache_check(dir));

  std::optional<CheckReport> first_failure;
  for (const auto& c : checks) {
    const CheckReport rep = run_check(c);
    std::cout << format_report_line(rep) << std::endl;
    if (!rep.passed && !first_failure) first_failure = rep;
  }
  if (first_failure) {
    std::cout << "verification failed; first counterexample (" << first_failure->name << "): " << first_failure->detail
              << "\n";
    return kExitVerify;
  }
  std::cout << "all " << checks.size() << " checks passed\n";
  return kExitOk;
}

struct QmatArgs {
  int n = 0;
  int r = 0;
  std::string family = "first";
  std::string layout = "dense";
  std::string out, format = "csv";
};

int cmd_qmatrix(const QmatArgs& a) {
  const BallSpec spec(a.n, a.r);
  StochasticMatrix q;
  if (a.family == "first") {
    q = q_first_class(spec).to_real();
  } else if (a.family == "second_low") {
    q = q_second_low(spec);
  } else if (a.family == "second_high") {
    q = q_second_high(spec);
  } else if (a.family == "sinkhorn") {
    q = sinkhorn_balance(BandMatrix(spec)).matrix;
  } else {
    throw ValidationError("unknown Q family '" + a.family + "' (first, second_low, second_high, sinkhorn)");
  }
  Table t;
  t.metadata.push_back(generated_line());
  t.metadata.push_back("Q family " + a.family + " for " + to_string(spec) + ", max row/column deviation " +
                       format_real(q.max_sum_deviation()));
  if (a.layout == "triplet") {
    t.header = schemas::triplet().header();
    for (int i = 1; i <= spec.n; ++i)
      for (int j = 1; j <= spec.n; ++j)
        if (q(i, j) != 0.0) t.rows.push_back({std::to_string(i), std::to_string(j), format_real(q(i, j))});
    emit(t, schemas::triplet(), a.format, a.out);
  } else if (a.layout == "dense") {
    const Schema s = schemas::dense_grid(spec.n);
    t.header = s.header();
    for (int i = 1; i <= spec.n; ++i) {
      std::vector<std::string> row{std::to_string(i)};
      for (int j = 1; j <= spec.n; ++j) row.push_back(format_real(q(i, j)));
      t.rows.push_back(std::move(row));
    }
    emit(t, s, a.format, a.out);
  } else {
    throw ValidationError("--layout must be dense or triplet");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact sizes and bounds for balls of permutations under the infinity metric"};
  app.set_version_flag("--version", std::string(permball::kVersion));
  app.require_subcommand(1);

  ExactArgs ea;
  auto* exact = app.add_subcommand("exact", "exact ball size |B_{r,n}|");
  exact->add_option("--n", ea.n, "number of symbols")->required();
  exact->add_option("--r", ea.r, "radius");
  exact->add_option("--rho", ea.rho, "normalized radius, e.g. 1/2 or 0.25");
  exact->add_option("--cache-dir", ea.cache_dir, "use this cache directory");
  exact->add_flag("--expert", ea.expert, "lift backend capacity limits");

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "tabulate bounds and exact counts over (n, r)");
  sweep->add_option("--n", sa.n, "n values or ranges, e.g. 4..8,12")->delimiter(',')->required();
  sweep->add_option("--r", sa.r, "radii (default: all)")->delimiter(',');
  sweep->add_option("--rho", sa.rho, "normalized radii")->delimiter(',');
  sweep->add_option("--families", sa.families, "families or 'all'")->delimiter(',');
  sweep->add_option("--out", sa.out, "output file (default stdout)");
  sweep->add_option("--format", sa.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--cache-dir", sa.cache_dir, "cache directory (default $PERMBALL_CACHE or .permball-cache)");
  sweep->add_flag("--no-cache", sa.no_cache, "do not read or write the cache");
  sweep->add_flag("--recheck-cache", sa.recheck_cache, "recompute every cached record first");
  sweep->add_option("--jobs", sa.jobs, "worker threads (default: processors)");
  sweep->add_flag("--expert", sa.expert, "lift backend capacity limits");

  FigureArgs fa;
  auto* figures = app.add_subcommand("figures", "curve data for the gap, ECC and covering figures");
  figures->add_option("which", fa.which, "fig1, fig2 or fig3")->required();
  figures->add_option("--grid-step", fa.grid_step, "grid step on (0,1)");
  figures->add_option("--layout", fa.layout, "wide or long");
  figures->add_option("--out", fa.out, "output file (default stdout)");
  figures->add_option("--format", fa.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run the self-verification suite");
  verify->add_option("--level", va.level, "quick or full");
  verify->add_option("--cache-dir", va.cache_dir, "cache directory to recheck");

  QmatArgs qa;
  auto* qmatrix = app.add_subcommand("qmatrix", "emit a doubly stochastic Q matrix");
  qmatrix->add_option("--n", qa.n, "dimension")->required();
  qmatrix->add_option("--r", qa.r, "band radius")->required();
  qmatrix->add_option("--family", qa.family, "first, second_low, second_high or sinkhorn");
  qmatrix->add_option("--layout", qa.layout, "dense or triplet");
  qmatrix->add_option("--out", qa.out, "output file (default stdout)");
  qmatrix->add_option("--format", qa.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    ea.no_cache = ea.cache_dir.empty() && !std::getenv("PERMBALL_CACHE");
    if (*exact) return cmd_exact(ea);
    if (*sweep) return cmd_sweep(sa);
    if (*figures) return cmd_figures(fa);
    if (*verify) return cmd_verify(va);
    if (*qmatrix) return cmd_qmatrix(qa);
  } catch (const CapacityError& e) {
    std::cerr << "capacity exceeded: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
