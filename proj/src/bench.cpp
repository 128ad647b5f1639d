#include "taufpl/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "taufpl/error.hpp"
#include "taufpl/projection.hpp"

namespace taufpl {

const char* variant_name(BenchVariant v) {
  switch (v) {
    case BenchVariant::kDac: return "dac";
    case BenchVariant::kPlainBisection: return "plain_bisection";
    case BenchVariant::kSortSearch: return "sort_search";
    case BenchVariant::kCappedSimplex: return "capped_simplex";
    case BenchVariant::kTraining: return "training";
  }
  return "unknown";
}

std::optional<BenchVariant> variant_from_name(const std::string& name) {
  for (auto v : {BenchVariant::kDac, BenchVariant::kPlainBisection, BenchVariant::kSortSearch,
                 BenchVariant::kCappedSimplex, BenchVariant::kTraining}) {
    if (name == variant_name(v)) return v;
  }
  return std::nullopt;
}

std::size_t KRule::k_for(std::size_t n) const {
  double k = is_fraction ? std::floor(value * static_cast<double>(n)) : value;
  k = std::clamp(k, 1.0, static_cast<double>(n));
  return static_cast<std::size_t>(k);
}

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
std::int64_t time_once(F&& f) {
  const auto t0 = Clock::now();
  f();
  const auto t1 = Clock::now();
  return std::max<std::int64_t>(1, std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
}

// Keeps results observable so the timed call is not optimized away.
volatile double g_sink = 0.0;

}  // namespace

std::vector<BenchRecord> bench_projection(const ProjectionBenchConfig& cfg) {
  if (cfg.trials < 3) throw std::invalid_argument("bench needs at least 3 trials");
  std::vector<BenchRecord> out;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  for (const auto& [m, n] : cfg.sizes) {
    std::vector<double> alpha0(m), beta0(n);
    for (double& a : alpha0) a = normal(rng);
    for (double& b : beta0) b = normal(rng);
    const std::size_t k = cfg.k_rule.k_for(n);
    const bool run_sort = static_cast<double>(k) * static_cast<double>(n) <= cfg.sort_search_max_work;

    ProjectionOptions dac_opts, plain_opts;
    plain_opts.use_caches = false;
    auto has = [&](BenchVariant v) {
      return std::find(cfg.variants.begin(), cfg.variants.end(), v) != cfg.variants.end();
    };

    // Correctness gate.
    const bool top_k_pair = has(BenchVariant::kDac) || has(BenchVariant::kPlainBisection);
    if (top_k_pair) {
      const auto a = project_top_k(alpha0, beta0, k, dac_opts);
      const auto b = project_top_k(alpha0, beta0, k, plain_opts);
      if (std::abs(a.lambda - b.lambda) > cfg.agreement_tol) {
        throw std::runtime_error("bench gate: dac and plain bisection disagree on lambda");
      }
    }
    const bool capped_pair = has(BenchVariant::kCappedSimplex) || (has(BenchVariant::kSortSearch) && run_sort);
    if (capped_pair && run_sort) {
      const auto a = project_capped_simplex(beta0, k, dac_opts);
      const auto b = project_capped_simplex_sorted(beta0, k);
      if (std::abs(a.C - b.C) > cfg.agreement_tol * std::max(1.0, b.C)) {
        throw std::runtime_error("bench gate: capped simplex variants disagree on C");
      }
    }

    for (BenchVariant v : cfg.variants) {
      std::function<void()> run;
      switch (v) {
        case BenchVariant::kDac:
          run = [&] { g_sink = project_top_k(alpha0, beta0, k, dac_opts).lambda; };
          break;
        case BenchVariant::kPlainBisection:
          run = [&] { g_sink = project_top_k(alpha0, beta0, k, plain_opts).lambda; };
          break;
        case BenchVariant::kCappedSimplex:
          run = [&] { g_sink = project_capped_simplex(beta0, k, dac_opts).C; };
          break;
        case BenchVariant::kSortSearch:
          if (!run_sort) continue;
          run = [&] { g_sink = project_capped_simplex_sorted(beta0, k).C; };
          break;
        case BenchVariant::kTraining:
          continue;
      }
      time_once(run);  // warm-up
      for (std::size_t t = 0; t < cfg.trials; ++t) {
        out.push_back({v, m, n, k, t, time_once(run)});
      }
    }
  }
  return out;
}

std::vector<BenchRecord> bench_training(const Dataset& ds, const std::vector<std::size_t>& ratios,
                                        const TrainConfig& cfg, std::size_t trials) {
  if (trials < 1) throw std::invalid_argument("bench needs at least 1 trial");
  TrainConfig fixed = cfg;
  fixed.eps = 1e-300;  // run the full iteration budget
  std::vector<BenchRecord> out;
  for (std::size_t ratio : ratios) {
    const Dataset big = upsample(ds, ratio);
    const std::size_t k = top_k_from_tau(cfg.tau, big.num_negative());
    for (std::size_t t = 0; t < trials; ++t) {
      const auto ns = time_once([&] { g_sink = train_ranker(big, fixed).final_dual; });
      out.push_back({BenchVariant::kTraining, big.num_positive(), big.num_negative(), k, t, ns});
    }
  }
  return out;
}

std::int64_t median_nanos(const std::vector<BenchRecord>& records, BenchVariant v, std::size_t m, std::size_t n) {
  std::vector<std::int64_t> t;
  for (const auto& r : records) {
    if (r.variant == v && r.m == m && r.n == n) t.push_back(r.wall_nanos);
  }
  if (t.empty()) throw std::invalid_argument("no records for this cell");
  std::sort(t.begin(), t.end());
  const std::size_t h = t.size() / 2;
  return t.size() % 2 ? t[h] : (t[h - 1] + t[h]) / 2;
}

double fit_loglog_slope(const std::vector<std::pair<double, double>>& size_time) {
  std::set<double> distinct;
  for (const auto& [s, t] : size_time) {
    if (!(s > 0.0) || !(t > 0.0)) throw std::invalid_argument("log-log fit needs positive sizes and times");
    distinct.insert(s);
  }
  if (distinct.size() < 3) throw std::invalid_argument("log-log fit needs at least 3 distinct sizes");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(size_time.size());
  for (const auto& [s, t] : size_time) {
    const double x = std::log(s), y = std::log(t);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double fit_loglog_slope(const std::vector<BenchRecord>& records, BenchVariant v) {
  std::set<std::pair<std::size_t, std::size_t>> cells;
  for (const auto& r : records) {
    if (r.variant == v) cells.insert({r.m, r.n});
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& [m, n] : cells) {
    pts.emplace_back(static_cast<double>(m + n), static_cast<double>(median_nanos(records, v, m, n)));
  }
  return fit_loglog_slope(pts);
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records, bool header) {
  if (header) out << "variant,m,n,k,trial,wall_nanos\n";
  for (const auto& r : records) {
    out << variant_name(r.variant) << ',' << r.m << ',' << r.n << ',' << r.k << ',' << r.trial << ','
        << r.wall_nanos << '\n';
  }
}

std::vector<BenchRecord> read_bench_csv(std::istream& in) {
  std::vector<BenchRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.rfind("variant,", 0) == 0) continue;
    std::istringstream ss(line);
    std::string field;
    std::vector<std::string> f;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() != 6) throw ParseError(lineno, "expected 6 CSV fields");
    const auto v = variant_from_name(f[0]);
    if (!v) throw ParseError(lineno, "unknown variant '" + f[0] + "'");
    try {
      out.push_back({*v, std::stoul(f[1]), std::stoul(f[2]), std::stoul(f[3]), std::stoul(f[4]),
                     std::stoll(f[5])});
    } catch (const std::exception&) {
      throw ParseError(lineno, "malformed number");
    }
  }
  return out;
}

}  // namespace taufpl
