#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "gsi/error.hpp"
#include "gsi/estimators.hpp"
#include "gsi/models.hpp"
#include "gsi/numeric.hpp"
#include "gsi/sampling.hpp"

namespace gsi::harness {

using estimators::EstimatorKind;
using models::InputModel;
using models::TestCaseId;
using sampling::SamplerKind;

enum class FitWindow { Upper, Full };
enum class CostAxis { N, N_CPU };

inline const char* to_string(FitWindow w) { return w == FitWindow::Upper ? "upper" : "full"; }
inline const char* to_string(CostAxis a) { return a == CostAxis::N ? "N" : "N_CPU"; }

struct BenchmarkConfig {
  TestCaseId test = TestCaseId::Linear4;
  std::vector<EstimatorKind> estimators;
  SamplerKind sampler = SamplerKind::QMC;
  unsigned p_min = 8;
  unsigned p_max = 14;
  std::size_t K = 10;
  std::uint64_t master_seed = 20150101;
  std::optional<std::size_t> bin_override;
  FitWindow fit_window = FitWindow::Upper;
  sampling::LognormalConvention lognormal = models::kDefaultLognormalConvention;
  // 0: GSI_THREADS or hardware concurrency.
  unsigned threads = 0;
};

// Function-evaluation counts for a full set of d main-effect indices:
// what this library spends, and the figure the reference cost table lists
// (which also covers total indices).
struct Cost {
  std::size_t actual = 0;
  std::size_t table1 = 0;
  friend bool operator==(const Cost&, const Cost&) = default;
};

inline Cost cost(EstimatorKind kind, std::size_t d, std::size_t n) {
  switch (kind) {
    case EstimatorKind::SobolOriginal: return {n * (d + 1), n * (2 * d + 1)};
    case EstimatorKind::SK:
    case EstimatorKind::Oracle: return {n * (d + 2), n * (d + 2)};
    case EstimatorKind::Owen: return {n * (2 * d + 2), n * (2 * d + 2)};
    case EstimatorKind::DLR: return {n, n};
  }
  return {};
}

struct ConvergenceRecord {
  std::string test;
  EstimatorKind estimator = EstimatorKind::SK;
  SamplerKind sampler = SamplerKind::QMC;
  std::size_t input = 0;  // 0-based
  std::size_t N = 0;
  std::size_t n_cpu_actual = 0;
  std::size_t n_cpu_table1 = 0;
  double rmse = 0.0;
  double mean_estimate = 0.0;
  double analytic = 0.0;
  std::size_t K = 0;

  friend bool operator==(const ConvergenceRecord&, const ConvergenceRecord&) = default;
};

struct RateFit {
  EstimatorKind estimator = EstimatorKind::SK;
  std::size_t input = 0;
  double alpha = 0.0;
  double c = 0.0;
  double r2 = 0.0;
  CostAxis axis = CostAxis::N;
  std::size_t points = 0;
};

// RMSE of K replicate estimates against the analytic value.
inline double rmse(std::span<const double> estimates, double analytic) {
  return std::sqrt(mean_of(estimates.size(), [&](std::size_t k) {
    const double e = estimates[k] - analytic;
    return e * e;
  }));
}

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("GSI_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

inline void validate(const BenchmarkConfig& cfg) {
  if (cfg.estimators.empty()) throw InvalidArgument("benchmark needs at least one estimator");
  if (cfg.p_min > cfg.p_max) throw InvalidArgument("p_min must not exceed p_max");
  if (cfg.p_max > 30) throw InvalidArgument("p_max above 30 is not supported");
  if (cfg.K < 2) throw InvalidArgument("K must be at least 2 replicates");
}

// Runs K replicates of every (estimator, N = 2^p) pair on `model` and returns
// one record per (estimator, input, N), sorted by estimator, input and N.
// Results do not depend on the thread count.
inline std::vector<ConvergenceRecord> run_benchmark(const InputModel& model, const BenchmarkConfig& cfg) {
  validate(cfg);
  if (!model.analytic_main || model.analytic_main->size() != model.d)
    throw InvalidArgument("RMSE requires analytic reference values for model " + model.name);

  std::vector<EstimatorKind> kinds = cfg.estimators;
  std::sort(kinds.begin(), kinds.end());
  kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());
  for (EstimatorKind k : kinds)
    if (k != EstimatorKind::DLR && !model.independent())
      throw IncompatibleEstimator(std::string("estimator '") + estimators::to_string(k) + "' cannot be used on model " +
                                  model.name + ": direct formulas assume independent inputs");

  const std::size_t n_p = cfg.p_max - cfg.p_min + 1;
  struct Task {
    std::size_t e, p, k;
  };
  std::vector<Task> tasks;
  for (std::size_t e = 0; e < kinds.size(); ++e)
    for (std::size_t p = 0; p < n_p; ++p)
      for (std::size_t k = 0; k < cfg.K; ++k) tasks.push_back({e, p, k});

  // estimates[task] = S_i for all inputs; eval counts per (e, p).
  std::vector<std::vector<double>> estimates(tasks.size());
  std::vector<std::size_t> evals(kinds.size() * n_p, 0);
  std::vector<std::exception_ptr> errors(tasks.size());

  estimators::PlanOptions options;
  options.bin_count = cfg.bin_override;

  auto run_task = [&](std::size_t t) {
    const Task& task = tasks[t];
    const std::size_t n = std::size_t{1} << (cfg.p_min + task.p);
    const auto spec = cfg.sampler == SamplerKind::MC
                          ? sampling::SamplerSpec::mc(sampling::derive_seed(cfg.master_seed, task.k))
                          : sampling::SamplerSpec::qmc(task.k);
    try {
      const auto plan = estimators::build_plan(model, kinds[task.e], n, spec, options);
      const auto est = estimators::estimate_main_index(kinds[task.e], plan, model);
      std::vector<double> s(model.d);
      for (const auto& ie : est) s[ie.input] = ie.S_i_hat;
      estimates[t] = std::move(s);
      if (task.k == 0) evals[task.e * n_p + task.p] = plan.eval_count;
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };

  const unsigned threads = std::min<std::size_t>(resolve_threads(cfg.threads), tasks.size());
  if (threads <= 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < tasks.size(); t = next++) run_task(t);
      });
  }
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);

  std::vector<ConvergenceRecord> records;
  records.reserve(kinds.size() * model.d * n_p);
  std::vector<double> runs(cfg.K);
  for (std::size_t e = 0; e < kinds.size(); ++e)
    for (std::size_t i = 0; i < model.d; ++i)
      for (std::size_t p = 0; p < n_p; ++p) {
        const std::size_t n = std::size_t{1} << (cfg.p_min + p);
        const std::size_t base = (e * n_p + p) * cfg.K;
        for (std::size_t k = 0; k < cfg.K; ++k) runs[k] = estimates[base + k][i];
        const double analytic = (*model.analytic_main)[i];
        ConvergenceRecord r;
        r.test = model.name;
        r.estimator = kinds[e];
        r.sampler = cfg.sampler;
        r.input = i;
        r.N = n;
        r.n_cpu_actual = evals[e * n_p + p];
        r.n_cpu_table1 = cost(kinds[e], model.d, n).table1;
        r.rmse = rmse(runs, analytic);
        r.mean_estimate = mean(runs);
        r.analytic = analytic;
        r.K = cfg.K;
        records.push_back(std::move(r));
      }
  return records;
}

inline std::vector<ConvergenceRecord> run_benchmark(const BenchmarkConfig& cfg) {
  return run_benchmark(models::build(cfg.test, cfg.lognormal), cfg);
}

// Least-squares fit of log10(rmse) = log10(c) - alpha * log10(x) over the
// records of one (estimator, input), x being N or N_CPU. Points with
// rmse < 1e-14 are dropped. The Upper window keeps the largest
// max(4, ceil(n/2)) ladder points.
inline RateFit fit_rate(std::span<const ConvergenceRecord> records, CostAxis axis,
                        FitWindow window = FitWindow::Upper) {
  if (records.empty()) throw InvalidArgument("no records to fit");
  std::vector<ConvergenceRecord> sorted(records.begin(), records.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.N < b.N; });
  for (const auto& r : sorted)
    if (r.estimator != sorted.front().estimator || r.input != sorted.front().input)
      throw InvalidArgument("fit_rate expects records of a single estimator and input");

  std::size_t first = 0;
  if (window == FitWindow::Upper) {
    const std::size_t keep = std::max<std::size_t>(4, (sorted.size() + 1) / 2);
    if (sorted.size() > keep) first = sorted.size() - keep;
  }
  std::vector<double> lx, ly;
  for (std::size_t j = first; j < sorted.size(); ++j) {
    const auto& r = sorted[j];
    if (!(r.rmse >= 1e-14)) continue;
    const double x = axis == CostAxis::N ? static_cast<double>(r.N) : static_cast<double>(r.n_cpu_actual);
    lx.push_back(std::log10(x));
    ly.push_back(std::log10(r.rmse));
  }
  if (lx.size() < 4)
    throw InvalidArgument("rate fit needs at least 4 points with non-zero RMSE, have " + std::to_string(lx.size()));

  const double mx = mean(lx), my = mean(ly);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t j = 0; j < lx.size(); ++j) {
    sxx += (lx[j] - mx) * (lx[j] - mx);
    sxy += (lx[j] - mx) * (ly[j] - my);
    syy += (ly[j] - my) * (ly[j] - my);
  }
  const double slope = sxy / sxx;
  RateFit fit;
  fit.estimator = sorted.front().estimator;
  fit.input = sorted.front().input;
  fit.alpha = -slope;
  fit.c = std::pow(10.0, my - slope * mx);
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.axis = axis;
  fit.points = lx.size();
  return fit;
}

// One fit per (estimator, input) present in `records`.
inline std::vector<RateFit> fit_rates(std::span<const ConvergenceRecord> records, CostAxis axis,
                                      FitWindow window = FitWindow::Upper) {
  std::map<std::pair<EstimatorKind, std::size_t>, std::vector<ConvergenceRecord>> groups;
  for (const auto& r : records) groups[{r.estimator, r.input}].push_back(r);
  std::vector<RateFit> fits;
  for (const auto& [key, group] : groups) fits.push_back(fit_rate(group, axis, window));
  return fits;
}

// Records of one (estimator, input), in ladder order.
inline std::vector<ConvergenceRecord> select(std::span<const ConvergenceRecord> records, EstimatorKind kind,
                                             std::size_t input) {
  std::vector<ConvergenceRecord> out;
  for (const auto& r : records)
    if (r.estimator == kind && r.input == input) out.push_back(r);
  return out;
}

}  // namespace gsi::harness
