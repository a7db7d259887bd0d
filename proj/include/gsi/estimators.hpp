#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gsi/error.hpp"
#include "gsi/models.hpp"
#include "gsi/numeric.hpp"
#include "gsi/sampling.hpp"

namespace gsi::estimators {

using models::InputModel;
using sampling::SamplerSpec;

enum class EstimatorKind { SobolOriginal, SK, Owen, Oracle, DLR };

inline constexpr std::array kAllEstimators{EstimatorKind::SobolOriginal, EstimatorKind::SK, EstimatorKind::Owen,
                                           EstimatorKind::Oracle, EstimatorKind::DLR};

inline const char* to_string(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::SobolOriginal: return "sobol";
    case EstimatorKind::SK: return "sk";
    case EstimatorKind::Owen: return "owen";
    case EstimatorKind::Oracle: return "oracle";
    case EstimatorKind::DLR: return "dlr";
  }
  return "?";
}

inline std::optional<EstimatorKind> parse_estimator(std::string_view name) {
  for (EstimatorKind k : kAllEstimators)
    if (name == to_string(k)) return k;
  return std::nullopt;
}

// Partition of N reordered samples into M bins of N_m points each.
struct BinSchedule {
  std::size_t N = 0;
  std::size_t M = 0;
  std::size_t N_m = 0;

  // M = 2^ceil(p/2), N_m = 2^floor(p/2) for N = 2^p.
  static BinSchedule for_sample_count(std::size_t n) {
    if (!is_power_of_two(n))
      throw InvalidArgument("default DLR bin schedule needs N = 2^p, got N = " + std::to_string(n) +
                            "; set an explicit bin count");
    const unsigned p = log2_exact(n);
    return checked(n, std::size_t{1} << ((p + 1) / 2));
  }

  static BinSchedule with_bins(std::size_t n, std::size_t m) { return checked(n, m); }

  friend bool operator==(const BinSchedule&, const BinSchedule&) = default;

 private:
  static BinSchedule checked(std::size_t n, std::size_t m) {
    if (m == 0 || n % m != 0)
      throw InvalidArgument("N = " + std::to_string(n) + " is not divisible into " + std::to_string(m) + " bins");
    BinSchedule b{n, m, n / m};
    if (b.M < 2 || b.N_m < 2)
      throw InvalidArgument("DLR needs at least 2 bins of at least 2 points (N = " + std::to_string(n) +
                            ", M = " + std::to_string(m) + ")");
    return b;
  }
};

enum class F0Source { None, Analytic, PrePass };

inline const char* to_string(F0Source s) {
  switch (s) {
    case F0Source::None: return "none";
    case F0Source::Analytic: return "analytic";
    case F0Source::PrePass: return "pre-pass";
  }
  return "?";
}

// Model outputs needed by one estimator for all d inputs.
//
// A, B and C are column blocks [0,d), [d,2d), [2d,3d) of one unit point set.
// fAB[i] holds f at B with column i taken from A, i.e. f(y, z'), and fCA[i]
// holds f at A with column i taken from C, i.e. f(y'', z).
struct EvaluationPlan {
  EstimatorKind kind = EstimatorKind::SK;
  std::size_t N = 0;
  std::size_t d = 0;
  std::vector<double> fA;
  std::optional<std::vector<double>> fB;
  std::vector<std::vector<double>> fAB;
  std::vector<std::vector<double>> fCA;
  Matrix xA;
  std::size_t eval_count = 0;
  std::optional<double> f0;
  F0Source f0_source = F0Source::None;
  std::optional<BinSchedule> bins;
};

struct PlanOptions {
  // Fixed DLR bin count; default schedule when unset.
  std::optional<std::size_t> bin_count;
};

struct IndexEstimate {
  EstimatorKind kind = EstimatorKind::SK;
  std::size_t input = 0;
  double D_i_hat = 0.0;
  double D_hat = 0.0;
  double S_i_hat = 0.0;
  std::size_t N = 0;
  double eval_count_share = 0.0;
  F0Source f0_source = F0Source::None;
};

namespace detail {

inline std::size_t unit_dims(EstimatorKind kind, std::size_t d, bool needs_prepass) {
  switch (kind) {
    case EstimatorKind::DLR: return d;
    case EstimatorKind::Owen: return 3 * d;
    case EstimatorKind::Oracle: return needs_prepass ? 3 * d : 2 * d;
    default: return 2 * d;
  }
}

inline std::vector<double> evaluate_rows(const InputModel& model, const Matrix& x) {
  std::vector<double> out(x.rows());
  for (std::size_t k = 0; k < x.rows(); ++k) out[k] = model.f(x.row(k));
  return out;
}

// f at rows of `base` with column i replaced by the same row of `donor`.
inline std::vector<double> evaluate_mixed(const InputModel& model, const Matrix& base, const Matrix& donor,
                                          std::size_t i) {
  std::vector<double> out(base.rows());
  std::vector<double> row(base.cols());
  for (std::size_t k = 0; k < base.rows(); ++k) {
    std::copy(base.row(k).begin(), base.row(k).end(), row.begin());
    row[i] = donor(k, i);
    out[k] = model.f(row);
  }
  return out;
}

inline void require_same_length(std::initializer_list<std::span<const double>> arrays) {
  const std::size_t n = arrays.begin()->size();
  if (n == 0) throw InvalidArgument("estimator input arrays are empty");
  for (auto a : arrays)
    if (a.size() != n) throw InvalidArgument("estimator input arrays differ in length");
}

}  // namespace detail

inline EvaluationPlan build_plan(const InputModel& model, EstimatorKind kind, std::size_t n, const SamplerSpec& sampler,
                                 const PlanOptions& options = {}) {
  if (n < 2) throw InvalidArgument("estimators need N >= 2");
  if (kind != EstimatorKind::DLR && !model.independent())
    throw IncompatibleEstimator(std::string("estimator '") + to_string(kind) + "' cannot be used on model " +
                                model.name + ": direct formulas assume independent inputs");

  EvaluationPlan plan;
  plan.kind = kind;
  plan.N = n;
  plan.d = model.d;
  if (kind == EstimatorKind::DLR)
    plan.bins = options.bin_count ? BinSchedule::with_bins(n, *options.bin_count) : BinSchedule::for_sample_count(n);

  const bool prepass = kind == EstimatorKind::Oracle && !model.analytic_f0;
  const std::size_t d = model.d;
  const auto unit = sampling::generate_uniform(sampler, n, detail::unit_dims(kind, d, prepass));

  std::optional<Matrix> chol;
  if (!model.independent()) chol = sampling::cholesky_lower(model.covariance());
  auto block = [&](std::size_t b) {
    if (model.independent()) return sampling::transform_independent_block(unit, model.marginals(), b * d);
    return sampling::transform_correlated_normal_block(unit, model.covariance(), *chol, b * d);
  };

  plan.xA = block(0);
  plan.fA = detail::evaluate_rows(model, plan.xA);
  plan.eval_count = n;
  if (kind == EstimatorKind::DLR) return plan;

  const Matrix xB = block(1);
  if (kind != EstimatorKind::SobolOriginal) {
    plan.fB = detail::evaluate_rows(model, xB);
    plan.eval_count += n;
  }
  plan.fAB.reserve(d);
  for (std::size_t i = 0; i < d; ++i) plan.fAB.push_back(detail::evaluate_mixed(model, xB, plan.xA, i));
  plan.eval_count += n * d;

  if (kind == EstimatorKind::Owen) {
    const Matrix xC = block(2);
    plan.fCA.reserve(d);
    for (std::size_t i = 0; i < d; ++i) plan.fCA.push_back(detail::evaluate_mixed(model, plan.xA, xC, i));
    plan.eval_count += n * d;
  }
  if (kind == EstimatorKind::Oracle) {
    if (model.analytic_f0) {
      plan.f0 = *model.analytic_f0;
      plan.f0_source = F0Source::Analytic;
    } else {
      const auto fC = detail::evaluate_rows(model, block(2));
      plan.f0 = mean(fC);
      plan.f0_source = F0Source::PrePass;
      plan.eval_count += n;
    }
  }
  return plan;
}

struct MeanVariance {
  double f0_hat = 0.0;
  double D_hat = 0.0;
};

// Mean and variance over the union of fA and fB. The variance is taken in
// the centred two-pass form, equal to mean(f^2) - f0^2 in exact arithmetic.
inline MeanVariance estimate_mean_and_variance(std::span<const double> fA,
                                               std::optional<std::span<const double>> fB = std::nullopt) {
  std::vector<double> all(fA.begin(), fA.end());
  if (fB) all.insert(all.end(), fB->begin(), fB->end());
  if (all.empty()) throw InvalidArgument("no model outputs to estimate mean and variance from");
  const double f0 = mean(all);
  const double D = mean_of(all.size(), [&](std::size_t k) { return (all[k] - f0) * (all[k] - f0); });
  if (!(D > 0.0)) throw DegenerateVariance();
  return {f0, D};
}

inline double estimate_sobol_original(std::span<const double> fA, std::span<const double> fAB_i) {
  detail::require_same_length({fA, fAB_i});
  const double f0 = mean(fA);
  return mean_of(fA.size(), [&](std::size_t k) { return fA[k] * fAB_i[k]; }) - f0 * f0;
}

inline double estimate_sk(std::span<const double> fA, std::span<const double> fB, std::span<const double> fAB_i) {
  detail::require_same_length({fA, fB, fAB_i});
  return mean_of(fA.size(), [&](std::size_t k) { return fA[k] * (fAB_i[k] - fB[k]); });
}

inline double estimate_owen(std::span<const double> fA, std::span<const double> fB, std::span<const double> fAB_i,
                            std::span<const double> fCA_i) {
  detail::require_same_length({fA, fB, fAB_i, fCA_i});
  return mean_of(fA.size(), [&](std::size_t k) { return (fA[k] - fCA_i[k]) * (fAB_i[k] - fB[k]); });
}

inline double estimate_oracle(std::span<const double> fA, std::span<const double> fB, std::span<const double> fAB_i,
                              double f0) {
  detail::require_same_length({fA, fB, fAB_i});
  return mean_of(fA.size(), [&](std::size_t k) { return (fA[k] - f0) * (fAB_i[k] - fB[k]); });
}

// Sample indices ordered by x ascending; ties keep the original order.
inline std::vector<std::size_t> reorder_by(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  return order;
}

// Variance of the bin means of fA after reordering by x_i. Uses
// (1/M) sum (m_j - f0)^2, identical to (1/M) sum m_j^2 - f0^2 because the
// bins are equally populated.
inline double estimate_dlr(std::span<const double> x_i, std::span<const double> fA, const BinSchedule& bins) {
  detail::require_same_length({x_i, fA});
  if (fA.size() != bins.M * bins.N_m) throw InvalidArgument("DLR arrays do not match the bin schedule");
  const double f0 = mean(fA);
  const auto order = reorder_by(x_i);
  std::vector<double> bin(bins.N_m);
  std::vector<double> dev(bins.M);
  for (std::size_t j = 0; j < bins.M; ++j) {
    for (std::size_t k = 0; k < bins.N_m; ++k) bin[k] = fA[order[j * bins.N_m + k]];
    const double m = mean(bin);
    dev[j] = (m - f0) * (m - f0);
  }
  return mean(dev);
}

inline std::vector<IndexEstimate> estimate_main_index(EstimatorKind kind, const EvaluationPlan& plan,
                                                      const InputModel& model) {
  if (plan.kind != kind) throw InvalidArgument("evaluation plan was built for a different estimator");
  if (plan.d != model.d) throw InvalidArgument("evaluation plan does not match the model dimension");

  std::optional<std::span<const double>> fB;
  if (plan.fB) fB = std::span<const double>(*plan.fB);
  const double D = estimate_mean_and_variance(plan.fA, fB).D_hat;

  std::vector<IndexEstimate> out;
  out.reserve(plan.d);
  for (std::size_t i = 0; i < plan.d; ++i) {
    double Di = 0.0;
    switch (kind) {
      case EstimatorKind::SobolOriginal: Di = estimate_sobol_original(plan.fA, plan.fAB[i]); break;
      case EstimatorKind::SK: Di = estimate_sk(plan.fA, *plan.fB, plan.fAB[i]); break;
      case EstimatorKind::Owen: Di = estimate_owen(plan.fA, *plan.fB, plan.fAB[i], plan.fCA[i]); break;
      case EstimatorKind::Oracle: Di = estimate_oracle(plan.fA, *plan.fB, plan.fAB[i], *plan.f0); break;
      case EstimatorKind::DLR: Di = estimate_dlr(plan.xA.column(i), plan.fA, *plan.bins); break;
    }
    out.push_back({kind, i, Di, D, Di / D, plan.N,
                   static_cast<double>(plan.eval_count) / static_cast<double>(plan.d), plan.f0_source});
  }
  return out;
}

// Convenience: build the plan and estimate every S_i.
inline std::vector<IndexEstimate> estimate(const InputModel& model, EstimatorKind kind, std::size_t n,
                                           const SamplerSpec& sampler, const PlanOptions& options = {}) {
  return estimate_main_index(kind, build_plan(model, kind, n, sampler, options), model);
}

}  // namespace gsi::estimators
