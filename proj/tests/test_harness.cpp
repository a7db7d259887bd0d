#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <tuple>

#include "gsi/harness.hpp"

namespace gh = gsi::harness;
namespace gm = gsi::models;
namespace gs = gsi::sampling;
using gsi::estimators::EstimatorKind;
using gm::TestCaseId;

namespace {

gh::BenchmarkConfig config(TestCaseId test, std::vector<EstimatorKind> kinds, gs::SamplerKind sampler, unsigned p_min,
                           unsigned p_max) {
  gh::BenchmarkConfig cfg;
  cfg.test = test;
  cfg.estimators = std::move(kinds);
  cfg.sampler = sampler;
  cfg.p_min = p_min;
  cfg.p_max = p_max;
  return cfg;
}

std::vector<gh::ConvergenceRecord> synthetic(std::vector<double> rmse) {
  std::vector<gh::ConvergenceRecord> out;
  for (std::size_t j = 0; j < rmse.size(); ++j) {
    gh::ConvergenceRecord r;
    r.estimator = EstimatorKind::SK;
    r.N = std::size_t{1} << (8 + j);
    r.n_cpu_actual = 6 * r.N;
    r.rmse = rmse[j];
    out.push_back(r);
  }
  return out;
}

constexpr std::array kAll = {EstimatorKind::SobolOriginal, EstimatorKind::SK, EstimatorKind::Owen,
                             EstimatorKind::Oracle, EstimatorKind::DLR};

}  // namespace

TEST(Cost, ReferenceExamples) {
  EXPECT_EQ(gh::cost(EstimatorKind::DLR, 10, 1024), (gh::Cost{1024, 1024}));
  EXPECT_EQ(gh::cost(EstimatorKind::Owen, 3, 1024), (gh::Cost{8192, 8192}));
  EXPECT_EQ(gh::cost(EstimatorKind::SobolOriginal, 4, 1024), (gh::Cost{5120, 9216}));
  EXPECT_EQ(gh::cost(EstimatorKind::SK, 4, 1024), (gh::Cost{6144, 6144}));
  EXPECT_EQ(gh::cost(EstimatorKind::Oracle, 4, 1024), (gh::Cost{6144, 6144}));
}

TEST(Cost, ActualNeverExceedsTable) {
  for (auto k : kAll)
    for (std::size_t d = 1; d <= 12; ++d)
      for (std::size_t n : {2u, 64u, 4096u}) {
        const auto c = gh::cost(k, d, n);
        EXPECT_LE(c.actual, c.table1);
        if (k != EstimatorKind::SobolOriginal) {
          EXPECT_EQ(c.actual, c.table1);
        }
      }
}

TEST(Rmse, IdenticalEstimatesGiveAbsoluteError) {
  const std::vector<double> s(10, 0.3125);
  EXPECT_EQ(gh::rmse(s, 0.25), 0.0625);
  EXPECT_EQ(gh::rmse(s, 0.375), 0.0625);
  const std::vector<double> two{1.0, 3.0};
  EXPECT_DOUBLE_EQ(gh::rmse(two, 2.0), 1.0);
}

TEST(RunBenchmark, LadderShapeAndTrend) {
  const auto cfg = config(TestCaseId::Linear4, {EstimatorKind::SK}, gs::SamplerKind::QMC, 8, 14);
  const auto rec = gh::run_benchmark(cfg);
  ASSERT_EQ(rec.size(), 28u);
  for (std::size_t j = 0; j < rec.size(); ++j) {
    EXPECT_EQ(rec[j].input, j / 7);
    EXPECT_EQ(rec[j].N, std::size_t{1} << (8 + j % 7));
    EXPECT_EQ(rec[j].K, 10u);
    EXPECT_GE(rec[j].rmse, 0.0);
    EXPECT_EQ(rec[j].n_cpu_actual, gh::cost(EstimatorKind::SK, 4, rec[j].N).actual);
    EXPECT_EQ(rec[j].n_cpu_table1, gh::cost(EstimatorKind::SK, 4, rec[j].N).table1);
  }
  for (const auto& f : gh::fit_rates(rec, gh::CostAxis::N, gh::FitWindow::Full)) EXPECT_GT(f.alpha, 0.3);
}

TEST(RunBenchmark, RejectsSingleReplicate) {
  auto cfg = config(TestCaseId::Linear4, {EstimatorKind::SK}, gs::SamplerKind::QMC, 8, 9);
  cfg.K = 1;
  EXPECT_THROW(gh::run_benchmark(cfg), gsi::InvalidArgument);
  cfg.K = 2;
  cfg.p_min = 10;
  EXPECT_THROW(gh::run_benchmark(cfg), gsi::InvalidArgument);
}

TEST(RunBenchmark, DependentModelWithDlr) {
  const auto cfg = config(TestCaseId::DepQuad4, {EstimatorKind::DLR}, gs::SamplerKind::QMC, 10, 14);
  const auto rec = gh::run_benchmark(cfg);
  ASSERT_EQ(rec.size(), 20u);
  for (const auto& r : rec)
    if (r.input >= 2) {
      EXPECT_EQ(r.analytic, 0.0);
      EXPECT_NEAR(r.rmse, std::abs(r.mean_estimate), 0.05);
    }
  EXPECT_THROW(gh::run_benchmark(config(TestCaseId::DepQuad4, {EstimatorKind::SK}, gs::SamplerKind::QMC, 8, 9)),
               gsi::IncompatibleEstimator);
}

TEST(RunBenchmark, RequiresAnalyticReference) {
  auto model = gm::build(TestCaseId::Linear4);
  model.analytic_main.reset();
  const auto cfg = config(TestCaseId::Linear4, {EstimatorKind::SK}, gs::SamplerKind::QMC, 8, 9);
  try {
    gh::run_benchmark(model, cfg);
    FAIL() << "expected rejection";
  } catch (const gsi::InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("RMSE requires analytic reference"), std::string::npos);
  }
}

TEST(RunBenchmark, IndependentOfThreadCount) {
  for (auto sampler : {gs::SamplerKind::MC, gs::SamplerKind::QMC}) {
    auto cfg = config(TestCaseId::Ishigami, {kAll.begin(), kAll.end()}, sampler, 8, 11);
    cfg.K = 4;
    cfg.threads = 1;
    const auto serial = gh::run_benchmark(cfg);
    cfg.threads = 4;
    const auto parallel = gh::run_benchmark(cfg);
    EXPECT_EQ(serial, parallel);
  }
}

TEST(RunBenchmark, RecordsSortedByEstimatorInputN) {
  const auto cfg = config(TestCaseId::Linear4, {EstimatorKind::DLR, EstimatorKind::SobolOriginal},
                          gs::SamplerKind::MC, 8, 9);
  const auto rec = gh::run_benchmark(cfg);
  ASSERT_EQ(rec.size(), 16u);
  EXPECT_EQ(rec.front().estimator, EstimatorKind::SobolOriginal);
  EXPECT_EQ(rec.back().estimator, EstimatorKind::DLR);
  for (std::size_t j = 1; j < rec.size(); ++j) {
    const auto a = std::tuple(rec[j - 1].estimator, rec[j - 1].input, rec[j - 1].N);
    const auto b = std::tuple(rec[j].estimator, rec[j].input, rec[j].N);
    EXPECT_LT(a, b);
  }
}

TEST(RunBenchmark, MasterSeedChangesMcRecords) {
  auto cfg = config(TestCaseId::Linear4, {EstimatorKind::SK}, gs::SamplerKind::MC, 8, 9);
  const auto a = gh::run_benchmark(cfg);
  cfg.master_seed += 1;
  const auto b = gh::run_benchmark(cfg);
  EXPECT_NE(a.front().rmse, b.front().rmse);
}

TEST(FitRate, ExactPowerLaw) {
  std::vector<double> r;
  for (unsigned p = 8; p <= 14; ++p) r.push_back(10.0 / std::ldexp(1.0, p));
  const auto rec = synthetic(r);
  for (auto w : {gh::FitWindow::Upper, gh::FitWindow::Full}) {
    const auto f = gh::fit_rate(rec, gh::CostAxis::N, w);
    EXPECT_NEAR(f.alpha, 1.0, 1e-12);
    EXPECT_NEAR(f.c, 10.0, 1e-9);
    EXPECT_NEAR(f.r2, 1.0, 1e-12);
  }
  // N_CPU = 6 N: same slope, prefactor scaled by 6.
  const auto f = gh::fit_rate(rec, gh::CostAxis::N_CPU, gh::FitWindow::Full);
  EXPECT_NEAR(f.alpha, 1.0, 1e-12);
  EXPECT_NEAR(f.c, 60.0, 1e-8);
}

TEST(FitRate, UpperWindowKeepsLargestHalf) {
  // First three points break the power law; the upper four follow N^-0.5.
  std::vector<double> r{1.0, 1.0, 1.0};
  for (unsigned p = 11; p <= 14; ++p) r.push_back(std::pow(std::ldexp(1.0, p), -0.5));
  const auto rec = synthetic(r);
  const auto up = gh::fit_rate(rec, gh::CostAxis::N, gh::FitWindow::Upper);
  EXPECT_EQ(up.points, 4u);
  EXPECT_NEAR(up.alpha, 0.5, 1e-12);
  EXPECT_EQ(gh::fit_rate(rec, gh::CostAxis::N, gh::FitWindow::Full).points, 7u);
}

TEST(FitRate, DropsZeroRmseAndNeedsFourPoints) {
  const auto rec = synthetic({1e-2, 0.0, 5e-3, 1e-15, 2.5e-3, 1.25e-3});
  const auto f = gh::fit_rate(rec, gh::CostAxis::N, gh::FitWindow::Full);
  EXPECT_EQ(f.points, 4u);
  EXPECT_THROW(gh::fit_rate(synthetic({1e-2, 0.0, 5e-3, 2.5e-3}), gh::CostAxis::N, gh::FitWindow::Full),
               gsi::InvalidArgument);
  EXPECT_THROW(gh::fit_rate(synthetic({1e-2, 5e-3, 2.5e-3}), gh::CostAxis::N), gsi::InvalidArgument);
}

TEST(FitRate, MonteCarloRateOfSobolFormula) {
  const auto rec = gh::run_benchmark(config(TestCaseId::Linear4, {EstimatorKind::SobolOriginal}, gs::SamplerKind::MC, 8, 16));
  for (const auto& f : gh::fit_rates(rec, gh::CostAxis::N, gh::FitWindow::Full)) EXPECT_NEAR(f.alpha, 0.5, 0.15);
}

// Over the full ladder SK, Oracle and DLR keep pace with the Sobol formula
// on the small-index input. Owen's slope is flatter here although its RMSE
// is lower at every ladder point; both facts are checked.
TEST(FitRate, ImprovedFormulasOnSmallIndexInput) {
  const auto rec = gh::run_benchmark(config(TestCaseId::Linear4, {kAll.begin(), kAll.end()}, gs::SamplerKind::QMC, 8, 16));
  const auto sobol = gh::fit_rate(gh::select(rec, EstimatorKind::SobolOriginal, 0), gh::CostAxis::N, gh::FitWindow::Full);
  for (auto k : {EstimatorKind::SK, EstimatorKind::Oracle, EstimatorKind::DLR}) {
    const auto f = gh::fit_rate(gh::select(rec, k, 0), gh::CostAxis::N, gh::FitWindow::Full);
    EXPECT_GE(f.alpha, sobol.alpha - 0.1) << gsi::estimators::to_string(k);
  }
  for (auto k : {EstimatorKind::SK, EstimatorKind::Oracle})
    for (std::size_t i = 0; i < 4; ++i)
      EXPECT_NEAR(gh::fit_rate(gh::select(rec, k, i), gh::CostAxis::N, gh::FitWindow::Full).alpha, 1.0, 0.25);
  const auto owen = gh::select(rec, EstimatorKind::Owen, 0);
  const auto base = gh::select(rec, EstimatorKind::SobolOriginal, 0);
  for (std::size_t j = 0; j < owen.size(); ++j) EXPECT_LT(owen[j].rmse, base[j].rmse);
}
