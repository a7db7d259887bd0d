#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "gsi/error.hpp"
#include "gsi/estimators.hpp"
#include "gsi/harness.hpp"
#include "gsi/models.hpp"

namespace gsi::io {

using harness::BenchmarkConfig;
using harness::ConvergenceRecord;
using harness::RateFit;

// Malformed config file or CSV input. `line` is 1-based, 0 when unknown.
class FormatError : public InvalidArgument {
 public:
  FormatError(std::size_t line, const std::string& what)
      : InvalidArgument(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Shortest round-trip representation, locale independent.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
bool parse_integer(std::string_view s, T& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

inline bool parse_double(std::string_view s, double& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline std::optional<sampling::SamplerKind> parse_sampler(std::string_view s) {
  const auto l = lower(s);
  if (l == "mc") return sampling::SamplerKind::MC;
  if (l == "qmc") return sampling::SamplerKind::QMC;
  return std::nullopt;
}

inline std::optional<sampling::LognormalConvention> parse_lognormal(std::string_view s) {
  using sampling::LognormalConvention;
  for (auto c : {LognormalConvention::LogParameters, LognormalConvention::Moments,
                 LognormalConvention::MeanWithLogSigma})
    if (s == sampling::to_string(c)) return c;
  return std::nullopt;
}

inline std::vector<estimators::EstimatorKind> parse_estimator_list(std::string_view s, std::size_t line = 0) {
  std::vector<estimators::EstimatorKind> out;
  for (const auto& name : split(s, ',')) {
    const auto k = estimators::parse_estimator(name);
    if (!k) throw FormatError(line, "unknown estimator '" + name + "' (expected sobol, sk, owen, oracle, dlr)");
    out.push_back(*k);
  }
  if (out.empty()) throw FormatError(line, "empty estimator list");
  return out;
}

// Flat `key = value` config; '#' starts a comment. Keys:
//   test, estimators, sampler, p_min, p_max, K, master_seed,
//   bin_override, fit_window, lognormal
// `test`, `estimators`, `sampler`, `p_min` and `p_max` are required.
inline BenchmarkConfig parse_config(std::istream& in) {
  BenchmarkConfig cfg;
  std::set<std::string> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw FormatError(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (value.empty()) throw FormatError(line_no, "missing value for '" + key + "'");
    if (!seen.insert(key).second) throw FormatError(line_no, "duplicate key '" + key + "'");

    auto bad = [&](const std::string& what) { return FormatError(line_no, "invalid " + key + ": " + what); };
    if (key == "test") {
      const auto id = models::parse_test_case(value);
      if (!id) throw bad("unknown test case '" + value + "'");
      cfg.test = *id;
    } else if (key == "estimators") {
      cfg.estimators = parse_estimator_list(value, line_no);
    } else if (key == "sampler") {
      const auto s = parse_sampler(value);
      if (!s) throw bad("expected MC or QMC");
      cfg.sampler = *s;
    } else if (key == "p_min" || key == "p_max") {
      unsigned p = 0;
      if (!parse_integer(value, p) || p < 1 || p > 30) throw bad("expected an integer exponent in [1, 30]");
      (key == "p_min" ? cfg.p_min : cfg.p_max) = p;
    } else if (key == "K") {
      std::size_t k = 0;
      if (!parse_integer(value, k) || k < 2) throw bad("expected an integer >= 2");
      cfg.K = k;
    } else if (key == "master_seed") {
      std::uint64_t s = 0;
      if (!parse_integer(value, s)) throw bad("expected an unsigned 64-bit integer");
      cfg.master_seed = s;
    } else if (key == "bin_override") {
      std::size_t m = 0;
      if (lower(value) == "none") {
        cfg.bin_override.reset();
      } else {
        if (!parse_integer(value, m) || m < 2) throw bad("expected a bin count >= 2 or 'none'");
        cfg.bin_override = m;
      }
    } else if (key == "fit_window") {
      if (value == "upper") cfg.fit_window = harness::FitWindow::Upper;
      else if (value == "full") cfg.fit_window = harness::FitWindow::Full;
      else throw bad("expected 'upper' or 'full'");
    } else if (key == "lognormal") {
      const auto c = parse_lognormal(value);
      if (!c) throw bad("expected log-parameters, moments or mean-log-sigma");
      cfg.lognormal = *c;
    } else {
      throw FormatError(line_no, "unknown key '" + key + "'");
    }
  }
  for (const char* required : {"test", "estimators", "sampler", "p_min", "p_max"})
    if (!seen.count(required)) throw FormatError(0, std::string("missing required key '") + required + "'");
  if (cfg.p_min > cfg.p_max) throw FormatError(0, "p_min must not exceed p_max");
  return cfg;
}

// Canonical text of a resolved config; the checksum is taken over this.
inline std::string canonical_config(const BenchmarkConfig& cfg) {
  std::ostringstream out;
  out << "test = " << models::to_string(cfg.test) << '\n' << "estimators = ";
  for (std::size_t j = 0; j < cfg.estimators.size(); ++j)
    out << (j ? "," : "") << estimators::to_string(cfg.estimators[j]);
  out << '\n'
      << "sampler = " << sampling::to_string(cfg.sampler) << '\n'
      << "p_min = " << cfg.p_min << '\n'
      << "p_max = " << cfg.p_max << '\n'
      << "K = " << cfg.K << '\n'
      << "master_seed = " << cfg.master_seed << '\n'
      << "bin_override = " << (cfg.bin_override ? std::to_string(*cfg.bin_override) : "none") << '\n'
      << "fit_window = " << harness::to_string(cfg.fit_window) << '\n'
      << "lognormal = " << sampling::to_string(cfg.lognormal) << '\n';
  return out.str();
}

// FNV-1a, 64 bit.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline constexpr std::string_view kRecordsHeader =
    "test,estimator,sampler,input,N,n_cpu_actual,n_cpu_table1,rmse,mean_estimate,analytic,K";

inline void write_records_csv(std::ostream& out, std::span<const ConvergenceRecord> records) {
  out << kRecordsHeader << '\n';
  for (const auto& r : records)
    out << r.test << ',' << estimators::to_string(r.estimator) << ',' << sampling::to_string(r.sampler) << ','
        << (r.input + 1) << ',' << r.N << ',' << r.n_cpu_actual << ',' << r.n_cpu_table1 << ','
        << format_double(r.rmse) << ',' << format_double(r.mean_estimate) << ',' << format_double(r.analytic) << ','
        << r.K << '\n';
}

inline constexpr std::string_view kRatesHeader = "test,estimator,sampler,input,axis,alpha,c,r2,points";

inline void write_rates_csv(std::ostream& out, std::string_view test, sampling::SamplerKind sampler,
                            std::span<const RateFit> fits) {
  out << kRatesHeader << '\n';
  for (const auto& f : fits)
    out << test << ',' << estimators::to_string(f.estimator) << ',' << sampling::to_string(sampler) << ','
        << (f.input + 1) << ',' << harness::to_string(f.axis) << ',' << format_double(f.alpha) << ','
        << format_double(f.c) << ',' << format_double(f.r2) << ',' << f.points << '\n';
}

inline std::vector<ConvergenceRecord> read_records_csv(std::istream& in) {
  std::string raw;
  if (!std::getline(in, raw)) throw FormatError(1, "empty records file");
  const auto header = split(trim(raw), ',');
  std::map<std::string, std::size_t> col;
  for (std::size_t j = 0; j < header.size(); ++j) col[header[j]] = j;
  for (const auto& name : split(kRecordsHeader, ','))
    if (!col.count(name)) throw FormatError(1, "missing column '" + name + "'");

  std::vector<ConvergenceRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, raw)) {
    ++line_no;
    if (trim(raw).empty()) continue;
    const auto f = split(trim(raw), ',');
    if (f.size() != header.size()) throw FormatError(line_no, "expected " + std::to_string(header.size()) + " fields");
    auto field = [&](const char* name) -> const std::string& { return f[col.at(name)]; };
    ConvergenceRecord r;
    r.test = field("test");
    const auto kind = estimators::parse_estimator(field("estimator"));
    const auto sampler = parse_sampler(field("sampler"));
    std::size_t input = 0;
    bool ok = kind && sampler && parse_integer(field("input"), input) && input >= 1 &&
              parse_integer(field("N"), r.N) && parse_integer(field("n_cpu_actual"), r.n_cpu_actual) &&
              parse_integer(field("n_cpu_table1"), r.n_cpu_table1) && parse_double(field("rmse"), r.rmse) &&
              parse_double(field("mean_estimate"), r.mean_estimate) && parse_double(field("analytic"), r.analytic) &&
              parse_integer(field("K"), r.K);
    if (!ok) throw FormatError(line_no, "malformed record");
    r.estimator = *kind;
    r.sampler = *sampler;
    r.input = input - 1;
    out.push_back(std::move(r));
  }
  return out;
}

// Plot-ready table for one (test, input, axis), rows in ascending N.
//   axis N:     "# N <est>..." then N followed by one RMSE column per estimator.
//   axis N_CPU: "# N ncpu:<est> rmse:<est> ..." since each estimator spends a
//               different N_CPU at the same N.
// Only rows where every estimator has a strictly positive RMSE are kept.
struct PlotTable {
  std::string test;
  std::size_t input = 0;
  harness::CostAxis axis = harness::CostAxis::N;
  std::vector<estimators::EstimatorKind> estimators;
  std::string text;
  std::size_t rows = 0;
};

inline std::vector<PlotTable> make_plot_tables(std::span<const ConvergenceRecord> records, harness::CostAxis axis) {
  using Key = std::pair<std::string, std::size_t>;
  std::map<Key, std::map<std::size_t, std::map<estimators::EstimatorKind, const ConvergenceRecord*>>> grid;
  std::map<Key, std::set<estimators::EstimatorKind>> kinds;
  for (const auto& r : records) {
    grid[{r.test, r.input}][r.N][r.estimator] = &r;
    kinds[{r.test, r.input}].insert(r.estimator);
  }
  std::vector<PlotTable> out;
  for (const auto& [key, by_n] : grid) {
    PlotTable t;
    t.test = key.first;
    t.input = key.second;
    t.axis = axis;
    t.estimators.assign(kinds[key].begin(), kinds[key].end());
    std::ostringstream s;
    s << "# " << t.test << " input " << (t.input + 1) << " RMSE vs " << harness::to_string(axis) << "\n# N";
    for (auto k : t.estimators) {
      if (axis == harness::CostAxis::N) s << ' ' << estimators::to_string(k);
      else s << " ncpu:" << estimators::to_string(k) << " rmse:" << estimators::to_string(k);
    }
    s << '\n';
    for (const auto& [n, by_kind] : by_n) {
      bool complete = by_kind.size() == t.estimators.size();
      for (const auto& [k, r] : by_kind) complete = complete && r->rmse > 0.0;
      if (!complete) continue;
      s << n;
      for (auto k : t.estimators) {
        const auto* r = by_kind.at(k);
        if (axis == harness::CostAxis::N_CPU) s << ' ' << r->n_cpu_actual;
        s << ' ' << format_double(r->rmse);
      }
      s << '\n';
      ++t.rows;
    }
    t.text = s.str();
    out.push_back(std::move(t));
  }
  return out;
}

inline std::string plot_file_name(const PlotTable& t) {
  return t.test + "_input" + std::to_string(t.input + 1) + "_" + harness::to_string(t.axis) + ".dat";
}

}  // namespace gsi::io
