#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>

#include "cxsplit/config.hpp"
#include "cxsplit/csv.hpp"
#include "cxsplit/errors.hpp"
#include "cxsplit/harness.hpp"
#include "oracles.hpp"

using cxsplit::ExperimentKind;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

/// Drops the `# meta:` line so two files can be compared on payload only.
std::string payload(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("# meta:", 0) == 0) continue;
    out += line + '\n';
  }
  return out;
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("cxsplit_h_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name())) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST(Budget, SplitUsesWholeSteps) {
  const auto s = cxsplit::harness::split_budget(1572864, 10, 8000.0);
  EXPECT_EQ(s.steps, 157286u);
  EXPECT_DOUBLE_EQ(s.dt * static_cast<double>(s.steps), 8000.0);
  const auto t = cxsplit::harness::split_budget(1572864, 6, 8000.0);
  EXPECT_EQ(t.steps, 262144u);
  EXPECT_THROW(cxsplit::harness::split_budget(3, 4, 1.0), cxsplit::ValidationError);
  EXPECT_THROW(cxsplit::harness::split_budget(3, 0, 1.0), cxsplit::ValidationError);
}

TEST(Budget, ExponentialCount) {
  EXPECT_EQ(cxsplit::harness::exponentials_per_step(cxsplit::registry_get("SC_c_3")), 5u);
  EXPECT_EQ(cxsplit::harness::exponentials_per_step(cxsplit::registry_get("yoshida4")), 7u);
}

TEST(ParallelFor, RunsEveryIndexOnceAndPropagatesErrors) {
  std::vector<std::atomic<int>> hits(100);
  cxsplit::harness::parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  EXPECT_THROW(cxsplit::harness::parallel_for(
                   10, [](std::size_t i) { if (i == 7) throw cxsplit::ValidationError("boom"); }),
               cxsplit::ValidationError);
}

TEST(Efficiency, SlopesAndOrdering) {
  auto cfg = cxsplit::default_config(ExperimentKind::su2_efficiency);
  cfg.schemes = {"yoshida4", "SC_c_3", "SC_c_4"};
  const auto rows = cxsplit::harness::run_su2_efficiency(cfg);
  ASSERT_EQ(rows.size(), 3u * 11u);
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> curves;
  for (const auto& r : rows) {
    EXPECT_EQ(r.cost, cxsplit::harness::exponentials_per_step(cxsplit::registry_get(r.scheme)) * r.steps);
    // asymptotic range, above round-off
    if (r.h <= 0.2 && r.err2norm > 1e-10) {
      curves[r.scheme].first.push_back(r.h);
      curves[r.scheme].second.push_back(r.err2norm);
    }
  }
  EXPECT_NEAR(oracle::loglog_slope(curves["SC_c_3"].first, curves["SC_c_3"].second), 3.0, 0.25);
  // Same exponential count (7 per step) and same h: SC_c_4 beats Yoshida.
  for (std::size_t i = 0; i < 11; ++i) {
    const auto& y = rows[i];
    const auto& sc4 = rows[22 + i];
    ASSERT_EQ(y.cost, sc4.cost);
    if (y.h < 0.3 && y.err2norm > 1e-11) EXPECT_LT(sc4.err2norm, y.err2norm) << "h=" << y.h;
  }
}

TEST(Unitarity, TraceShapes) {
  const auto cfg = cxsplit::default_config(ExperimentKind::su2_unitarity);
  const auto traces = cxsplit::harness::run_su2_unitarity(cfg);
  ASSERT_EQ(traces.size(), 3u);
  EXPECT_DOUBLE_EQ(traces[0].h, 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(traces[1].h, 0.25);
  EXPECT_EQ(traces[0].records.size(), 6000u);
  EXPECT_EQ(traces[2].records.size(), 4000u);
  auto worst = [](const cxsplit::harness::UnitarityTrace& t) {
    double m = 0.0;
    for (const auto& r : t.records) m = std::max(m, r.norm_error);
    return m;
  };
  EXPECT_LT(worst(traces[1]), worst(traces[0]));
  for (const auto& t : traces) {
    for (std::size_t i = 1; i < t.records.size(); ++i) ASSERT_GT(t.records[i].t, t.records[i - 1].t);
  }
}

TEST(Eigensweep, CriticalStepsAndRows) {
  auto cfg = cxsplit::default_config(ExperimentKind::su2_eigensweep);
  cfg.hpoints = 21;
  const auto res = cxsplit::harness::run_su2_eigensweep(cfg);
  ASSERT_EQ(res.rows.size(), 63u);
  ASSERT_TRUE(res.critical[0].h_star.has_value());
  EXPECT_NEAR(*res.critical[0].h_star, 1.7570473, 1e-6);
  EXPECT_NEAR(*res.critical[1].h_star, 2.9139468357, 1e-8);
  EXPECT_FALSE(res.critical[2].h_star.has_value());
  for (std::size_t i = 42; i < 63; ++i) EXPECT_GT(res.rows[i].mod1, 1.0);
}

TEST(WorkPrecision, FourthOrderRatioAndAccounting) {
  auto cfg = cxsplit::default_config(ExperimentKind::pde_work_precision);
  cfg.schemes = {"SC_r_4"};
  cfg.N = 128;
  cfg.t_final = 10.0;
  cfg.steps = {0.1, 0.05};
  const auto rows = cxsplit::harness::run_pde_work_precision(cfg);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].ffts, 10u * rows[0].steps);
  const double ratio = rows[0].max_energy_err / rows[1].max_energy_err;
  EXPECT_NEAR(ratio, 16.0, 0.3 * 16.0);
}

TEST(Drift, BudgetAccountingIsExact) {
  auto cfg = cxsplit::default_config(ExperimentKind::pde_drift);
  cfg.schemes = {"SC_r_3", "SC_r_4"};
  cfg.t_final = 20.0;
  cfg.budget = 4000;
  const auto traces = cxsplit::harness::run_pde_drift(cfg);
  ASSERT_EQ(traces.size(), 2u);
  EXPECT_EQ(traces[0].propagation_ffts, 6u * 666u);  // 4 FFTs left over
  EXPECT_EQ(traces[1].propagation_ffts, 10u * 400u);
  for (const auto& t : traces) {
    EXPECT_EQ(t.propagation_ffts, t.ffts_per_step * t.steps);
    EXPECT_NEAR(t.records.back().t, 20.0, 1e-12);
    EXPECT_FALSE(t.diverged);
  }
}

TEST(Csv, DialectAndByteIdentity) {
  TempDir dir;
  auto cfg = cxsplit::default_config(ExperimentKind::su2_eigensweep);
  cfg.hpoints = 5;
  const auto r1 = cxsplit::harness::run_su2_eigensweep(cfg);
  const auto r2 = cxsplit::harness::run_su2_eigensweep(cfg);
  cxsplit::csv::write_eigensweep(dir.path / "a.csv", r1, cxsplit::config_hash(cfg));
  cxsplit::csv::write_eigensweep(dir.path / "b.csv", r2, 12345);
  const auto a = slurp(dir.path / "a.csv");
  const auto b = slurp(dir.path / "b.csv");
  EXPECT_EQ(payload(a), payload(b));
  EXPECT_NE(a, b);  // only the meta line differs
  std::istringstream in(a);
  std::string header, meta, row;
  std::getline(in, header);
  std::getline(in, meta);
  std::getline(in, row);
  EXPECT_EQ(header, "h,scheme,mod1,mod2");
  EXPECT_EQ(meta.rfind("# meta: cxsplit ", 0), 0u);
  EXPECT_EQ(row, "1.0000000000000000e+00,SC_c_3,1.0000000000000000e+00,1.0000000000000000e+00");
  EXPECT_FALSE(fs::exists(dir.path / "a.csv.tmp"));
}

TEST(Csv, RealsRoundTrip) {
  for (double x : {1.0 / 3.0, 2.9139468357196, 1e-300, -6.02e23}) {
    EXPECT_EQ(std::stod(cxsplit::csv::format_real(x)), x);
  }
}

TEST(Csv, UnwritableDirectoryThrows) {
  EXPECT_THROW(cxsplit::csv::write_table("/proc/cxsplit/x.csv", {"a"}, {}, 0), cxsplit::Error);
}
