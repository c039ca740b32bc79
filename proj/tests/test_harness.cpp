#include <gtest/gtest.h>

#include <cmath>

#include "gaussbayes/errors.hpp"
#include "gaussbayes/harness.hpp"

using namespace gaussbayes;

namespace {

std::string config_error_message(const std::string& text) {
  try {
    parse_config_string(text).validate();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, RangesListsAndComments) {
  const auto cfg = parse_config_string(
      "# sweep\n"
      "task = phasehet   # case-insensitive\n"
      "alpha2 = 0.5:1.5:3\n"
      "r = 0, 0.25\n"
      "\n"
      "seed = 17\n");
  EXPECT_EQ(cfg.task, TaskKind::PhaseHet);
  ASSERT_EQ(cfg.sweep.size(), 2u);
  EXPECT_EQ(cfg.sweep[0].name, "alpha2");
  EXPECT_EQ(cfg.sweep[0].values, (std::vector<double>{0.5, 1.0, 1.5}));
  EXPECT_EQ(cfg.sweep[1].values, (std::vector<double>{0.0, 0.25}));
  EXPECT_TRUE(cfg.seed_set);
  EXPECT_EQ(cfg.seed, 17u);
}

TEST(Config, ErrorsCarryLineNumbers) {
  EXPECT_NE(config_error_message("task = PhaseHet\nalpha = 1\nfoo = 2\n").find("line 3"), std::string::npos);
  EXPECT_NE(config_error_message("task = PhaseHet\nalpha = 1\nalpha = 2\n").find("line 3"), std::string::npos);
  EXPECT_NE(config_error_message("task = PhaseHet\nalpha 1\n").find("line 2"), std::string::npos);
  EXPECT_NE(config_error_message("task = Nope\n").find("line 1"), std::string::npos);
  EXPECT_NE(config_error_message("task = PhaseHet\nalpha = 1:2:0\n").find("line 2"), std::string::npos);
}

TEST(Config, SemanticChecks) {
  EXPECT_FALSE(config_error_message("alpha = 1\n").empty());
  EXPECT_FALSE(config_error_message("task = PhaseHet\n").empty());
  EXPECT_FALSE(config_error_message("task = PhaseHet\nalpha = 1\nmethod = montecarlo\n").empty());
  EXPECT_FALSE(config_error_message("task = PhaseHet\nalpha = 1\nn = 2\n").empty());
  EXPECT_TRUE(config_error_message("task = PhaseHet\nalpha = 1\nmethod = montecarlo\nseed = 3\n").empty());
}

TEST(Csv, FormatDouble) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(format_double(NAN), "nan");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Csv, HeaderAndLineEndings) {
  const std::string csv = to_csv({});
  EXPECT_EQ(csv, "task,alpha,r,psi,sigma0sq,r0,m_rounds,n,avg_variance,std_error,method,status\n");
  EXPECT_NE(to_csv({}, true).find(",wall_time\n"), std::string::npos);
  const auto rows = run(parse_config_string("task = PhaseHet\nalpha = 1, 2\n"));
  const std::string body = to_csv(rows);
  EXPECT_EQ(body.find('\r'), std::string::npos);
  EXPECT_EQ(std::count(body.begin(), body.end(), '\n'), 3);
}

TEST(Run, PhaseHetClosedForm) {
  const auto rows = run(parse_config_string("task = PhaseHet\nalpha2 = 0.5, 1, 2\nr = 0\n"));
  ASSERT_EQ(rows.size(), 3u);
  const double a2[] = {0.5, 1.0, 2.0};
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(rows[i].method, "closed_form");
    EXPECT_NEAR(rows[i].avg_variance, (1 - std::exp(-a2[i])) / (2 * a2[i]), 1e-15);
    EXPECT_NEAR(rows[i].n, a2[i], 1e-15);
    EXPECT_EQ(rows[i].std_error, 0.0);
  }
}

TEST(Run, DisplacementRounds) {
  const auto rows = run(parse_config_string("task = DisplacementHom\nm_rounds = 1:5:5\nsigma0sq = 1\nr = 0\n"));
  ASSERT_EQ(rows.size(), 5u);
  for (int m = 1; m <= 5; ++m) EXPECT_DOUBLE_EQ(rows[m - 1].avg_variance, 1.0 / (1 + 4 * m));
}

TEST(Run, ForceBothPathsAddsEngineRow) {
  auto cfg = parse_config_string("task = DisplacementHet\nsigma0sq = 0.25\nr = 0, 0.5\n");
  cfg.force_both_paths = true;
  const auto rows = run(cfg);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].method, "closed_form");
  EXPECT_EQ(rows[1].method, "quadrature");
  for (const auto& r : rows) EXPECT_EQ(r.status, "ok");
}

TEST(Run, RowFailuresAreRecorded) {
  const auto rows = run(parse_config_string("task = PhaseHet\nn = 0.5, 2\nr = 1\nsamples = 10\n"
                                            "method = quadrature\n"));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NE(rows[0].status.find("error"), std::string::npos);
  EXPECT_TRUE(std::isnan(rows[0].avg_variance));
  EXPECT_EQ(rows[1].status, "ok");
}

TEST(Run, MonteCarloDeterministicAcrossThreads) {
  const auto cfg = parse_config_string(
      "task = PhaseHom\nalpha = 0.5, 1.0, 1.5\nmethod = montecarlo\nsamples = 2000\nseed = 99\n");
  RunOptions one, four;
  one.threads = 1;
  four.threads = 4;
  const std::string a = to_csv(run(cfg, one));
  EXPECT_EQ(a, to_csv(run(cfg, four)));
  EXPECT_EQ(a, to_csv(run(cfg, one)));
  auto other = cfg;
  other.seed = 100;
  EXPECT_NE(a, to_csv(run(other, one)));
}

TEST(Run, SqueezeRowUsesPrior) {
  const auto rows = run(parse_config_string("task = Squeeze\nn = 1\nr = 0.5\nr0 = -0.5\nsigma0sq = 1\n"));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].status, "ok");
  EXPECT_GT(rows[0].avg_variance, 1.0 / (1.0 + 2.0 * 9.0));
  EXPECT_LT(rows[0].avg_variance, 1.0);
}

TEST(Verify, NegativeControlFails) {
  VerifyOptions vo;
  vo.suite = VerifyOptions::Suite::Fast;
  vo.only = {6};
  vo.truncation = 1;
  const auto report = verify(vo);
  ASSERT_EQ(report.criteria.size(), 1u);
  EXPECT_FALSE(report.passed());
}

TEST(Verify, ReportCsvShape) {
  VerifyOptions vo;
  vo.suite = VerifyOptions::Suite::Fast;
  vo.only = {2, 3};
  const auto report = verify(vo);
  EXPECT_TRUE(report.passed());
  const std::string csv = report_csv(report);
  EXPECT_EQ(csv.rfind("criterion,check,measured,expected,tolerance,passed,note\n", 0), 0u);
}
