#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "polsar/error.hpp"
#include "polsar/evaluation.hpp"

using namespace polsar;

namespace {

MethodScores scores(std::string name, std::vector<double> acc) {
  MethodScores s;
  s.method = std::move(name);
  s.accuracy = std::move(acc);
  return s;
}

double round1(double v) { return std::round(v * 10.0) / 10.0; }

}  // namespace

TEST(Improvement, Formula) {
  EXPECT_NEAR(*improvement(98.5, 93.3), 100.0 * 5.2 / 6.7, 1e-12);
  EXPECT_EQ(round1(*improvement(98.5, 93.3)), 77.6);
  EXPECT_EQ(round1(*improvement(83.1, 73.3)), 36.7);
  EXPECT_EQ(*improvement(50.0, 50.0), 0.0);
  EXPECT_EQ(*improvement(100.0, 50.0), 100.0);
  EXPECT_FALSE(improvement(100.0, 100.0));
}

TEST(Improvement, ReportPicksWorstAsBaseline) {
  const auto r = compare_methods({scores("A", {100, 98.5, 96.6}), scores("B", {100, 93.3, 83.1}),
                                  scores("C", {100, 99.9, 73.3})});
  EXPECT_EQ(r.baseline, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_FALSE(r.improvements[1][0]);  // baseline class at 100%
  EXPECT_EQ(*r.improvements[1][1], 0.0);
  EXPECT_EQ(round1(*r.improvements[0][2]), 87.3);
}

TEST(Improvement, TiesGoToFirstMethod) {
  const auto r = compare_methods({scores("A", {90}), scores("B", {80}), scores("C", {80})});
  EXPECT_EQ(r.baseline[0], 1u);
}

TEST(Improvement, Errors) {
  EXPECT_THROW(compare_methods({scores("A", {1, 2})}), Error);
  try {
    compare_methods({});
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingBaseline);
  }
  EXPECT_THROW(compare_methods({scores("A", {1, 2}), scores("B", {1})}), Error);
}

TEST(Scoring, TestPixels) {
  ClassMap pred(4, 1);
  pred[0] = 1;
  pred[1] = 1;
  pred[2] = 2;
  pred[3] = 1;
  Split split;
  split.test = {{{0, 0}, {1, 0}}, {{2, 0}, {3, 0}}};
  const auto s = score_test_pixels("X", pred, split);
  EXPECT_EQ(s.accuracy, (std::vector<double>{100.0, 50.0}));
  EXPECT_EQ(s.overall, 75.0);
  split.test[1].push_back({4, 0});
  EXPECT_THROW(score_test_pixels("X", pred, split), Error);
}

TEST(Scoring, AgainstTruthIgnoresUnlabelled) {
  ClassMap truth(4, 1), pred(4, 1);
  truth[0] = 1; truth[1] = 2; truth[2] = 0; truth[3] = 2;
  pred[0] = 1;  pred[1] = 1;  pred[2] = 2;  pred[3] = 2;
  const auto s = score_against_truth("X", pred, truth, 2);
  EXPECT_EQ(s.accuracy, (std::vector<double>{100.0, 50.0}));
  EXPECT_NEAR(s.overall, 200.0 / 3.0, 1e-12);
  EXPECT_THROW(score_against_truth("X", ClassMap(3, 1), truth, 2), Error);
}

TEST(Report, TableAndCsv) {
  auto a = scores("ML", {100, 98.5});
  a.seconds = 0.17;
  auto b = scores("ED", {100, 93.3});
  const auto r = compare_methods({a, b});
  std::ostringstream t;
  write_report_table(t, r);
  const std::string table = t.str();
  EXPECT_NE(table.find("98.5 (77.6%)"), std::string::npos);
  EXPECT_NE(table.find("93.3 (baseline)"), std::string::npos);
  EXPECT_NE(table.find("0.170"), std::string::npos);

  std::ostringstream c;
  write_report_csv(c, r);
  std::istringstream is(c.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "method,acc_1,acc_2,impr_1,impr_2,overall,seconds");
  std::getline(is, line);
  EXPECT_EQ(line.rfind("ML,100.0000,98.5000,,77.6119,", 0), 0u) << line;
}
