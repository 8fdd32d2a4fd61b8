#include <gtest/gtest.h>

#include <sstream>

#include "exrmt/config.hpp"
#include "exrmt/report.hpp"
#include "exrmt/zeros.hpp"

using namespace exrmt;

TEST(ZeroList, RoundTrip) {
  const std::vector<ZeroRecord> recs = {{5, {0.0, 0.0, 1.25, 2.5}}, {8, {0.125, 3.0 / 7}}, {12, {}}};
  std::ostringstream os;
  write_zero_list(os, recs);
  std::istringstream is(os.str());
  EXPECT_EQ(read_zero_list(is), recs);
}

TEST(ZeroList, SkipsCommentsAndBlankLines) {
  std::istringstream is("# header\n\n5,0.5,1\r\n");
  const auto r = read_zero_list(is);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].d, 5);
  EXPECT_EQ(r[0].ordinates, (std::vector<double>{0.5, 1.0}));
}

TEST(ZeroList, RejectsMalformedInput) {
  for (const char* bad : {"5,1.0,0.5\n", "5,-1\n", "x,1\n", "5,1.0abc\n", "5,nan\n", "5,1,1\n"}) {
    std::istringstream is(bad);
    EXPECT_THROW(read_zero_list(is), DataError) << bad;
  }
  EXPECT_THROW(ingest_zero_list("/nonexistent/zeros.csv"), DataError);
}

TEST(ZeroList, Selectors) {
  const std::vector<ZeroRecord> recs = {{5, {0.0, 0.7, 1.1}}, {8, {0.3, 0.9}}};
  EXPECT_EQ(lowest_zero_statistic(recs, ZeroSelector::lowest), (std::vector<double>{0.0, 0.3}));
  EXPECT_EQ(lowest_zero_statistic(recs, ZeroSelector::lowest_nonvanishing), (std::vector<double>{0.7, 0.3}));
  EXPECT_EQ(lowest_zero_statistic(recs, ZeroSelector::second_lowest), (std::vector<double>{0.7, 0.9}));
  EXPECT_EQ(lowest_zero_statistic(recs, ZeroSelector::lowest_nonvanishing, 0.5), (std::vector<double>{0.7, 0.9}));
  EXPECT_THROW(lowest_zero_statistic({{3, {}}}, ZeroSelector::lowest), DataError);
  EXPECT_THROW(lowest_zero_statistic({{3, {0.0}}}, ZeroSelector::lowest_nonvanishing), DataError);
  EXPECT_THROW(lowest_zero_statistic({}, ZeroSelector::lowest), DataError);
  for (auto s : {ZeroSelector::lowest, ZeroSelector::lowest_nonvanishing, ZeroSelector::second_lowest})
    EXPECT_EQ(parse_selector(selector_name(s)), s);
  EXPECT_THROW(parse_selector("third"), std::invalid_argument);
}

TEST(Report, IdenticalSamplesHaveZeroDistance) {
  const std::vector<double> xs = {1, 2, 3, 4, 5};
  const auto r = compare_report(xs, xs, 4);
  EXPECT_EQ(r.ks, 0.0);
  EXPECT_EQ(r.n_left, 5u);
  ASSERT_EQ(r.bins.size(), 4u);
  EXPECT_DOUBLE_EQ(r.bins.back().right, 5.0 / 3);
  for (const auto& b : r.bins) EXPECT_EQ(b.residual, 0.0);
}

TEST(Report, ScaleIsRemovedByMeanNormalization) {
  const std::vector<double> a = {0.5, 1.0, 1.5, 2.0}, b = {5, 10, 15, 20};
  EXPECT_EQ(compare_report(a, b, 3).ks, 0.0);
}

TEST(Report, JsonAndCsvLayout) {
  const auto r = compare_report({1, 2}, {1, 3}, 2, 2.0);
  const auto j = report_json(r);
  EXPECT_EQ(j.begin().key(), "ks");
  EXPECT_EQ(j["bins"].size(), 2u);
  EXPECT_EQ(j["bins"][0]["bin_left"], 0.0);
  std::ostringstream os;
  write_compare_csv(os, r);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "bin_left,bin_right,density_left,density_right,residual");
}

TEST(Config, RoundTripPreservesEverything) {
  RunConfig c;
  c.experiment = "firsteig";
  c.group = GroupSpec{Group::USp, 10};
  c.count = 1234;
  c.seed = 99;
  c.bins = 40;
  c.out = "first.csv";
  c.excision = ExcisionRule{1.5, 2, 8.25};
  c.threads = 3;
  const RunConfig back = parse_config(serialize(c));
  EXPECT_EQ(back, c);
  EXPECT_EQ(serialize(back), serialize(c));
}

TEST(Config, FamilyAndCoefficientsRoundTrip) {
  RunConfig c;
  c.experiment = "neff";
  FamilySpec f;
  f.M = 13;
  f.symmetry = SymmetryCase::PrincipalOdd;
  f.epsilon_f = -1;
  f.X = 50000;
  c.family = f;
  c.coefficient_values = {{"a3", 2.5}, {"k", 2}};
  EXPECT_EQ(parse_config(serialize(c)), c);
}

TEST(Config, RejectsUnknownKeysAtEveryLevel) {
  EXPECT_THROW(parse_config(R"({"experiment":"sample","group":{"name":"usp","n":3},"out":"x","colour":1})"), UsageError);
  EXPECT_THROW(parse_config(R"({"experiment":"sample","group":{"name":"usp","n":3,"size":2},"out":"x"})"), UsageError);
  EXPECT_THROW(parse_config(R"({"experiment":"neff","coefficient_values":{"zeta":1}})"), UsageError);
}

TEST(Config, RejectsInvalidValues) {
  EXPECT_THROW(parse_config("{"), UsageError);
  EXPECT_THROW(parse_config(R"({"experiment":"dance"})"), UsageError);
  EXPECT_THROW(parse_config(R"({"experiment":"sample","group":{"name":"usp","n":0},"out":"x"})"), std::invalid_argument);
  EXPECT_THROW(parse_config(R"({"experiment":"sample","group":{"name":"usp","n":3},"out":"x","count":"many"})"),
               UsageError);
  EXPECT_THROW(parse_config(R"({"experiment":"onelevel","out":"x"})"), UsageError);
}
