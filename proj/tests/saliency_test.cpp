// Copyright 2026 The discomet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "discomet/saliency.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "discomet/report.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace discomet {
namespace {

using testing::CorpusWithCounts;

double G2(uint64_t o1, uint64_t n1, uint64_t o2, uint64_t n2) {
  return LogLikelihoodRatio(ContingencyCell::Make("x", o1, n1, o2, n2));
}

TEST(ContingencyTest, ExpectedFrequencies) {
  ContingencyCell a = ContingencyCell::Make("WAR", 30, 1000, 10, 1000);
  EXPECT_DOUBLE_EQ(a.e1, 20.0);
  EXPECT_DOUBLE_EQ(a.e2, 20.0);
  ContingencyCell b = ContingencyCell::Make("WAR", 5, 100, 5, 100);
  EXPECT_DOUBLE_EQ(b.e1, 5.0);
  EXPECT_DOUBLE_EQ(b.e2, 5.0);
  ContingencyCell c = ContingencyCell::Make("WAR", 7, 70, 0, 30);
  EXPECT_NEAR(c.e1, 4.9, 1e-12);
  EXPECT_NEAR(c.e2, 2.1, 1e-12);
}

TEST(ContingencyTest, InvalidCells) {
  EXPECT_THROW(ContingencyCell::Make("x", 0, 0, 0, 0), Error);
  EXPECT_THROW(ContingencyCell::Make("x", 0, 10, 0, 10), Error);
  EXPECT_THROW(ContingencyCell::Make("x", 11, 10, 0, 10), Error);
}

TEST(ContingencyTest, BuildFromCorpora) {
  AnnotatedCorpus c1 = CorpusWithCounts("a", {{"WAR", "Attack", 3}, {"WATER", "Filling", 7}});
  AnnotatedCorpus c2 = CorpusWithCounts("b", {{"WATER", "Filling", 5}});
  auto war = BuildContingency("WAR", c1, c2, Dimension::kDomain);
  ASSERT_TRUE(war.has_value());
  EXPECT_EQ(war->o1, 3u);
  EXPECT_EQ(war->o2, 0u);
  EXPECT_EQ(war->n1, 10u);
  EXPECT_EQ(war->n2, 5u);
  EXPECT_FALSE(BuildContingency("FIRE", c1, c2, Dimension::kDomain).has_value());
  auto tokens = BuildContingency("Filling", c1, c2, Dimension::kFrame, TotalsPolicy::kTokens);
  ASSERT_TRUE(tokens.has_value());
  EXPECT_EQ(tokens->n1, 20u);
}

TEST(LogLikelihoodTest, HandValues) {
  double expected = 2.0 * (30.0 * std::log(1.5) + 10.0 * std::log(0.5));
  EXPECT_NEAR(G2(30, 1000, 10, 1000), expected, 1e-12);
  EXPECT_NEAR(G2(30, 1000, 10, 1000), 10.464962875290956, 1e-9);
  EXPECT_EQ(G2(5, 100, 5, 100), 0.0);
  EXPECT_EQ(G2(3, 30, 10, 100), 0.0);
  // 2 * 7 * ln(7 / 4.9).
  EXPECT_NEAR(G2(7, 70, 0, 30), 4.993449215142251, 1e-9);
}

TEST(LogLikelihoodTest, MatchesDirectOracleOnRandomCells) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    uint64_t n1 = 1 + rng() % 10000, n2 = 1 + rng() % 10000;
    uint64_t o1 = rng() % (n1 + 1), o2 = rng() % (n2 + 1);
    if (o1 + o2 == 0) o1 = 1;
    double got = G2(o1, n1, o2, n2);
    double want = oracle::DirectG2(o1, n1, o2, n2);
    ASSERT_NEAR(got, std::max(want, 0.0), 1e-9) << o1 << "/" << n1 << " " << o2 << "/" << n2;
    ASSERT_TRUE(std::isfinite(got));
  }
}

TEST(LogLikelihoodTest, SymmetryFlipsDirection) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    uint64_t n1 = 1 + rng() % 5000, n2 = 1 + rng() % 5000;
    uint64_t o1 = rng() % (n1 + 1), o2 = 1 + rng() % n2;
    ContingencyCell c = ContingencyCell::Make("x", o1, n1, o2, n2);
    ContingencyCell s = ContingencyCell::Make("x", o2, n2, o1, n1);
    EXPECT_EQ(LogLikelihoodRatio(c), LogLikelihoodRatio(s));
    const Direction mirrored = c.direction() == Direction::kCorpus1   ? Direction::kCorpus2
                               : c.direction() == Direction::kCorpus2 ? Direction::kCorpus1
                                                                      : Direction::kNeutral;
    EXPECT_EQ(s.direction(), mirrored);
    EXPECT_EQ(c.Swapped().o1, s.o1);
  }
}

TEST(LogLikelihoodTest, ScalesLinearly) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 300; ++i) {
    uint64_t n1 = 1 + rng() % 1000, n2 = 1 + rng() % 1000;
    uint64_t o1 = rng() % (n1 + 1), o2 = 1 + rng() % n2;
    double base = G2(o1, n1, o2, n2);
    for (uint64_t c : {2u, 5u, 10u}) {
      EXPECT_NEAR(G2(c * o1, c * n1, c * o2, c * n2), c * base, 1e-9 * std::max(1.0, c * base));
    }
  }
}

TEST(LogLikelihoodTest, ZeroCountsStayFinite) {
  for (uint64_t n1 : {1u, 2u, 10u, 10000u}) {
    for (uint64_t n2 : {1u, 3u, 10000u}) {
      EXPECT_TRUE(std::isfinite(G2(0, n1, n2, n2)));
      EXPECT_TRUE(std::isfinite(G2(n1, n1, 0, n2)));
      EXPECT_TRUE(std::isfinite(G2(1, n1, 0, n2)));
      EXPECT_GE(G2(0, n1, 1, n2), 0.0);
    }
  }
}

TEST(ChiSquareTest, TableAndSolvedQuantiles) {
  EXPECT_EQ(ChiSquareCritical(0.05), 3.841);
  EXPECT_EQ(ChiSquareCritical(0.01), 6.635);
  EXPECT_EQ(ChiSquareCritical(0.001), 10.828);
  // Off-table levels solve erfc(sqrt(x/2)) = p.
  EXPECT_NEAR(ChiSquareCritical(0.1), 2.705543454095404, 1e-9);
  EXPECT_NEAR(std::erfc(std::sqrt(ChiSquareCritical(0.025) / 2)), 0.025, 1e-12);
  EXPECT_THROW(ChiSquareCritical(0.0), Error);
  EXPECT_THROW(ChiSquareCritical(1.0), Error);
}

// Balanced background labels plus a skewed WAR count.
AnnotatedCorpus WarCorpus(const std::string &prefix, int war) {
  return CorpusWithCounts(prefix, {{"WAR", "Attack", war},
                                   {"WATER", "Filling", 400},
                                   {"ANIMAL", "Aggregate", 300},
                                   {"PLANT", "Growth", 300 - war}});
}

TEST(SaliencyTableTest, SoleSkewedLabelIsSignificant) {
  // Totals are 1000 per corpus; PLANT differs by 20 and balances the totals.
  AnnotatedCorpus c1 = CorpusWithCounts("a", {{"WAR", "Attack", 30},
                                              {"WATER", "Filling", 400},
                                              {"ANIMAL", "Aggregate", 300},
                                              {"PLANT", "Growth", 270}});
  AnnotatedCorpus c2 = CorpusWithCounts("b", {{"WAR", "Attack", 10},
                                              {"WATER", "Filling", 400},
                                              {"ANIMAL", "Aggregate", 300},
                                              {"PLANT", "Growth", 290}});
  SaliencyTable t = ComputeSaliencyTable(c1, c2, Dimension::kDomain);
  ASSERT_FALSE(t.records.empty());
  EXPECT_EQ(t.records[0].label, "WAR");
  EXPECT_NEAR(t.records[0].g2, 10.464962875290956, 1e-9);
  EXPECT_TRUE(t.records[0].significant);
  EXPECT_EQ(t.records[0].direction, Direction::kCorpus1);
  EXPECT_EQ(t.SignificantCount(), 1u);
  EXPECT_EQ(t.critical_value, 3.841);
  EXPECT_DOUBLE_EQ(t.records[0].rel_freq1, 0.03);
}

TEST(SaliencyTableTest, IdenticalCorporaHaveNoSignificantRecords) {
  AnnotatedCorpus c = WarCorpus("a", 30);
  SaliencyTable t = ComputeSaliencyTable(c, c, Dimension::kDomain);
  EXPECT_EQ(t.SignificantCount(), 0u);
  for (const auto &r : t.records) {
    EXPECT_EQ(r.g2, 0.0);
    EXPECT_EQ(r.direction, Direction::kNeutral);
  }
  EXPECT_EQ(t.notes.size(), t.records.size());
}

TEST(SaliencyTableTest, MinCountAndSortOrder) {
  AnnotatedCorpus c1 = CorpusWithCounts("a", {{"A", "F", 2}, {"B", "F", 20}, {"C", "F", 10}});
  AnnotatedCorpus c2 = CorpusWithCounts("b", {{"A", "F", 2}, {"B", "F", 5}, {"C", "F", 30}});
  SaliencyTable t = ComputeSaliencyTable(c1, c2, Dimension::kDomain);
  ASSERT_EQ(t.records.size(), 2u);
  EXPECT_GE(t.records[0].g2, t.records[1].g2);
  SaliencyOptions all;
  all.min_count = 1;
  EXPECT_EQ(ComputeSaliencyTable(c1, c2, Dimension::kDomain, all).records.size(), 3u);
}

TEST(SaliencyTableTest, MonotoneGate) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    testing::LabelCounts a, b;
    for (int l = 0; l < 8; ++l) {
      a.emplace_back("L" + std::to_string(l), "F", 1 + rng() % 40);
      b.emplace_back("L" + std::to_string(l), "F", 1 + rng() % 40);
    }
    SaliencyOptions opts;
    opts.min_count = 1;
    SaliencyTable t = ComputeSaliencyTable(CorpusWithCounts("a", a), CorpusWithCounts("b", b),
                                           Dimension::kDomain, opts);
    for (size_t i = 1; i < t.records.size(); ++i) {
      ASSERT_GE(t.records[i - 1].g2, t.records[i].g2);
      if (t.records[i].significant) {
        ASSERT_TRUE(t.records[i - 1].significant);
      }
    }
  }
}

TEST(SaliencyTableTest, ExamplesAreLowestReferences) {
  AnnotatedCorpus c1 = CorpusWithCounts("a", {{"WAR", "Attack", 12}});
  AnnotatedCorpus c2 = CorpusWithCounts("b", {{"WAR", "Attack", 1}, {"WATER", "Filling", 10}});
  SaliencyTable t = ComputeSaliencyTable(c1, c2, Dimension::kDomain);
  auto it = std::find_if(t.records.begin(), t.records.end(),
                         [](const SaliencyRecord &r) { return r.label == "WAR"; });
  ASSERT_NE(it, t.records.end());
  const SaliencyRecord &war = *it;
  ASSERT_EQ(war.examples1.size(), 3u);
  EXPECT_EQ(war.examples1[0].doc_id, "a-0");
  EXPECT_EQ(war.examples1[1].doc_id, "a-1");
  EXPECT_EQ(war.examples1[2].doc_id, "a-10");
  ASSERT_EQ(war.examples2.size(), 1u);
}

TEST(SaliencyTableTest, BonferroniRaisesGate) {
  AnnotatedCorpus c1 = WarCorpus("a", 30);
  AnnotatedCorpus c2 = WarCorpus("b", 10);
  SaliencyOptions opts;
  opts.bonferroni = true;
  SaliencyTable t = ComputeSaliencyTable(c1, c2, Dimension::kDomain, opts);
  EXPECT_EQ(t.tests, 4u);
  EXPECT_DOUBLE_EQ(t.effective_p, 0.0125);
  EXPECT_GT(t.critical_value, 3.841);
  EXPECT_NEAR(std::erfc(std::sqrt(t.critical_value / 2)), 0.0125, 1e-12);
}

TEST(SaliencyTableTest, ReportsAreByteIdentical) {
  AnnotatedCorpus c1 = WarCorpus("a", 30);
  AnnotatedCorpus c2 = WarCorpus("b", 10);
  auto render = [&] {
    SaliencyTable t = ComputeSaliencyTable(c1, c2, Dimension::kDomain);
    std::ostringstream out;
    report::WriteSaliencyCsv(out, t);
    out << report::SaliencyToJson(t).dump(2) << report::FigureData(t).dump();
    return out.str();
  };
  EXPECT_EQ(render(), render());
}

TEST(NestedFrameTest, FillingWithinWater) {
  AnnotatedCorpus c1 = CorpusWithCounts("a", {{"WATER", "Filling", 8},
                                              {"WATER", "Fluidic_motion", 2},
                                              {"WAR", "Attack", 40}});
  AnnotatedCorpus c2 = CorpusWithCounts("b", {{"WATER", "Filling", 1},
                                              {"WATER", "Fluidic_motion", 9},
                                              {"WAR", "Filling", 40}});
  SaliencyOptions opts;
  opts.min_count = 1;
  SaliencyTable t = NestedFrameSaliency("WATER", c1, c2, opts);
  EXPECT_EQ(t.n1, 10u);
  EXPECT_EQ(t.n2, 10u);
  ASSERT_EQ(t.domain, "WATER");
  const SaliencyRecord *filling = nullptr;
  for (const auto &r : t.records) {
    if (r.label == "Filling") filling = &r;
  }
  ASSERT_NE(filling, nullptr);
  double expected = 2.0 * (8.0 * std::log(8.0 / 4.5) + 1.0 * std::log(1.0 / 4.5));
  EXPECT_NEAR(filling->g2, expected, 1e-12);
  EXPECT_NEAR(filling->g2, 6.1976715249044405, 1e-9);
  EXPECT_TRUE(filling->significant);
  EXPECT_EQ(filling->direction, Direction::kCorpus1);
}

TEST(NestedFrameTest, AbsentDomainGivesEmptyTableWithDiagnostic) {
  AnnotatedCorpus c1 = CorpusWithCounts("a", {{"WAR", "Attack", 5}});
  Diagnostics diag;
  SaliencyTable t = NestedFrameSaliency("WATER", c1, c1, {}, &diag);
  EXPECT_TRUE(t.records.empty());
  EXPECT_EQ(t.notes.size(), 1u);
  EXPECT_EQ(diag.Count("nested_frame_saliency"), 1u);
}

AnnotatedCorpus IdeologyCorpus() {
  std::vector<Document> docs;
  std::vector<MetaphorAnnotation> anns;
  testing::AppendCounts("lib", "liberal",
                        {{"ANIMAL", "Aggregate", 2}, {"ANIMAL", "Animals", 48}}, docs, anns);
  testing::AppendCounts("con", "conservative",
                        {{"ANIMAL", "Aggregate", 12}, {"ANIMAL", "Animals", 38}}, docs, anns);
  return AnnotatedCorpus(docs, anns);
}

TEST(PartitionContrastTest, PlantedAggregateSkew) {
  SaliencyTable t = PartitionContrast(IdeologyCorpus(), "liberal", "conservative",
                                      Dimension::kFrame, std::string("ANIMAL"));
  ASSERT_FALSE(t.records.empty());
  const SaliencyRecord &top = t.records[0];
  EXPECT_EQ(top.label, "Aggregate");
  EXPECT_NEAR(top.g2, oracle::DirectG2(2, 50, 12, 50), 1e-9);
  EXPECT_NEAR(top.g2, 7.924864143603013, 1e-9);
  EXPECT_TRUE(top.significant);
  EXPECT_EQ(top.direction, Direction::kCorpus2);
  EXPECT_EQ(report::DirectionLabel(t, top.direction), "conservative");
}

TEST(PartitionContrastTest, UnknownTagAndEmptyPartition) {
  AnnotatedCorpus c = IdeologyCorpus();
  EXPECT_THROW(PartitionContrast(c, "liberal", "green", Dimension::kDomain), Error);
  std::vector<Document> docs = c.documents();
  docs.push_back(testing::Doc("g0", "text", "green"));
  AnnotatedCorpus with_green(docs, c.annotations());
  Diagnostics diag;
  SaliencyTable t = PartitionContrast(with_green, "liberal", "green", Dimension::kDomain,
                                      std::nullopt, {}, &diag);
  EXPECT_TRUE(t.records.empty());
  EXPECT_EQ(diag.Count("partition_contrast"), 1u);
}

TEST(PartitionContrastTest, SharedFrameEquallyUsedIsNotSignificant) {
  std::vector<Document> docs;
  std::vector<MetaphorAnnotation> anns;
  testing::AppendCounts("lib", "liberal", {{"WAR", "Attack", 20}}, docs, anns);
  testing::AppendCounts("con", "conservative", {{"WAR", "Attack", 20}}, docs, anns);
  SaliencyTable t = PartitionContrast(AnnotatedCorpus(docs, anns), "liberal", "conservative",
                                      Dimension::kFrame);
  ASSERT_EQ(t.records.size(), 1u);
  EXPECT_EQ(t.records[0].g2, 0.0);
  EXPECT_FALSE(t.records[0].significant);
}

}  // namespace
}  // namespace discomet
