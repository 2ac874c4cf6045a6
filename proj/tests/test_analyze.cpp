#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "support/fixtures.hpp"

using namespace prestige;
using prestige::testing::art_vector;
using prestige::testing::dataset_from_text;
using prestige::testing::journals_header;

namespace {

// Columns of the published per-area rate table, General row dropped.
std::vector<std::vector<double>> published_columns() {
  std::ifstream in(std::string(PRESTIGE_TEST_DATA) + "/published_area_rates.tsv");
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> cols(3);
  while (std::getline(in, line)) {
    const auto f = split(line, '\t');
    if (f.size() != 4 || f[0] == "General") continue;
    for (std::size_t c = 0; c < 3; ++c) cols[c].push_back(*parse_double(f[c + 1]));
  }
  return cols;
}

}  // namespace

// Reference values from scipy.stats.
TEST(Correlation, FrozenReferenceValues) {
  const std::vector<double> x{1, 2, 3, 5}, y{2, 3, 5, 9};
  EXPECT_NEAR(pearson(x, y), 0.9930191118612668, 1e-12);

  const std::vector<double> a{10, 20, 20, 30, 40}, b{1, 3, 2, 5, 4};
  EXPECT_NEAR(spearman(a, b), 0.8720815992723809, 1e-12);

  const std::vector<double> c{3, 1, 4, 1.5, 5, 9, 2, 6}, d{2, 7, 1, 8, 2, 8, 1, 8};
  EXPECT_NEAR(spearman(c, d), 0.22237479499833038, 1e-12);
}

TEST(Correlation, PerfectAndUndefined) {
  const std::vector<double> x{1, 2, 3, 4}, up{10, 20, 30, 40}, down{4, 3, 2, 1}, flat{7, 7, 7, 7};
  EXPECT_NEAR(pearson(x, up), 1.0, 1e-15);
  EXPECT_NEAR(pearson(x, down), -1.0, 1e-15);
  EXPECT_NEAR(spearman(x, std::vector<double>{1, 8, 27, 64}), 1.0, 1e-15);
  EXPECT_THROW(pearson(x, flat), UndefinedCorrelation);
  EXPECT_THROW(spearman(flat, x), UndefinedCorrelation);
  EXPECT_THROW(pearson(x, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST(Correlation, AverageRanksForTies) {
  const std::vector<double> v{10, 20, 20, 30};
  EXPECT_EQ(average_ranks(v), (std::vector<double>{1, 2.5, 2.5, 4}));
}

TEST(MsdUnity, Examples) {
  EXPECT_DOUBLE_EQ(msd_unity(std::vector<double>{0.5, 1.5}), 0.25);
  EXPECT_DOUBLE_EQ(msd_unity(std::vector<double>{1, 1, 1}), 0.0);
  EXPECT_THROW(msd_unity(std::vector<double>{}), std::invalid_argument);
}

// 26 areas without General; the published summary rounds to 3 decimals.
TEST(MsdUnity, PublishedSubjectAreaRates) {
  const auto cols = published_columns();
  ASSERT_EQ(cols[0].size(), 26u);
  EXPECT_NEAR(msd_unity(cols[0]), 0.146, 0.0005);
  EXPECT_NEAR(msd_unity(cols[1]), 0.221, 0.0005);
  EXPECT_NEAR(msd_unity(cols[2]), 0.075, 0.0005);
  EXPECT_LT(msd_unity(cols[0]), msd_unity(cols[1]));
}

TEST(LogFit, RecoversExactModel) {
  std::vector<double> v;
  for (int k = 1; k <= 50; ++k) v.push_back(-0.2 * std::log(k) + 1.0);
  const auto f = log_fit(v);
  EXPECT_NEAR(f.slope, -0.2, 1e-12);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
}

// Reference from numpy.linalg.lstsq on [ln k, 1].
TEST(LogFit, NoisySeriesMatchesLeastSquares) {
  const std::vector<double> v{1, .7, .52, .41, .36, .30, .22, .21};
  const auto f = log_fit(v);
  EXPECT_NEAR(f.slope, -0.3824534008287622, 1e-12);
  EXPECT_NEAR(f.intercept, 0.9719708055741854, 1e-12);
  EXPECT_NEAR(f.r_squared, 0.9917506351340168, 1e-12);
}

TEST(LogFit, ConstantAndShortInput) {
  const auto f = log_fit(std::vector<double>{0.4, 0.4, 0.4});
  EXPECT_EQ(f.slope, 0.0);
  EXPECT_EQ(f.r_squared, 0.0);
  EXPECT_DOUBLE_EQ(f.intercept, 0.4);
  EXPECT_THROW(log_fit(std::vector<double>{1.0}), std::invalid_argument);
}

TEST(LogFit, SeriesAndFormatting) {
  const auto s = normalized_rank_series(std::vector<double>{2, 8, 4});
  EXPECT_EQ(s, (std::vector<double>{1, 0.5, 0.25}));
  LogFit f{-0.1957, 0.9997, 0.99};
  EXPECT_EQ(format_log_fit(f), "y = -0.1957 ln(x) + 0.9997");
}

namespace {

// Two areas with equal citable documents. P (1300) holds journals A, B and
// M (split between 1300 and 2000); Q (2000) holds C.
Dataset two_area_dataset() {
  return dataset_from_text(journals_header() +
                               "A,a,1312,2006:10,true\n"
                               "B,b,1312,2006:10,true\n"
                               "M,m,1312;2002,2006:20,true\n"
                               "C,c,2002,2006:20,true\n",
                           "",
                           std::string(kSchemeHeader) + "\n1312,1300,Biochemistry\n2002,2000,Economics\n");
}

}  // namespace

// Art per area: 1300 = 10+10+10 = 30, 2000 = 10+20 = 30. Mass (3, 1, 2, 2):
// 1300 gets 3+1+1 = 5 of 8, 2000 gets 1+2 = 3 of 8; shares over 1/2.
TEST(AreaRates, FractionalAttribution) {
  const auto ds = two_area_dataset();
  Params p;
  p.year = 2008;
  const auto art = build_art_vector(ds.journals, p);
  const std::vector<Indicator> ind{{"X", {3.0, 1.0, 2.0, 2.0}}, {"Flat", {10.0, 10.0, 20.0, 20.0}}};
  const auto t = area_rates(ds.journals, ds.scheme, art, ind, AreaLevel::subject);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0].code, "1300");
  EXPECT_EQ(t.rows[0].name, "Biochemistry");
  EXPECT_DOUBLE_EQ(t.rows[0].art_share, 0.5);
  EXPECT_DOUBLE_EQ(*t.rows[0].rates[0], 1.25);
  EXPECT_DOUBLE_EQ(*t.rows[1].rates[0], 0.75);
  // Mass proportional to Art gives unity everywhere.
  EXPECT_DOUBLE_EQ(*t.rows[0].rates[1], 1.0);
  EXPECT_DOUBLE_EQ(*t.rows[1].rates[1], 1.0);
  const auto dev = deviations(t, true, ds.scheme);
  EXPECT_DOUBLE_EQ(dev[0].msd, 0.0625);
  EXPECT_EQ(dev[0].areas, 2u);

  const auto spec = area_rates(ds.journals, ds.scheme, art, ind, AreaLevel::specific);
  EXPECT_EQ(spec.rows[0].code, "1312");
}

TEST(AreaRates, GeneralIsExcludedFromColumns) {
  const auto ds = dataset_from_text(journals_header() + "A,a,1000,2006:10,true\nB,b,1312,2006:10,true\n", "",
                                    std::string(kSchemeHeader) + "\n1312,1300,Biochemistry\n");
  Params p;
  p.year = 2008;
  const auto t = area_rates(ds.journals, ds.scheme, build_art_vector(ds.journals, p), {{"X", {3.0, 1.0}}},
                            AreaLevel::subject);
  EXPECT_EQ(t.column(0, false, ds.scheme).size(), 2u);
  EXPECT_EQ(t.column(0, true, ds.scheme), (std::vector<double>{0.5}));
}

TEST(CorrelationReport, IdenticalColumnsCorrelatePerfectly) {
  SynthConfig cfg = synth_preset("two-field", 2);
  for (auto& b : cfg.blocks) b.journal_count = 40;
  const auto ds = generate(cfg);
  Params p;
  p.year = cfg.year;
  const auto run = run_sjr2(ds, p);
  std::vector<ScoreColumn> cols{{"SJR2", run.scores.values}, {"copy", run.scores.values}};
  const auto rep = correlation_report(ds.journals, ds.scheme, cols, true);
  ASSERT_EQ(rep.overall.size(), 1u);
  EXPECT_NEAR(*rep.overall[0].pearson, 1.0, 1e-12);
  EXPECT_NEAR(*rep.overall[0].spearman, 1.0, 1e-12);
  ASSERT_EQ(rep.by_subject.size(), 1u);
  EXPECT_EQ(rep.by_subject[0].areas, 2u);
  EXPECT_NEAR(rep.by_subject[0].pearson_mean, 1.0, 1e-12);
  EXPECT_NEAR(rep.by_subject[0].pearson_sd, 0.0, 1e-12);
}

TEST(Flows, SingleAreaKeepsEverything) {
  const auto ds = prestige::testing::random_dataset(5, 20, 150);
  Params p;
  p.year = 2008;
  const auto with = run_sjr2(ds, p);
  const auto without = run_without_cosine(with);
  const auto t = flow_tables(with, without, ds, AreaLevel::subject);
  ASSERT_EQ(t.with_cosine.rows.size(), 1u);
  const auto& r = t.with_cosine.rows[0];
  EXPECT_NEAR(WithinFlowRow::pct(r.received_subject, r.received), 100.0, 1e-9);
  EXPECT_NEAR(t.with_cosine.doc_weighted.received_subject, 100.0, 1e-9);
  EXPECT_NEAR(t.prestige_matrix.total(), p.d, 1e-12);
  EXPECT_LE(r.received_self, r.received_specific);
}

TEST(Flows, DisjointBlocksGiveBlockDiagonalMatrix) {
  SynthConfig cfg = synth_preset("two-field", 4);
  for (auto& b : cfg.blocks) b.journal_count = 30;
  cfg.cross_block_mixing = 0.0;
  for (auto& b : cfg.blocks) b.within_block_prob = 1.0;
  const auto ds = generate(cfg);
  Params p;
  p.year = cfg.year;
  const auto with = run_sjr2(ds, p);
  const auto t = flow_tables(with, run_without_cosine(with), ds, AreaLevel::subject);
  EXPECT_EQ(t.prestige_matrix.at("1300", "2000"), 0.0);
  EXPECT_EQ(t.prestige_matrix.at("2000", "1300"), 0.0);
  EXPECT_GT(t.prestige_matrix.at("1300", "1300"), 0.0);
  for (const auto* rep : {&t.citation, &t.without_cosine, &t.with_cosine}) {
    for (const auto& r : rep->rows) {
      EXPECT_NEAR(WithinFlowRow::pct(r.sent_subject, r.sent), 100.0, 1e-9);
      EXPECT_LE(r.sent_self, r.sent_specific + 1e-15);
      EXPECT_LE(r.sent_specific, r.sent_subject + 1e-15);
    }
  }
}

TEST(Flows, HandComputedWithinShares) {
  // A -> A 1.0, A -> B 2.0, A -> C 1.0. A and B share 1312, C is elsewhere.
  const auto ds = two_area_dataset();
  Params p;
  p.year = 2008;
  CsrMatrix<double> f = CsrMatrix<double>::from_entries(4, 4, {{0, 0, 1.0}, {0, 1, 2.0}, {0, 3, 1.0}});
  const auto rep = within_flows(f, ds.journals, ds.scheme, build_art_vector(ds.journals, p), AreaLevel::subject);
  const auto& r1300 = rep.rows[0];
  EXPECT_DOUBLE_EQ(r1300.sent, 4.0);
  EXPECT_DOUBLE_EQ(WithinFlowRow::pct(r1300.sent_self, r1300.sent), 25.0);
  EXPECT_DOUBLE_EQ(WithinFlowRow::pct(r1300.sent_specific, r1300.sent), 75.0);
  EXPECT_DOUBLE_EQ(WithinFlowRow::pct(r1300.sent_subject, r1300.sent), 75.0);
  EXPECT_DOUBLE_EQ(rep.rows[1].received, 1.0);
  EXPECT_DOUBLE_EQ(rep.rows[1].received_subject, 0.0);
}
