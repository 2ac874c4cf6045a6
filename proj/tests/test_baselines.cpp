#include <gtest/gtest.h>

#include "support/fixtures.hpp"

using namespace prestige;
using prestige::testing::art_vector;
using prestige::testing::dataset_from_text;
using prestige::testing::journals_header;
using prestige::testing::random_dataset;

namespace {

Params params_2008() {
  Params p;
  p.year = 2008;
  return p;
}

// One year-Y document per target holding `cites` windowed refs.
std::vector<CitingDocument> docs_citing(std::vector<std::uint32_t> cites) {
  std::vector<CitingDocument> docs;
  for (JournalIndex i = 0; i < cites.size(); ++i) {
    if (cites[i] > 0) docs.push_back({0, 2008, {{i, 2006, cites[i]}}});
  }
  return docs;
}

}  // namespace

// The two-journal case study: 647 citations over 36 citable documents and
// 72 over 10.
TEST(Jif3y, CaseStudyArithmetic) {
  const auto t = compute_jif3y(docs_citing({647, 72}), art_vector({36, 10}), params_2008());
  EXPECT_EQ(t.citations_3y, (std::vector<std::int64_t>{647, 72}));
  EXPECT_NEAR(*t.jif3y[0], 17.97, 0.005);
  EXPECT_NEAR(*t.jif3y[1], 7.2, 0.005);
}

TEST(Jif3y, ZeroCitationsAndZeroArt) {
  const auto t = compute_jif3y(docs_citing({0, 5}), art_vector({4, 0}), params_2008());
  EXPECT_EQ(*t.jif3y[0], 0.0);
  EXPECT_FALSE(t.jif3y[1].has_value());
  EXPECT_EQ(t.citations_3y[1], 5);
}

TEST(Jif3y, CountsUnrankedSourcesButOnlyInWindow) {
  const auto ds = dataset_from_text(journals_header() + "U,u,1000,2006:1,false\nR,r,1000,2006:2,true\n",
                                    R"({"src":"U","year":2008,"refs":[{"j":"R","y":2006,"n":3},{"j":"R","y":2004,"n":8}]})" "\n"
                                    R"({"src":"R","year":2007,"refs":[{"j":"R","y":2006,"n":9}]})" "\n");
  const auto p = params_2008();
  const auto art = build_art_vector(ds.journals, p);
  const auto t = compute_jif3y(ds.documents, art, p);
  EXPECT_EQ(t.citations_3y[1], 3);
  EXPECT_DOUBLE_EQ(*t.jif3y[1], 1.5);
  const auto considered = considered_citations(build_citation_matrix(ds.documents, ds.journals, p));
  EXPECT_EQ(considered[1], 0);
}

TEST(Jif3y, TotalsNeverBelowConsideredCitations) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto ds = random_dataset(seed, 30, 300, 2008, 6, 4);
    const auto p = params_2008();
    const auto art = build_art_vector(ds.journals, p);
    const auto t = compute_jif3y(ds.documents, art, p);
    const auto considered = considered_citations(build_citation_matrix(ds.documents, ds.journals, p));
    for (std::size_t i = 0; i < considered.size(); ++i) EXPECT_GE(t.citations_3y[i], considered[i]);
  }
}
