#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "support/dense_oracle.hpp"
#include "support/fixtures.hpp"

using namespace prestige;
using prestige::testing::dataset_from_text;
using prestige::testing::journals_header;
using prestige::testing::random_dataset;

namespace {

Params params_2008() {
  Params p;
  p.year = 2008;
  return p;
}

std::string doc(const std::string& src, std::initializer_list<const char*> cited) {
  std::string s = R"({"src":")" + src + R"(","year":2008,"refs":[)";
  bool first = true;
  for (auto c : cited) {
    if (!first) s += ',';
    first = false;
    s += R"({"j":")" + std::string(c) + R"(","y":2006,"n":1})";
  }
  return s + "]}\n";
}

const std::string kFour = journals_header() +
                          "A,a,1000,2006:1,true\nB,b,1000,2006:1,true\nC,c,1000,2006:1,true\nD,d,1000,2006:1,true\n";

}  // namespace

TEST(Cocitation, SingleDocumentCountsEachPairOnce) {
  const auto ds = dataset_from_text(kFour, doc("A", {"A", "B", "C"}));
  const auto m = build_cocitation(ds.documents, ds.journals.size(), params_2008());
  EXPECT_EQ(m.at(0, 1), 1u);
  EXPECT_EQ(m.at(0, 2), 1u);
  EXPECT_EQ(m.at(1, 2), 1u);
  EXPECT_EQ(m.at(1, 0), 1u);
  EXPECT_EQ(m.at(0, 3), 0u);
}

TEST(Cocitation, BinaryPerDocument) {
  const auto ds = dataset_from_text(
      kFour, R"({"src":"A","year":2008,"refs":[{"j":"B","y":2006,"n":5},{"j":"B","y":2007,"n":2},{"j":"C","y":2005,"n":9}]})" "\n");
  const auto m = build_cocitation(ds.documents, ds.journals.size(), params_2008());
  EXPECT_EQ(m.at(1, 2), 1u);
}

TEST(Cocitation, UnrankedSourcesStillCount) {
  const auto ds = dataset_from_text(journals_header() + "A,a,1000,2006:1,false\nB,b,1000,2006:1,true\nC,c,1000,2006:1,true\n",
                                    doc("A", {"B", "C"}));
  EXPECT_EQ(build_cocitation(ds.documents, 3, params_2008()).at(1, 2), 1u);
}

// Profiles over {B, C}: A = (2, 1), D = (1, 2); cosine = 4 / 5.
TEST(Cosine, WorkedExample) {
  const auto ds = dataset_from_text(kFour, doc("A", {"A", "B"}) + doc("A", {"A", "B"}) + doc("B", {"A", "C"}) +
                                               doc("C", {"D", "B"}) + doc("C", {"D", "C"}) + doc("B", {"D", "C"}));
  const auto m = build_cocitation(ds.documents, 4, params_2008());
  EXPECT_NEAR(cosine(m, 0, 3), 0.8, 1e-12);
  EXPECT_NEAR(cosine(m, 3, 0), 0.8, 1e-12);
}

TEST(Cosine, IdenticalAndDisjointProfiles) {
  // A and B are both cocited only with C (twice each): identical profiles.
  const auto same = dataset_from_text(kFour, doc("A", {"A", "C"}) + doc("A", {"A", "C"}) + doc("B", {"B", "C"}) +
                                                 doc("B", {"B", "C"}));
  EXPECT_DOUBLE_EQ(cosine(build_cocitation(same.documents, 4, params_2008()), 0, 1), 1.0);

  const auto disjoint = dataset_from_text(kFour, doc("A", {"A", "C"}) + doc("B", {"B", "D"}));
  EXPECT_EQ(cosine(build_cocitation(disjoint.documents, 4, params_2008()), 0, 1), 0.0);
}

TEST(Cosine, EmptyProfileGivesZeroAndSameJournalThrows) {
  const auto ds = dataset_from_text(kFour, doc("A", {"A", "B"}));
  const auto m = build_cocitation(ds.documents, 4, params_2008());
  // Without the excluded components both profiles are empty.
  EXPECT_EQ(cosine(m, 0, 1), 0.0);
  EXPECT_EQ(cosine(m, 2, 3), 0.0);
  EXPECT_THROW(cosine(m, 1, 1), std::invalid_argument);
}

// Changing Cocit_ij (and the diagonal) must not move Cos_ij.
TEST(Cosine, ExcludedComponentsDoNotMatter) {
  const std::string base = doc("A", {"A", "C"}) + doc("B", {"B", "C"}) + doc("B", {"B", "D"}) + doc("C", {"A", "D"});
  const auto m1 = build_cocitation(dataset_from_text(kFour, base).documents, 4, params_2008());
  const auto m2 =
      build_cocitation(dataset_from_text(kFour, base + doc("A", {"A", "B"}) + doc("A", {"A", "B"})).documents, 4,
                       params_2008());
  EXPECT_NE(m1.at(0, 1), m2.at(0, 1));
  EXPECT_DOUBLE_EQ(cosine(m1, 0, 1), cosine(m2, 0, 1));
}

TEST(Cosine, RandomNetworksMatchDenseOracle) {
  const auto p = params_2008();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto ds = random_dataset(seed, 12, 60);
    const auto m = build_cocitation(ds.documents, ds.journals.size(), p);
    const auto dense = oracle::cocitation(ds, p);
    for (JournalIndex i = 0; i < 12; ++i) {
      for (JournalIndex j = 0; j < 12; ++j) {
        if (i != j) {
          EXPECT_EQ(m.at(i, j), static_cast<std::uint32_t>(dense[i][j]));
          const double c = cosine(m, i, j);
          EXPECT_NEAR(c, oracle::cosine(dense, i, j), 1e-12);
          EXPECT_GE(c, 0.0);
          EXPECT_LE(c, 1.0);
          EXPECT_DOUBLE_EQ(c, cosine(m, j, i));
        }
      }
    }
  }
}

TEST(Cocitation, IndependentOfDocumentOrderAndThreads) {
  const auto p = params_2008();
  auto ds = random_dataset(99, 200, 2000);
  const auto ref = build_cocitation(ds.documents, ds.journals.size(), p, 1);
  std::mt19937_64 rng(5);
  std::shuffle(ds.documents.begin(), ds.documents.end(), rng);
  for (unsigned t : {1u, 3u, 8u}) {
    EXPECT_EQ(build_cocitation(ds.documents, ds.journals.size(), p, t).counts(), ref.counts());
  }
}

TEST(CosinesForEdges, CoversEveryCitationEdgeAndMatchesPointwise) {
  const auto p = params_2008();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto ds = random_dataset(seed, 40, 300);
    const auto cmat = build_citation_matrix(ds.documents, ds.journals, p);
    const auto m = build_cocitation(ds.documents, ds.journals.size(), p);
    const auto cos = cosines_for_edges(m, cmat);
    EXPECT_EQ(cos.size(), cmat.nnz());
    for (JournalIndex j = 0; j < cmat.rows(); ++j) {
      for (auto i : cmat.row_indices(j)) {
        ASSERT_TRUE(cos.contains(j, i));
        EXPECT_EQ(cos.at(j, i), i == j ? 1.0 : cosine(m, i, j));  // bit-identical
      }
    }
    EXPECT_EQ(cosines_for_edges(m, cmat, 4).matrix(), cos.matrix());
  }
}

TEST(CosineMap, NonEdgeLookupThrows) {
  const auto ds = dataset_from_text(kFour, doc("A", {"B", "C"}));
  const auto p = params_2008();
  const auto cmat = build_citation_matrix(ds.documents, ds.journals, p);
  const auto cos = cosines_for_edges(build_cocitation(ds.documents, 4, p), cmat);
  EXPECT_NO_THROW(cos.at(0, 1));
  EXPECT_THROW(cos.at(0, 3), std::out_of_range);
}
