#include <gtest/gtest.h>

#include "support/fixtures.hpp"

using namespace prestige;
using prestige::testing::dataset_from_text;
using prestige::testing::journals_header;

namespace {

Params params_2008() {
  Params p;
  p.year = 2008;
  return p;
}

}  // namespace

TEST(Params, DefaultsMatchPublishedConstants) {
  Params p;
  EXPECT_DOUBLE_EQ(p.d, 0.9);
  EXPECT_DOUBLE_EQ(p.e, 0.0999);
  EXPECT_EQ(p.window, 3);
  EXPECT_DOUBLE_EQ(p.cap_share, 0.5);
  EXPECT_DOUBLE_EQ(p.cap_per_citation, 0.1);
  EXPECT_TRUE(p.use_cosine);
  EXPECT_NO_THROW(p.validate());
}

TEST(Params, RejectsOutOfRangeValues) {
  auto bad = [](auto mutate) {
    Params p;
    mutate(p);
    EXPECT_THROW(p.validate(), std::invalid_argument);
  };
  bad([](Params& p) { p.d = 1.0; });
  bad([](Params& p) { p.e = 0.0; });
  bad([](Params& p) { p.d = 0.6, p.e = 0.4; });
  bad([](Params& p) { p.window = 0; });
  bad([](Params& p) { p.cap_share = 1.5; });
  bad([](Params& p) { p.cap_per_citation = 0.0; });
  bad([](Params& p) { p.tol = 0.0; });
}

TEST(Params, WindowExcludesComputationYear) {
  auto p = params_2008();
  EXPECT_FALSE(p.in_window(2004));
  EXPECT_TRUE(p.in_window(2005));
  EXPECT_TRUE(p.in_window(2007));
  EXPECT_FALSE(p.in_window(2008));
}

TEST(SubjectScheme, ResolvesSpecificAndSubjectCodes) {
  SubjectScheme s;
  s.add("1312", "1300", "Biochemistry");
  EXPECT_EQ(s.subject_of("1312"), "1300");
  EXPECT_EQ(s.subject_of("1300"), "1300");
  EXPECT_EQ(s.subject_of("1000"), "1000");
  EXPECT_FALSE(s.subject_of("9999").has_value());
  EXPECT_THROW(s.add("1312", "2000", "Economics"), DataError);
}

TEST(JournalTable, ResolveAreasIsTotalOrThrows) {
  const auto csv = journals_header() + "A,a,1312;1000,2007:1,true\nB,b,4242,2007:1,true\n";
  std::istringstream in(csv);
  auto table = parse_journals(in);
  SubjectScheme s;
  s.add("1312", "1300", "Biochemistry");
  EXPECT_THROW(table.resolve_areas(s), DataError);
  s.add("4242", "4200", "Other");
  table.resolve_areas(s);
  EXPECT_EQ(table[0].areas, (std::vector<std::string>{"1000", "1300"}));
  EXPECT_EQ(table[1].areas, (std::vector<std::string>{"4200"}));
}

TEST(ValidateDataset, UnknownReferenceIsReported) {
  const auto ds = dataset_from_text(journals_header() + "J1,a,1000,2007:5,true\n",
                                    R"({"src":"J1","year":2008,"refs":[{"j":"X","y":2006,"n":1}]})" "\n");
  const auto r = validate_dataset(ds, params_2008());
  ASSERT_EQ(r.unknown_ids.size(), 1u);
  EXPECT_EQ(r.unknown_ids[0].id, "X");
  EXPECT_FALSE(r.unknown_ids[0].is_source);
  EXPECT_EQ(r.unknown_ids[0].record, 1u);
}

TEST(ValidateDataset, EmptyDatasetIsFatal) {
  const Dataset ds;
  const auto r = validate_dataset(ds, params_2008());
  EXPECT_TRUE(r.unknown_ids.empty());
  EXPECT_EQ(r.documents_outside_year, 0u);
  EXPECT_EQ(r.refs_outside_window, 0u);
  EXPECT_TRUE(r.zero_art_journals.empty());
  EXPECT_EQ(r.dangling_ranked, 0u);
  ASSERT_EQ(r.fatal.size(), 1u);
  EXPECT_EQ(r.fatal[0], "no journals");
  EXPECT_FALSE(r.ok());
}

// J1 -> J2, J2 -> {J1, J3}; J3 publishes nothing in 2008 and J4 is unranked.
// Hand count: one dangling ranked journal (J3). J4 has no Art in window.
TEST(ValidateDataset, ThreeJournalFixtureCounts) {
  const auto ds = dataset_from_text(journals_header() +
                                        "J1,a,1000,2006:4;2007:6,true\n"
                                        "J2,b,1000,2005:2,true\n"
                                        "J3,c,1000,2007:3,true\n"
                                        "J4,d,,2008:9,false\n",
                                    R"({"src":"J1","year":2008,"refs":[{"j":"J2","y":2006,"n":2},{"j":"J2","y":2001,"n":1}]})" "\n"
                                    R"({"src":"J2","year":2008,"refs":[{"j":"J1","y":2007,"n":1},{"j":"J3","y":2005,"n":4}]})" "\n"
                                    R"({"src":"J3","year":2007,"refs":[{"j":"J1","y":2006,"n":1}]})" "\n");
  const auto r = validate_dataset(ds, params_2008());
  EXPECT_EQ(r.dangling_ranked, 1u);
  EXPECT_EQ(r.documents_outside_year, 1u);
  EXPECT_EQ(r.refs_outside_window, 1u);
  ASSERT_EQ(r.zero_art_journals.size(), 1u);
  EXPECT_EQ(ds.journals[r.zero_art_journals[0]].id.str(), "J4");
  EXPECT_TRUE(r.ok());

  // Side-effect free and idempotent.
  const auto again = validate_dataset(ds, params_2008());
  EXPECT_EQ(again.dangling_ranked, r.dangling_ranked);
  EXPECT_EQ(again.refs_outside_window, r.refs_outside_window);
  EXPECT_EQ(ds.documents.size(), 3u);
}

TEST(ValidateDataset, NoCitableDocumentsIsFatal) {
  const auto ds = dataset_from_text(journals_header() + "J1,a,1000,2008:5,true\n", "");
  const auto r = validate_dataset(ds, params_2008());
  ASSERT_EQ(r.fatal.size(), 1u);
  EXPECT_EQ(r.fatal[0], "no citable documents in window");
}
