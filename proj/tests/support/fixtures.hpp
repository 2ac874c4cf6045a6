#pragma once

#include <random>
#include <sstream>
#include <string>

#include "prestige/prestige.hpp"

namespace prestige::testing {

inline Dataset dataset_from_text(const std::string& journals_csv, const std::string& citations_jsonl,
                                 const std::string& scheme_csv = std::string(kSchemeHeader) + "\n") {
  Dataset ds;
  std::istringstream s(scheme_csv), j(journals_csv), c(citations_jsonl);
  ds.scheme = parse_scheme(s);
  ds.journals = parse_journals(j);
  ds.journals.resolve_areas(ds.scheme);
  auto parsed = parse_citations(c, ds.journals);
  ds.documents = std::move(parsed.documents);
  ds.unknown = std::move(parsed.unknown);
  return ds;
}

inline std::string journals_header() { return std::string(kJournalsHeader) + "\n"; }

// Builds a CitationMatrix directly from dense counts.
inline CitationMatrix citation_matrix(const std::vector<std::vector<std::uint64_t>>& c) {
  std::vector<CitationMatrix::Entry> e;
  for (JournalIndex j = 0; j < c.size(); ++j) {
    for (JournalIndex i = 0; i < c[j].size(); ++i) {
      if (c[j][i] > 0) e.push_back({j, i, c[j][i]});
    }
  }
  return CitationMatrix::from_entries(c.size(), c.size(), std::move(e));
}

// CosineMap over the support of `cmat` with values taken from a dense table.
inline CosineMap cosine_map(const CitationMatrix& cmat, const std::vector<std::vector<double>>& cos) {
  CsrMatrix<double> m;
  m.set_cols(cmat.cols());
  std::vector<double> vals;
  for (std::size_t j = 0; j < cmat.rows(); ++j) {
    vals.clear();
    for (auto i : cmat.row_indices(j)) vals.push_back(cos[j][i]);
    m.append_row(cmat.row_indices(j), vals);
  }
  return CosineMap(std::move(m));
}

inline ArtVector art_vector(std::vector<std::int64_t> counts) {
  ArtVector a;
  a.counts = std::move(counts);
  for (auto c : a.counts) a.total += c;
  return a;
}

// Small random network for property checks. Ids J0..J{n-1}, all ranked
// unless `unranked_every` > 0. Documents are mostly from `year`, with refs
// scattered inside and outside the window.
inline Dataset random_dataset(std::uint64_t seed, std::size_t n, std::size_t n_docs, int year = 2008,
                              std::size_t max_refs = 6, std::size_t unranked_every = 0) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::uint64_t lo, std::uint64_t hi) { return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng); };
  Dataset ds;
  for (std::size_t i = 0; i < n; ++i) {
    Journal j;
    j.id = JournalId("J" + std::to_string(i));
    j.title = "journal " + std::to_string(i);
    j.specific_areas = {std::string(SubjectScheme::kGeneral)};
    j.ranked = unranked_every == 0 || (i % unranked_every) != unranked_every - 1;
    for (int y = year - 3; y < year; ++y) {
      const auto c = static_cast<std::int64_t>(pick(0, 5));
      if (c > 0) j.citable_docs_by_year[y] = c;
    }
    if (i == 0) j.citable_docs_by_year[year - 1] += 1;
    ds.journals.add(std::move(j));
  }
  ds.journals.resolve_areas(ds.scheme);
  for (std::size_t k = 0; k < n_docs; ++k) {
    CitingDocument d;
    d.source = static_cast<JournalIndex>(pick(0, n - 1));
    d.year = pick(0, 9) == 0 ? year - 1 : year;
    const auto refs = pick(1, max_refs);
    for (std::size_t r = 0; r < refs; ++r) {
      d.refs.push_back({static_cast<JournalIndex>(pick(0, n - 1)), static_cast<int>(year - 4 + pick(0, 4)),
                        static_cast<std::uint32_t>(pick(1, 3))});
    }
    ds.documents.push_back(std::move(d));
  }
  return ds;
}

}  // namespace prestige::testing
