#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prestige/format.hpp"
#include "prestige/model.hpp"
#include "prestige/sparse.hpp"

namespace prestige {

// Entry (j, i) holds C_ji, the windowed references from journal j's year-Y
// documents to journal i. Rows of unranked journals are empty.
using CitationMatrix = CsrMatrix<std::uint64_t>;

struct ArtVector {
  std::vector<std::int64_t> counts;
  std::int64_t total = 0;

  std::size_t size() const { return counts.size(); }
  double share(std::size_t i) const { return static_cast<double>(counts[i]) / static_cast<double>(total); }
};

inline constexpr std::string_view kJournalsHeader = "id,title,specific_areas,citable_by_year,ranked";
inline constexpr std::string_view kSchemeHeader = "specific_code,subject_code,subject_name";

namespace detail {

inline bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

inline bool is_blank(std::string_view s) { return trim(s).empty(); }

}  // namespace detail

inline JournalTable parse_journals(std::istream& in) {
  JournalTable table;
  std::string line;
  std::size_t lineno = 0;
  if (!detail::read_line(in, line)) return table;
  ++lineno;
  if (trim(line) != kJournalsHeader) throw DataError("journals file: unexpected header", lineno);

  while (detail::read_line(in, line)) {
    ++lineno;
    if (detail::is_blank(line)) continue;
    std::vector<std::string> f;
    try {
      f = split_csv(line);
    } catch (const std::invalid_argument& e) {
      throw DataError(std::string("journals file: ") + e.what(), lineno);
    }
    if (f.size() != 5) throw DataError("journals file: expected 5 fields, got " + std::to_string(f.size()), lineno);

    Journal j;
    const auto id = trim(f[0]);
    if (id.empty()) throw DataError("journals file: empty id", lineno);
    j.id = JournalId(std::string(id));
    j.title = f[1];

    for (const auto& code : split(f[2], ';')) {
      auto c = trim(code);
      if (c.empty()) throw DataError("journals file: empty area code", lineno);
      j.specific_areas.emplace_back(c);
    }
    std::sort(j.specific_areas.begin(), j.specific_areas.end());
    j.specific_areas.erase(std::unique(j.specific_areas.begin(), j.specific_areas.end()), j.specific_areas.end());

    for (const auto& item : split(f[3], ';')) {
      auto colon = item.find(':');
      if (colon == std::string::npos) throw DataError("journals file: bad year:count item '" + item + "'", lineno);
      auto year = parse_int<int>(std::string_view(item).substr(0, colon));
      auto count = parse_int<std::int64_t>(std::string_view(item).substr(colon + 1));
      if (!year || !count) throw DataError("journals file: bad year:count item '" + item + "'", lineno);
      if (*count < 0) throw DataError("journals file: negative citable count", lineno);
      if (!j.citable_docs_by_year.emplace(*year, *count).second) {
        throw DataError("journals file: repeated year " + std::to_string(*year), lineno);
      }
    }

    const auto ranked = trim(f[4]);
    if (ranked == "true") {
      j.ranked = true;
    } else if (ranked == "false") {
      j.ranked = false;
    } else {
      throw DataError("journals file: ranked must be true|false", lineno);
    }
    if (j.ranked && j.specific_areas.empty()) {
      throw DataError("journals file: ranked journal " + j.id.str() + " has no specific area", lineno);
    }

    try {
      table.add(std::move(j));
    } catch (const DataError& e) {
      throw DataError(e.what(), lineno);
    }
  }
  return table;
}

inline SubjectScheme parse_scheme(std::istream& in) {
  SubjectScheme scheme;
  std::string line;
  std::size_t lineno = 0;
  if (!detail::read_line(in, line)) return scheme;
  ++lineno;
  if (trim(line) != kSchemeHeader) throw DataError("scheme file: unexpected header", lineno);
  while (detail::read_line(in, line)) {
    ++lineno;
    if (detail::is_blank(line)) continue;
    std::vector<std::string> f;
    try {
      f = split_csv(line);
    } catch (const std::invalid_argument& e) {
      throw DataError(std::string("scheme file: ") + e.what(), lineno);
    }
    if (f.size() != 3) throw DataError("scheme file: expected 3 fields", lineno);
    try {
      scheme.add(std::string(trim(f[0])), std::string(trim(f[1])), std::string(trim(f[2])));
    } catch (const DataError& e) {
      throw DataError(e.what(), lineno);
    }
  }
  return scheme;
}

struct CitationsParse {
  std::vector<CitingDocument> documents;
  std::vector<UnknownReference> unknown;
};

// One JSON object per line. Documents whose source is unknown are rejected;
// refs to unknown journals are dropped. Both are recorded in `unknown`.
inline CitationsParse parse_citations(std::istream& in, const JournalTable& table) {
  CitationsParse out;
  std::string line;
  std::size_t record = 0;
  while (detail::read_line(in, line)) {
    ++record;
    if (detail::is_blank(line)) continue;
    auto fail = [&](const std::string& msg) -> DataError { return DataError("citations file: " + msg, record); };

    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw fail("malformed JSON");
    }
    if (!obj.is_object()) throw fail("record is not an object");
    auto src = obj.find("src");
    auto year = obj.find("year");
    auto refs = obj.find("refs");
    if (src == obj.end() || !src->is_string()) throw fail("missing string field 'src'");
    if (year == obj.end() || !year->is_number_integer()) throw fail("missing integer field 'year'");
    if (refs == obj.end() || !refs->is_array()) throw fail("missing array field 'refs'");

    CitingDocument doc;
    doc.year = year->get<int>();
    const auto& src_id = src->get_ref<const std::string&>();
    auto src_idx = table.find(src_id);
    if (!src_idx) out.unknown.push_back({record, src_id, true});

    doc.refs.reserve(refs->size());
    for (const auto& r : *refs) {
      if (!r.is_object()) throw fail("ref is not an object");
      auto j = r.find("j");
      auto y = r.find("y");
      auto n = r.find("n");
      if (j == r.end() || !j->is_string()) throw fail("ref missing string field 'j'");
      if (y == r.end() || !y->is_number_integer()) throw fail("ref missing integer field 'y'");
      if (n == r.end() || !n->is_number_integer()) throw fail("ref missing integer field 'n'");
      const auto count = n->get<std::int64_t>();
      if (count < 1 || count > UINT32_MAX) throw fail("ref count must be >= 1");
      const auto& cited = j->get_ref<const std::string&>();
      auto idx = table.find(cited);
      if (!idx) {
        out.unknown.push_back({record, cited, false});
        continue;
      }
      doc.refs.push_back({*idx, y->get<int>(), static_cast<std::uint32_t>(count)});
    }
    if (src_idx) {
      doc.source = *src_idx;
      out.documents.push_back(std::move(doc));
    }
  }
  return out;
}

inline void write_journals(std::ostream& out, const JournalTable& table) {
  out << kJournalsHeader << '\n';
  for (const auto& j : table) {
    out << quote_csv(j.id.str()) << ',' << quote_csv(j.title) << ',';
    for (std::size_t k = 0; k < j.specific_areas.size(); ++k) out << (k ? ";" : "") << j.specific_areas[k];
    out << ',';
    bool first = true;
    for (const auto& [y, c] : j.citable_docs_by_year) {
      out << (first ? "" : ";") << y << ':' << c;
      first = false;
    }
    out << ',' << (j.ranked ? "true" : "false") << '\n';
  }
}

inline void write_scheme(std::ostream& out, const SubjectScheme& scheme) {
  out << kSchemeHeader << '\n';
  for (const auto& [specific, subject] : scheme.specific_to_subject()) {
    out << quote_csv(specific) << ',' << quote_csv(subject) << ',' << quote_csv(scheme.subject_name(subject)) << '\n';
  }
  // Subject Areas also usable directly as codes (General in particular).
  for (const auto& [subject, name] : scheme.subjects()) {
    if (scheme.specific_to_subject().contains(subject)) continue;
    out << quote_csv(subject) << ',' << quote_csv(subject) << ',' << quote_csv(name) << '\n';
  }
}

inline void write_citations(std::ostream& out, const std::vector<CitingDocument>& docs, const JournalTable& table) {
  std::vector<std::string> quoted;
  quoted.reserve(table.size());
  for (const auto& j : table) quoted.push_back(nlohmann::json(j.id.str()).dump());
  std::string buf;
  for (const auto& d : docs) {
    buf.clear();
    buf += "{\"src\":";
    buf += quoted[d.source];
    buf += ",\"year\":";
    buf += std::to_string(d.year);
    buf += ",\"refs\":[";
    for (std::size_t k = 0; k < d.refs.size(); ++k) {
      const auto& r = d.refs[k];
      if (k) buf += ',';
      buf += "{\"j\":";
      buf += quoted[r.journal];
      buf += ",\"y\":";
      buf += std::to_string(r.year);
      buf += ",\"n\":";
      buf += std::to_string(r.count);
      buf += '}';
    }
    buf += "]}\n";
    out << buf;
  }
}

inline CitationMatrix build_citation_matrix(const std::vector<CitingDocument>& docs, const JournalTable& table,
                                            const Params& p) {
  std::vector<CitationMatrix::Entry> entries;
  for (const auto& d : docs) {
    if (d.year != p.year || !table[d.source].ranked) continue;
    for (const auto& r : d.refs) {
      if (p.in_window(r.year)) entries.push_back({d.source, r.journal, r.count});
    }
  }
  return CitationMatrix::from_entries(table.size(), table.size(), std::move(entries));
}

inline ArtVector build_art_vector(const JournalTable& table, const Params& p) {
  ArtVector art;
  art.counts.reserve(table.size());
  for (const auto& j : table) {
    art.counts.push_back(j.citable_in_window(p.year, p.window));
    art.total += art.counts.back();
  }
  if (art.total == 0) throw DataError("no citable documents in window");
  return art;
}

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

// Reads the three input files and resolves every journal's Subject Areas.
inline Dataset load_dataset(const std::filesystem::path& journals, const std::filesystem::path& citations,
                            const std::filesystem::path& scheme) {
  Dataset ds;
  {
    auto in = open_input(scheme);
    ds.scheme = parse_scheme(in);
  }
  {
    auto in = open_input(journals);
    ds.journals = parse_journals(in);
  }
  ds.journals.resolve_areas(ds.scheme);
  {
    auto in = open_input(citations);
    auto parsed = parse_citations(in, ds.journals);
    ds.documents = std::move(parsed.documents);
    ds.unknown = std::move(parsed.unknown);
  }
  return ds;
}

inline void save_dataset(const Dataset& ds, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [](const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw DataError("cannot write " + p.string());
    return out;
  };
  {
    auto out = open(dir / "journals.csv");
    write_journals(out, ds.journals);
  }
  {
    auto out = open(dir / "citations.jsonl");
    write_citations(out, ds.documents, ds.journals);
  }
  {
    auto out = open(dir / "scheme.csv");
    write_scheme(out, ds.scheme);
  }
}

}  // namespace prestige
