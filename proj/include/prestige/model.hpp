#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "prestige/sparse.hpp"

namespace prestige {

// Raised for malformed or inconsistent input data. Carries the 1-based line
// or record number when one applies (0 otherwise).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class JournalId {
 public:
  JournalId() = default;
  explicit JournalId(std::string value) : value_(std::move(value)) {
    if (value_.empty()) throw DataError("journal id must be non-empty");
  }
  const std::string& str() const { return value_; }
  auto operator<=>(const JournalId&) const = default;

 private:
  std::string value_;
};

struct Journal {
  JournalId id;
  std::string title;
  std::vector<std::string> specific_areas;  // sorted, unique
  std::vector<std::string> areas;           // Subject Areas, derived through the scheme
  std::map<int, std::int64_t> citable_docs_by_year;
  bool ranked = true;

  // Citable documents published in [year - window, year - 1].
  std::int64_t citable_in_window(int year, int window) const {
    std::int64_t total = 0;
    for (auto it = citable_docs_by_year.lower_bound(year - window);
         it != citable_docs_by_year.end() && it->first < year; ++it) {
      total += it->second;
    }
    return total;
  }
};

class SubjectScheme {
 public:
  static constexpr std::string_view kGeneral = "1000";

  SubjectScheme() { subjects_.emplace(std::string(kGeneral), "General"); }

  void add(const std::string& specific, const std::string& subject, const std::string& subject_name) {
    if (specific.empty() || subject.empty()) throw DataError("subject scheme: empty code");
    auto [it, inserted] = parent_.emplace(specific, subject);
    if (!inserted && it->second != subject) {
      throw DataError("subject scheme: specific area " + specific + " mapped to two Subject Areas");
    }
    auto& name = subjects_[subject];
    if (!subject_name.empty()) {
      name = subject_name;
    } else if (name.empty()) {
      name = subject;
    }
  }

  // A code that is itself a Subject Area resolves to itself.
  std::optional<std::string> subject_of(const std::string& specific) const {
    if (auto it = parent_.find(specific); it != parent_.end()) return it->second;
    if (subjects_.contains(specific)) return specific;
    return std::nullopt;
  }

  const std::map<std::string, std::string>& subjects() const { return subjects_; }
  const std::map<std::string, std::string>& specific_to_subject() const { return parent_; }

  std::string subject_name(const std::string& code) const {
    auto it = subjects_.find(code);
    return it == subjects_.end() ? code : it->second;
  }

  static bool is_general(std::string_view code) { return code == kGeneral; }

 private:
  std::map<std::string, std::string> parent_;    // specific -> subject
  std::map<std::string, std::string> subjects_;  // subject -> name
};

class JournalTable {
 public:
  JournalIndex add(Journal j) {
    auto idx = static_cast<JournalIndex>(journals_.size());
    auto [it, inserted] = index_.emplace(j.id.str(), idx);
    if (!inserted) throw DataError("duplicate journal id: " + j.id.str());
    journals_.push_back(std::move(j));
    return idx;
  }

  std::optional<JournalIndex> find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return journals_.size(); }
  bool empty() const { return journals_.empty(); }
  const Journal& operator[](JournalIndex i) const { return journals_[i]; }
  Journal& operator[](JournalIndex i) { return journals_[i]; }
  auto begin() const { return journals_.begin(); }
  auto end() const { return journals_.end(); }

  // Fills Journal::areas from specific_areas; throws on codes the scheme
  // cannot place.
  void resolve_areas(const SubjectScheme& scheme) {
    for (auto& j : journals_) {
      std::vector<std::string> subjects;
      for (const auto& code : j.specific_areas) {
        auto parent = scheme.subject_of(code);
        if (!parent) throw DataError("journal " + j.id.str() + ": unknown specific area " + code);
        subjects.push_back(*parent);
      }
      std::sort(subjects.begin(), subjects.end());
      subjects.erase(std::unique(subjects.begin(), subjects.end()), subjects.end());
      j.areas = std::move(subjects);
    }
  }

 private:
  std::vector<Journal> journals_;
  std::unordered_map<std::string, JournalIndex> index_;
};

struct Params {
  double d = 0.9;
  double e = 0.0999;
  int year = 0;
  int window = 3;
  double cap_share = 0.5;
  double cap_per_citation = 0.1;
  bool use_cosine = true;
  double tol = 1e-10;
  int max_iters = 200;

  int window_first() const { return year - window; }
  int window_last() const { return year - 1; }
  bool in_window(int cited_year) const { return cited_year >= window_first() && cited_year <= window_last(); }

  void validate() const {
    auto fail = [](const std::string& m) { throw std::invalid_argument("invalid params: " + m); };
    if (!(d > 0 && d < 1)) fail("d must lie in (0, 1)");
    if (!(e > 0 && e < 1)) fail("e must lie in (0, 1)");
    if (!(d + e < 1)) fail("d + e must be < 1");
    if (window < 1) fail("window must be >= 1");
    if (!(cap_share > 0 && cap_share <= 1)) fail("cap_share must lie in (0, 1]");
    if (!(cap_per_citation > 0)) fail("cap_per_citation must be > 0");
    if (!(tol > 0)) fail("tol must be > 0");
    if (max_iters < 1) fail("max_iters must be >= 1");
  }
};

struct Reference {
  JournalIndex journal;
  int year;
  std::uint32_t count;  // >= 1
  friend bool operator==(const Reference&, const Reference&) = default;
};

struct CitingDocument {
  JournalIndex source;
  int year;
  std::vector<Reference> refs;
  friend bool operator==(const CitingDocument&, const CitingDocument&) = default;
};

// A reference (or document source) naming an id absent from the journal table.
struct UnknownReference {
  std::size_t record;  // 1-based record number in the citations stream
  std::string id;
  bool is_source;
};

struct Dataset {
  JournalTable journals;
  std::vector<CitingDocument> documents;
  SubjectScheme scheme;
  std::vector<UnknownReference> unknown;  // collected at ingest; offending items dropped
};

struct ValidationReport {
  std::vector<UnknownReference> unknown_ids;
  std::size_t documents_outside_year = 0;
  std::size_t refs_outside_window = 0;
  std::vector<JournalIndex> zero_art_journals;
  std::size_t dangling_ranked = 0;
  std::vector<std::string> fatal;

  bool ok() const { return fatal.empty(); }
};

// Never throws on data problems; fatal conditions land in report.fatal.
inline ValidationReport validate_dataset(const Dataset& ds, const Params& p) {
  ValidationReport r;
  r.unknown_ids = ds.unknown;
  if (ds.journals.empty()) r.fatal.emplace_back("no journals");

  std::vector<char> emits(ds.journals.size(), 0);
  for (const auto& doc : ds.documents) {
    if (doc.year != p.year) {
      ++r.documents_outside_year;
      continue;
    }
    for (const auto& ref : doc.refs) {
      if (p.in_window(ref.year)) {
        if (doc.source < emits.size()) emits[doc.source] = 1;
      } else {
        ++r.refs_outside_window;
      }
    }
  }

  std::int64_t total_art = 0;
  for (JournalIndex i = 0; i < ds.journals.size(); ++i) {
    const auto& j = ds.journals[i];
    const auto art = j.citable_in_window(p.year, p.window);
    total_art += art;
    if (art == 0) r.zero_art_journals.push_back(i);
    if (j.ranked && !emits[i]) ++r.dangling_ranked;
  }
  if (!ds.journals.empty() && total_art == 0) r.fatal.emplace_back("no citable documents in window");
  return r;
}

}  // namespace prestige
