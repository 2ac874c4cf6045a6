#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "prestige/format.hpp"
#include "prestige/ingest.hpp"
#include "prestige/model.hpp"
#include "prestige/parallel.hpp"
#include "prestige/sparse.hpp"

namespace prestige {

// Symmetric journal cocitation counts. The diagonal is never stored: no
// cosine between two distinct journals reads it.
class CocitationMatrix {
 public:
  CocitationMatrix() = default;
  explicit CocitationMatrix(CsrMatrix<std::uint32_t> counts) : counts_(std::move(counts)) {
    norm2_.resize(counts_.rows());
    for (std::size_t r = 0; r < counts_.rows(); ++r) {
      std::uint64_t s = 0;
      for (auto v : counts_.row_values(r)) s += std::uint64_t{v} * v;
      norm2_[r] = s;
    }
  }

  std::size_t size() const { return counts_.rows(); }
  std::uint32_t at(JournalIndex i, JournalIndex h) const { return counts_.at(i, h); }
  const CsrMatrix<std::uint32_t>& counts() const { return counts_; }
  // Squared Euclidean norm of the full stored row.
  std::uint64_t row_norm2(JournalIndex i) const { return norm2_[i]; }

 private:
  CsrMatrix<std::uint32_t> counts_;
  std::vector<std::uint64_t> norm2_;
};

// Cosine per citation edge: same sparsity as the CitationMatrix it was built
// from, entry (j, i) = Cos_ji.
class CosineMap {
 public:
  CosineMap() = default;
  explicit CosineMap(CsrMatrix<double> values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.nnz(); }
  bool contains(JournalIndex j, JournalIndex i) const { return values_.find(j, i) != CsrMatrix<double>::npos; }
  double at(JournalIndex j, JournalIndex i) const {
    auto k = values_.find(j, i);
    if (k == CsrMatrix<double>::npos) throw std::out_of_range("CosineMap: pair is not a citation edge");
    return values_.values()[k];
  }
  const CsrMatrix<double>& matrix() const { return values_; }

 private:
  CsrMatrix<double> values_;
};

// Distinct journals receiving in-window refs from each year-Y document.
// Documents with fewer than two such journals are dropped (they add no pair).
inline CsrMatrix<std::uint32_t> cited_sets(const std::vector<CitingDocument>& docs, std::size_t n_journals,
                                           const Params& p) {
  CsrMatrix<std::uint32_t> sets;
  sets.set_cols(n_journals);
  std::vector<JournalIndex> s;
  std::vector<std::uint32_t> ones;
  for (const auto& d : docs) {
    if (d.year != p.year) continue;
    s.clear();
    for (const auto& r : d.refs) {
      if (p.in_window(r.year)) s.push_back(r.journal);
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (s.size() < 2) continue;
    ones.assign(s.size(), 1);
    sets.append_row(s, ones);
  }
  return sets;
}

// Cocit_ih = number of year-Y documents whose windowed refs include both i
// and h. Binary per document. Rows are built independently, so the result
// is identical for any document order and any worker count.
inline CocitationMatrix build_cocitation(const std::vector<CitingDocument>& docs, std::size_t n_journals,
                                         const Params& p, unsigned threads = 1) {
  const auto sets = cited_sets(docs, n_journals, p);
  const auto by_journal = sets.transposed();  // journal -> documents citing it

  struct Chunk {
    std::vector<std::size_t> lengths;
    std::vector<JournalIndex> cols;
    std::vector<std::uint32_t> vals;
  };
  const std::size_t n = n_journals;
  const unsigned workers = std::max(1u, threads);
  const std::size_t step = (n + workers - 1) / std::max<std::size_t>(1, workers);
  std::vector<Chunk> chunks(workers);

  parallel_workers(workers, [&](unsigned w) {
    std::vector<std::uint32_t> counter(n, 0);
    std::vector<JournalIndex> touched;
    {
      auto& out = chunks[w];
      const std::size_t rb = std::min(n, w * step);
      const std::size_t re = std::min(n, rb + step);
      for (std::size_t i = rb; i < re; ++i) {
        touched.clear();
        for (auto doc : by_journal.row_indices(i)) {
          for (auto h : sets.row_indices(doc)) {
            if (h == i) continue;
            if (counter[h]++ == 0) touched.push_back(h);
          }
        }
        std::sort(touched.begin(), touched.end());
        for (auto h : touched) {
          out.cols.push_back(h);
          out.vals.push_back(counter[h]);
          counter[h] = 0;
        }
        out.lengths.push_back(touched.size());
      }
    }
  });

  CsrMatrix<std::uint32_t> counts;
  counts.set_cols(n);
  for (const auto& c : chunks) {
    std::size_t pos = 0;
    for (auto len : c.lengths) {
      counts.append_row(std::span(c.cols).subspan(pos, len), std::span(c.vals).subspan(pos, len));
      pos += len;
    }
  }
  return CocitationMatrix(std::move(counts));
}

namespace detail {

// Shared final step so both the pointwise and the batched routes produce
// bit-identical values from the same integers.
inline double cosine_from_parts(std::uint64_t dot, std::uint64_t norm2_i, std::uint64_t norm2_j) {
  if (norm2_i == 0 || norm2_j == 0) return 0.0;
  const double c = static_cast<double>(dot) / std::sqrt(static_cast<double>(norm2_i) * static_cast<double>(norm2_j));
  return std::min(1.0, c);
}

}  // namespace detail

// Cosine between the cocitation profiles of i and j, leaving out the
// components i and j. Zero when either truncated profile is empty.
inline double cosine(const CocitationMatrix& cocit, JournalIndex i, JournalIndex j) {
  if (i == j) throw std::invalid_argument("cosine: journals must differ");
  const auto& m = cocit.counts();
  const auto ci = m.row_indices(i), cj = m.row_indices(j);
  const auto vi = m.row_values(i), vj = m.row_values(j);
  std::uint64_t dot = 0;
  std::size_t a = 0, b = 0;
  while (a < ci.size() && b < cj.size()) {
    if (ci[a] < cj[b]) {
      ++a;
    } else if (cj[b] < ci[a]) {
      ++b;
    } else {
      // Neither row stores its own diagonal, so h is never i or j here.
      dot += std::uint64_t{vi[a]} * vj[b];
      ++a;
      ++b;
    }
  }
  const std::uint64_t cij = cocit.at(i, j);
  return detail::cosine_from_parts(dot, cocit.row_norm2(i) - cij * cij, cocit.row_norm2(j) - cij * cij);
}

// Cosines only for pairs with C_ji > 0. A self-citation edge gets 1: a
// profile is parallel to itself.
inline CosineMap cosines_for_edges(const CocitationMatrix& cocit, const CitationMatrix& cmat, unsigned threads = 1) {
  const auto& m = cocit.counts();
  const std::size_t n = cmat.rows();
  std::vector<double> values(cmat.nnz(), 0.0);

  parallel_chunks(n, threads, [&](std::size_t rb, std::size_t re) {
    std::vector<std::uint32_t> profile(m.cols(), 0);
    for (std::size_t j = rb; j < re; ++j) {
      if (cmat.row_begin(j) == cmat.row_end(j)) continue;
      const bool has_profile = j < m.rows();
      if (has_profile) {
        auto cols = m.row_indices(j);
        auto vals = m.row_values(j);
        for (std::size_t k = 0; k < cols.size(); ++k) profile[cols[k]] = vals[k];
      }
      for (std::size_t e = cmat.row_begin(j); e < cmat.row_end(j); ++e) {
        const auto i = cmat.indices()[e];
        if (i == j) {
          values[e] = 1.0;
          continue;
        }
        if (!has_profile || i >= m.rows()) continue;
        std::uint64_t dot = 0;
        auto cols = m.row_indices(i);
        auto vals = m.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) dot += std::uint64_t{vals[k]} * profile[cols[k]];
        const std::uint64_t cij = profile[i];
        values[e] = detail::cosine_from_parts(dot, cocit.row_norm2(i) - cij * cij, cocit.row_norm2(j) - cij * cij);
      }
      if (has_profile) {
        for (auto c : m.row_indices(j)) profile[c] = 0;
      }
    }
  });

  CsrMatrix<double> out;
  out.set_cols(cmat.cols());
  for (std::size_t j = 0; j < n; ++j) {
    out.append_row(cmat.row_indices(j), std::span(values).subspan(cmat.row_begin(j), cmat.row_end(j) - cmat.row_begin(j)));
  }
  return CosineMap(std::move(out));
}

// Debug dumps: `i<TAB>j<TAB>cocit` (upper triangle) and `j<TAB>i<TAB>cosine`.
inline void write_cocitation_tsv(std::ostream& out, const CocitationMatrix& cocit, const JournalTable& table) {
  out << "i\tj\tcocit\n";
  const auto& m = cocit.counts();
  for (JournalIndex i = 0; i < m.rows(); ++i) {
    auto cols = m.row_indices(i);
    auto vals = m.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] <= i) continue;
      out << table[i].id.str() << '\t' << table[cols[k]].id.str() << '\t' << vals[k] << '\n';
    }
  }
}

inline void write_cosine_tsv(std::ostream& out, const CosineMap& cos, const JournalTable& table,
                             int precision = kDefaultPrecision) {
  out << "j\ti\tcosine\n";
  const auto& m = cos.matrix();
  for (JournalIndex j = 0; j < m.rows(); ++j) {
    auto cols = m.row_indices(j);
    auto vals = m.row_values(j);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      out << table[j].id.str() << '\t' << table[cols[k]].id.str() << '\t' << format_number(vals[k], precision) << '\n';
    }
  }
}

}  // namespace prestige
