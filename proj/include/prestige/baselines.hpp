#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "prestige/ingest.hpp"
#include "prestige/model.hpp"

namespace prestige {

struct BaselineTable {
  std::vector<std::int64_t> citations_3y;
  std::vector<std::optional<double>> jif3y;  // empty where Art_i = 0
};

// Windowed citations from every year-Y document, ranked source or not,
// divided by the same Art used for SJR2.
inline BaselineTable compute_jif3y(const std::vector<CitingDocument>& docs, const ArtVector& art, const Params& p) {
  BaselineTable t;
  t.citations_3y.assign(art.size(), 0);
  for (const auto& d : docs) {
    if (d.year != p.year) continue;
    for (const auto& r : d.refs) {
      if (p.in_window(r.year)) t.citations_3y[r.journal] += r.count;
    }
  }
  t.jif3y.resize(art.size());
  for (std::size_t i = 0; i < art.size(); ++i) {
    if (art.counts[i] > 0) {
      t.jif3y[i] = static_cast<double>(t.citations_3y[i]) / static_cast<double>(art.counts[i]);
    }
  }
  return t;
}

// Citations that actually enter the prestige computation: column sums of
// the citation matrix (ranked sources only).
inline std::vector<std::int64_t> considered_citations(const CitationMatrix& cmat) {
  std::vector<std::int64_t> out(cmat.cols(), 0);
  for (std::size_t k = 0; k < cmat.nnz(); ++k) out[cmat.indices()[k]] += static_cast<std::int64_t>(cmat.values()[k]);
  return out;
}

}  // namespace prestige
