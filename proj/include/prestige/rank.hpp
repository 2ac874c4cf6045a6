#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "prestige/cocite.hpp"
#include "prestige/ingest.hpp"
#include "prestige/model.hpp"
#include "prestige/parallel.hpp"
#include "prestige/sparse.hpp"

namespace prestige {

// Capped transfer coefficients. Row j lists what journal j passes to each
// journal it cites; rows may sum to less than one once the caps bite.
struct CoefMatrix {
  CsrMatrix<double> by_citing;  // entry (j, i) = Coef_ji
  CsrMatrix<double> by_cited;   // transpose of by_citing
  std::vector<double> row_sums;
  bool use_cosine = true;

  std::size_t size() const { return by_citing.rows(); }
  double at(JournalIndex j, JournalIndex i) const { return by_citing.at(j, i); }
  bool dangling(JournalIndex j) const { return by_citing.row_begin(j) == by_citing.row_end(j); }
};

struct PrestigeVector {
  std::vector<double> values;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
  // Set when no journal emits any coefficient mass and the citation share
  // was spread by citable-document share instead.
  bool dangling_fallback = false;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

struct ScoreVector {
  std::vector<std::optional<double>> values;  // empty where Art_i = 0
  std::vector<JournalIndex> unscored;
};

class NonConvergenceError : public std::runtime_error {
 public:
  explicit NonConvergenceError(PrestigeVector partial)
      : std::runtime_error("prestige iteration did not converge after " + std::to_string(partial.iterations) +
                           " iterations (residual " + std::to_string(partial.residual) + ")"),
        partial_(std::move(partial)) {}
  const PrestigeVector& partial() const { return partial_; }
  double residual() const { return partial_.residual; }

 private:
  PrestigeVector partial_;
};

namespace detail {

inline CoefMatrix finish_coefficients(CsrMatrix<double> by_citing, bool use_cosine) {
  CoefMatrix c;
  c.use_cosine = use_cosine;
  c.row_sums.resize(by_citing.rows());
  for (std::size_t j = 0; j < by_citing.rows(); ++j) {
    double s = 0.0;
    for (double v : by_citing.row_values(j)) s += v;
    c.row_sums[j] = s;
  }
  c.by_cited = by_citing.transposed();
  c.by_citing = std::move(by_citing);
  return c;
}

inline CoefMatrix compute_coefficients_impl(const CitationMatrix& cmat, const CosineMap* cosmap, const Params& p) {
  const bool use_cos = p.use_cosine;
  if (use_cos && (!cosmap || cosmap->size() != cmat.nnz())) {
    throw std::invalid_argument("compute_coefficients: cosine map does not cover the citation matrix");
  }
  CsrMatrix<double> out;
  out.set_cols(cmat.cols());
  std::vector<double> weighted;
  std::vector<JournalIndex> cols;
  std::vector<double> vals;
  for (std::size_t j = 0; j < cmat.rows(); ++j) {
    const auto idx = cmat.row_indices(j);
    const auto cnt = cmat.row_values(j);
    const auto cos = use_cos ? cosmap->matrix().row_values(j) : std::span<const double>{};
    weighted.resize(idx.size());
    double denom = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const double w = use_cos ? cos[k] : 1.0;
      weighted[k] = w * static_cast<double>(cnt[k]);
      denom += weighted[k];
    }
    cols.clear();
    vals.clear();
    if (denom > 0.0) {
      for (std::size_t k = 0; k < idx.size(); ++k) {
        if (weighted[k] <= 0.0) continue;
        const double raw = weighted[k] / denom;
        const double per_citation = p.cap_per_citation * static_cast<double>(cnt[k]);
        cols.push_back(idx[k]);
        vals.push_back(std::min({raw, p.cap_share, per_citation}));
      }
    }
    out.append_row(cols, vals);
  }
  return finish_coefficients(std::move(out), use_cos);
}

}  // namespace detail

// Coef_ji = min(w_ji C_ji / sum_h w_jh C_jh, cap_share, cap_per_citation C_ji)
// with w = cosine (or 1 when the cosine is switched off). The ratio is taken
// first and capped second; capped-off mass is not redistributed within the
// row.
inline CoefMatrix compute_coefficients(const CitationMatrix& cmat, const CosineMap& cosmap, const Params& p) {
  return detail::compute_coefficients_impl(cmat, &cosmap, p);
}

inline CoefMatrix compute_coefficients(const CitationMatrix& cmat, const Params& p) {
  if (p.use_cosine) throw std::invalid_argument("compute_coefficients: cosine map required when use_cosine is set");
  return detail::compute_coefficients_impl(cmat, nullptr, p);
}

// Total prestige handed out through the capped coefficients in one step:
// sum over i, j of Coef_ji * v_j. Zero when no coefficient exists.
inline double psjr2d(const CoefMatrix& coef, std::span<const double> v) {
  double d = 0.0;
  for (std::size_t j = 0; j < coef.row_sums.size(); ++j) d += coef.row_sums[j] * v[j];
  return d;
}

struct IterationOptions {
  unsigned threads = 1;
  // Called after every step with the 1-based step number and the new vector.
  std::function<void(int, std::span<const double>)> on_iteration;
};

// Fixed point of
//   v_i = (1-d-e)/N + e Art_i/sum(Art) + (d/D) sum_j Coef_ji v_j
// from v = 1/N, where D = psjr2d(coef, v) recycles the dangling and
// capped-off mass. Stops once the L1 step falls below p.tol. Throws
// NonConvergenceError (holding the last vector) after p.max_iters steps.
inline PrestigeVector iterate_psjr2(const CoefMatrix& coef, const ArtVector& art, const Params& p,
                                    const IterationOptions& opt = {}) {
  p.validate();
  const std::size_t n = coef.size();
  if (n == 0) throw std::invalid_argument("iterate_psjr2: no journals");
  if (art.size() != n) throw std::invalid_argument("iterate_psjr2: Art vector size mismatch");
  if (art.total <= 0) throw DataError("no citable documents in window");

  const double nd = static_cast<double>(n);
  std::vector<double> base(n), art_share(n);
  for (std::size_t i = 0; i < n; ++i) {
    art_share[i] = art.share(i);
    base[i] = (1.0 - p.d - p.e) / nd + p.e * art_share[i];
  }

  PrestigeVector result;
  std::vector<double> v(n, 1.0 / nd), next(n);
  for (int it = 1; it <= p.max_iters; ++it) {
    const double total_out = psjr2d(coef, v);
    if (total_out > 0.0) {
      const double scale = p.d / total_out;
      parallel_chunks(n, opt.threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
          const auto src = coef.by_cited.row_indices(i);
          const auto val = coef.by_cited.row_values(i);
          double acc = 0.0;
          for (std::size_t k = 0; k < src.size(); ++k) acc += val[k] * v[src[k]];
          next[i] = base[i] + scale * acc;
        }
      });
    } else {
      result.dangling_fallback = true;
      for (std::size_t i = 0; i < n; ++i) next[i] = base[i] + p.d * art_share[i];
    }

    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual += std::abs(next[i] - v[i]);
    v.swap(next);
    result.iterations = it;
    result.residual = residual;
    if (opt.on_iteration) opt.on_iteration(it, v);
    if (residual < p.tol) {
      result.converged = true;
      break;
    }
  }
  result.values = std::move(v);
  if (!result.converged) throw NonConvergenceError(std::move(result));
  return result;
}

// SJR2_i = PSJR2_i * sum(Art) / Art_i; journals without citable documents
// get no score and are listed in `unscored`.
inline ScoreVector compute_sjr2(const PrestigeVector& v, const ArtVector& art) {
  if (v.size() != art.size()) throw std::invalid_argument("compute_sjr2: size mismatch");
  ScoreVector s;
  s.values.resize(v.size());
  const double total = static_cast<double>(art.total);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (art.counts[i] > 0) {
      s.values[i] = v[i] * total / static_cast<double>(art.counts[i]);
    } else {
      s.unscored.push_back(static_cast<JournalIndex>(i));
    }
  }
  return s;
}

// Everything one indicator run produces, from citation counts to scores.
struct RankRun {
  Params params;
  CitationMatrix citations;
  ArtVector art;
  CocitationMatrix cocitation;  // empty when the cosine is off
  CosineMap cosines;            // empty when the cosine is off
  CoefMatrix coefficients;
  PrestigeVector prestige;
  ScoreVector scores;
};

namespace detail {

inline void finish_run(RankRun& run, const IterationOptions& opt) {
  run.coefficients = run.params.use_cosine ? compute_coefficients(run.citations, run.cosines, run.params)
                                           : compute_coefficients(run.citations, run.params);
  try {
    run.prestige = iterate_psjr2(run.coefficients, run.art, run.params, opt);
  } catch (const NonConvergenceError& e) {
    run.prestige = e.partial();
    run.scores = compute_sjr2(run.prestige, run.art);
    throw;
  }
  run.scores = compute_sjr2(run.prestige, run.art);
}

}  // namespace detail

// Full pipeline over a dataset. On non-convergence the partially filled run
// is still written to `run` before the error propagates.
inline void run_sjr2(const Dataset& ds, const Params& p, RankRun& run, const IterationOptions& opt = {}) {
  p.validate();
  run = RankRun{};
  run.params = p;
  run.art = build_art_vector(ds.journals, p);
  run.citations = build_citation_matrix(ds.documents, ds.journals, p);
  if (p.use_cosine) {
    run.cocitation = build_cocitation(ds.documents, ds.journals.size(), p, opt.threads);
    run.cosines = cosines_for_edges(run.cocitation, run.citations, opt.threads);
  }
  detail::finish_run(run, opt);
}

inline RankRun run_sjr2(const Dataset& ds, const Params& p, const IterationOptions& opt = {}) {
  RankRun run;
  run_sjr2(ds, p, run, opt);
  return run;
}

// Same network with the cosine switched off, reusing counts already built.
inline RankRun run_without_cosine(const RankRun& with_cosine, const IterationOptions& opt = {}) {
  RankRun run;
  run.params = with_cosine.params;
  run.params.use_cosine = false;
  run.citations = with_cosine.citations;
  run.art = with_cosine.art;
  detail::finish_run(run, opt);
  return run;
}

// Per-step prestige transfer (d/D) Coef_ji v_j at vector v. Empty when
// nothing is transferred.
inline CsrMatrix<double> prestige_flows(const CoefMatrix& coef, std::span<const double> v, const Params& p) {
  CsrMatrix<double> flows;
  flows.set_cols(coef.by_citing.cols());
  const double total_out = psjr2d(coef, v);
  std::vector<double> vals;
  for (std::size_t j = 0; j < coef.size(); ++j) {
    const auto c = coef.by_citing.row_values(j);
    vals.resize(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) vals[k] = total_out > 0.0 ? p.d / total_out * c[k] * v[j] : 0.0;
    if (total_out > 0.0) {
      flows.append_row(coef.by_citing.row_indices(j), vals);
    } else {
      flows.append_row({}, std::span<const double>{});
    }
  }
  return flows;
}

}  // namespace prestige
