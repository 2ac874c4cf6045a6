#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prestige/baselines.hpp"
#include "prestige/format.hpp"
#include "prestige/ingest.hpp"
#include "prestige/model.hpp"
#include "prestige/rank.hpp"

namespace prestige {

class UndefinedCorrelation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Product-moment correlation, computed on mean-centred values.
inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("pearson: need at least two observations");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = x[k] - mx, dy = y[k] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("correlation undefined: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// 1-based ranks; ties share the mean of the ranks they span.
inline std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t k = 0; k < order.size();) {
    std::size_t l = k;
    while (l + 1 < order.size() && v[order[l + 1]] == v[order[k]]) ++l;
    const double r = 0.5 * static_cast<double>(k + l) + 1.0;
    for (std::size_t m = k; m <= l; ++m) ranks[order[m]] = r;
    k = l + 1;
  }
  return ranks;
}

inline double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

// Mean of (rate - 1)^2.
inline double msd_unity(std::span<const double> rates) {
  if (rates.empty()) throw std::invalid_argument("msd_unity: empty input");
  double s = 0.0;
  for (double r : rates) s += (r - 1.0) * (r - 1.0);
  return s / static_cast<double>(rates.size());
}

struct LogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Least squares of value = slope * ln(rank) + intercept over ranks 1..n.
// Constant input gives slope 0 and R^2 = 0.
inline LogFit log_fit(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("log_fit: need at least two values");
  const double n = static_cast<double>(values.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    mx += std::log(static_cast<double>(k + 1));
    my += values[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double dx = std::log(static_cast<double>(k + 1)) - mx;
    const double dy = values[k] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LogFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; })) {
    f.slope = 0.0;
    f.intercept = my;
    f.r_squared = 0.0;
    return f;
  }
  double ss_res = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double e = values[k] - (f.slope * std::log(static_cast<double>(k + 1)) + f.intercept);
    ss_res += e * e;
  }
  f.r_squared = 1.0 - ss_res / syy;
  return f;
}

// Sorted descending and divided by the maximum, ready for log_fit.
inline std::vector<double> normalized_rank_series(std::span<const double> values) {
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end(), std::greater<>());
  if (!s.empty() && s.front() > 0.0) {
    const double top = s.front();
    for (auto& x : s) x /= top;
  }
  return s;
}

// e.g. "y = -0.017 ln(x) + 0.1535"
inline std::string format_log_fit(const LogFit& f, int precision = 4) {
  std::string s = "y = " + format_number(f.slope, precision) + " ln(x) ";
  s += f.intercept < 0 ? "- " + format_number(-f.intercept, precision) : "+ " + format_number(f.intercept, precision);
  return s;
}

enum class AreaLevel { subject, specific };

inline const char* to_string(AreaLevel l) { return l == AreaLevel::subject ? "subject" : "specific"; }

// Area codes of a journal at the given level, each with weight 1/count.
inline std::vector<std::pair<std::string, double>> memberships(const Journal& j, AreaLevel level) {
  const auto& codes = level == AreaLevel::subject ? j.areas : j.specific_areas;
  std::vector<std::pair<std::string, double>> out;
  out.reserve(codes.size());
  for (const auto& c : codes) out.emplace_back(c, 1.0 / static_cast<double>(codes.size()));
  return out;
}

inline std::string area_name(const SubjectScheme& scheme, const std::string& code, AreaLevel level) {
  return level == AreaLevel::subject ? scheme.subject_name(code) : code;
}

// Parent Subject Area of an area code at `level` (itself at subject level).
inline std::string parent_subject(const SubjectScheme& scheme, const std::string& code, AreaLevel level) {
  if (level == AreaLevel::subject) return code;
  auto s = scheme.subject_of(code);
  return s ? *s : code;
}

// Per-journal mass for one indicator. Rates compare each area's share of
// the total mass against its share of citable documents.
struct Indicator {
  std::string name;
  std::vector<std::optional<double>> mass;
};

// SJR2 mass is PSJR2 and JIF(3y) mass is the citation count; an external
// per-document score (SNIP) contributes score * Art.
inline std::vector<Indicator> standard_indicators(const RankRun& run, const BaselineTable& base,
                                                  const std::map<std::string, std::vector<std::optional<double>>>& extra = {}) {
  std::vector<Indicator> out;
  Indicator sjr2{"SJR2", {}}, jif{"JIF(3y)", {}};
  for (std::size_t i = 0; i < run.art.size(); ++i) {
    sjr2.mass.emplace_back(run.prestige[i]);
    jif.mass.emplace_back(static_cast<double>(base.citations_3y[i]));
  }
  out.push_back(std::move(sjr2));
  out.push_back(std::move(jif));
  for (const auto& [name, scores] : extra) {
    Indicator ind{name, {}};
    for (std::size_t i = 0; i < run.art.size(); ++i) {
      if (i < scores.size() && scores[i]) {
        ind.mass.emplace_back(*scores[i] * static_cast<double>(run.art.counts[i]));
      } else {
        ind.mass.emplace_back(std::nullopt);
      }
    }
    out.push_back(std::move(ind));
  }
  return out;
}

struct AreaRateRow {
  std::string code;
  std::string name;
  double art_share = 0.0;
  std::vector<std::optional<double>> rates;  // one per indicator
};

struct AreaRateTable {
  AreaLevel level = AreaLevel::subject;
  std::vector<std::string> indicators;
  std::vector<AreaRateRow> rows;
  std::vector<std::string> warnings;

  // Rates of indicator k, optionally without the General area (and without
  // any specific area under it).
  std::vector<double> column(std::size_t k, bool exclude_general, const SubjectScheme& scheme) const {
    std::vector<double> out;
    for (const auto& r : rows) {
      if (exclude_general && SubjectScheme::is_general(parent_subject(scheme, r.code, level))) continue;
      if (r.rates[k]) out.push_back(*r.rates[k]);
    }
    return out;
  }
};

inline AreaRateTable area_rates(const JournalTable& journals, const SubjectScheme& scheme, const ArtVector& art,
                                const std::vector<Indicator>& indicators, AreaLevel level) {
  AreaRateTable t;
  t.level = level;
  for (const auto& ind : indicators) t.indicators.push_back(ind.name);

  std::map<std::string, double> area_art;
  std::map<std::string, std::vector<double>> area_mass;
  std::vector<double> totals(indicators.size(), 0.0);
  for (std::size_t k = 0; k < indicators.size(); ++k) {
    for (const auto& m : indicators[k].mass) {
      if (m) totals[k] += *m;
    }
  }
  for (JournalIndex i = 0; i < journals.size(); ++i) {
    for (const auto& [code, w] : memberships(journals[i], level)) {
      area_art[code] += w * static_cast<double>(art.counts[i]);
      auto& masses = area_mass[code];
      masses.resize(indicators.size(), 0.0);
      for (std::size_t k = 0; k < indicators.size(); ++k) {
        if (const auto& m = indicators[k].mass[i]) masses[k] += w * *m;
      }
    }
  }
  for (const auto& [code, a] : area_art) {
    if (a <= 0.0) {
      t.warnings.push_back("area " + code + " has no citable documents; rate omitted");
      continue;
    }
    AreaRateRow row{code, area_name(scheme, code, level), a / static_cast<double>(art.total), {}};
    for (std::size_t k = 0; k < indicators.size(); ++k) {
      if (totals[k] > 0.0) {
        row.rates.emplace_back(area_mass[code][k] / totals[k] / row.art_share);
      } else {
        row.rates.emplace_back(std::nullopt);
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

struct Deviation {
  std::string indicator;
  std::size_t areas = 0;
  double msd = 0.0;
};

inline std::vector<Deviation> deviations(const AreaRateTable& t, bool exclude_general, const SubjectScheme& scheme) {
  std::vector<Deviation> out;
  for (std::size_t k = 0; k < t.indicators.size(); ++k) {
    const auto col = t.column(k, exclude_general, scheme);
    if (col.empty()) continue;
    out.push_back({t.indicators[k], col.size(), msd_unity(col)});
  }
  return out;
}

struct CorrelationPair {
  std::string a, b;
  std::size_t n = 0;
  std::optional<double> pearson, spearman;
};

struct AreaCorrelation {
  std::string a, b;
  std::size_t areas = 0;
  double pearson_mean = 0.0, pearson_sd = 0.0;
  double spearman_mean = 0.0, spearman_sd = 0.0;
};

struct CorrelationReport {
  std::vector<CorrelationPair> overall;
  std::vector<AreaCorrelation> by_subject;
  std::vector<AreaCorrelation> by_specific;
};

using ScoreColumn = std::pair<std::string, std::vector<std::optional<double>>>;

namespace detail {

inline CorrelationPair correlate(const ScoreColumn& a, const ScoreColumn& b, std::span<const JournalIndex> subset) {
  std::vector<double> x, y;
  for (auto i : subset) {
    if (a.second[i] && b.second[i]) {
      x.push_back(*a.second[i]);
      y.push_back(*b.second[i]);
    }
  }
  CorrelationPair p{a.first, b.first, x.size(), std::nullopt, std::nullopt};
  if (x.size() < 2) return p;
  try {
    p.pearson = pearson(x, y);
  } catch (const UndefinedCorrelation&) {
  }
  try {
    p.spearman = spearman(x, y);
  } catch (const UndefinedCorrelation&) {
  }
  return p;
}

inline std::pair<double, double> mean_sd(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(v.size());
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() < 2) return {m, 0.0};
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return {m, std::sqrt(s / (n - 1.0))};
}

}  // namespace detail

// Overall coefficients plus the simple mean and sample SD over areas of the
// per-area coefficients. Areas with fewer than `min_journals` scored
// journals, or with a constant column, do not contribute.
inline CorrelationReport correlation_report(const JournalTable& journals, const SubjectScheme& scheme,
                                            const std::vector<ScoreColumn>& columns, bool exclude_general,
                                            std::size_t min_journals = 3) {
  CorrelationReport rep;
  std::vector<JournalIndex> all(journals.size());
  std::iota(all.begin(), all.end(), JournalIndex{0});

  auto members = [&](AreaLevel level) {
    std::map<std::string, std::vector<JournalIndex>> m;
    for (JournalIndex i = 0; i < journals.size(); ++i) {
      for (const auto& [code, w] : memberships(journals[i], level)) {
        if (exclude_general && SubjectScheme::is_general(parent_subject(scheme, code, level))) continue;
        m[code].push_back(i);
      }
    }
    return m;
  };
  const auto subject_members = members(AreaLevel::subject);
  const auto specific_members = members(AreaLevel::specific);

  for (std::size_t a = 0; a < columns.size(); ++a) {
    for (std::size_t b = a + 1; b < columns.size(); ++b) {
      rep.overall.push_back(detail::correlate(columns[a], columns[b], all));
      for (auto [groups, out] : {std::pair{&subject_members, &rep.by_subject}, std::pair{&specific_members, &rep.by_specific}}) {
        std::vector<double> ps, ss;
        for (const auto& [code, idx] : *groups) {
          const auto c = detail::correlate(columns[a], columns[b], idx);
          if (c.n < min_journals || !c.pearson || !c.spearman) continue;
          ps.push_back(*c.pearson);
          ss.push_back(*c.spearman);
        }
        AreaCorrelation ac{columns[a].first, columns[b].first, ps.size(), 0, 0, 0, 0};
        std::tie(ac.pearson_mean, ac.pearson_sd) = detail::mean_sd(ps);
        std::tie(ac.spearman_mean, ac.spearman_sd) = detail::mean_sd(ss);
        out->push_back(ac);
      }
    }
  }
  return rep;
}

// Area-to-area transfer matrix at Subject Area level; rows are sources.
struct FlowMatrix {
  std::vector<std::string> areas;
  std::vector<std::vector<double>> values;

  double total() const {
    double s = 0.0;
    for (const auto& r : values) {
      for (double v : r) s += v;
    }
    return s;
  }
  double at(const std::string& from, const std::string& to) const {
    auto f = std::find(areas.begin(), areas.end(), from);
    auto t = std::find(areas.begin(), areas.end(), to);
    if (f == areas.end() || t == areas.end()) return 0.0;
    return values[static_cast<std::size_t>(f - areas.begin())][static_cast<std::size_t>(t - areas.begin())];
  }
};

// F(A, B) = sum over j in A, i in B of flow_ji, each journal attributed
// 1/|areas| to each of its Subject Areas.
inline FlowMatrix flow_matrix(const CsrMatrix<double>& flows, const JournalTable& journals) {
  FlowMatrix m;
  std::map<std::string, std::size_t> pos;
  for (const auto& j : journals) {
    for (const auto& a : j.areas) pos.emplace(a, 0);
  }
  for (auto& [code, k] : pos) {
    k = m.areas.size();
    m.areas.push_back(code);
  }
  m.values.assign(m.areas.size(), std::vector<double>(m.areas.size(), 0.0));
  for (JournalIndex j = 0; j < flows.rows(); ++j) {
    const auto src = memberships(journals[j], AreaLevel::subject);
    if (src.empty()) continue;
    const auto idx = flows.row_indices(j);
    const auto val = flows.row_values(j);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const auto dst = memberships(journals[idx[k]], AreaLevel::subject);
      for (const auto& [a, wa] : src) {
        for (const auto& [b, wb] : dst) m.values[pos[a]][pos[b]] += val[k] * wa * wb;
      }
    }
  }
  return m;
}

// Shares of flow that stay with the same journal, the same Specific
// Subject Area, or the same Subject Area. "Same" means source and target
// have at least one area in common, so self <= specific <= subject.
struct WithinFlowRow {
  std::string code;
  std::string name;
  double art = 0.0;
  double received = 0.0, received_self = 0.0, received_specific = 0.0, received_subject = 0.0;
  double sent = 0.0, sent_self = 0.0, sent_specific = 0.0, sent_subject = 0.0;

  static double pct(double part, double whole) { return whole > 0.0 ? 100.0 * part / whole : 0.0; }
};

struct WithinFlowAverages {
  double received_self = 0.0, received_specific = 0.0, received_subject = 0.0;
  double sent_self = 0.0, sent_specific = 0.0, sent_subject = 0.0;
};

struct WithinFlowReport {
  AreaLevel level = AreaLevel::subject;
  std::vector<WithinFlowRow> rows;
  WithinFlowAverages doc_weighted;  // percentages, weighted by each area's citable documents
};

namespace detail {

inline bool share_any(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  // both sorted
  std::size_t x = 0, y = 0;
  while (x < a.size() && y < b.size()) {
    if (a[x] == b[y]) return true;
    if (a[x] < b[y]) {
      ++x;
    } else {
      ++y;
    }
  }
  return false;
}

}  // namespace detail

inline WithinFlowReport within_flows(const CsrMatrix<double>& flows, const JournalTable& journals,
                                     const SubjectScheme& scheme, const ArtVector& art, AreaLevel level) {
  WithinFlowReport rep;
  rep.level = level;
  std::map<std::string, WithinFlowRow> rows;
  for (JournalIndex i = 0; i < journals.size(); ++i) {
    for (const auto& [code, w] : memberships(journals[i], level)) {
      auto& r = rows[code];
      r.code = code;
      r.art += w * static_cast<double>(art.counts[i]);
    }
  }
  for (JournalIndex j = 0; j < flows.rows(); ++j) {
    const auto& src = journals[j];
    const auto src_w = memberships(src, level);
    const auto idx = flows.row_indices(j);
    const auto val = flows.row_values(j);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const auto& dst = journals[idx[k]];
      const double f = val[k];
      const bool self = idx[k] == j;
      const bool specific = self || detail::share_any(src.specific_areas, dst.specific_areas);
      const bool subject = specific || detail::share_any(src.areas, dst.areas);
      for (const auto& [code, w] : memberships(dst, level)) {
        auto& r = rows[code];
        r.received += w * f;
        if (self) r.received_self += w * f;
        if (specific) r.received_specific += w * f;
        if (subject) r.received_subject += w * f;
      }
      for (const auto& [code, w] : src_w) {
        auto& r = rows[code];
        r.sent += w * f;
        if (self) r.sent_self += w * f;
        if (specific) r.sent_specific += w * f;
        if (subject) r.sent_subject += w * f;
      }
    }
  }

  double wr = 0.0, ws = 0.0;
  auto& avg = rep.doc_weighted;
  for (auto& [code, r] : rows) {
    r.name = area_name(scheme, code, level);
    if (r.received > 0.0) {
      wr += r.art;
      avg.received_self += r.art * WithinFlowRow::pct(r.received_self, r.received);
      avg.received_specific += r.art * WithinFlowRow::pct(r.received_specific, r.received);
      avg.received_subject += r.art * WithinFlowRow::pct(r.received_subject, r.received);
    }
    if (r.sent > 0.0) {
      ws += r.art;
      avg.sent_self += r.art * WithinFlowRow::pct(r.sent_self, r.sent);
      avg.sent_specific += r.art * WithinFlowRow::pct(r.sent_specific, r.sent);
      avg.sent_subject += r.art * WithinFlowRow::pct(r.sent_subject, r.sent);
    }
    rep.rows.push_back(r);
  }
  if (wr > 0.0) {
    avg.received_self /= wr;
    avg.received_specific /= wr;
    avg.received_subject /= wr;
  }
  if (ws > 0.0) {
    avg.sent_self /= ws;
    avg.sent_specific /= ws;
    avg.sent_subject /= ws;
  }
  return rep;
}

inline CsrMatrix<double> citation_flows(const CitationMatrix& cmat) {
  CsrMatrix<double> f;
  f.set_cols(cmat.cols());
  std::vector<double> vals;
  for (std::size_t j = 0; j < cmat.rows(); ++j) {
    const auto c = cmat.row_values(j);
    vals.assign(c.begin(), c.end());
    f.append_row(cmat.row_indices(j), vals);
  }
  return f;
}

// The three flow views side by side: raw citations, prestige without the
// cosine (at its own fixed point) and prestige with the cosine.
struct FlowTables {
  FlowMatrix prestige_matrix;  // with cosine
  WithinFlowReport citation;
  WithinFlowReport without_cosine;
  WithinFlowReport with_cosine;
};

inline FlowTables flow_tables(const RankRun& with_cos, const RankRun& without_cos, const Dataset& ds, AreaLevel level) {
  FlowTables t;
  const auto pf = prestige_flows(with_cos.coefficients, with_cos.prestige.values, with_cos.params);
  const auto pf_wc = prestige_flows(without_cos.coefficients, without_cos.prestige.values, without_cos.params);
  t.prestige_matrix = flow_matrix(pf, ds.journals);
  t.citation = within_flows(citation_flows(with_cos.citations), ds.journals, ds.scheme, with_cos.art, level);
  t.without_cosine = within_flows(pf_wc, ds.journals, ds.scheme, without_cos.art, level);
  t.with_cosine = within_flows(pf, ds.journals, ds.scheme, with_cos.art, level);
  return t;
}

}  // namespace prestige
