#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "prestige/analyze.hpp"
#include "prestige/baselines.hpp"
#include "prestige/format.hpp"
#include "prestige/model.hpp"
#include "prestige/rank.hpp"

namespace prestige {

inline std::string describe(const Params& p) {
  return "d=" + format_number(p.d, 17) + " e=" + format_number(p.e, 17) + " year=" + std::to_string(p.year) +
         " window=" + std::to_string(p.window) + " cap_share=" + format_number(p.cap_share, 17) +
         " cap_per_citation=" + format_number(p.cap_per_citation, 17) +
         " use_cosine=" + (p.use_cosine ? "true" : "false") + " tol=" + format_number(p.tol, 17) +
         " max_iters=" + std::to_string(p.max_iters);
}

inline void write_header(std::ostream& out, const std::string& title, const Params& p) {
  out << "# " << title << '\n' << "# params: " << describe(p) << '\n';
}

// journal_id,psjr2,sjr2,art,citations_3y,jif3y with run metadata in '#'
// comment lines. sjr2 and jif3y are blank for journals without citable
// documents.
inline void write_scores_csv(std::ostream& out, const JournalTable& journals, const RankRun& run,
                             const BaselineTable& base, int precision = kDefaultPrecision) {
  write_header(out, "prestige-rank scores", run.params);
  out << "# iterations=" << run.prestige.iterations << " converged=" << (run.prestige.converged ? "true" : "false")
      << " residual=" << format_number(run.prestige.residual, 6)
      << " dangling_fallback=" << (run.prestige.dangling_fallback ? "true" : "false") << '\n';
  out << "# unscored=" << run.scores.unscored.size() << '\n';
  out << "journal_id,psjr2,sjr2,art,citations_3y,jif3y\n";
  for (JournalIndex i = 0; i < journals.size(); ++i) {
    out << quote_csv(journals[i].id.str()) << ',' << format_number(run.prestige[i], precision) << ','
        << format_number(run.scores.values[i], precision) << ',' << run.art.counts[i] << ',' << base.citations_3y[i]
        << ',' << format_number(base.jif3y[i], precision) << '\n';
  }
}

inline void write_validation(std::ostream& out, const ValidationReport& r, const JournalTable& journals) {
  out << "unknown_ids\t" << r.unknown_ids.size() << '\n';
  for (const auto& u : r.unknown_ids) {
    out << "  record " << u.record << '\t' << (u.is_source ? "source" : "ref") << '\t' << u.id << '\n';
  }
  out << "documents_outside_year\t" << r.documents_outside_year << '\n';
  out << "refs_outside_window\t" << r.refs_outside_window << '\n';
  out << "zero_art_journals\t" << r.zero_art_journals.size() << '\n';
  for (auto i : r.zero_art_journals) out << "  " << journals[i].id.str() << '\n';
  out << "dangling_ranked\t" << r.dangling_ranked << '\n';
  out << "fatal\t" << r.fatal.size() << '\n';
  for (const auto& f : r.fatal) out << "  " << f << '\n';
}

inline void write_correlations_tsv(std::ostream& out, const CorrelationReport& rep, int precision) {
  out << "scope\tpair\tn\tpearson\tspearman\n";
  for (const auto& c : rep.overall) {
    out << "global\t" << c.a << '/' << c.b << '\t' << c.n << '\t' << format_number(c.pearson, precision) << '\t'
        << format_number(c.spearman, precision) << '\n';
  }
  out << "\nscope\tpair\tareas\tpearson_mean\tpearson_sd\tspearman_mean\tspearman_sd\n";
  for (auto [scope, rows] : {std::pair{"subject", &rep.by_subject}, std::pair{"specific", &rep.by_specific}}) {
    for (const auto& c : *rows) {
      out << scope << '\t' << c.a << '/' << c.b << '\t' << c.areas << '\t' << format_number(c.pearson_mean, precision)
          << '\t' << format_number(c.pearson_sd, precision) << '\t' << format_number(c.spearman_mean, precision)
          << '\t' << format_number(c.spearman_sd, precision) << '\n';
    }
  }
}

inline void write_rates_tsv(std::ostream& out, const AreaRateTable& t, int precision) {
  out << "area\tname\tart_share";
  for (const auto& n : t.indicators) out << '\t' << n;
  out << '\n';
  for (const auto& r : t.rows) {
    out << r.code << '\t' << r.name << '\t' << format_number(r.art_share, precision);
    for (const auto& v : r.rates) out << '\t' << format_number(v, precision);
    out << '\n';
  }
  for (const auto& w : t.warnings) out << "# warning: " << w << '\n';
}

inline void write_deviations_tsv(std::ostream& out, const std::vector<std::pair<std::string, std::vector<Deviation>>>& rows,
                                 int precision) {
  out << "level\tindicator\tareas\tmsd_unity\n";
  for (const auto& [level, devs] : rows) {
    for (const auto& d : devs) {
      out << level << '\t' << d.indicator << '\t' << d.areas << '\t' << format_number(d.msd, precision) << '\n';
    }
  }
}

inline void write_flows_tsv(std::ostream& out, const FlowTables& t, int precision) {
  using R = WithinFlowRow;
  out << "# within-flow percentages (received)\n";
  out << "area\tname\tcitation_self\tcitation_specific\tcitation_subject\twc_self\twc_specific\twc_subject\t"
         "sjr2_self\tsjr2_specific\tsjr2_subject\n";
  for (std::size_t k = 0; k < t.with_cosine.rows.size(); ++k) {
    const auto& c = t.citation.rows[k];
    const auto& w = t.without_cosine.rows[k];
    const auto& s = t.with_cosine.rows[k];
    out << s.code << '\t' << s.name;
    for (const R* r : {&c, &w, &s}) {
      out << '\t' << format_number(R::pct(r->received_self, r->received), precision) << '\t'
          << format_number(R::pct(r->received_specific, r->received), precision) << '\t'
          << format_number(R::pct(r->received_subject, r->received), precision);
    }
    out << '\n';
  }
  out << "\n# doc-weighted averages\n";
  out << "direction\tscope\tcitation\tsjr2_without_cosine\tsjr2\n";
  auto avg_row = [&](const char* dir, const char* scope, auto field) {
    out << dir << '\t' << scope << '\t' << format_number(t.citation.doc_weighted.*field, precision) << '\t'
        << format_number(t.without_cosine.doc_weighted.*field, precision) << '\t'
        << format_number(t.with_cosine.doc_weighted.*field, precision) << '\n';
  };
  avg_row("sent", "self", &WithinFlowAverages::sent_self);
  avg_row("sent", "specific", &WithinFlowAverages::sent_specific);
  avg_row("sent", "subject", &WithinFlowAverages::sent_subject);
  avg_row("received", "self", &WithinFlowAverages::received_self);
  avg_row("received", "specific", &WithinFlowAverages::received_specific);
  avg_row("received", "subject", &WithinFlowAverages::received_subject);

  out << "\n# prestige flow matrix (rows: source Subject Area, columns: target)\n";
  out << "from";
  for (const auto& a : t.prestige_matrix.areas) out << '\t' << a;
  out << '\n';
  for (std::size_t r = 0; r < t.prestige_matrix.areas.size(); ++r) {
    out << t.prestige_matrix.areas[r];
    for (double v : t.prestige_matrix.values[r]) out << '\t' << format_number(v, precision);
    out << '\n';
  }
}

struct NamedFit {
  std::string indicator;
  LogFit fit;
  std::size_t n = 0;
};

inline void write_fit_tsv(std::ostream& out, const std::vector<NamedFit>& fits, int precision) {
  out << "indicator\tn\tslope\tintercept\tr_squared\tequation\n";
  for (const auto& f : fits) {
    out << f.indicator << '\t' << f.n << '\t' << format_number(f.fit.slope, precision) << '\t'
        << format_number(f.fit.intercept, precision) << '\t' << format_number(f.fit.r_squared, precision) << '\t'
        << format_log_fit(f.fit) << '\n';
  }
}

inline void write_series_tsv(std::ostream& out, const std::vector<double>& series, int precision) {
  out << "rank\tnormalized_value\n";
  for (std::size_t k = 0; k < series.size(); ++k) out << (k + 1) << '\t' << format_number(series[k], precision) << '\n';
}

}  // namespace prestige
