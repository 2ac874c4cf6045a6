// prestige-rank: command-line front end for the prestige library.
//
// Exit status: 0 success, 1 usage error, 2 data error, 3 non-convergence.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "prestige/prestige.hpp"

namespace fs = std::filesystem;
using namespace prestige;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNonConvergence = 3;

struct InputOptions {
  std::string journals, citations, scheme;
};

struct CommonOptions {
  Params params;
  bool no_cosine = false;
  int precision = kDefaultPrecision;
  unsigned threads = 0;  // 0: PRESTIGE_RANK_THREADS or hardware count

  Params resolved() const {
    Params p = params;
    p.use_cosine = !no_cosine;
    return p;
  }
  unsigned worker_count() const { return threads ? threads : thread_count_from_env(); }
};

void add_inputs(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("--journals", in.journals, "Journals CSV")->required()->check(CLI::ExistingFile);
  cmd->add_option("--citations", in.citations, "Citations JSONL")->required()->check(CLI::ExistingFile);
  cmd->add_option("--scheme", in.scheme, "Subject scheme CSV")->required()->check(CLI::ExistingFile);
}

void add_params(CLI::App* cmd, CommonOptions& c) {
  auto& p = c.params;
  cmd->add_option("--year", p.year, "Computation year")->required();
  cmd->add_option("--window", p.window, "Citation window in years")->capture_default_str();
  cmd->add_option("--d", p.d, "Citation prestige weight")->capture_default_str();
  cmd->add_option("--e", p.e, "Citable-document prestige weight")->capture_default_str();
  cmd->add_option("--cap-share", p.cap_share, "Max share of a journal's prestige per target")->capture_default_str();
  cmd->add_option("--cap-per-citation", p.cap_per_citation, "Max share per citation")->capture_default_str();
  cmd->add_flag("--no-cosine", c.no_cosine, "Weight citations without cocitation cosines");
  cmd->add_option("--tol", p.tol, "L1 convergence tolerance")->capture_default_str();
  cmd->add_option("--max-iters", p.max_iters, "Iteration limit")->capture_default_str();
  cmd->add_option("--precision", c.precision, "Significant digits in output")->capture_default_str();
  cmd->add_option("--threads", c.threads, "Worker threads (default: PRESTIGE_RANK_THREADS or all cores)");
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned k = 0; k < len; ++k) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[k]);
  return hex.str();
}

nlohmann::json params_json(const Params& p) {
  return {{"d", p.d},
          {"e", p.e},
          {"year", p.year},
          {"window", p.window},
          {"cap_share", p.cap_share},
          {"cap_per_citation", p.cap_per_citation},
          {"use_cosine", p.use_cosine},
          {"tol", p.tol},
          {"max_iters", p.max_iters}};
}

nlohmann::json manifest(const InputOptions& in, const RankRun& run, double seconds, bool deterministic,
                        unsigned threads) {
  nlohmann::json m;
  m["tool"] = "prestige-rank";
  m["version"] = kVersion;
  m["params"] = params_json(run.params);
  m["inputs"] = nlohmann::json::array();
  for (const auto& [role, path] : {std::pair{"journals", in.journals}, std::pair{"citations", in.citations},
                                   std::pair{"scheme", in.scheme}}) {
    m["inputs"].push_back({{"role", role},
                           {"path", path},
                           {"bytes", fs::file_size(path)},
                           {"sha256", sha256_file(path)}});
  }
  m["converged"] = run.prestige.converged;
  m["residual"] = run.prestige.residual;
  m["iterations"] = run.prestige.iterations;
  m["dangling_fallback"] = run.prestige.dangling_fallback;
  if (!deterministic) {
    m["seconds"] = seconds;
    m["threads"] = threads;
    m["timestamp"] = static_cast<std::int64_t>(std::time(nullptr));
  }
  return m;
}

// journal_id,<name>[,<name>...]; blank cells are missing values.
std::map<std::string, std::vector<std::optional<double>>> read_extra_scores(const fs::path& path,
                                                                            const JournalTable& journals) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("extra scores: empty file");
  const auto header = split_csv(std::string(trim(line)));
  if (header.size() < 2 || trim(header[0]) != "journal_id") throw DataError("extra scores: header must start with journal_id", 1);
  std::map<std::string, std::vector<std::optional<double>>> out;
  for (std::size_t c = 1; c < header.size(); ++c) out[std::string(trim(header[c]))].resize(journals.size());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split_csv(std::string(trim(line)));
    if (f.size() != header.size()) throw DataError("extra scores: wrong field count", lineno);
    auto idx = journals.find(trim(f[0]));
    if (!idx) continue;
    for (std::size_t c = 1; c < f.size(); ++c) {
      if (trim(f[c]).empty()) continue;
      auto v = parse_double(f[c]);
      if (!v) throw DataError("extra scores: bad number '" + f[c] + "'", lineno);
      out[std::string(trim(header[c]))][*idx] = *v;
    }
  }
  return out;
}

// Per-area rates given directly: area<TAB>ind1<TAB>ind2... The General row
// (code 1000 or name "General") is left out of the deviation.
std::vector<Deviation> deviations_from_rates_file(const fs::path& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("rates file: empty");
  const auto header = split(trim(line), '\t');
  if (header.size() < 2) throw DataError("rates file: need an area column and at least one indicator", 1);
  std::vector<std::vector<double>> cols(header.size() - 1);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto f = split(trim(line), '\t');
    if (f.size() != header.size()) throw DataError("rates file: wrong field count", lineno);
    const auto area = trim(f[0]);
    if (area == SubjectScheme::kGeneral || area == "General") continue;
    for (std::size_t c = 1; c < f.size(); ++c) {
      auto v = parse_double(f[c]);
      if (!v) throw DataError("rates file: bad number '" + f[c] + "'", lineno);
      cols[c - 1].push_back(*v);
    }
  }
  std::vector<Deviation> out;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].empty()) continue;
    out.push_back({std::string(trim(header[c + 1])), cols[c].size(), msd_unity(cols[c])});
  }
  return out;
}

int cmd_validate(const InputOptions& in, const CommonOptions& c) {
  const auto p = c.resolved();
  p.validate();
  const auto ds = load_dataset(in.journals, in.citations, in.scheme);
  const auto report = validate_dataset(ds, p);
  write_validation(std::cout, report, ds.journals);
  return report.ok() ? 0 : kExitData;
}

int cmd_compute(const InputOptions& in, const CommonOptions& c, const std::string& out_path,
                const std::string& manifest_path, bool deterministic) {
  const auto p = c.resolved();
  p.validate();
  const auto threads = c.worker_count();
  const auto start = std::chrono::steady_clock::now();
  const auto ds = load_dataset(in.journals, in.citations, in.scheme);
  RankRun run;
  int status = 0;
  try {
    run_sjr2(ds, p, run, {threads, {}});
  } catch (const NonConvergenceError& e) {
    std::cerr << "prestige-rank: " << e.what() << '\n';
    status = kExitNonConvergence;
  }
  const auto base = compute_jif3y(ds.documents, run.art, p);
  {
    auto out = open_output(out_path);
    write_scores_csv(out, ds.journals, run, base, c.precision);
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto m = manifest(in, run, seconds, deterministic, threads);
  if (!manifest_path.empty()) {
    auto out = open_output(manifest_path);
    out << m.dump(2) << '\n';
  }
  return status;
}

int cmd_analyze(const InputOptions& in, const CommonOptions& c, const fs::path& out_dir, bool exclude_general,
                const std::string& extra_path) {
  const auto p = c.resolved();
  p.validate();
  const auto threads = c.worker_count();
  const auto ds = load_dataset(in.journals, in.citations, in.scheme);
  Params with = p;
  with.use_cosine = true;
  RankRun run;
  run_sjr2(ds, with, run, {threads, {}});
  const auto without = run_without_cosine(run, {threads, {}});
  const auto base = compute_jif3y(ds.documents, run.art, p);

  std::map<std::string, std::vector<std::optional<double>>> extra;
  if (!extra_path.empty()) extra = read_extra_scores(extra_path, ds.journals);

  std::vector<ScoreColumn> columns{{"SJR2", run.scores.values}, {"JIF(3y)", base.jif3y}};
  for (const auto& [name, v] : extra) columns.emplace_back(name, v);
  const int prec = c.precision;

  fs::create_directories(out_dir);
  {
    auto out = open_output(out_dir / "correlations.tsv");
    write_header(out, "correlations", with);
    write_correlations_tsv(out, correlation_report(ds.journals, ds.scheme, columns, exclude_general), prec);
  }
  const auto indicators = standard_indicators(run, base, extra);
  std::vector<std::pair<std::string, std::vector<Deviation>>> devs;
  for (auto level : {AreaLevel::subject, AreaLevel::specific}) {
    auto rates = area_rates(ds.journals, ds.scheme, run.art, indicators, level);
    devs.emplace_back(to_string(level), deviations(rates, true, ds.scheme));
    if (exclude_general) {
      std::erase_if(rates.rows, [&](const AreaRateRow& r) {
        return SubjectScheme::is_general(parent_subject(ds.scheme, r.code, level));
      });
    }
    auto out = open_output(out_dir / (std::string("rates_") + to_string(level) + ".tsv"));
    write_header(out, std::string("area rates by ") + to_string(level) + " area", with);
    write_rates_tsv(out, rates, prec);

    auto fout = open_output(out_dir / (std::string("flows_") + to_string(level) + ".tsv"));
    write_header(fout, std::string("prestige flows by ") + to_string(level) + " area", with);
    write_flows_tsv(fout, flow_tables(run, without, ds, level), prec);
  }
  {
    auto out = open_output(out_dir / "deviations.tsv");
    write_header(out, "mean squared deviation from unity (General excluded)", with);
    write_deviations_tsv(out, devs, prec);
  }
  std::vector<NamedFit> fits;
  for (const auto& [name, col] : columns) {
    std::vector<double> v;
    for (const auto& x : col) {
      if (x) v.push_back(*x);
    }
    if (v.size() < 2) continue;
    const auto series = normalized_rank_series(v);
    fits.push_back({name, log_fit(series), series.size()});
    std::string file = "series_" + name + ".tsv";
    std::erase_if(file, [](char ch) { return ch == '(' || ch == ')'; });
    auto out = open_output(out_dir / file);
    write_series_tsv(out, series, prec);
  }
  {
    auto out = open_output(out_dir / "fit.tsv");
    write_header(out, "logarithmic fit of normalized value vs rank", with);
    write_fit_tsv(out, fits, prec);
  }
  return 0;
}

int cmd_analyze_rates(const std::string& rates_path, const fs::path& out_dir, int precision) {
  const auto devs = deviations_from_rates_file(rates_path);
  fs::create_directories(out_dir);
  auto out = open_output(out_dir / "deviations.tsv");
  out << "# mean squared deviation from unity (General excluded)\n";
  write_deviations_tsv(out, {{"given", devs}}, precision);
  write_deviations_tsv(std::cout, {{"given", devs}}, precision);
  return 0;
}

int cmd_synth(const std::string& preset, const std::string& config, std::optional<std::uint64_t> seed,
              const fs::path& out_dir) {
  SynthConfig cfg;
  if (!config.empty()) {
    auto in = open_input(config);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("synth config: ") + e.what());
    }
    cfg = synth_config_from_json(j);
  } else {
    cfg = synth_preset(preset, 42);
  }
  if (seed) cfg.seed = *seed;
  const auto ds = generate(cfg);
  save_dataset(ds, out_dir);
  auto out = open_output(out_dir / "synth.json");
  out << synth_config_to_json(cfg).dump(2) << '\n';
  return 0;
}

int cmd_dump_cocit(const InputOptions& in, const CommonOptions& c, const fs::path& out_dir) {
  auto p = c.resolved();
  p.validate();
  const auto threads = c.worker_count();
  const auto ds = load_dataset(in.journals, in.citations, in.scheme);
  const auto cmat = build_citation_matrix(ds.documents, ds.journals, p);
  const auto cocit = build_cocitation(ds.documents, ds.journals.size(), p, threads);
  const auto cos = cosines_for_edges(cocit, cmat, threads);
  fs::create_directories(out_dir);
  {
    auto out = open_output(out_dir / "cocitation.tsv");
    write_cocitation_tsv(out, cocit, ds.journals);
  }
  {
    auto out = open_output(out_dir / "cosine.tsv");
    write_cosine_tsv(out, cos, ds.journals, c.precision);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Journal prestige indicators over citation networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  InputOptions in;
  CommonOptions common;

  auto* validate = app.add_subcommand("validate", "Check input files and report problems");
  add_inputs(validate, in);
  validate->add_option("--year", common.params.year, "Computation year")->required();
  validate->add_option("--window", common.params.window, "Citation window in years")->capture_default_str();

  std::string out_path, manifest_path;
  bool deterministic = false;
  auto* compute = app.add_subcommand("compute", "Compute SJR2, PSJR2 and JIF(3y) scores");
  add_inputs(compute, in);
  add_params(compute, common);
  compute->add_option("--out", out_path, "Scores CSV")->required();
  compute->add_option("--manifest", manifest_path, "Run manifest JSON");
  compute->add_flag("--deterministic", deterministic, "Omit timestamp, timing and thread count from the manifest");

  std::string out_dir, extra_path, rates_path;
  bool exclude_general = false;
  InputOptions ain;
  auto* analyze = app.add_subcommand("analyze", "Correlations, area rates, deviations, flows and rank fits");
  analyze->add_option("--journals", ain.journals, "Journals CSV")->check(CLI::ExistingFile);
  analyze->add_option("--citations", ain.citations, "Citations JSONL")->check(CLI::ExistingFile);
  analyze->add_option("--scheme", ain.scheme, "Subject scheme CSV")->check(CLI::ExistingFile);
  auto* year_opt = analyze->add_option("--year", common.params.year, "Computation year");
  analyze->add_option("--window", common.params.window, "Citation window in years")->capture_default_str();
  analyze->add_option("--d", common.params.d)->capture_default_str();
  analyze->add_option("--e", common.params.e)->capture_default_str();
  analyze->add_option("--cap-share", common.params.cap_share)->capture_default_str();
  analyze->add_option("--cap-per-citation", common.params.cap_per_citation)->capture_default_str();
  analyze->add_option("--tol", common.params.tol)->capture_default_str();
  analyze->add_option("--max-iters", common.params.max_iters)->capture_default_str();
  analyze->add_option("--precision", common.precision)->capture_default_str();
  analyze->add_option("--threads", common.threads);
  analyze->add_option("--out-dir", out_dir, "Directory for the TSV outputs")->required();
  analyze->add_flag("--exclude-general", exclude_general, "Leave the General area out of per-area tables");
  analyze->add_option("--extra-scores", extra_path, "CSV journal_id,<indicator>... of external scores (e.g. SNIP)")
      ->check(CLI::ExistingFile);
  analyze->add_option("--rates", rates_path, "TSV of published per-area rates; only deviations are computed")
      ->check(CLI::ExistingFile);

  std::string preset = "two-field", config;
  std::optional<std::uint64_t> seed;
  std::string synth_dir;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("--preset", preset, "two-field | uniform | scale")->capture_default_str();
  synth->add_option("--config", config, "JSON generator config")->check(CLI::ExistingFile);
  synth->add_option("--seed", seed, "RNG seed");
  synth->add_option("--out-dir", synth_dir, "Output directory")->required();

  std::string dump_dir;
  auto* dump = app.add_subcommand("dump-cocit", "Write cocitation counts and edge cosines as TSV");
  add_inputs(dump, in);
  dump->add_option("--year", common.params.year, "Computation year")->required();
  dump->add_option("--window", common.params.window)->capture_default_str();
  dump->add_option("--precision", common.precision)->capture_default_str();
  dump->add_option("--threads", common.threads);
  dump->add_option("--out-dir", dump_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(in, common);
    if (*compute) return cmd_compute(in, common, out_path, manifest_path, deterministic);
    if (*analyze) {
      if (!rates_path.empty()) return cmd_analyze_rates(rates_path, out_dir, common.precision);
      if (ain.journals.empty() || ain.citations.empty() || ain.scheme.empty() || !*year_opt) {
        std::cerr << "analyze: --journals, --citations, --scheme and --year are required unless --rates is given\n";
        return kExitUsage;
      }
      return cmd_analyze(ain, common, out_dir, exclude_general, extra_path);
    }
    if (*synth) return cmd_synth(preset, config, seed, synth_dir);
    if (*dump) return cmd_dump_cocit(in, common, dump_dir);
  } catch (const NonConvergenceError& e) {
    std::cerr << "prestige-rank: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "prestige-rank: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "prestige-rank: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
