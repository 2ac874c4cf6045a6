#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prestige/model.hpp"

namespace prestige {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Counter-based SplitMix64: draw k of stream s is mix(key_s + (k+1)*gamma)
// with key_s = mix(seed ^ mix(s)). Integer-only, so every platform yields
// the same sequence.
class CounterRng {
 public:
  static constexpr const char* kAlgorithm = "splitmix64-counter";
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream + kGamma))) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() { return mix(key_ + (++counter_) * kGamma); }

  // Uniform in [0, bound); Lemire's multiply-and-reject.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Threshold for an event of probability p, compared against next().
  static std::uint64_t threshold(double p) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return UINT64_MAX;
    return static_cast<std::uint64_t>(std::ldexp(p, 64));
  }
  bool chance(std::uint64_t threshold) { return threshold == UINT64_MAX || next() < threshold; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct BlockSpec {
  std::string area_code;     // specific area given to every journal in the block
  std::string subject_code;  // its Subject Area
  std::string subject_name;
  int journal_count = 1;
  std::int64_t art_min = 1;  // citable documents per journal per year
  std::int64_t art_max = 1;
  double refs_per_doc_mean = 10.0;
  double within_block_prob = 0.9;
};

struct SynthConfig {
  std::vector<BlockSpec> blocks;
  double cross_block_mixing = 0.0;  // share of refs drawn from the whole network
  double dangling_fraction = 0.0;   // journals publishing nothing in the computation year
  double unranked_fraction = 0.0;
  double out_of_window_fraction = 0.0;
  bool allow_self_citation = true;
  int year = 2008;
  int window = 3;
  std::uint64_t seed = 42;

  void validate() const {
    auto prob = [](double p, const char* what) {
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string(what) + " must lie in [0, 1]");
    };
    if (blocks.empty()) throw ConfigError("synth: at least one block required");
    prob(cross_block_mixing, "cross_block_mixing");
    prob(dangling_fraction, "dangling_fraction");
    prob(unranked_fraction, "unranked_fraction");
    prob(out_of_window_fraction, "out_of_window_fraction");
    if (window < 1) throw ConfigError("window must be >= 1");
    for (const auto& b : blocks) {
      if (b.area_code.empty() || b.subject_code.empty()) throw ConfigError("block area codes must be non-empty");
      if (b.journal_count < 1) throw ConfigError("block journal_count must be >= 1");
      if (b.art_min < 0 || b.art_max < b.art_min) throw ConfigError("block art range invalid");
      if (b.art_max < 1) throw ConfigError("block art_max must be >= 1");
      if (!(b.refs_per_doc_mean > 0.0)) throw ConfigError("refs_per_doc_mean must be > 0");
      prob(b.within_block_prob, "within_block_prob");
      if (b.journal_count == 1 && b.within_block_prob > 0.0 && !allow_self_citation) {
        throw ConfigError("block " + b.area_code + ": a single journal cannot cite within its block without self-citation");
      }
    }
    if (blocks.size() == 1 && blocks[0].within_block_prob < 1.0 && cross_block_mixing < 1.0) {
      throw ConfigError("single block: cross-block refs are impossible (set within_block_prob to 1)");
    }
  }
};

namespace detail {

// Cumulative integer weights for weighted choice by binary search.
struct WeightedPicker {
  std::vector<JournalIndex> items;
  std::vector<std::uint64_t> cumulative;

  void add(JournalIndex j, std::uint64_t w) {
    items.push_back(j);
    cumulative.push_back((cumulative.empty() ? 0 : cumulative.back()) + w);
  }
  JournalIndex pick(CounterRng& rng) const {
    const auto u = rng.below(cumulative.back());
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return items[static_cast<std::size_t>(it - cumulative.begin())];
  }
};

}  // namespace detail

// Deterministic in cfg. Each non-dangling journal publishes as many year-Y
// documents as its year-Y citable count; each document draws
// U{1..round(2m-1)} refs. A ref goes to a journal anywhere in the network
// with probability cross_block_mixing, otherwise to the citing block with
// probability within_block_prob and to another block the rest of the time.
// Targets are chosen in proportion to citable documents times a quality
// factor in {1,2,4,8,16}.
inline Dataset generate(const SynthConfig& cfg) {
  cfg.validate();
  Dataset ds;
  CounterRng structure(cfg.seed, 1), refs_rng(cfg.seed, 2);

  std::vector<std::size_t> block_of;
  std::vector<std::uint64_t> weight;
  int serial = 0;
  const std::size_t total_journals = [&] {
    std::size_t n = 0;
    for (const auto& b : cfg.blocks) n += static_cast<std::size_t>(b.journal_count);
    return n;
  }();
  const int width = std::max<int>(6, static_cast<int>(std::to_string(total_journals).size()));

  for (std::size_t b = 0; b < cfg.blocks.size(); ++b) {
    const auto& spec = cfg.blocks[b];
    ds.scheme.add(spec.area_code, spec.subject_code, spec.subject_name);
    for (int k = 0; k < spec.journal_count; ++k) {
      Journal j;
      std::string num = std::to_string(++serial);
      j.id = JournalId("J" + std::string(static_cast<std::size_t>(width) - num.size(), '0') + num);
      j.title = "Synthetic " + spec.area_code + " journal " + std::to_string(k + 1);
      j.specific_areas = {spec.area_code};
      std::int64_t window_art = 0;
      for (int y = cfg.year - cfg.window - 1; y <= cfg.year; ++y) {
        const auto c = structure.between(spec.art_min, spec.art_max);
        j.citable_docs_by_year[y] = c;
        if (y >= cfg.year - cfg.window && y < cfg.year) window_art += c;
      }
      const std::uint64_t quality = std::uint64_t{1} << structure.below(5);
      weight.push_back(static_cast<std::uint64_t>(std::max<std::int64_t>(window_art, 1)) * quality);
      block_of.push_back(b);
      ds.journals.add(std::move(j));
    }
  }
  ds.journals.resolve_areas(ds.scheme);

  const std::size_t n = ds.journals.size();
  std::vector<JournalIndex> order(n);
  for (JournalIndex i = 0; i < n; ++i) order[i] = i;
  for (std::size_t k = n; k > 1; --k) std::swap(order[k - 1], order[structure.below(k)]);
  const auto n_dangling = static_cast<std::size_t>(std::llround(cfg.dangling_fraction * static_cast<double>(n)));
  const auto n_unranked = std::min(
      n - n_dangling, static_cast<std::size_t>(std::llround(cfg.unranked_fraction * static_cast<double>(n))));
  std::vector<char> dangling(n, 0);
  for (std::size_t k = 0; k < n_dangling; ++k) dangling[order[k]] = 1;
  for (std::size_t k = n_dangling; k < n_dangling + n_unranked; ++k) ds.journals[order[k]].ranked = false;

  detail::WeightedPicker global;
  std::vector<detail::WeightedPicker> per_block(cfg.blocks.size());
  for (JournalIndex i = 0; i < n; ++i) {
    global.add(i, weight[i]);
    per_block[block_of[i]].add(i, weight[i]);
  }

  const auto t_mix = CounterRng::threshold(cfg.cross_block_mixing);
  const auto t_old = CounterRng::threshold(cfg.out_of_window_fraction);
  std::vector<std::uint64_t> t_within;
  for (const auto& b : cfg.blocks) t_within.push_back(CounterRng::threshold(b.within_block_prob));

  std::map<std::pair<JournalIndex, int>, std::uint32_t> merged;
  for (JournalIndex src = 0; src < n; ++src) {
    if (dangling[src]) continue;
    const auto b = block_of[src];
    const auto& spec = cfg.blocks[b];
    const auto max_refs = std::max<std::int64_t>(1, std::llround(2.0 * spec.refs_per_doc_mean - 1.0));
    const auto docs = ds.journals[src].citable_docs_by_year.at(cfg.year);
    for (std::int64_t d = 0; d < docs; ++d) {
      merged.clear();
      const auto k_refs = refs_rng.between(1, max_refs);
      for (std::int64_t r = 0; r < k_refs; ++r) {
        JournalIndex target = src;
        for (int attempt = 0; attempt < 64; ++attempt) {
          if (refs_rng.chance(t_mix)) {
            target = global.pick(refs_rng);
          } else if (refs_rng.chance(t_within[b])) {
            target = per_block[b].pick(refs_rng);
          } else {
            do {
              target = global.pick(refs_rng);
            } while (block_of[target] == b);
          }
          if (cfg.allow_self_citation || target != src) break;
        }
        if (!cfg.allow_self_citation && target == src) continue;
        int year;
        if (refs_rng.chance(t_old)) {
          year = cfg.year - cfg.window - 1 - static_cast<int>(refs_rng.below(3));
        } else {
          year = cfg.year - cfg.window + static_cast<int>(refs_rng.below(static_cast<std::uint64_t>(cfg.window)));
        }
        ++merged[{target, year}];
      }
      CitingDocument doc{src, cfg.year, {}};
      doc.refs.reserve(merged.size());
      for (const auto& [key, count] : merged) doc.refs.push_back({key.first, key.second, count});
      ds.documents.push_back(std::move(doc));
    }
  }
  return ds;
}

inline SynthConfig synth_preset(const std::string& name, std::uint64_t seed) {
  SynthConfig c;
  c.seed = seed;
  c.year = 2008;
  c.window = 3;
  c.cross_block_mixing = 0.05;
  c.dangling_fraction = 0.05;
  c.unranked_fraction = 0.05;
  c.out_of_window_fraction = 0.1;
  if (name == "two-field" || name == "uniform") {
    const double dense = name == "two-field" ? 30.0 : 20.0;
    const double sparse = name == "two-field" ? 10.0 : 20.0;
    c.blocks = {
        {"1312", "1300", "Biochemistry, Genetics and Molecular Biology", 250, 4, 16, dense, 0.9},
        {"2002", "2000", "Economics, Econometrics and Finance", 250, 4, 16, sparse, 0.9},
    };
  } else if (name == "scale") {
    // 50k journals, ~5.2M reference events
    for (int b = 0; b < 50; ++b) {
      const std::string subject = std::to_string(1100 + 100 * (b % 25));
      const std::string code = std::to_string(1100 + 100 * (b % 25) + 1 + b / 25);
      c.blocks.push_back({code, subject, "Area " + subject, 1000, 3, 7, 22.0, 0.8});
    }
  } else {
    throw ConfigError("unknown synth preset: " + name);
  }
  return c;
}

inline SynthConfig synth_config_from_json(const nlohmann::json& j) {
  SynthConfig c;
  try {
    c.cross_block_mixing = j.value("cross_block_mixing", c.cross_block_mixing);
    c.dangling_fraction = j.value("dangling_fraction", c.dangling_fraction);
    c.unranked_fraction = j.value("unranked_fraction", c.unranked_fraction);
    c.out_of_window_fraction = j.value("out_of_window_fraction", c.out_of_window_fraction);
    c.allow_self_citation = j.value("allow_self_citation", c.allow_self_citation);
    c.year = j.value("year", c.year);
    c.window = j.value("window", c.window);
    c.seed = j.value("seed", c.seed);
    for (const auto& b : j.at("blocks")) {
      BlockSpec s;
      s.area_code = b.at("area_code").get<std::string>();
      s.subject_code = b.value("subject_code", s.area_code.substr(0, std::min<std::size_t>(2, s.area_code.size())) + "00");
      s.subject_name = b.value("subject_name", s.subject_code);
      s.journal_count = b.at("journal_count").get<int>();
      const auto range = b.at("art_per_journal_range");
      s.art_min = range.at(0).get<std::int64_t>();
      s.art_max = range.at(1).get<std::int64_t>();
      s.refs_per_doc_mean = b.at("refs_per_doc_mean").get<double>();
      s.within_block_prob = b.at("within_block_prob").get<double>();
      c.blocks.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("synth config: ") + e.what());
  }
  c.validate();
  return c;
}

inline nlohmann::json synth_config_to_json(const SynthConfig& c) {
  nlohmann::json j;
  j["rng"] = CounterRng::kAlgorithm;
  j["seed"] = c.seed;
  j["year"] = c.year;
  j["window"] = c.window;
  j["cross_block_mixing"] = c.cross_block_mixing;
  j["dangling_fraction"] = c.dangling_fraction;
  j["unranked_fraction"] = c.unranked_fraction;
  j["out_of_window_fraction"] = c.out_of_window_fraction;
  j["allow_self_citation"] = c.allow_self_citation;
  j["blocks"] = nlohmann::json::array();
  for (const auto& b : c.blocks) {
    j["blocks"].push_back({{"area_code", b.area_code},
                           {"subject_code", b.subject_code},
                           {"subject_name", b.subject_name},
                           {"journal_count", b.journal_count},
                           {"art_per_journal_range", {b.art_min, b.art_max}},
                           {"refs_per_doc_mean", b.refs_per_doc_mean},
                           {"within_block_prob", b.within_block_prob}});
  }
  return j;
}

}  // namespace prestige
