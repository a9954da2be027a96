#include "spanid/synth.hpp"

#include <algorithm>
#include <sstream>

#include "spanid/errors.hpp"
#include "spanid/rng.hpp"

namespace spanid {

namespace {

struct WordLists {
  std::vector<std::string> context;
  // indexed by category - 1
  std::vector<std::vector<std::string>> triggers, closers, units;
};

WordLists make_words(const SynthConfig& cfg) {
  WordLists w;
  for (int i = 0; i < cfg.context_words; ++i) w.context.push_back("w" + std::to_string(i));
  for (int c = 1; c <= cfg.categories; ++c) {
    std::vector<std::string> t, k, u;
    for (int j = 0; j < cfg.trigger_words; ++j) {
      std::string suffix = std::to_string(c) + "x" + std::to_string(j);
      t.push_back("t" + suffix);
      k.push_back("k" + suffix);
      u.push_back("u" + suffix);
    }
    w.triggers.push_back(std::move(t));
    w.closers.push_back(std::move(k));
    w.units.push_back(std::move(u));
  }
  return w;
}

// Weighted pick of an entity length in [min_len, cap]; -1 when none fits.
int sample_length(Rng& rng, const std::map<int, double>& weights, int cap, int min_len) {
  std::vector<int> lens;
  std::vector<double> ws;
  for (const auto& [len, w] : weights) {
    if (len >= min_len && len <= cap && w > 0.0) {
      lens.push_back(len);
      ws.push_back(w);
    }
  }
  if (lens.empty()) return -1;
  return lens[static_cast<std::size_t>(rng.weighted(ws))];
}

const std::string& pick(Rng& rng, const std::vector<std::string>& list) {
  return list[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(list.size()) - 1))];
}

// Writes one entity into the token buffer and records it; recurses for
// nested inner entities. `force_nest` carries the top-level plan decision.
void fill_entity(const SynthConfig& cfg, const WordLists& words, Rng& rng,
                 std::vector<std::string>& tokens, std::vector<RawEntity>& entities,
                 Span span, int depth, bool force_nest) {
  int cat = rng.uniform_int(1, cfg.categories);
  if (span.length() == 1) {
    tokens[span.start] = pick(rng, words.units[cat - 1]);
  } else {
    tokens[span.start] = pick(rng, words.triggers[cat - 1]);
    tokens[span.end] = pick(rng, words.closers[cat - 1]);
    for (int i = span.start + 1; i < span.end; ++i) tokens[i] = pick(rng, words.context);
  }
  entities.push_back({span, synth_label(cat), std::nullopt});

  int interior_len = span.length() - 2;
  bool want_nest = force_nest ||
                   (depth < cfg.max_depth && interior_len >= 1 && rng.bernoulli(cfg.nest_prob));
  if (!want_nest || depth >= cfg.max_depth || interior_len < 1) return;

  int inner_len = sample_length(rng, cfg.length_weights, interior_len, 1);
  if (inner_len < 0) inner_len = 1;  // always representable: unit entity
  int lo = span.start + 1;
  int hi = span.end - inner_len;  // inner end stays <= span.end - 1
  int inner_start = rng.uniform_int(lo, hi);
  fill_entity(cfg, words, rng, tokens, entities,
              {inner_start, inner_start + inner_len - 1}, depth + 1, false);
}

}  // namespace

std::string synth_label(int category) { return "TYPE" + std::to_string(category); }

void SynthConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("synth config: " + msg); };
  if (sentences < 1) fail("sentences must be >= 1");
  if (len_min < 1 || len_min > len_max) fail("invalid sentence length range");
  if (categories < 1) fail("categories must be >= 1");
  if (nest_prob < 0.0 || nest_prob > 1.0) fail("nest_prob must be in [0,1]");
  if (max_depth < 1) fail("max_depth must be >= 1");
  if (entities_min < 0 || entities_min > entities_max) fail("invalid entities range");
  if (context_words < 1 || trigger_words < 1) fail("word list sizes must be >= 1");
  if (length_weights.empty()) fail("length_weights must be nonempty");
  int min_len = -1;
  int min_nestable = -1;
  for (const auto& [len, w] : length_weights) {
    if (len < 1) fail("entity lengths must be >= 1");
    if (w < 0.0) fail("length weights must be nonnegative");
    if (w > 0.0) {
      if (min_len < 0) min_len = len;
      if (len >= 3 && min_nestable < 0) min_nestable = len;
    }
  }
  if (min_len < 0) fail("length_weights must have a positive entry");
  if (min_len > len_max) fail("entity longer than any sentence");
  if (nest_prob >= 1.0 && max_depth >= 2 && entities_min >= 1 &&
      (min_nestable < 0 || min_nestable > len_min))
    fail("nest_prob = 1 requires a nestable entity length (>= 3) fitting every sentence");
}

RawCorpus generate_synthetic(const SynthConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  WordLists words = make_words(cfg);
  RawCorpus corpus;
  corpus.reserve(static_cast<std::size_t>(cfg.sentences));

  for (int s = 0; s < cfg.sentences; ++s) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(s)));
    int n = rng.uniform_int(cfg.len_min, cfg.len_max);
    int want = rng.uniform_int(cfg.entities_min, cfg.entities_max);

    struct Plan {
      int len;
      bool nest;
    };
    std::vector<Plan> plans;
    int used = 0;
    for (int e = 0; e < want; ++e) {
      int room = n - used - (plans.empty() ? 0 : 1);
      bool nest = cfg.max_depth >= 2 && rng.bernoulli(cfg.nest_prob);
      int len = nest ? sample_length(rng, cfg.length_weights, room, 3) : -1;
      if (len < 0) {
        if (nest && cfg.nest_prob >= 1.0) break;  // never emit a non-nested top entity
        nest = false;
        len = sample_length(rng, cfg.length_weights, room, 1);
      }
      if (len < 0) break;
      plans.push_back({len, nest});
      used += len + (plans.size() > 1 ? 1 : 0);
    }

    RawSentence sent;
    sent.tokens.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) sent.tokens[static_cast<std::size_t>(i)] = pick(rng, words.context);

    int k = static_cast<int>(plans.size());
    int free = n - used;
    int cursor = 0;
    for (int e = 0; e < k; ++e) {
      int lead = rng.uniform_int(0, free);
      free -= lead;
      cursor += lead + (e > 0 ? 1 : 0);
      Span span{cursor, cursor + plans[static_cast<std::size_t>(e)].len - 1};
      fill_entity(cfg, words, rng, sent.tokens, sent.entities, span, 1,
                  plans[static_cast<std::size_t>(e)].nest);
      cursor = span.end + 1;
    }
    corpus.push_back(std::move(sent));
  }
  return corpus;
}

}  // namespace spanid
