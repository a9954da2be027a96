#ifndef SPANID_CORPUS_HPP_
#define SPANID_CORPUS_HPP_

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "spanid/span.hpp"

namespace spanid {

/// Entity as stored on disk: span plus label name. Predictions carry a score.
struct RawEntity {
  Span span;
  std::string label;
  std::optional<double> score;

  bool operator==(const RawEntity& o) const { return span == o.span && label == o.label; }
};

struct RawSentence {
  std::vector<std::string> tokens;
  std::vector<RawEntity> entities;
};

using RawCorpus = std::vector<RawSentence>;

/// Reads a JSONL corpus, one sentence object per line:
///   {"tokens": [...], "entities": [{"start": i, "end": j, "label": "X"}]}
/// with inclusive end indices. Spans out of range, unknown fields, and exact
/// duplicate (span, label) entities are rejected with the offending line
/// number. Throws DataError.
RawCorpus read_jsonl(const std::string& path);

/// Writes a corpus in the same JSONL format; scores are emitted when present.
void write_jsonl(const std::string& path, const RawCorpus& corpus);

/// Token/char/label id maps. Reserved token ids: 0 unknown, 1/2 boundary
/// sentinels. Char id 0 is unknown. Label id 0 is the None category.
struct Vocab {
  static constexpr int kUnkToken = 0;
  static constexpr int kBosToken = 1;
  static constexpr int kEosToken = 2;
  static constexpr int kUnkChar = 0;
  static constexpr int kNoneLabel = 0;

  std::vector<std::string> tokens;  // index = id; [0..2] reserved
  std::vector<std::string> chars;   // single-byte strings; [0] reserved
  std::vector<std::string> labels;  // [0] = None, 1..C sorted by name

  std::unordered_map<std::string, int> token_ids;
  std::unordered_map<char, int> char_ids;
  std::unordered_map<std::string, int> label_ids;

  int token_id(const std::string& tok) const {
    auto it = token_ids.find(tok);
    return it == token_ids.end() ? kUnkToken : it->second;
  }
  int char_id(char c) const {
    auto it = char_ids.find(c);
    return it == char_ids.end() ? kUnkChar : it->second;
  }
  /// -1 when the label name is unknown.
  int label_id(const std::string& name) const {
    auto it = label_ids.find(name);
    return it == label_ids.end() ? -1 : it->second;
  }
  int num_labels() const { return static_cast<int>(labels.size()) - 1; }

  void rebuild_maps();
};

/// Builds a vocabulary from a corpus. Tokens with frequency >= min_count get
/// ids (sorted by surface form for determinism); rarer tokens map to unknown.
/// Labels get ids 1..C in sorted-name order. Throws DataError on an empty
/// corpus.
Vocab build_vocab(const RawCorpus& corpus, int min_count);

/// Gold entity with a numeric category id (never 0 for gold).
struct Entity {
  Span span;
  int label = 0;

  bool operator==(const Entity&) const = default;
};

/// Sentence encoded against a vocabulary, ready for the model.
struct Sentence {
  std::vector<int> token_ids;
  std::vector<std::vector<int>> char_ids;
  std::vector<Entity> entities;

  int size() const { return static_cast<int>(token_ids.size()); }
};

/// Encodes one sentence. When require_known_labels is set, an entity label
/// missing from the vocabulary raises DataError naming the label; otherwise
/// such entities are dropped.
Sentence encode_sentence(const RawSentence& raw, const Vocab& vocab,
                         bool require_known_labels = true);

std::vector<Sentence> encode_corpus(const RawCorpus& corpus, const Vocab& vocab,
                                    bool require_known_labels = true);

}  // namespace spanid

#endif  // SPANID_CORPUS_HPP_
