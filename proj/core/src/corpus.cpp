#include "spanid/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "spanid/errors.hpp"

#include <nlohmann/json.hpp>

namespace spanid {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail_line(std::size_t line_no, const std::string& reason) {
  std::ostringstream os;
  os << "parse error, line " << line_no << ": " << reason;
  throw DataError(os.str());
}

RawEntity parse_entity(const json& j, std::size_t line_no, int sentence_len) {
  if (!j.is_object()) fail_line(line_no, "entity is not an object");
  RawEntity e;
  bool have_start = false, have_end = false, have_label = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "start") {
      if (!value.is_number_integer()) fail_line(line_no, "entity start is not an integer");
      e.span.start = value.get<int>();
      have_start = true;
    } else if (key == "end") {
      if (!value.is_number_integer()) fail_line(line_no, "entity end is not an integer");
      e.span.end = value.get<int>();
      have_end = true;
    } else if (key == "label") {
      if (!value.is_string()) fail_line(line_no, "entity label is not a string");
      e.label = value.get<std::string>();
      have_label = true;
    } else if (key == "score") {
      if (!value.is_number()) fail_line(line_no, "entity score is not a number");
      e.score = value.get<double>();
    } else {
      fail_line(line_no, "unknown entity field \"" + key + "\"");
    }
  }
  if (!have_start || !have_end || !have_label)
    fail_line(line_no, "entity missing start/end/label");
  if (e.label.empty()) fail_line(line_no, "entity label is empty");
  if (e.span.start < 0 || e.span.start > e.span.end || e.span.end >= sentence_len)
    fail_line(line_no, "span out of range");
  return e;
}

}  // namespace

RawCorpus read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file: " + path);

  RawCorpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) fail_line(line_no, "malformed JSON");
    if (!j.is_object()) fail_line(line_no, "line is not a JSON object");

    RawSentence sent;
    bool have_tokens = false;
    const json* entities = nullptr;
    for (const auto& [key, value] : j.items()) {
      if (key == "tokens") {
        if (!value.is_array()) fail_line(line_no, "tokens is not an array");
        for (const auto& t : value) {
          if (!t.is_string()) fail_line(line_no, "token is not a string");
          sent.tokens.push_back(t.get<std::string>());
        }
        have_tokens = true;
      } else if (key == "entities") {
        if (!value.is_array()) fail_line(line_no, "entities is not an array");
        entities = &value;
      } else {
        fail_line(line_no, "unknown field \"" + key + "\"");
      }
    }
    if (!have_tokens) fail_line(line_no, "missing tokens field");

    if (entities) {
      int n = static_cast<int>(sent.tokens.size());
      for (const auto& je : *entities) {
        RawEntity e = parse_entity(je, line_no, n);
        for (const auto& prev : sent.entities)
          if (prev == e) fail_line(line_no, "duplicate entity (same span and label)");
        sent.entities.push_back(std::move(e));
      }
    }
    corpus.push_back(std::move(sent));
  }
  return corpus;
}

void write_jsonl(const std::string& path, const RawCorpus& corpus) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open output file: " + path);
  for (const auto& sent : corpus) {
    json j;
    j["tokens"] = sent.tokens;
    json ents = json::array();
    for (const auto& e : sent.entities) {
      json je;
      je["start"] = e.span.start;
      je["end"] = e.span.end;
      je["label"] = e.label;
      if (e.score) je["score"] = *e.score;
      ents.push_back(std::move(je));
    }
    j["entities"] = std::move(ents);
    out << j.dump() << "\n";
  }
  if (!out) throw DataError("write failed: " + path);
}

void Vocab::rebuild_maps() {
  token_ids.clear();
  char_ids.clear();
  label_ids.clear();
  for (std::size_t i = 0; i < tokens.size(); ++i) token_ids[tokens[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < chars.size(); ++i)
    if (!chars[i].empty()) char_ids[chars[i][0]] = static_cast<int>(i);
  for (std::size_t i = 0; i < labels.size(); ++i) label_ids[labels[i]] = static_cast<int>(i);
}

Vocab build_vocab(const RawCorpus& corpus, int min_count) {
  if (corpus.empty()) throw DataError("cannot build vocabulary from an empty corpus");

  std::map<std::string, int> freq;
  std::set<char> char_set;
  std::set<std::string> label_set;
  for (const auto& sent : corpus) {
    for (const auto& tok : sent.tokens) {
      ++freq[tok];
      for (char c : tok) char_set.insert(c);
    }
    for (const auto& e : sent.entities) label_set.insert(e.label);
  }

  Vocab v;
  v.tokens = {"<unk>", "<bos>", "<eos>"};
  for (const auto& [tok, count] : freq)
    if (count >= min_count) v.tokens.push_back(tok);

  v.chars = {"<unk>"};
  for (char c : char_set) v.chars.push_back(std::string(1, c));

  v.labels = {"<none>"};
  for (const auto& name : label_set) v.labels.push_back(name);

  v.rebuild_maps();
  return v;
}

Sentence encode_sentence(const RawSentence& raw, const Vocab& vocab,
                         bool require_known_labels) {
  Sentence s;
  s.token_ids.reserve(raw.tokens.size());
  s.char_ids.reserve(raw.tokens.size());
  for (const auto& tok : raw.tokens) {
    s.token_ids.push_back(vocab.token_id(tok));
    std::vector<int> cs;
    cs.reserve(tok.size());
    for (char c : tok) cs.push_back(vocab.char_id(c));
    s.char_ids.push_back(std::move(cs));
  }
  for (const auto& e : raw.entities) {
    int id = vocab.label_id(e.label);
    if (id < 0) {
      if (require_known_labels)
        throw DataError("unknown entity label \"" + e.label + "\" not in model vocabulary");
      continue;
    }
    s.entities.push_back({e.span, id});
  }
  return s;
}

std::vector<Sentence> encode_corpus(const RawCorpus& corpus, const Vocab& vocab,
                                    bool require_known_labels) {
  std::vector<Sentence> out;
  out.reserve(corpus.size());
  for (const auto& raw : corpus) out.push_back(encode_sentence(raw, vocab, require_known_labels));
  return out;
}

}  // namespace spanid
