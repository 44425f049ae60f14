// Sentence/token data model and CoNLL-U ingestion.
//
// The toolkit never tags text itself. Corpora arrive as CoNLL-U produced by
// any tagger; the tag used for pattern matching is XPOS (Penn Treebank) when
// present, falling back to UPOS.
#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "aann/error.hpp"
#include "aann/text.hpp"

namespace aann {

// Penn Treebank tag inventory (plus punctuation tags emitted by common taggers).
inline bool is_known_ptb_tag(std::string_view tag) {
  static constexpr std::array<std::string_view, 48> kTags = {
      "CC",  "CD",   "DT",    "EX",    "FW",  "IN",  "JJ",   "JJR",
      "JJS", "LS",   "MD",    "NN",    "NNS", "NNP", "NNPS", "PDT",
      "POS", "PRP",  "PRP$",  "RB",    "RBR", "RBS", "RP",   "SYM",
      "TO",  "UH",   "VB",    "VBD",   "VBG", "VBN", "VBP",  "VBZ",
      "WDT", "WP",   "WP$",   "WRB",   ".",   ",",   ":",    "``",
      "''",  "-LRB-", "-RRB-", "HYPH", "NFP", "ADD", "AFX",  "$"};
  return std::find(kTags.begin(), kTags.end(), tag) != kTags.end();
}

struct Token {
  std::string surface;
  std::string lemma = "_";
  std::string upos = "_";
  std::string xpos = "_";
  // 1-based index of the head token, 0 for the root, -1 when no arc is known.
  int head = -1;
  std::string deprel = "_";

  // Tag used by the detectors: XPOS when present, otherwise UPOS.
  const std::string& pos() const { return xpos != "_" ? xpos : upos; }
  // Unknown tags are preserved verbatim; this only flags them.
  bool has_known_tag() const { return is_known_ptb_tag(pos()); }

  bool operator==(const Token&) const = default;
};

struct AnnotatedSentence {
  std::string id;
  std::string source;
  std::vector<Token> tokens;
  // Set when an ablation invalidated part of the dependency structure.
  bool needs_reparse = false;

  std::size_t size() const { return tokens.size(); }
  bool operator==(const AnnotatedSentence&) const = default;
};

// Ordered collection of sentences with a maintained token total and an
// id index. Sentence ids are unique.
class Corpus {
 public:
  Corpus() = default;

  void add(AnnotatedSentence sentence) {
    if (sentence.id.empty()) throw Error("sentence id must not be empty");
    if (sentence.tokens.empty()) throw Error("sentence " + sentence.id + " has no tokens");
    auto [it, inserted] = index_.emplace(sentence.id, sentences_.size());
    if (!inserted) throw Error("duplicate sentence id: " + sentence.id);
    token_total_ += sentence.tokens.size();
    sentences_.push_back(std::move(sentence));
  }

  const std::vector<AnnotatedSentence>& sentences() const { return sentences_; }
  std::size_t size() const { return sentences_.size(); }
  bool empty() const { return sentences_.empty(); }
  std::uint64_t token_total() const { return token_total_; }

  const AnnotatedSentence* find(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &sentences_[it->second];
  }
  // Position of the sentence in corpus order, or npos.
  std::size_t position(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? npos : it->second;
  }

  bool operator==(const Corpus& other) const { return sentences_ == other.sentences_; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<AnnotatedSentence> sentences_;
  std::unordered_map<std::string, std::size_t> index_;
  std::uint64_t token_total_ = 0;
};

// Exact token count, recomputed from the sentences.
inline std::uint64_t token_count(const Corpus& corpus) {
  std::uint64_t total = 0;
  for (const auto& s : corpus.sentences()) total += s.tokens.size();
  return total;
}

inline Corpus concat(const Corpus& a, const Corpus& b) {
  Corpus out;
  for (const auto& s : a.sentences()) out.add(s);
  for (const auto& s : b.sentences()) out.add(s);
  return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// Parses "# key = value" comment lines.
inline bool comment_value(std::string_view line, std::string_view key, std::string& value) {
  std::string_view body = trim(line.substr(1));
  if (body.substr(0, key.size()) != key) return false;
  body = trim(body.substr(key.size()));
  if (body.empty() || body.front() != '=') return false;
  value = std::string(trim(body.substr(1)));
  return true;
}

}  // namespace detail

// Reads a CoNLL-U stream. Multiword-token ranges (3-4) and empty nodes (5.1)
// are skipped. Sentences without a sent_id comment get "<source>:<ordinal>".
inline Corpus ingest_conllu(std::istream& in, const std::string& source = "corpus") {
  Corpus corpus;
  AnnotatedSentence current;
  std::size_t sentence_start_line = 0;
  std::size_t ordinal = 0;
  std::string line;
  std::size_t line_no = 0;

  auto flush = [&]() {
    if (current.tokens.empty()) {
      current = AnnotatedSentence{};
      sentence_start_line = 0;
      return;
    }
    ++ordinal;
    if (current.id.empty()) current.id = source + ":" + std::to_string(ordinal);
    if (current.source.empty()) current.source = source;
    const int n = static_cast<int>(current.tokens.size());
    for (int i = 0; i < n; ++i) {
      int h = current.tokens[i].head;
      if (h < -1 || h > n || h == i + 1) {
        throw ParseError(sentence_start_line,
                         "head " + std::to_string(h) + " of token " + std::to_string(i + 1) +
                             " does not reference another token in the sentence");
      }
    }
    if (corpus.find(current.id) != nullptr) {
      throw ParseError(sentence_start_line, "duplicate sentence id " + current.id);
    }
    corpus.add(std::move(current));
    current = AnnotatedSentence{};
    sentence_start_line = 0;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) {
      flush();
      continue;
    }
    if (line.front() == '#') {
      if (sentence_start_line == 0) sentence_start_line = line_no;
      std::string value;
      if (detail::comment_value(line, "sent_id", value)) {
        current.id = value;
      } else if (detail::comment_value(line, "source", value)) {
        current.source = value;
      } else if (detail::comment_value(line, "reparse_needed", value)) {
        current.needs_reparse = (value == "true" || value == "1");
      }
      continue;
    }
    auto cols = text::split(line, '\t');
    if (cols.size() != 10) {
      throw ParseError(line_no, "expected 10 tab-separated columns, found " +
                                    std::to_string(cols.size()));
    }
    if (cols[0].find('-') != std::string_view::npos || cols[0].find('.') != std::string_view::npos) {
      continue;
    }
    int id = 0;
    if (!detail::parse_int(cols[0], id)) throw ParseError(line_no, "non-integer token id");
    if (id != static_cast<int>(current.tokens.size()) + 1) {
      throw ParseError(line_no, "token id " + std::string(cols[0]) + " out of sequence");
    }
    if (sentence_start_line == 0) sentence_start_line = line_no;
    Token tok;
    tok.surface = std::string(cols[1]);
    tok.lemma = std::string(cols[2]);
    tok.upos = std::string(cols[3]);
    tok.xpos = std::string(cols[4]);
    if (cols[6] == "_") {
      tok.head = -1;
    } else if (!detail::parse_int(cols[6], tok.head)) {
      throw ParseError(line_no, "non-integer head '" + std::string(cols[6]) + "'");
    }
    tok.deprel = std::string(cols[7]);
    current.tokens.push_back(std::move(tok));
  }
  flush();
  return corpus;
}

inline void write_sentence_conllu(std::ostream& out, const AnnotatedSentence& s) {
  out << "# sent_id = " << s.id << '\n';
  out << "# source = " << s.source << '\n';
  if (s.needs_reparse) out << "# reparse_needed = true\n";
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    const Token& t = s.tokens[i];
    out << (i + 1) << '\t' << t.surface << '\t' << t.lemma << '\t' << t.upos << '\t' << t.xpos
        << "\t_\t";
    if (t.head < 0) {
      out << '_';
    } else {
      out << t.head;
    }
    out << '\t' << t.deprel << "\t_\t_\n";
  }
  out << '\n';
}

inline void write_conllu(std::ostream& out, const Corpus& corpus) {
  for (const auto& s : corpus.sentences()) write_sentence_conllu(out, s);
}

// One utterance per line, tokens joined by single spaces.
inline void write_plain_text(std::ostream& out, const Corpus& corpus) {
  for (const auto& s : corpus.sentences()) {
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      if (i) out << ' ';
      out << s.tokens[i].surface;
    }
    out << '\n';
  }
}

// Untagged text, one utterance per line, whitespace tokenized.
inline Corpus read_plain_text(std::istream& in, const std::string& source = "text") {
  Corpus corpus;
  std::string line;
  std::size_t ordinal = 0;
  while (std::getline(in, line)) {
    auto words = text::split_ws(line);
    if (words.empty()) continue;
    AnnotatedSentence s;
    s.id = source + ":" + std::to_string(++ordinal);
    s.source = source;
    for (auto& w : words) {
      Token t;
      t.surface = std::move(w);
      s.tokens.push_back(std::move(t));
    }
    corpus.add(std::move(s));
  }
  return corpus;
}

}  // namespace aann
