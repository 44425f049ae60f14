// Detectors for the AANN construction ("a beautiful five days") and the
// related phenomena that are ablated alongside it.
//
// AANN and DT_ANN are found by matching over the PTB tag sequence:
//
//   DT (RB* (JJ|JJR|JJS) CC*)+ (CD|JJ|JJR|JJS|NN|CD CD) ((TO|CC) CD)*
//      (NNS | NNPS | NN NNS | (NN|NNS) IN NNS)+
//
// Non-CD tokens in the numeral position must be numeral proxies (few, dozen,
// couple, several, many, more). The remaining detectors look at dependency
// arcs. All token indices in this header are 0-based; heads in Token are
// 1-based as in CoNLL-U.
#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "aann/corpus.hpp"
#include "aann/error.hpp"
#include "aann/text.hpp"

namespace aann {

enum class PhenomenonKind {
  kAann,
  kDtAnn,
  kIndefPluralNp,
  kMeasureSingular,
  kArticleAdjFollower,
  kArticleNumFollower,
};

inline constexpr std::array<PhenomenonKind, 6> kAllKinds = {
    PhenomenonKind::kAann,          PhenomenonKind::kDtAnn,
    PhenomenonKind::kIndefPluralNp, PhenomenonKind::kMeasureSingular,
    PhenomenonKind::kArticleAdjFollower, PhenomenonKind::kArticleNumFollower};

inline std::string_view to_string(PhenomenonKind kind) {
  switch (kind) {
    case PhenomenonKind::kAann: return "AANN";
    case PhenomenonKind::kDtAnn: return "DT_ANN";
    case PhenomenonKind::kIndefPluralNp: return "INDEF_PLURAL_NP";
    case PhenomenonKind::kMeasureSingular: return "MEASURE_SINGULAR";
    case PhenomenonKind::kArticleAdjFollower: return "ARTICLE_ADJ_FOLLOWER";
    case PhenomenonKind::kArticleNumFollower: return "ARTICLE_NUM_FOLLOWER";
  }
  return "?";
}

inline PhenomenonKind parse_phenomenon_kind(std::string_view name) {
  for (auto k : kAllKinds) {
    if (to_string(k) == name) return k;
  }
  throw Error("unknown phenomenon kind: " + std::string(name));
}

enum class Slot { kArticle = 0, kAdjective = 1, kNumeral = 2, kNoun = 3 };

inline constexpr std::array<Slot, 4> kAllSlots = {Slot::kArticle, Slot::kAdjective,
                                                  Slot::kNumeral, Slot::kNoun};

inline std::string_view to_string(Slot slot) {
  switch (slot) {
    case Slot::kArticle: return "article";
    case Slot::kAdjective: return "adjective";
    case Slot::kNumeral: return "numeral";
    case Slot::kNoun: return "noun";
  }
  return "?";
}

inline Slot parse_slot(std::string_view name) {
  for (auto s : kAllSlots) {
    if (to_string(s) == name) return s;
  }
  throw Error("unknown slot name: " + std::string(name));
}

// Inclusive token range.
struct TokenRange {
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t length() const { return last - first + 1; }
  bool contains(const TokenRange& r) const { return first <= r.first && r.last <= last; }
  bool operator==(const TokenRange&) const = default;
};

struct ConstructionMatch {
  PhenomenonKind kind = PhenomenonKind::kAann;
  std::string sentence_id;
  TokenRange span;
  std::array<std::optional<TokenRange>, 4> slots;
  // DT_ANN matches whose determiner is a/an/another.
  bool also_aann = false;

  const std::optional<TokenRange>& slot(Slot s) const { return slots[static_cast<int>(s)]; }
  std::optional<TokenRange>& slot(Slot s) { return slots[static_cast<int>(s)]; }

  bool operator==(const ConstructionMatch&) const = default;
};

inline std::string range_text(const AnnotatedSentence& s, const TokenRange& r) {
  std::string out;
  for (std::size_t i = r.first; i <= r.last && i < s.tokens.size(); ++i) {
    if (i > r.first) out += ' ';
    out += s.tokens[i].surface;
  }
  return out;
}

namespace detail {

inline bool is_indefinite_article(std::string_view surface) {
  std::string f = text::fold(surface);
  return f == "a" || f == "an" || f == "another";
}

inline bool is_numeral_proxy(std::string_view surface) {
  std::string f = text::fold(surface);
  return f == "few" || f == "dozen" || f == "couple" || f == "several" || f == "many" ||
         f == "more";
}

inline bool is_adjective_tag(std::string_view t) { return t == "JJ" || t == "JJR" || t == "JJS"; }
inline bool is_plural_noun_tag(std::string_view t) { return t == "NNS" || t == "NNPS"; }

// Relation label without a UD subtype ("nummod:gov" -> "nummod").
inline std::string_view base_relation(std::string_view deprel) {
  return deprel.substr(0, deprel.find(':'));
}

struct TagPatternParse {
  TokenRange article, adjective, numeral, noun;
};

class TagPatternMatcher {
 public:
  TagPatternMatcher(const AnnotatedSentence& s, bool indefinite_only)
      : toks_(s.tokens), indefinite_only_(indefinite_only) {}

  // Longest parse starting at `start`, if any. Among equally long parses the
  // one with the longer adjective group, then the longer numeral group, wins.
  std::optional<TagPatternParse> longest_at(std::size_t start) const {
    if (!is(start, "DT")) return std::nullopt;
    if (indefinite_only_ && !is_indefinite_article(toks_[start].surface)) return std::nullopt;

    std::optional<TagPatternParse> best;
    auto consider = [&](const TagPatternParse& p) {
      if (!best || p.noun.last > best->noun.last) best = p;
    };

    // Adjective group: one or more units of RB* (JJ|JJR|JJS) CC*. Each unit
    // is deterministic, so the possible group ends are the unit boundaries.
    std::vector<std::size_t> adj_ends;  // exclusive end after each unit
    std::size_t p = start + 1;
    for (;;) {
      std::size_t q = p;
      while (is(q, "RB")) ++q;
      if (q >= toks_.size() || !is_adjective_tag(toks_[q].pos())) break;
      ++q;
      while (is(q, "CC")) ++q;
      adj_ends.push_back(q);
      p = q;
    }
    // Greedy first: longest adjective group, as the regex would try it.
    for (auto it = adj_ends.rbegin(); it != adj_ends.rend(); ++it) {
      TokenRange adjective{start + 1, *it - 1};
      bool proxy_before = false;
      for (std::size_t i = adjective.first; i <= adjective.last; ++i) {
        std::string f = text::fold(toks_[i].surface);
        if (f == "few" || f == "dozen" || f == "couple" || f == "several" || f == "many") {
          proxy_before = true;
        }
      }
      for (const auto& num : numeral_groups(*it, proxy_before)) {
        for (std::size_t noun_end : noun_group_ends(num.range.last + 1, num.proxy_noun_head)) {
          consider({{start, start}, adjective, num.range, {num.range.last + 1, noun_end - 1}});
        }
      }
    }
    return best;
  }

 private:
  struct NumeralGroup {
    TokenRange range;
    // A single proxy noun ("couple", "dozen") that may take an "of NNS" complement.
    bool proxy_noun_head = false;
  };

  bool is(std::size_t i, std::string_view tag) const {
    return i < toks_.size() && toks_[i].pos() == tag;
  }

  // Numeral groups starting at q, longest first.
  std::vector<NumeralGroup> numeral_groups(std::size_t q, bool proxy_before) const {
    std::vector<NumeralGroup> heads;
    if (q >= toks_.size()) return {};
    const Token& t = toks_[q];
    if (t.pos() == "CD") {
      if (is(q + 1, "CD")) heads.push_back({{q, q + 1}, false});
      heads.push_back({{q, q}, false});
    } else if (is_adjective_tag(t.pos()) || t.pos() == "NN") {
      // "more" counts only after another proxy: "a few more inches".
      std::string f = text::fold(t.surface);
      if (is_numeral_proxy(t.surface) && (f != "more" || proxy_before)) {
        heads.push_back({{q, q}, t.pos() == "NN"});
      }
    }
    std::vector<NumeralGroup> out;
    for (const auto& h : heads) {
      // ((TO|CC) CD)* tail, all lengths, longest first.
      std::vector<NumeralGroup> with_tail{h};
      std::size_t r = h.range.last + 1;
      while ((is(r, "TO") || is(r, "CC")) && is(r + 1, "CD")) {
        with_tail.push_back({{h.range.first, r + 1}, false});
        r += 2;
      }
      out.insert(out.end(), with_tail.rbegin(), with_tail.rend());
    }
    return out;
  }

  // Exclusive ends reachable by one or more noun units starting at r.
  std::vector<std::size_t> noun_group_ends(std::size_t r, bool allow_of_complement) const {
    std::set<std::size_t> ends;
    std::vector<std::size_t> frontier{r};
    std::set<std::size_t> seen{r};
    bool first_unit = true;
    while (!frontier.empty()) {
      std::vector<std::size_t> next;
      for (std::size_t p : frontier) {
        std::vector<std::size_t> steps;
        if (p < toks_.size() && is_plural_noun_tag(toks_[p].pos())) steps.push_back(p + 1);
        if (is(p, "NN") && is(p + 1, "NNS")) steps.push_back(p + 2);
        if ((is(p, "NN") || is(p, "NNS")) && is(p + 1, "IN") && is(p + 2, "NNS")) {
          steps.push_back(p + 3);
        }
        if (first_unit && allow_of_complement && is(p, "IN") && is(p + 1, "NNS")) {
          steps.push_back(p + 2);
        }
        for (std::size_t e : steps) {
          ends.insert(e);
          if (seen.insert(e).second) next.push_back(e);
        }
      }
      frontier = std::move(next);
      first_unit = false;
    }
    return {ends.rbegin(), ends.rend()};
  }

  const std::vector<Token>& toks_;
  bool indefinite_only_;
};

inline std::vector<ConstructionMatch> detect_tag_pattern(const AnnotatedSentence& sentence,
                                                         PhenomenonKind kind) {
  const bool indefinite_only = kind == PhenomenonKind::kAann;
  TagPatternMatcher matcher(sentence, indefinite_only);
  std::vector<ConstructionMatch> out;
  std::size_t i = 0;
  while (i < sentence.tokens.size()) {
    auto parse = matcher.longest_at(i);
    if (!parse) {
      ++i;
      continue;
    }
    ConstructionMatch m;
    m.kind = kind;
    m.sentence_id = sentence.id;
    m.span = {parse->article.first, parse->noun.last};
    m.slot(Slot::kArticle) = parse->article;
    m.slot(Slot::kAdjective) = parse->adjective;
    m.slot(Slot::kNumeral) = parse->numeral;
    m.slot(Slot::kNoun) = parse->noun;
    m.also_aann = kind == PhenomenonKind::kDtAnn &&
                  is_indefinite_article(sentence.tokens[parse->article.first].surface);
    out.push_back(std::move(m));
    i = parse->noun.last + 1;
  }
  return out;
}

// Grows the span to cover every bound slot.
inline void cover_slots(ConstructionMatch& m) {
  for (const auto& r : m.slots) {
    if (!r) continue;
    m.span.first = std::min(m.span.first, r->first);
    m.span.last = std::max(m.span.last, r->last);
  }
}

}  // namespace detail

// Indefinite determiner + adjective group + numeral group + plural noun group.
inline std::vector<ConstructionMatch> detect_aann(const AnnotatedSentence& sentence) {
  return detail::detect_tag_pattern(sentence, PhenomenonKind::kAann);
}

// Same pattern with any DT in the determiner slot.
inline std::vector<ConstructionMatch> detect_dt_ann(const AnnotatedSentence& sentence) {
  return detail::detect_tag_pattern(sentence, PhenomenonKind::kDtAnn);
}

// "a few plums" (a -det-> plums) and "a couple days" (a -quantmod-> couple
// -nummod-> days).
inline std::vector<ConstructionMatch> detect_indef_plural_np(const AnnotatedSentence& sentence) {
  using detail::base_relation;
  const auto& toks = sentence.tokens;
  const std::size_t n = toks.size();
  std::vector<ConstructionMatch> out;
  for (std::size_t d = 0; d < n; ++d) {
    if (!detail::is_indefinite_article(toks[d].surface) || toks[d].head <= 0) continue;
    const std::size_t h = static_cast<std::size_t>(toks[d].head - 1);
    if (h >= n) continue;
    const auto rel = base_relation(toks[d].deprel);
    ConstructionMatch m;
    m.kind = PhenomenonKind::kIndefPluralNp;
    m.sentence_id = sentence.id;
    m.slot(Slot::kArticle) = TokenRange{d, d};
    if (rel == "det" && detail::is_plural_noun_tag(toks[h].pos())) {
      m.slot(Slot::kNoun) = TokenRange{h, h};
      for (std::size_t a = 0; a < n; ++a) {
        if (toks[a].head == static_cast<int>(h + 1) && base_relation(toks[a].deprel) == "amod") {
          auto& adj = m.slot(Slot::kAdjective);
          if (!adj) {
            adj = TokenRange{a, a};
          } else {
            adj->first = std::min(adj->first, a);
            adj->last = std::max(adj->last, a);
          }
        }
      }
    } else if (rel == "quantmod" && base_relation(toks[h].deprel) == "nummod" && toks[h].head > 0) {
      const std::size_t noun = static_cast<std::size_t>(toks[h].head - 1);
      if (noun >= n || !detail::is_plural_noun_tag(toks[noun].pos())) continue;
      m.slot(Slot::kNumeral) = TokenRange{h, h};
      m.slot(Slot::kNoun) = TokenRange{noun, noun};
    } else {
      continue;
    }
    m.span = {d, d};
    detail::cover_slots(m);
    out.push_back(std::move(m));
  }
  return out;
}

inline bool is_singular_verb(const Token& t) {
  if (t.pos() == "VBZ") return true;
  std::string f = text::fold(t.surface);
  return f == "is" || f == "was" || f == "has" || f == "does";
}

// Plural noun with a cardinal nummod that is the subject of a singular verb
// (or of a predicate whose copula is singular): "five dollars is plenty".
inline std::vector<ConstructionMatch> detect_measure_singular(const AnnotatedSentence& sentence) {
  using detail::base_relation;
  const auto& toks = sentence.tokens;
  const std::size_t n = toks.size();
  std::vector<ConstructionMatch> out;
  for (std::size_t noun = 0; noun < n; ++noun) {
    const Token& t = toks[noun];
    if (!detail::is_plural_noun_tag(t.pos()) || base_relation(t.deprel) != "nsubj" || t.head <= 0) {
      continue;
    }
    std::size_t verb = static_cast<std::size_t>(t.head - 1);
    if (verb >= n) continue;
    if (!is_singular_verb(toks[verb])) {
      // Copular clauses parsed with the predicate as head: "six months is a
      // long time" where "time" governs both the subject and "is".
      std::optional<std::size_t> cop;
      for (std::size_t c = 0; c < n; ++c) {
        if (toks[c].head == static_cast<int>(verb + 1) && base_relation(toks[c].deprel) == "cop" &&
            is_singular_verb(toks[c])) {
          cop = c;
          break;
        }
      }
      if (!cop) continue;
      verb = *cop;
    }
    std::optional<std::size_t> numeral;
    for (std::size_t c = 0; c < n; ++c) {
      if (toks[c].head == static_cast<int>(noun + 1) && base_relation(toks[c].deprel) == "nummod" &&
          toks[c].pos() == "CD") {
        numeral = c;
        break;
      }
    }
    if (!numeral) continue;
    ConstructionMatch m;
    m.kind = PhenomenonKind::kMeasureSingular;
    m.sentence_id = sentence.id;
    m.slot(Slot::kNumeral) = TokenRange{*numeral, *numeral};
    m.slot(Slot::kNoun) = TokenRange{noun, noun};
    m.span = {std::min({*numeral, noun, verb}), std::max({*numeral, noun, verb})};
    out.push_back(std::move(m));
  }
  return out;
}

// Indefinite article immediately followed by an adjective (or by a cardinal).
inline std::vector<ConstructionMatch> detect_article_followers(const AnnotatedSentence& sentence,
                                                               PhenomenonKind kind) {
  const auto& toks = sentence.tokens;
  std::vector<ConstructionMatch> out;
  for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
    if (!detail::is_indefinite_article(toks[i].surface)) continue;
    const auto& next = toks[i + 1].pos();
    const bool adj = detail::is_adjective_tag(next);
    const bool num = next == "CD";
    if ((kind == PhenomenonKind::kArticleAdjFollower && adj) ||
        (kind == PhenomenonKind::kArticleNumFollower && num)) {
      ConstructionMatch m;
      m.kind = kind;
      m.sentence_id = sentence.id;
      m.span = {i, i + 1};
      m.slot(Slot::kArticle) = TokenRange{i, i};
      m.slot(adj ? Slot::kAdjective : Slot::kNumeral) = TokenRange{i + 1, i + 1};
      out.push_back(std::move(m));
    }
  }
  return out;
}

struct FollowerCounts {
  std::uint64_t adj = 0;
  std::uint64_t num = 0;

  bool operator==(const FollowerCounts&) const = default;
};

inline FollowerCounts count_article_modifier_followers(const AnnotatedSentence& sentence) {
  FollowerCounts c;
  const auto& toks = sentence.tokens;
  for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
    if (!detail::is_indefinite_article(toks[i].surface)) continue;
    const auto& next = toks[i + 1].pos();
    if (detail::is_adjective_tag(next)) ++c.adj;
    if (next == "CD") ++c.num;
  }
  return c;
}

inline FollowerCounts count_article_modifier_followers(const Corpus& corpus) {
  FollowerCounts total;
  for (const auto& s : corpus.sentences()) {
    auto c = count_article_modifier_followers(s);
    total.adj += c.adj;
    total.num += c.num;
  }
  return total;
}

inline std::vector<ConstructionMatch> detect(const AnnotatedSentence& sentence,
                                             PhenomenonKind kind) {
  switch (kind) {
    case PhenomenonKind::kAann: return detect_aann(sentence);
    case PhenomenonKind::kDtAnn: return detect_dt_ann(sentence);
    case PhenomenonKind::kIndefPluralNp: return detect_indef_plural_np(sentence);
    case PhenomenonKind::kMeasureSingular: return detect_measure_singular(sentence);
    case PhenomenonKind::kArticleAdjFollower:
    case PhenomenonKind::kArticleNumFollower: return detect_article_followers(sentence, kind);
  }
  return {};
}

// Matches for every requested kind, in sentence order, then span start, then
// kind order.
inline std::vector<ConstructionMatch> detect_all(const Corpus& corpus,
                                                 const std::set<PhenomenonKind>& kinds) {
  std::vector<ConstructionMatch> out;
  if (kinds.empty()) return out;
  for (const auto& s : corpus.sentences()) {
    std::vector<ConstructionMatch> local;
    for (auto k : kinds) {
      auto found = detect(s, k);
      local.insert(local.end(), std::make_move_iterator(found.begin()),
                   std::make_move_iterator(found.end()));
    }
    std::stable_sort(local.begin(), local.end(), [](const auto& a, const auto& b) {
      if (a.span.first != b.span.first) return a.span.first < b.span.first;
      return a.kind < b.kind;
    });
    out.insert(out.end(), std::make_move_iterator(local.begin()),
               std::make_move_iterator(local.end()));
  }
  return out;
}

// JSON Lines export. `sentence` supplies slot surfaces and may be null.
inline nlohmann::ordered_json match_to_json(const ConstructionMatch& m,
                                            const AnnotatedSentence* sentence) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(m.kind);
  j["sentence_id"] = m.sentence_id;
  j["span"] = {m.span.first, m.span.last};
  nlohmann::ordered_json slots = nlohmann::ordered_json::object();
  nlohmann::ordered_json surfaces = nlohmann::ordered_json::object();
  for (auto s : kAllSlots) {
    const auto& r = m.slot(s);
    if (!r) continue;
    slots[std::string(to_string(s))] = {r->first, r->last};
    if (sentence) surfaces[std::string(to_string(s))] = range_text(*sentence, *r);
  }
  j["slots"] = slots;
  if (sentence) j["surfaces"] = surfaces;
  if (m.kind == PhenomenonKind::kDtAnn) j["also_aann"] = m.also_aann;
  return j;
}

inline void write_matches_jsonl(std::ostream& out, const Corpus& corpus,
                                const std::vector<ConstructionMatch>& matches) {
  for (const auto& m : matches) out << match_to_json(m, corpus.find(m.sentence_id)).dump() << '\n';
}

inline std::vector<ConstructionMatch> read_matches_jsonl(std::istream& in) {
  std::vector<ConstructionMatch> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      ConstructionMatch m;
      m.kind = parse_phenomenon_kind(j.at("kind").get<std::string>());
      m.sentence_id = j.at("sentence_id").get<std::string>();
      m.span = {j.at("span").at(0).get<std::size_t>(), j.at("span").at(1).get<std::size_t>()};
      for (auto& [name, r] : j.at("slots").items()) {
        m.slot(parse_slot(name)) = TokenRange{r.at(0).get<std::size_t>(), r.at(1).get<std::size_t>()};
      }
      m.also_aann = j.value("also_aann", false);
      out.push_back(std::move(m));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return out;
}

}  // namespace aann
