// Acceptability test items and their corrupted minimal variants.
#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "aann/corpus.hpp"
#include "aann/detector.hpp"
#include "aann/error.hpp"
#include "aann/text.hpp"
#include "aann/variant.hpp"

namespace aann {

enum class Corruption { kOrderSwap, kNoArticle, kNoModifier, kNoNumeral };

inline constexpr std::array<Corruption, 4> kAllCorruptions = {
    Corruption::kOrderSwap, Corruption::kNoArticle, Corruption::kNoModifier,
    Corruption::kNoNumeral};

inline std::string_view to_string(Corruption c) {
  switch (c) {
    case Corruption::kOrderSwap: return "order_swap";
    case Corruption::kNoArticle: return "no_article";
    case Corruption::kNoModifier: return "no_modifier";
    case Corruption::kNoNumeral: return "no_numeral";
  }
  return "?";
}

inline Corruption parse_corruption(std::string_view s) {
  for (auto c : kAllCorruptions) {
    if (to_string(c) == s) return c;
  }
  throw Error("unknown corruption: " + std::string(s));
}

struct StimulusItem {
  std::string id;
  std::string prefix;
  // Slot texts; a slot may hold several whitespace-separated words.
  std::string article, adjective, numeral, noun;
  std::optional<std::string> suffix;
  Variant variant = Variant::kAann;
  std::optional<double> rating;
  std::map<Corruption, std::vector<std::string>> corruptions;

  const std::string& slot_text(Slot s) const {
    switch (s) {
      case Slot::kArticle: return article;
      case Slot::kAdjective: return adjective;
      case Slot::kNumeral: return numeral;
      case Slot::kNoun: return noun;
    }
    return noun;
  }

  bool operator==(const StimulusItem&) const = default;
};

namespace detail {

inline std::vector<std::string> slot_sequence(const StimulusItem& item,
                                              std::initializer_list<Slot> slots) {
  std::vector<std::string> out;
  for (auto s : slots) {
    for (auto& w : text::split_ws(item.slot_text(s))) out.push_back(std::move(w));
  }
  return out;
}

inline void require_slots(const StimulusItem& item) {
  for (auto s : kAllSlots) {
    if (text::split_ws(item.slot_text(s)).empty()) {
      throw Error("item " + item.id + ": empty " + std::string(to_string(s)) + " slot");
    }
  }
}

}  // namespace detail

// The construction in its variant's well-formed order.
inline std::vector<std::string> well_formed_tokens(const StimulusItem& item) {
  auto o = well_formed_order(item.variant);
  return detail::slot_sequence(item, {o[0], o[1], o[2], o[3]});
}

// Fills the four corruptions following the per-variant grid:
//
//            order_swap      no_article   no_modifier  no_numeral
//   AANN     A N Adj Noun    Adj N Noun   A N Noun     A Adj Noun
//   ANAN     A Adj N Noun    N Adj Noun   A N Noun     A Adj Noun
//   NAAN     Adj N A Noun    N Adj Noun   N A Noun     Adj A Noun
inline StimulusItem generate_corruptions(StimulusItem item) {
  detail::require_slots(item);
  constexpr Slot A = Slot::kArticle, J = Slot::kAdjective, N = Slot::kNumeral, H = Slot::kNoun;
  auto& c = item.corruptions;
  using detail::slot_sequence;
  switch (item.variant) {
    case Variant::kAann:
      c[Corruption::kOrderSwap] = slot_sequence(item, {A, N, J, H});
      c[Corruption::kNoArticle] = slot_sequence(item, {J, N, H});
      c[Corruption::kNoModifier] = slot_sequence(item, {A, N, H});
      c[Corruption::kNoNumeral] = slot_sequence(item, {A, J, H});
      break;
    case Variant::kAnan:
      c[Corruption::kOrderSwap] = slot_sequence(item, {A, J, N, H});
      c[Corruption::kNoArticle] = slot_sequence(item, {N, J, H});
      c[Corruption::kNoModifier] = slot_sequence(item, {A, N, H});
      c[Corruption::kNoNumeral] = slot_sequence(item, {A, J, H});
      break;
    case Variant::kNaan:
      c[Corruption::kOrderSwap] = slot_sequence(item, {J, N, A, H});
      c[Corruption::kNoArticle] = slot_sequence(item, {N, J, H});
      c[Corruption::kNoModifier] = slot_sequence(item, {N, A, H});
      c[Corruption::kNoNumeral] = slot_sequence(item, {J, A, H});
      break;
  }
  return item;
}

// Same lexical items in another word order, with corruptions regenerated.
inline StimulusItem derive_variant(StimulusItem item, Variant variant) {
  item.variant = variant;
  item.corruptions.clear();
  return generate_corruptions(std::move(item));
}

// Keeps rated items whose rating is strictly greater than the threshold.
inline std::vector<StimulusItem> filter_acceptable(const std::vector<StimulusItem>& items,
                                                   double threshold) {
  std::vector<StimulusItem> out;
  for (const auto& it : items) {
    if (it.rating && *it.rating > threshold) out.push_back(it);
  }
  return out;
}

// Drops items whose well-formed construction occurs verbatim (case-folded)
// as a contiguous token sequence anywhere in the corpus.
inline std::vector<StimulusItem> remove_training_overlap(const std::vector<StimulusItem>& items,
                                                         const Corpus& corpus) {
  std::unordered_set<std::string> keys;
  std::set<std::size_t> lengths;
  std::vector<std::string> item_keys;
  for (const auto& it : items) {
    std::vector<std::string> toks;
    for (const auto& t : well_formed_tokens(it)) toks.push_back(text::fold(t));
    item_keys.push_back(text::join(toks));
    keys.insert(item_keys.back());
    lengths.insert(toks.size());
  }
  std::unordered_set<std::string> seen;
  for (const auto& s : corpus.sentences()) {
    std::vector<std::string> folded;
    folded.reserve(s.tokens.size());
    for (const auto& t : s.tokens) folded.push_back(text::fold(t.surface));
    for (std::size_t len : lengths) {
      if (len == 0 || len > folded.size()) continue;
      for (std::size_t i = 0; i + len <= folded.size(); ++i) {
        std::string window = folded[i];
        for (std::size_t k = 1; k < len; ++k) {
          window += ' ';
          window += folded[i + k];
        }
        if (keys.count(window)) seen.insert(window);
      }
    }
  }
  std::vector<StimulusItem> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!seen.count(item_keys[i])) out.push_back(items[i]);
  }
  return out;
}

namespace detail {

// One CSV record per line; fields may be double-quoted with "" escapes.
inline std::vector<std::string> parse_csv_line(std::string_view line, std::size_t record) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw Error("record " + std::to_string(record) + ": unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

inline std::vector<std::string> sequence_field(const nlohmann::json& v) {
  if (v.is_string()) return text::split_ws(v.get<std::string>());
  return v.get<std::vector<std::string>>();
}

inline StimulusItem item_from_fields(const std::map<std::string, nlohmann::json>& f,
                                     std::size_t record) {
  auto need = [&](const char* name) -> std::string {
    auto it = f.find(name);
    if (it == f.end() || it->second.is_null()) {
      throw Error("record " + std::to_string(record) + ": missing required field '" + name + "'");
    }
    if (it->second.is_string()) return it->second.get<std::string>();
    return it->second.dump();
  };
  auto opt = [&](const char* name) -> std::optional<nlohmann::json> {
    auto it = f.find(name);
    if (it == f.end() || it->second.is_null()) return std::nullopt;
    if (it->second.is_string() && it->second.get<std::string>().empty()) return std::nullopt;
    return std::optional<nlohmann::json>(std::in_place, it->second);
  };
  StimulusItem item;
  item.id = f.count("id") || !f.count("item_id") ? need("id") : need("item_id");
  item.article = need("article");
  item.adjective = need("adjective");
  item.numeral = need("numeral");
  item.noun = need("noun");
  for (auto s : kAllSlots) {
    if (text::split_ws(item.slot_text(s)).empty()) {
      throw Error("record " + std::to_string(record) + ": missing required field '" +
                  std::string(to_string(s)) + "'");
    }
  }
  if (auto p = opt("prefix")) item.prefix = p->get<std::string>();
  if (auto s = opt("suffix")) item.suffix = s->get<std::string>();
  if (auto v = opt("variant")) item.variant = parse_variant(v->get<std::string>());
  if (auto r = opt("rating")) {
    double value = 0;
    if (r->is_number()) {
      value = r->get<double>();
    } else {
      try {
        std::size_t used = 0;
        std::string str = r->get<std::string>();
        value = std::stod(str, &used);
        if (used != str.size()) throw std::invalid_argument(str);
      } catch (const std::exception&) {
        throw Error("record " + std::to_string(record) + ": rating is not a number");
      }
    }
    if (value < 1.0 || value > 10.0) {
      throw Error("record " + std::to_string(record) + ": rating outside [1, 10]");
    }
    item.rating = value;
  }
  for (auto c : kAllCorruptions) {
    if (auto v = opt(std::string(to_string(c)).c_str())) {
      auto seq = sequence_field(*v);
      if (!seq.empty()) item.corruptions[c] = std::move(seq);
    }
  }
  if (auto cs = opt("corruptions")) {
    for (auto& [k, v] : cs->items()) {
      auto seq = sequence_field(v);
      if (!seq.empty()) item.corruptions[parse_corruption(k)] = std::move(seq);
    }
  }
  return item;
}

}  // namespace detail

// Reads stimulus records as JSON Lines (first non-blank character '{') or as
// CSV with a header row. Columns/fields: id, prefix, article, adjective,
// numeral, noun, suffix, variant, rating, and optionally the four corruption
// names. Record numbers in errors are 1-based and exclude the CSV header.
inline std::vector<StimulusItem> load_stimuli(std::istream& in) {
  std::vector<StimulusItem> items;
  std::string line;
  std::optional<bool> jsonl;
  std::vector<std::string> header;
  std::size_t record = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    if (!jsonl) {
      jsonl = detail::trim(line).front() == '{';
      if (!*jsonl) {
        header = detail::parse_csv_line(line, 0);
        for (auto& h : header) h = std::string(detail::trim(h));
        continue;
      }
    }
    ++record;
    std::map<std::string, nlohmann::json> fields;
    if (*jsonl) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw Error("record " + std::to_string(record) + ": " + e.what());
      }
      if (!j.is_object()) throw Error("record " + std::to_string(record) + ": not an object");
      for (auto& [k, v] : j.items()) fields[k] = v;
    } else {
      auto values = detail::parse_csv_line(line, record);
      if (values.size() != header.size()) {
        throw Error("record " + std::to_string(record) + ": expected " +
                    std::to_string(header.size()) + " fields, found " +
                    std::to_string(values.size()));
      }
      for (std::size_t i = 0; i < header.size(); ++i) fields[header[i]] = values[i];
    }
    try {
      items.push_back(detail::item_from_fields(fields, record));
    } catch (const nlohmann::json::exception& e) {
      throw Error("record " + std::to_string(record) + ": " + e.what());
    }
  }
  return items;
}

// One suite line: the item's slots plus its five token sequences.
inline nlohmann::ordered_json suite_line(const StimulusItem& item) {
  nlohmann::ordered_json j;
  j["item_id"] = item.id;
  j["variant"] = to_string(item.variant);
  j["prefix"] = item.prefix;
  if (item.suffix) j["suffix"] = *item.suffix;
  j["article"] = item.article;
  j["adjective"] = item.adjective;
  j["numeral"] = item.numeral;
  j["noun"] = item.noun;
  if (item.rating) j["rating"] = *item.rating;
  j["wellformed"] = well_formed_tokens(item);
  for (auto c : kAllCorruptions) {
    auto it = item.corruptions.find(c);
    j[std::string(to_string(c))] =
        it == item.corruptions.end() ? std::vector<std::string>{} : it->second;
  }
  return j;
}

inline void write_suite_jsonl(std::ostream& out, const std::vector<StimulusItem>& items) {
  for (const auto& it : items) out << suite_line(it).dump() << '\n';
}

}  // namespace aann
