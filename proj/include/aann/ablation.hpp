// Corpus manipulations: removal, counterfactual reordering, article-modifier
// balancing, random control removal, token-parity upsampling and the
// variability split.
//
// Every corpus-producing operation returns an AblationManifest. Replaying a
// manifest against the source corpus goes through the same CorpusEditor the
// operation used, so the replayed corpus is identical to the returned one.
// All removals work on whole utterances; the only partial sentence ever
// produced is the truncated final duplicate of upsample_to_parity.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "aann/corpus.hpp"
#include "aann/detector.hpp"
#include "aann/error.hpp"
#include "aann/random.hpp"
#include "aann/text.hpp"
#include "aann/variant.hpp"

namespace aann {

enum class ManifestAction { kRemoved, kReplaced, kDuplicated, kTruncated };

inline std::string_view to_string(ManifestAction a) {
  switch (a) {
    case ManifestAction::kRemoved: return "removed";
    case ManifestAction::kReplaced: return "replaced";
    case ManifestAction::kDuplicated: return "duplicated";
    case ManifestAction::kTruncated: return "truncated";
  }
  return "?";
}

inline ManifestAction parse_manifest_action(std::string_view s) {
  if (s == "removed") return ManifestAction::kRemoved;
  if (s == "replaced") return ManifestAction::kReplaced;
  if (s == "duplicated") return ManifestAction::kDuplicated;
  if (s == "truncated") return ManifestAction::kTruncated;
  throw Error("unknown manifest action: " + std::string(s));
}

struct ManifestEntry {
  ManifestAction action = ManifestAction::kRemoved;
  std::string sentence_id;
  nlohmann::ordered_json detail = nlohmann::ordered_json::object();

  bool operator==(const ManifestEntry&) const = default;
};

struct AblationManifest {
  std::uint64_t seed = 0;
  std::vector<ManifestEntry> operations;
  std::uint64_t source_token_total = 0;
  std::uint64_t result_token_total = 0;
  // Free-form summary: counts, overshoot, balance status.
  nlohmann::ordered_json notes = nlohmann::ordered_json::object();

  bool operator==(const AblationManifest&) const = default;
};

// Mutable working copy of a corpus. Sentence order is preserved; duplicates
// are appended at the end.
class CorpusEditor {
 public:
  explicit CorpusEditor(const Corpus& source) {
    slots_.reserve(source.size());
    for (const auto& s : source.sentences()) {
      index_.emplace(s.id, slots_.size());
      slots_.emplace_back(s);
    }
  }

  const AnnotatedSentence& get(const std::string& id) const { return *slots_[locate(id)]; }
  bool contains(const std::string& id) const {
    auto it = index_.find(id);
    return it != index_.end() && slots_[it->second].has_value();
  }

  void remove(const std::string& id) {
    std::size_t i = locate(id);
    slots_[i].reset();
    index_.erase(id);
  }

  // Rewrites span positions so that new position span.first + k holds the
  // token previously at order[k]. Arcs of the moved tokens are dropped;
  // arcs from outside tokens follow their heads.
  void reorder(const std::string& id, TokenRange span, const std::vector<std::size_t>& order) {
    AnnotatedSentence& s = *slots_[locate(id)];
    const std::size_t n = s.tokens.size();
    if (span.last >= n || order.size() != span.length()) {
      throw Error("reorder of " + id + " does not fit the sentence");
    }
    std::vector<std::size_t> new_pos(n);
    for (std::size_t i = 0; i < n; ++i) new_pos[i] = i;
    std::vector<bool> used(n, false);
    for (std::size_t k = 0; k < order.size(); ++k) {
      std::size_t o = order[k];
      if (o < span.first || o > span.last || used[o]) {
        throw Error("reorder of " + id + " is not a permutation of its span");
      }
      used[o] = true;
      new_pos[o] = span.first + k;
    }
    std::vector<Token> out(n);
    for (std::size_t o = 0; o < n; ++o) {
      Token t = s.tokens[o];
      if (o >= span.first && o <= span.last) {
        t.head = -1;
        t.deprel = "_";
      } else if (t.head > 0) {
        t.head = static_cast<int>(new_pos[static_cast<std::size_t>(t.head - 1)] + 1);
      }
      out[new_pos[o]] = std::move(t);
    }
    s.tokens = std::move(out);
    s.needs_reparse = true;
  }

  void duplicate(const std::string& source_id, const std::string& new_id) {
    AnnotatedSentence copy = get(source_id);
    copy.id = new_id;
    if (!index_.emplace(new_id, slots_.size()).second) {
      throw Error("duplicate id already present: " + new_id);
    }
    slots_.emplace_back(std::move(copy));
  }

  // Keeps the first `length` tokens; arcs to dropped tokens are cleared.
  void truncate(const std::string& id, std::size_t length) {
    AnnotatedSentence& s = *slots_[locate(id)];
    if (length == 0 || length > s.tokens.size()) {
      throw Error("cannot truncate " + id + " to " + std::to_string(length) + " tokens");
    }
    if (length == s.tokens.size()) return;
    s.tokens.resize(length);
    for (auto& t : s.tokens) {
      if (t.head > static_cast<int>(length)) {
        t.head = -1;
        t.deprel = "_";
      }
    }
    s.needs_reparse = true;
  }

  void apply(const ManifestEntry& e) {
    switch (e.action) {
      case ManifestAction::kRemoved:
        remove(e.sentence_id);
        break;
      case ManifestAction::kReplaced: {
        const auto& sp = e.detail.at("span");
        std::vector<std::size_t> order = e.detail.at("order").get<std::vector<std::size_t>>();
        reorder(e.sentence_id, {sp.at(0).get<std::size_t>(), sp.at(1).get<std::size_t>()}, order);
        break;
      }
      case ManifestAction::kDuplicated:
        duplicate(e.detail.at("source").get<std::string>(), e.sentence_id);
        break;
      case ManifestAction::kTruncated:
        truncate(e.sentence_id, e.detail.at("length").get<std::size_t>());
        break;
    }
  }

  Corpus finish() const {
    Corpus out;
    for (const auto& s : slots_) {
      if (s) out.add(*s);
    }
    return out;
  }

 private:
  std::size_t locate(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end() || !slots_[it->second]) throw Error("unknown sentence id: " + id);
    return it->second;
  }

  std::vector<std::optional<AnnotatedSentence>> slots_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Applies every manifest entry, in order, to a copy of `source`.
inline Corpus replay(const AblationManifest& manifest, const Corpus& source) {
  CorpusEditor editor(source);
  for (const auto& e : manifest.operations) editor.apply(e);
  return editor.finish();
}

// Sequential composition: `second` was produced from the result of `first`.
inline AblationManifest compose(const AblationManifest& first, const AblationManifest& second,
                                std::string_view first_name = "step1",
                                std::string_view second_name = "step2") {
  AblationManifest out = first;
  out.operations.insert(out.operations.end(), second.operations.begin(), second.operations.end());
  out.result_token_total = second.result_token_total;
  out.seed = first.seed ? first.seed : second.seed;
  nlohmann::ordered_json notes = nlohmann::ordered_json::object();
  notes[std::string(first_name)] = first.notes;
  notes[std::string(second_name)] = second.notes;
  out.notes = std::move(notes);
  return out;
}

inline std::unordered_set<std::string> sentence_ids(const std::vector<ConstructionMatch>& matches) {
  std::unordered_set<std::string> ids;
  for (const auto& m : matches) ids.insert(m.sentence_id);
  return ids;
}

struct AblationResult {
  Corpus corpus;
  AblationManifest manifest;
};

namespace detail {

inline AblationResult finish(const Corpus& source, CorpusEditor& editor, AblationManifest manifest) {
  manifest.source_token_total = token_count(source);
  Corpus out = editor.finish();
  manifest.result_token_total = token_count(out);
  return {std::move(out), std::move(manifest)};
}

}  // namespace detail

// Deletes every utterance holding at least one match.
inline AblationResult remove_matches(const Corpus& corpus,
                                     const std::vector<ConstructionMatch>& matches) {
  std::unordered_map<std::string, std::size_t> per_sentence;
  for (const auto& m : matches) {
    if (!corpus.find(m.sentence_id)) {
      throw Error("match references unknown sentence id: " + m.sentence_id);
    }
    ++per_sentence[m.sentence_id];
  }
  CorpusEditor editor(corpus);
  AblationManifest manifest;
  for (const auto& s : corpus.sentences()) {
    auto it = per_sentence.find(s.id);
    if (it == per_sentence.end()) continue;
    editor.remove(s.id);
    ManifestEntry e{ManifestAction::kRemoved, s.id, nlohmann::ordered_json::object()};
    e.detail["matches"] = it->second;
    e.detail["tokens"] = s.tokens.size();
    manifest.operations.push_back(std::move(e));
  }
  manifest.notes["removed_utterances"] = manifest.operations.size();
  return detail::finish(corpus, editor, std::move(manifest));
}

// Reorders the slot groups of each AANN match into the ANAN or NAAN order,
// leaving every token outside the match span untouched.
inline AblationResult replace_with_counterfactual(const Corpus& corpus,
                                                  const std::vector<ConstructionMatch>& matches,
                                                  Variant variant) {
  if (variant == Variant::kAann) throw Error("counterfactual variant must be ANAN or NAAN");
  const auto order = well_formed_order(variant);
  auto describe = [](const ConstructionMatch& m) {
    return std::string(to_string(m.kind)) + " match in " + m.sentence_id + " at [" +
           std::to_string(m.span.first) + "," + std::to_string(m.span.last) + "]";
  };
  for (const auto& m : matches) {
    for (auto slot : kAllSlots) {
      if (!m.slot(slot)) {
        throw Error(describe(m) + " is missing the " + std::string(to_string(slot)) + " slot");
      }
    }
    const auto& a = *m.slot(Slot::kArticle);
    const auto& adj = *m.slot(Slot::kAdjective);
    const auto& num = *m.slot(Slot::kNumeral);
    const auto& noun = *m.slot(Slot::kNoun);
    if (a.first != m.span.first || adj.first != a.last + 1 || num.first != adj.last + 1 ||
        noun.first != num.last + 1 || noun.last != m.span.last) {
      throw Error(describe(m) + " has slots that do not tile its span");
    }
    const AnnotatedSentence* s = corpus.find(m.sentence_id);
    if (!s) throw Error(describe(m) + " references an unknown sentence");
    if (m.span.last >= s->tokens.size()) throw Error(describe(m) + " lies outside its sentence");
  }

  CorpusEditor editor(corpus);
  AblationManifest manifest;
  for (const auto& m : matches) {
    std::vector<std::size_t> perm;
    for (auto slot : order) {
      const auto& r = *m.slot(slot);
      for (std::size_t i = r.first; i <= r.last; ++i) perm.push_back(i);
    }
    editor.reorder(m.sentence_id, m.span, perm);
    ManifestEntry e{ManifestAction::kReplaced, m.sentence_id, nlohmann::ordered_json::object()};
    e.detail["variant"] = to_string(variant);
    e.detail["span"] = {m.span.first, m.span.last};
    e.detail["order"] = perm;
    manifest.operations.push_back(std::move(e));
  }
  manifest.notes["replaced_matches"] = matches.size();
  manifest.notes["variant"] = to_string(variant);
  return detail::finish(corpus, editor, std::move(manifest));
}

// Removes randomly chosen utterances holding indefinite-article + adjective
// bigrams until the corpus-level adjective count no longer exceeds the
// numeral count. The result is minimal: restoring any single removed
// utterance would break the inequality. Utterances for which `keep` returns
// true are never removed (they still count toward the totals).
inline AblationResult balance_article_modifiers(
    const Corpus& corpus, std::uint64_t seed,
    const std::function<bool(const AnnotatedSentence&)>& keep = nullptr) {
  struct Candidate {
    std::size_t index;
    FollowerCounts counts;
  };
  FollowerCounts total;
  std::vector<Candidate> candidates;
  const auto& sents = corpus.sentences();
  for (std::size_t i = 0; i < sents.size(); ++i) {
    auto c = count_article_modifier_followers(sents[i]);
    total.adj += c.adj;
    total.num += c.num;
    if (c.adj > 0 && !(keep && keep(sents[i]))) candidates.push_back({i, c});
  }

  AblationManifest manifest;
  manifest.seed = seed;
  manifest.notes["adj_before"] = total.adj;
  manifest.notes["num_before"] = total.num;
  CorpusEditor editor(corpus);

  // Signed gap adj - num; each candidate lowers it by adj_u - num_u.
  auto reduction = [](const Candidate& c) {
    return static_cast<std::int64_t>(c.counts.adj) - static_cast<std::int64_t>(c.counts.num);
  };
  std::int64_t gap = static_cast<std::int64_t>(total.adj) - static_cast<std::int64_t>(total.num);
  std::vector<std::size_t> removed;  // positions into `candidates`, in removal order
  bool balanced = gap <= 0;

  if (!balanced) {
    SeededRng rng(seed);
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(std::span<std::size_t>(order));

    // Pass 1: take utterances that do not overshoot.
    std::vector<bool> taken(candidates.size(), false);
    for (std::size_t k : order) {
      if (gap == 0) break;
      std::int64_t r = reduction(candidates[k]);
      if (r > 0 && r <= gap) {
        gap -= r;
        taken[k] = true;
        removed.push_back(k);
      }
    }
    // Pass 2: cross zero with the smallest overshooting utterance, then put
    // back earlier removals that are no longer needed.
    if (gap > 0) {
      std::optional<std::size_t> crossing;
      for (std::size_t k : order) {
        if (taken[k] || reduction(candidates[k]) <= gap) continue;
        if (!crossing || reduction(candidates[k]) < reduction(candidates[*crossing])) crossing = k;
      }
      if (crossing) {
        gap -= reduction(candidates[*crossing]);
        std::vector<std::size_t> kept;
        for (auto it = removed.rbegin(); it != removed.rend(); ++it) {
          std::int64_t r = reduction(candidates[*it]);
          if (gap + r <= 0) {
            gap += r;
          } else {
            kept.push_back(*it);
          }
        }
        removed.assign(kept.rbegin(), kept.rend());
        removed.push_back(*crossing);
      }
    }
    balanced = gap <= 0;
  }

  // Entries are written in corpus order.
  std::vector<std::size_t> by_position = removed;
  std::sort(by_position.begin(), by_position.end(),
            [&](std::size_t a, std::size_t b) { return candidates[a].index < candidates[b].index; });
  std::uint64_t removed_adj = 0, removed_num = 0;
  for (std::size_t k : by_position) {
    const auto& c = candidates[k];
    const auto& s = sents[c.index];
    editor.remove(s.id);
    ManifestEntry e{ManifestAction::kRemoved, s.id, nlohmann::ordered_json::object()};
    e.detail["adj"] = c.counts.adj;
    e.detail["num"] = c.counts.num;
    e.detail["tokens"] = s.tokens.size();
    manifest.operations.push_back(std::move(e));
    removed_adj += c.counts.adj;
    removed_num += c.counts.num;
  }
  manifest.notes["adj_after"] = total.adj - removed_adj;
  manifest.notes["num_after"] = total.num - removed_num;
  manifest.notes["removed_adj_occurrences"] = removed_adj;
  manifest.notes["balanced"] = balanced;
  return detail::finish(corpus, editor, std::move(manifest));
}

// Removes random utterances holding no protected phenomenon until at least
// `target_tokens` tokens are gone.
inline AblationResult random_control_removal(const Corpus& corpus,
                                             const std::vector<ConstructionMatch>& protected_matches,
                                             std::uint64_t target_tokens, std::uint64_t seed) {
  const auto blocked = sentence_ids(protected_matches);
  std::vector<std::size_t> pool;
  std::uint64_t available = 0;
  const auto& sents = corpus.sentences();
  for (std::size_t i = 0; i < sents.size(); ++i) {
    if (blocked.count(sents[i].id)) continue;
    pool.push_back(i);
    available += sents[i].tokens.size();
  }
  if (target_tokens > available) {
    throw Error("target of " + std::to_string(target_tokens) +
                " tokens exceeds the unprotected token mass of " + std::to_string(available));
  }
  AblationManifest manifest;
  manifest.seed = seed;
  CorpusEditor editor(corpus);
  std::uint64_t removed = 0;
  if (target_tokens > 0) {
    SeededRng rng(seed);
    rng.shuffle(std::span<std::size_t>(pool));
    for (std::size_t i : pool) {
      if (removed >= target_tokens) break;
      const auto& s = sents[i];
      editor.remove(s.id);
      removed += s.tokens.size();
      ManifestEntry e{ManifestAction::kRemoved, s.id, nlohmann::ordered_json::object()};
      e.detail["tokens"] = s.tokens.size();
      manifest.operations.push_back(std::move(e));
    }
  }
  manifest.notes["target_tokens"] = target_tokens;
  manifest.notes["removed_tokens"] = removed;
  manifest.notes["overshoot"] = removed - target_tokens;
  return detail::finish(corpus, editor, std::move(manifest));
}

// Appends randomly sampled (with replacement) copies of non-excluded
// utterances until the corpus holds exactly `target_tokens` tokens. The last
// copy is truncated when it would overshoot.
inline AblationResult upsample_to_parity(
    const Corpus& corpus, const std::function<bool(const AnnotatedSentence&)>& excluded,
    std::uint64_t target_tokens, std::uint64_t seed) {
  std::vector<std::size_t> eligible;
  const auto& sents = corpus.sentences();
  for (std::size_t i = 0; i < sents.size(); ++i) {
    if (!excluded(sents[i])) eligible.push_back(i);
  }
  if (eligible.empty()) throw Error("no utterance is eligible for upsampling");
  std::uint64_t total = token_count(corpus);
  if (target_tokens < total) {
    throw Error("upsampling target " + std::to_string(target_tokens) +
                " is below the current token count " + std::to_string(total));
  }
  AblationManifest manifest;
  manifest.seed = seed;
  CorpusEditor editor(corpus);
  SeededRng rng(seed);
  std::uint64_t copies = 0;
  std::uint64_t suffix = 0;
  bool truncated = false;
  while (total < target_tokens) {
    const auto& s = sents[eligible[rng.below(eligible.size())]];
    std::string new_id;
    do {
      new_id = s.id + "#dup" + std::to_string(++suffix);
    } while (editor.contains(new_id) || corpus.find(new_id));
    editor.duplicate(s.id, new_id);
    ManifestEntry e{ManifestAction::kDuplicated, new_id, nlohmann::ordered_json::object()};
    e.detail["source"] = s.id;
    manifest.operations.push_back(std::move(e));
    ++copies;
    const std::uint64_t need = target_tokens - total;
    if (s.tokens.size() > need) {
      editor.truncate(new_id, static_cast<std::size_t>(need));
      ManifestEntry t{ManifestAction::kTruncated, new_id, nlohmann::ordered_json::object()};
      t.detail["length"] = need;
      t.detail["original_length"] = s.tokens.size();
      manifest.operations.push_back(std::move(t));
      total += need;
      truncated = true;
    } else {
      total += s.tokens.size();
    }
  }
  manifest.notes["target_tokens"] = target_tokens;
  manifest.notes["duplicated_utterances"] = copies;
  manifest.notes["truncated"] = truncated;
  return detail::finish(corpus, editor, std::move(manifest));
}

struct TripleStats {
  std::size_t utterances = 0;
  std::size_t distinct_triples = 0;

  bool operator==(const TripleStats&) const = default;
};

struct VariabilitySplit {
  std::set<std::string> high;
  std::set<std::string> low;
  TripleStats high_stats;
  TripleStats low_stats;
  // True when some triple had to be divided between the subsets to keep
  // their sizes within one utterance.
  bool split_triple = false;
};

// Partitions AANN-bearing utterances into a low-variability subset (the most
// frequent adjective/numeral/noun triples) and a high-variability subset
// (the long tail), with sizes differing by at most one.
inline VariabilitySplit split_by_variability(const Corpus& corpus,
                                             const std::vector<ConstructionMatch>& matches,
                                             std::uint64_t seed) {
  if (matches.empty()) throw Error("variability split needs at least one AANN match");
  // Triple of the first match in each utterance, utterances in corpus order.
  std::map<std::string, std::size_t> first_match;
  for (std::size_t i = 0; i < matches.size(); ++i) {
    const auto& m = matches[i];
    if (m.kind != PhenomenonKind::kAann) throw Error("variability split expects AANN matches");
    const auto* s = corpus.find(m.sentence_id);
    if (!s) throw Error("match references unknown sentence id: " + m.sentence_id);
    auto it = first_match.find(m.sentence_id);
    if (it == first_match.end() || m.span.first < matches[it->second].span.first) {
      first_match[m.sentence_id] = i;
    }
  }
  std::vector<std::pair<std::size_t, std::string>> utterances;  // (corpus position, id)
  for (const auto& [id, _] : first_match) utterances.emplace_back(corpus.position(id), id);
  std::sort(utterances.begin(), utterances.end());

  std::map<std::string, std::vector<std::string>> by_triple;
  for (const auto& [pos, id] : utterances) {
    const auto& m = matches[first_match[id]];
    const auto& s = *corpus.find(id);
    auto part = [&](Slot slot) {
      const auto& r = m.slot(slot);
      if (!r) throw Error("AANN match in " + id + " lacks the " + std::string(to_string(slot)) + " slot");
      return text::fold(range_text(s, *r));
    };
    std::string key = part(Slot::kAdjective) + '\t' + part(Slot::kNumeral) + '\t' + part(Slot::kNoun);
    by_triple[key].push_back(id);
  }
  std::vector<std::pair<std::string, std::vector<std::string>>> triples(by_triple.begin(),
                                                                        by_triple.end());
  std::stable_sort(triples.begin(), triples.end(), [](const auto& a, const auto& b) {
    return a.second.size() > b.second.size();
  });

  VariabilitySplit out;
  auto fill_stats = [&]() {
    out.high_stats = {out.high.size(), 0};
    out.low_stats = {out.low.size(), 0};
    for (const auto& [key, ids] : triples) {
      bool in_high = false, in_low = false;
      for (const auto& id : ids) {
        (out.high.count(id) ? in_high : in_low) = true;
      }
      out.high_stats.distinct_triples += in_high;
      out.low_stats.distinct_triples += in_low;
    }
  };

  // Whole triples: the frequent head goes to LOW, the tail to HIGH, always
  // feeding whichever side is currently smaller.
  {
    std::size_t i = 0, j = triples.size();
    std::size_t low_n = 0, high_n = 0;
    while (i < j) {
      if (low_n <= high_n) {
        for (const auto& id : triples[i].second) out.low.insert(id);
        low_n += triples[i++].second.size();
      } else {
        --j;
        for (const auto& id : triples[j].second) out.high.insert(id);
        high_n += triples[j].second.size();
      }
    }
    fill_stats();
    const auto diff = low_n > high_n ? low_n - high_n : high_n - low_n;
    if (diff <= 1 && out.high_stats.distinct_triples >= out.low_stats.distinct_triples) return out;
  }

  // Otherwise fill LOW with the first floor(N/2) utterances in frequency
  // order, dividing the boundary triple at random.
  out.high.clear();
  out.low.clear();
  out.split_triple = true;
  const std::size_t low_target = utterances.size() / 2;
  SeededRng rng(seed);
  for (auto& [key, ids] : triples) {
    const std::size_t room = low_target - out.low.size();
    if (room >= ids.size()) {
      out.low.insert(ids.begin(), ids.end());
    } else if (room == 0) {
      out.high.insert(ids.begin(), ids.end());
    } else {
      std::vector<std::string> shuffled = ids;
      rng.shuffle(std::span<std::string>(shuffled));
      out.low.insert(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(room));
      out.high.insert(shuffled.begin() + static_cast<std::ptrdiff_t>(room), shuffled.end());
    }
  }
  fill_stats();
  return out;
}

inline nlohmann::ordered_json manifest_header_json(const AblationManifest& m) {
  nlohmann::ordered_json h;
  h["record"] = "header";
  h["seed"] = m.seed;
  h["source_token_total"] = m.source_token_total;
  h["result_token_total"] = m.result_token_total;
  h["notes"] = m.notes;
  return h;
}

// First line is the header record; each following line is one operation.
inline void write_manifest_jsonl(std::ostream& out, const AblationManifest& m) {
  out << manifest_header_json(m).dump() << '\n';
  for (const auto& e : m.operations) {
    nlohmann::ordered_json j;
    j["action"] = to_string(e.action);
    j["sentence_id"] = e.sentence_id;
    j["detail"] = e.detail;
    out << j.dump() << '\n';
  }
}

inline AblationManifest read_manifest_jsonl(std::istream& in) {
  AblationManifest m;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    try {
      auto j = nlohmann::ordered_json::parse(line);
      if (!have_header) {
        if (j.value("record", "") != "header") throw ParseError(line_no, "missing manifest header");
        m.seed = j.at("seed").get<std::uint64_t>();
        m.source_token_total = j.at("source_token_total").get<std::uint64_t>();
        m.result_token_total = j.at("result_token_total").get<std::uint64_t>();
        m.notes = j.value("notes", nlohmann::ordered_json::object());
        have_header = true;
        continue;
      }
      ManifestEntry e;
      e.action = parse_manifest_action(j.at("action").get<std::string>());
      e.sentence_id = j.at("sentence_id").get<std::string>();
      e.detail = j.value("detail", nlohmann::ordered_json::object());
      m.operations.push_back(std::move(e));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!have_header) throw ParseError(line_no, "empty manifest");
  return m;
}

}  // namespace aann
