// SLOR scoring of stimulus suites and the all-corruptions accuracy.
//
//   slor(C | prefix) = (ln p_model(C | prefix) - ln p_unigram(C)) / |C|
//
// An item counts as correct when its well-formed construction outscores each
// of its four corruptions.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "aann/error.hpp"
#include "aann/ngram.hpp"
#include "aann/stimuli.hpp"
#include "aann/text.hpp"

namespace aann {

enum class VariantKey { kWellformed = 0, kOrderSwap, kNoArticle, kNoModifier, kNoNumeral };

inline constexpr std::array<VariantKey, 5> kAllVariantKeys = {
    VariantKey::kWellformed, VariantKey::kOrderSwap, VariantKey::kNoArticle,
    VariantKey::kNoModifier, VariantKey::kNoNumeral};

inline std::string_view to_string(VariantKey k) {
  switch (k) {
    case VariantKey::kWellformed: return "wellformed";
    case VariantKey::kOrderSwap: return "order_swap";
    case VariantKey::kNoArticle: return "no_article";
    case VariantKey::kNoModifier: return "no_modifier";
    case VariantKey::kNoNumeral: return "no_numeral";
  }
  return "?";
}

inline VariantKey parse_variant_key(std::string_view s) {
  for (auto k : kAllVariantKeys) {
    if (to_string(k) == s) return k;
  }
  throw Error("unknown variant key: " + std::string(s));
}

inline VariantKey variant_key(Corruption c) {
  switch (c) {
    case Corruption::kOrderSwap: return VariantKey::kOrderSwap;
    case Corruption::kNoArticle: return VariantKey::kNoArticle;
    case Corruption::kNoModifier: return VariantKey::kNoModifier;
    case Corruption::kNoNumeral: return VariantKey::kNoNumeral;
  }
  return VariantKey::kWellformed;
}

// The token sequence of one variant of an item.
inline std::vector<std::string> variant_tokens(const StimulusItem& item, VariantKey k) {
  if (k == VariantKey::kWellformed) return well_formed_tokens(item);
  for (auto c : kAllCorruptions) {
    if (variant_key(c) == k) {
      auto it = item.corruptions.find(c);
      if (it == item.corruptions.end()) {
        throw Error("item " + item.id + " has no " + std::string(to_string(c)) + " corruption");
      }
      return it->second;
    }
  }
  return {};
}

struct LogProbRecord {
  std::string item_id;
  VariantKey variant_key = VariantKey::kWellformed;
  std::vector<std::string> tokens;
  std::vector<double> token_logprobs;
  std::string tokenizer_tag;
  // Set by producers whose span alignment was approximate.
  bool flagged = false;

  double total() const {
    double s = 0;
    for (double v : token_logprobs) s += v;
    return s;
  }
};

// Log-prob records indexed by (item_id, variant_key).
class LogProbSource {
 public:
  using Key = std::pair<std::string, VariantKey>;

  // Returns false when the key was already present; the new record wins.
  bool put(LogProbRecord r) {
    Key k{r.item_id, r.variant_key};
    auto [it, inserted] = records_.insert_or_assign(std::move(k), std::move(r));
    return inserted;
  }
  const LogProbRecord* find(const std::string& item_id, VariantKey k) const {
    auto it = records_.find({item_id, k});
    return it == records_.end() ? nullptr : &it->second;
  }
  std::size_t size() const { return records_.size(); }
  const std::map<Key, LogProbRecord>& records() const { return records_; }

 private:
  std::map<Key, LogProbRecord> records_;
};

inline nlohmann::ordered_json logprob_record_json(const LogProbRecord& r) {
  nlohmann::ordered_json j;
  j["item_id"] = r.item_id;
  j["variant_key"] = to_string(r.variant_key);
  j["tokens"] = r.tokens;
  j["token_logprobs"] = r.token_logprobs;
  j["tokenizer_tag"] = r.tokenizer_tag;
  if (r.flagged) j["flagged"] = true;
  return j;
}

inline void write_logprobs_jsonl(std::ostream& out, const LogProbSource& src) {
  for (const auto& [k, r] : src.records()) out << logprob_record_json(r).dump() << '\n';
}

// Reads the log-prob exchange format. Duplicate keys keep the last record
// and add a message to `warnings`.
inline LogProbSource import_external_logprobs(std::istream& in,
                                              std::vector<std::string>* warnings = nullptr) {
  LogProbSource src;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    LogProbRecord r;
    try {
      auto j = nlohmann::json::parse(line);
      r.item_id = j.at("item_id").is_string() ? j.at("item_id").get<std::string>()
                                               : j.at("item_id").dump();
      r.variant_key = parse_variant_key(j.at("variant_key").get<std::string>());
      for (const auto& t : j.at("tokens")) {
        r.tokens.push_back(t.is_string() ? t.get<std::string>() : t.dump());
      }
      r.token_logprobs = j.at("token_logprobs").get<std::vector<double>>();
      r.tokenizer_tag = j.at("tokenizer_tag").get<std::string>();
      r.flagged = j.value("flagged", false);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
    if (r.tokens.size() != r.token_logprobs.size()) {
      throw ParseError(line_no, std::to_string(r.tokens.size()) + " tokens but " +
                                    std::to_string(r.token_logprobs.size()) + " log-probs");
    }
    for (double v : r.token_logprobs) {
      if (!std::isfinite(v)) throw ParseError(line_no, "non-finite log-prob");
    }
    std::string item = r.item_id;
    VariantKey key = r.variant_key;
    if (!src.put(std::move(r)) && warnings) {
      warnings->push_back("line " + std::to_string(line_no) + ": duplicate record for (" + item +
                          ", " + std::string(to_string(key)) + "), keeping the last one");
    }
  }
  return src;
}

inline double slor(double logp_model, double logp_unigram, std::size_t length) {
  if (length == 0) throw Error("SLOR needs a construction of at least one token");
  if (!std::isfinite(logp_model) || !std::isfinite(logp_unigram)) {
    throw Error("SLOR needs finite log-probabilities");
  }
  return (logp_model - logp_unigram) / static_cast<double>(length);
}

struct ScoreRecord {
  std::string item_id;
  std::array<std::optional<double>, 5> slor;
  std::array<std::size_t, 5> construction_length{};
  // Summed model log-prob of each variant, for raw log-prob comparisons.
  std::array<std::optional<double>, 5> model_logprob;

  std::optional<double>& at(VariantKey k) { return slor[static_cast<int>(k)]; }
  const std::optional<double>& at(VariantKey k) const { return slor[static_cast<int>(k)]; }
};

// Scores every variant of every item over its construction span only. The
// unigram model must share the log-prob records' tokenization.
inline std::vector<ScoreRecord> score_suite(const std::vector<StimulusItem>& suite,
                                            const LogProbSource& logprobs,
                                            const UnigramModel& unigram) {
  std::vector<std::string> missing;
  for (const auto& item : suite) {
    for (auto k : kAllVariantKeys) {
      const auto* r = logprobs.find(item.id, k);
      if (!r) {
        missing.push_back("(" + item.id + ", " + std::string(to_string(k)) + ")");
      } else if (r->tokenizer_tag != unigram.tokenizer_tag()) {
        throw Error("tokenizer mismatch for (" + item.id + ", " + std::string(to_string(k)) +
                    "): records use '" + r->tokenizer_tag + "', unigram model uses '" +
                    unigram.tokenizer_tag() + "'");
      }
    }
  }
  if (!missing.empty()) throw Error("missing log-prob records: " + text::join(missing, ", "));

  std::vector<ScoreRecord> out;
  out.reserve(suite.size());
  for (const auto& item : suite) {
    ScoreRecord rec;
    rec.item_id = item.id;
    for (auto k : kAllVariantKeys) {
      const auto& r = *logprobs.find(item.id, k);
      const int i = static_cast<int>(k);
      rec.construction_length[i] = r.tokens.size();
      rec.model_logprob[i] = r.total();
      rec.slor[i] = slor(r.total(), logprob_sequence(unigram, r.tokens), r.tokens.size());
    }
    out.push_back(std::move(rec));
  }
  return out;
}

enum class Comparison {
  // slor(wellformed) > slor(corruption); well defined for negative scores.
  kDifference,
  // slor(wellformed) / slor(corruption) > 1, exactly as the ratio is written.
  kLiteralRatio,
};

enum class Metric { kSlor, kLogprob };

struct EvaluationOptions {
  Comparison comparison = Comparison::kDifference;
  Metric metric = Metric::kSlor;
};

struct EvaluationReport {
  std::size_t n_items = 0;
  std::size_t n_correct = 0;
  double accuracy = 0.0;
  double mean_wellformed_slor = 0.0;
  // Fraction of items whose well-formed score beats each corruption.
  std::array<double, 4> win_rate{};
};

inline EvaluationReport evaluate_accuracy(const std::vector<ScoreRecord>& records,
                                          EvaluationOptions options = {}) {
  if (records.empty()) throw Error("cannot evaluate an empty set of score records");
  EvaluationReport rep;
  rep.n_items = records.size();
  std::array<std::size_t, 4> wins{};
  double slor_sum = 0;
  for (const auto& r : records) {
    const auto& values = options.metric == Metric::kSlor ? r.slor : r.model_logprob;
    for (auto k : kAllVariantKeys) {
      const auto& v = values[static_cast<int>(k)];
      if (!v || !std::isfinite(*v)) {
        throw Error("score record " + r.item_id + " lacks a finite " +
                    std::string(to_string(k)) + " score");
      }
    }
    const double good = *values[0];
    bool correct = true;
    for (int c = 0; c < 4; ++c) {
      const double bad = *values[c + 1];
      const bool win = options.comparison == Comparison::kDifference ? good > bad : good / bad > 1.0;
      wins[c] += win;
      correct = correct && win;
    }
    rep.n_correct += correct;
    if (!r.slor[0]) throw Error("score record " + r.item_id + " lacks a wellformed SLOR");
    slor_sum += *r.slor[0];
  }
  rep.accuracy = static_cast<double>(rep.n_correct) / static_cast<double>(rep.n_items);
  rep.mean_wellformed_slor = slor_sum / static_cast<double>(rep.n_items);
  for (int c = 0; c < 4; ++c) {
    rep.win_rate[c] = static_cast<double>(wins[c]) / static_cast<double>(rep.n_items);
  }
  return rep;
}

// Internal n-gram route: log-probs of every variant of every item given
// "<s> prefix", under ngram_tokenize.
inline LogProbSource ngram_logprobs(const std::vector<StimulusItem>& suite, const NGramModel& model) {
  LogProbSource src;
  for (const auto& item : suite) {
    std::vector<std::string> context{std::string(kBos)};
    for (auto& t : ngram_tokenize(item.prefix)) context.push_back(std::move(t));
    for (auto k : kAllVariantKeys) {
      LogProbRecord r;
      r.item_id = item.id;
      r.variant_key = k;
      r.tokenizer_tag = std::string(kNgramTokenizerTag);
      r.tokens = ngram_tokenize(text::join(variant_tokens(item, k)));
      std::vector<std::string> running = context;
      for (const auto& t : r.tokens) {
        r.token_logprobs.push_back(model.logprob(t, running));
        running.push_back(t);
      }
      src.put(std::move(r));
    }
  }
  return src;
}

inline nlohmann::ordered_json score_record_json(const ScoreRecord& r) {
  nlohmann::ordered_json j;
  j["item_id"] = r.item_id;
  nlohmann::ordered_json sl = nlohmann::ordered_json::object();
  nlohmann::ordered_json len = nlohmann::ordered_json::object();
  nlohmann::ordered_json lp = nlohmann::ordered_json::object();
  for (auto k : kAllVariantKeys) {
    const int i = static_cast<int>(k);
    if (r.slor[i]) sl[std::string(to_string(k))] = *r.slor[i];
    len[std::string(to_string(k))] = r.construction_length[i];
    if (r.model_logprob[i]) lp[std::string(to_string(k))] = *r.model_logprob[i];
  }
  j["slor"] = sl;
  j["construction_length"] = len;
  j["model_logprob"] = lp;
  return j;
}

inline void write_scores_jsonl(std::ostream& out, const std::vector<ScoreRecord>& records) {
  for (const auto& r : records) out << score_record_json(r).dump() << '\n';
}

inline std::vector<ScoreRecord> read_scores_jsonl(std::istream& in) {
  std::vector<ScoreRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      ScoreRecord r;
      r.item_id = j.at("item_id").get<std::string>();
      for (auto& [k, v] : j.at("slor").items()) r.slor[static_cast<int>(parse_variant_key(k))] = v.get<double>();
      if (j.contains("construction_length")) {
        for (auto& [k, v] : j["construction_length"].items()) {
          r.construction_length[static_cast<int>(parse_variant_key(k))] = v.get<std::size_t>();
        }
      }
      if (j.contains("model_logprob")) {
        for (auto& [k, v] : j["model_logprob"].items()) {
          r.model_logprob[static_cast<int>(parse_variant_key(k))] = v.get<double>();
        }
      }
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return out;
}

inline nlohmann::ordered_json report_json(const EvaluationReport& rep, const std::string& condition) {
  nlohmann::ordered_json j;
  j["condition"] = condition;
  j["n_items"] = rep.n_items;
  j["n_correct"] = rep.n_correct;
  j["accuracy"] = rep.accuracy;
  j["mean_wellformed_slor"] = rep.mean_wellformed_slor;
  nlohmann::ordered_json w = nlohmann::ordered_json::object();
  for (int c = 0; c < 4; ++c) w[std::string(to_string(kAllCorruptions[c]))] = rep.win_rate[c];
  j["win_rate"] = w;
  return j;
}

inline constexpr std::string_view kReportTsvHeader = "condition\tmean_slor\taccuracy\tn_items";

inline std::string report_tsv_row(const EvaluationReport& rep, const std::string& condition) {
  return condition + '\t' + format_double(rep.mean_wellformed_slor) + '\t' +
         format_double(rep.accuracy) + '\t' + std::to_string(rep.n_items);
}

}  // namespace aann
