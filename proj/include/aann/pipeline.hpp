// Command-line pipeline: detect, ablate, corrupt, train-ngram, score,
// evaluate and report. Every run writes a config.json echo next to its
// artifacts. Exit codes: 0 success, 1 processing error, 2 usage error.
#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "aann/ablation.hpp"
#include "aann/corpus.hpp"
#include "aann/detector.hpp"
#include "aann/error.hpp"
#include "aann/ngram.hpp"
#include "aann/scoring.hpp"
#include "aann/stimuli.hpp"
#include "aann/variant.hpp"

namespace aann::pipeline {

inline constexpr int kExitOk = 0;
inline constexpr int kExitProcessing = 1;
inline constexpr int kExitUsage = 2;

// Environment variable overriding the default seed.
inline constexpr const char* kSeedEnv = "AANN_SEED";

inline const std::vector<std::string>& condition_names() {
  static const std::vector<std::string> names = {
      "full",          "no-aann",         "anan",          "naan",
      "no-dt-ann",     "no-indef-plural", "no-measure-singular", "no-measure-np",
      "balance",       "control",         "variability-high", "variability-low"};
  return names;
}

struct PipelineConfig {
  std::vector<std::string> corpus_paths;
  std::vector<std::string> kinds{"AANN"};
  std::string condition = "no-aann";
  std::uint64_t seed = 0;
  std::string output_dir;
  bool aann_seen = false;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["corpus"] = corpus_paths;
    j["kinds"] = kinds;
    j["condition"] = condition;
    j["seed"] = seed;
    j["output_dir"] = output_dir;
    j["aann_seen"] = aann_seen;
    return j;
  }
};

inline std::uint64_t default_seed() {
  if (const char* env = std::getenv(kSeedEnv)) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(std::string(kSeedEnv) + " is not an unsigned integer: " + env);
    }
  }
  return 0;
}

inline PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("config " + path + ": " + e.what());
  }
  PipelineConfig c;
  c.seed = default_seed();
  if (j.contains("corpus")) {
    c.corpus_paths = j["corpus"].is_string() ? std::vector<std::string>{j["corpus"].get<std::string>()}
                                             : j["corpus"].get<std::vector<std::string>>();
  }
  if (j.contains("kinds")) c.kinds = j["kinds"].get<std::vector<std::string>>();
  if (j.contains("condition")) c.condition = j["condition"].get<std::string>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("aann_seen")) c.aann_seen = j["aann_seen"].get<bool>();
  return c;
}

namespace detail {

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return in;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

// CoNLL-U by default; ".txt" files are read as one utterance per line.
inline Corpus load_corpora(const std::vector<std::string>& paths) {
  if (paths.empty()) throw Error("no corpus given");
  Corpus all;
  for (const auto& p : paths) {
    auto in = open_in(p);
    std::filesystem::path fp(p);
    const std::string source = fp.stem().string();
    Corpus c = fp.extension() == ".txt" ? read_plain_text(in, source) : ingest_conllu(in, source);
    all = all.empty() ? std::move(c) : concat(all, c);
  }
  return all;
}

inline std::set<PhenomenonKind> parse_kinds(const std::vector<std::string>& names) {
  std::set<PhenomenonKind> out;
  for (const auto& n : names) {
    for (auto part : text::split(n, ',')) {
      if (!part.empty()) out.insert(parse_phenomenon_kind(part));
    }
  }
  return out;
}

inline std::vector<ConstructionMatch> of_kind(const Corpus& c, PhenomenonKind k) {
  return detect_all(c, {k});
}

}  // namespace detail

struct AblateOutcome {
  AblationResult result;
  nlohmann::ordered_json summary;
  std::optional<VariabilitySplit> split;
};

// Expands a named condition into detector + ablation steps, then upsamples
// back to the source token total from utterances outside the ablated
// phenomena and outside AANNs.
inline AblateOutcome run_condition(const Corpus& source, const std::string& condition,
                                   std::uint64_t seed, bool aann_seen) {
  using K = PhenomenonKind;
  const std::uint64_t source_tokens = token_count(source);
  AblateOutcome outcome;
  auto& summary = outcome.summary;
  summary["condition"] = condition;
  summary["aann_seen"] = aann_seen;
  summary["source_sentences"] = source.size();
  summary["source_tokens"] = source_tokens;

  AblationResult current{source, AblationManifest{}};
  current.manifest.seed = seed;
  current.manifest.source_token_total = source_tokens;
  current.manifest.result_token_total = source_tokens;
  int step = 0;
  auto then = [&](AblationResult next, const std::string& name) {
    current.manifest = step == 0 ? [&] {
      AblationManifest m = next.manifest;
      nlohmann::ordered_json notes = nlohmann::ordered_json::object();
      notes[name] = next.manifest.notes;
      m.notes = notes;
      m.seed = seed;
      return m;
    }()
                                 : [&] {
                                     AblationManifest m = current.manifest;
                                     m.operations.insert(m.operations.end(), next.manifest.operations.begin(),
                                                         next.manifest.operations.end());
                                     m.result_token_total = next.manifest.result_token_total;
                                     m.notes[name] = next.manifest.notes;
                                     return m;
                                   }();
    current.corpus = std::move(next.corpus);
    ++step;
  };

  std::set<K> ablated;
  auto has_any = [](const Corpus& c, const std::set<K>& kinds) {
    std::unordered_set<std::string> ids;
    for (const auto& m : detect_all(c, kinds)) ids.insert(m.sentence_id);
    return ids;
  };

  auto remove_kind = [&](const std::set<K>& kinds, const std::string& name) {
    auto matches = detect_all(current.corpus, kinds);
    if (aann_seen && !kinds.count(K::kAann)) {
      // Utterances holding an AANN stay in the corpus.
      const auto keep = has_any(current.corpus, {K::kAann});
      std::erase_if(matches, [&](const ConstructionMatch& m) { return keep.count(m.sentence_id) > 0; });
    }
    then(remove_matches(current.corpus, matches), name);
    ablated.insert(kinds.begin(), kinds.end());
  };

  const bool hypothesis = condition == "no-dt-ann" || condition == "no-indef-plural" ||
                          condition == "no-measure-singular" || condition == "no-measure-np" ||
                          condition == "balance" || condition == "control" ||
                          condition == "no-aann";
  if (hypothesis && (condition == "no-aann" || !aann_seen)) remove_kind({K::kAann}, "remove_aann");

  if (condition == "full") {
    // Unablated corpus.
  } else if (condition == "anan" || condition == "naan") {
    then(replace_with_counterfactual(current.corpus, detail::of_kind(current.corpus, K::kAann),
                                     parse_variant(condition)),
         "counterfactual");
  } else if (condition == "no-dt-ann") {
    remove_kind({K::kDtAnn}, "remove_dt_ann");
  } else if (condition == "no-indef-plural") {
    remove_kind({K::kIndefPluralNp}, "remove_indef_plural_np");
  } else if (condition == "no-measure-singular") {
    remove_kind({K::kMeasureSingular}, "remove_measure_singular");
  } else if (condition == "no-measure-np") {
    remove_kind({K::kIndefPluralNp, K::kMeasureSingular}, "remove_measure_np");
  } else if (condition == "balance" || condition == "control") {
    std::function<bool(const AnnotatedSentence&)> keep = nullptr;
    std::unordered_set<std::string> aann_ids;
    if (aann_seen) {
      aann_ids = has_any(current.corpus, {K::kAann});
      keep = [&](const AnnotatedSentence& s) { return aann_ids.count(s.id) > 0; };
    }
    auto balanced = balance_article_modifiers(current.corpus, seed, keep);
    if (condition == "balance") {
      then(std::move(balanced), "balance");
      ablated.insert(K::kArticleAdjFollower);
    } else {
      const std::uint64_t target = balanced.manifest.source_token_total - balanced.manifest.result_token_total;
      std::set<K> all(kAllKinds.begin(), kAllKinds.end());
      auto protect = detect_all(current.corpus, all);
      then(random_control_removal(current.corpus, protect, target, seed), "control");
      ablated = all;
    }
  } else if (condition == "variability-high" || condition == "variability-low") {
    auto aanns = detail::of_kind(current.corpus, K::kAann);
    auto split = split_by_variability(current.corpus, aanns, seed);
    const auto& drop = condition == "variability-high" ? split.low : split.high;
    std::vector<ConstructionMatch> to_remove;
    for (const auto& m : aanns) {
      if (drop.count(m.sentence_id)) to_remove.push_back(m);
    }
    then(remove_matches(current.corpus, to_remove), "remove_other_subset");
    outcome.split = std::move(split);
  } else if (condition != "no-aann") {
    throw Error("unknown condition: " + condition);
  }

  if (token_count(current.corpus) < source_tokens) {
    std::set<K> excluded_kinds = ablated;
    excluded_kinds.insert(K::kAann);
    const auto excluded_ids = has_any(current.corpus, excluded_kinds);
    then(upsample_to_parity(
             current.corpus,
             [&](const AnnotatedSentence& s) { return excluded_ids.count(s.id) > 0; },
             source_tokens, seed),
         "upsample");
  }
  current.manifest.source_token_total = source_tokens;
  current.manifest.result_token_total = token_count(current.corpus);
  current.manifest.seed = seed;
  summary["result_sentences"] = current.corpus.size();
  summary["result_tokens"] = current.manifest.result_token_total;
  summary["manifest_operations"] = current.manifest.operations.size();
  outcome.result = std::move(current);
  return outcome;
}

// Runs the CLI with the given arguments (argv[0] is the program name).
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  namespace fs = std::filesystem;
  CLI::App app{"aann: detect, ablate and evaluate rare constructions in tagged corpora"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "aann 1.0");

  std::string config_path;
  std::vector<std::string> corpus_paths;
  std::string output_dir;
  std::optional<std::uint64_t> seed_flag;
  std::vector<std::string> kinds;
  std::string condition;
  bool aann_seen = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON pipeline config")->check(CLI::ExistingFile);
    sub->add_option("--out,-o", output_dir, "Output directory");
  };

  auto* detect_cmd = app.add_subcommand("detect", "Detect constructions and related phenomena");
  add_common(detect_cmd);
  detect_cmd->add_option("--corpus,-c", corpus_paths, "CoNLL-U (or .txt) corpus files");
  detect_cmd->add_option("--kinds,-k", kinds,
                         "Phenomenon kinds: AANN, DT_ANN, INDEF_PLURAL_NP, MEASURE_SINGULAR, "
                         "ARTICLE_ADJ_FOLLOWER, ARTICLE_NUM_FOLLOWER")
      ->delimiter(',');

  auto* ablate_cmd = app.add_subcommand("ablate", "Produce an ablated or counterfactual corpus");
  add_common(ablate_cmd);
  ablate_cmd->add_option("--corpus,-c", corpus_paths, "CoNLL-U (or .txt) corpus files");
  ablate_cmd->add_option("--condition", condition, "Condition preset")
      ->check(CLI::IsMember(condition_names()));
  ablate_cmd->add_option("--seed", seed_flag, "Sampling seed (default: $AANN_SEED or 0)");
  ablate_cmd->add_flag("--aann-seen", aann_seen, "Keep AANN utterances while ablating a phenomenon");

  std::string stimuli_path, variant_name = "AANN";
  std::optional<double> threshold;
  auto* corrupt_cmd = app.add_subcommand("corrupt", "Build an evaluation suite from stimuli");
  add_common(corrupt_cmd);
  corrupt_cmd->add_option("--stimuli,-s", stimuli_path, "Stimulus CSV or JSONL")->required();
  corrupt_cmd->add_option("--variant", variant_name, "AANN, ANAN or NAAN")
      ->check(CLI::IsMember({"AANN", "ANAN", "NAAN"}, CLI::ignore_case));
  corrupt_cmd->add_option("--threshold", threshold, "Keep items rated strictly above this");
  corrupt_cmd->add_option("--corpus,-c", corpus_paths, "Drop items occurring verbatim in these corpora");

  int order = 4;
  double alpha = 1.0;
  auto* train_cmd = app.add_subcommand("train-ngram", "Train n-gram and unigram models");
  add_common(train_cmd);
  train_cmd->add_option("--corpus,-c", corpus_paths, "CoNLL-U (or .txt) corpus files");
  train_cmd->add_option("--order", order, "n-gram order")->check(CLI::Range(2, 4));
  train_cmd->add_option("--alpha", alpha, "Unigram additive smoothing")->check(CLI::NonNegativeNumber);

  std::string suite_path, unigram_path, logprobs_path, ngram_path;
  auto* score_cmd = app.add_subcommand("score", "Compute SLOR for every variant of every item");
  add_common(score_cmd);
  score_cmd->add_option("--suite", suite_path, "Suite JSONL from `corrupt`")->required();
  score_cmd->add_option("--unigram", unigram_path, "Unigram TSV")->required();
  auto* lp_opt = score_cmd->add_option("--logprobs", logprobs_path, "External log-prob JSONL");
  auto* ng_opt = score_cmd->add_option("--ngram", ngram_path, "ARPA model to score with");
  lp_opt->excludes(ng_opt);

  std::string scores_path;
  std::string condition_label = "default";
  bool literal_ratio = false;
  std::string metric_name = "slor";
  auto* eval_cmd = app.add_subcommand("evaluate", "Accuracy and mean SLOR of scored items");
  add_common(eval_cmd);
  eval_cmd->add_option("--scores", scores_path, "Scores JSONL from `score`")->required();
  eval_cmd->add_option("--label", condition_label, "Condition label for the report");
  eval_cmd->add_flag("--literal-ratio", literal_ratio, "Compare SLOR ratios instead of differences");
  eval_cmd->add_option("--metric", metric_name, "slor or logprob")->check(CLI::IsMember({"slor", "logprob"}));

  std::vector<std::string> report_paths;
  auto* report_cmd = app.add_subcommand("report", "Collect evaluation reports into one TSV");
  add_common(report_cmd);
  report_cmd->add_option("--reports", report_paths, "report.json files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    PipelineConfig cfg;
    cfg.seed = default_seed();
    if (!config_path.empty()) cfg = load_config(config_path);
    if (!corpus_paths.empty()) cfg.corpus_paths = corpus_paths;
    if (!kinds.empty()) cfg.kinds = kinds;
    if (!condition.empty()) cfg.condition = condition;
    if (seed_flag) cfg.seed = *seed_flag;
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    if (aann_seen) cfg.aann_seen = true;
    if (cfg.output_dir.empty()) {
      err << "error: an output directory is required (--out or config output_dir)\n";
      return kExitUsage;
    }
    const auto& names = condition_names();
    if (std::find(names.begin(), names.end(), cfg.condition) == names.end()) {
      err << "error: unknown condition " << cfg.condition << '\n';
      return kExitUsage;
    }
    std::set<PhenomenonKind> kind_set;
    try {
      kind_set = detail::parse_kinds(cfg.kinds);
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    }

    const fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    nlohmann::ordered_json echo = cfg.to_json();

    if (*detect_cmd) {
      echo["subcommand"] = "detect";
      Corpus corpus = detail::load_corpora(cfg.corpus_paths);
      auto matches = detect_all(corpus, kind_set);
      {
        auto f = detail::open_out(dir / "matches.jsonl");
        write_matches_jsonl(f, corpus, matches);
      }
      nlohmann::ordered_json summary;
      summary["sentences"] = corpus.size();
      summary["tokens"] = token_count(corpus);
      nlohmann::ordered_json counts = nlohmann::ordered_json::object();
      for (auto k : kind_set) counts[std::string(to_string(k))] = 0;
      for (const auto& m : matches) counts[std::string(to_string(m.kind))] = counts[std::string(to_string(m.kind))].get<std::size_t>() + 1;
      summary["matches"] = counts;
      auto fc = count_article_modifier_followers(corpus);
      summary["article_followers"] = {{"adj", fc.adj}, {"num", fc.num}};
      detail::write_json(dir / "summary.json", summary);
      out << matches.size() << " matches\n";
    } else if (*ablate_cmd) {
      echo["subcommand"] = "ablate";
      Corpus corpus = detail::load_corpora(cfg.corpus_paths);
      auto outcome = run_condition(corpus, cfg.condition, cfg.seed, cfg.aann_seen);
      {
        auto f = detail::open_out(dir / "corpus.conllu");
        write_conllu(f, outcome.result.corpus);
      }
      {
        auto f = detail::open_out(dir / "corpus.txt");
        write_plain_text(f, outcome.result.corpus);
      }
      {
        auto f = detail::open_out(dir / "manifest.jsonl");
        write_manifest_jsonl(f, outcome.result.manifest);
      }
      if (outcome.split) {
        nlohmann::ordered_json sj;
        sj["high"] = outcome.split->high;
        sj["low"] = outcome.split->low;
        sj["high_distinct_triples"] = outcome.split->high_stats.distinct_triples;
        sj["low_distinct_triples"] = outcome.split->low_stats.distinct_triples;
        sj["split_triple"] = outcome.split->split_triple;
        detail::write_json(dir / "split.json", sj);
      }
      detail::write_json(dir / "summary.json", outcome.summary);
      out << outcome.result.corpus.size() << " sentences, " << token_count(outcome.result.corpus)
          << " tokens\n";
    } else if (*corrupt_cmd) {
      echo["subcommand"] = "corrupt";
      echo["stimuli"] = stimuli_path;
      echo["variant"] = variant_name;
      if (threshold) echo["threshold"] = *threshold;
      auto in = detail::open_in(stimuli_path);
      auto items = load_stimuli(in);
      nlohmann::ordered_json summary;
      summary["loaded"] = items.size();
      if (threshold) {
        items = filter_acceptable(items, *threshold);
        summary["above_threshold"] = items.size();
      }
      if (!cfg.corpus_paths.empty()) {
        items = remove_training_overlap(items, detail::load_corpora(cfg.corpus_paths));
        summary["after_overlap_removal"] = items.size();
      }
      const Variant v = parse_variant(variant_name);
      for (auto& it : items) it = derive_variant(std::move(it), v);
      {
        auto f = detail::open_out(dir / "suite.jsonl");
        write_suite_jsonl(f, items);
      }
      summary["items"] = items.size();
      detail::write_json(dir / "summary.json", summary);
      out << items.size() << " items\n";
    } else if (*train_cmd) {
      echo["subcommand"] = "train-ngram";
      echo["order"] = order;
      echo["alpha"] = alpha;
      Corpus corpus = detail::load_corpora(cfg.corpus_paths);
      auto utterances = ngram_utterances(corpus);
      auto model = train_ngram(utterances, order);
      auto stream = flatten(utterances);
      auto unigram = train_unigram(stream, alpha);
      {
        auto f = detail::open_out(dir / "ngram.arpa");
        write_arpa(f, model);
      }
      {
        auto f = detail::open_out(dir / "unigram.tsv");
        write_unigram_tsv(f, unigram);
      }
      nlohmann::ordered_json summary;
      summary["order"] = order;
      summary["tokens"] = stream.size();
      summary["vocabulary"] = model.words().size();
      nlohmann::ordered_json ds = nlohmann::ordered_json::array();
      for (const auto& d : model.discounts()) {
        ds.push_back({{"d1", d.d[0]}, {"d2", d.d[1]}, {"d3+", d.d[2]}, {"fallback", d.fallback}});
      }
      summary["discounts"] = ds;
      summary["unigram_alpha"] = alpha;
      detail::write_json(dir / "summary.json", summary);
      out << "trained order-" << order << " model over " << stream.size() << " tokens\n";
    } else if (*score_cmd) {
      echo["subcommand"] = "score";
      echo["suite"] = suite_path;
      echo["unigram"] = unigram_path;
      if (logprobs_path.empty() && ngram_path.empty()) {
        err << "error: score needs --logprobs or --ngram\n";
        return kExitUsage;
      }
      auto sin = detail::open_in(suite_path);
      auto suite = load_stimuli(sin);
      for (auto& it : suite) {
        if (it.corruptions.size() != kAllCorruptions.size()) it = generate_corruptions(std::move(it));
      }
      auto uin = detail::open_in(unigram_path);
      auto unigram = read_unigram_tsv(uin);
      LogProbSource source;
      if (!ngram_path.empty()) {
        echo["ngram"] = ngram_path;
        auto nin = detail::open_in(ngram_path);
        auto model = read_arpa(nin);
        source = ngram_logprobs(suite, model);
        auto f = detail::open_out(dir / "logprobs.jsonl");
        write_logprobs_jsonl(f, source);
      } else {
        echo["logprobs"] = logprobs_path;
        auto lin = detail::open_in(logprobs_path);
        std::vector<std::string> warnings;
        source = import_external_logprobs(lin, &warnings);
        for (const auto& w : warnings) err << "warning: " << w << '\n';
      }
      auto scores = score_suite(suite, source, unigram);
      auto f = detail::open_out(dir / "scores.jsonl");
      write_scores_jsonl(f, scores);
      out << scores.size() << " items scored\n";
    } else if (*eval_cmd) {
      echo["subcommand"] = "evaluate";
      echo["scores"] = scores_path;
      echo["label"] = condition_label;
      echo["literal_ratio"] = literal_ratio;
      echo["metric"] = metric_name;
      auto in = detail::open_in(scores_path);
      auto records = read_scores_jsonl(in);
      EvaluationOptions opts;
      opts.comparison = literal_ratio ? Comparison::kLiteralRatio : Comparison::kDifference;
      opts.metric = metric_name == "logprob" ? Metric::kLogprob : Metric::kSlor;
      auto rep = evaluate_accuracy(records, opts);
      detail::write_json(dir / "report.json", report_json(rep, condition_label));
      auto f = detail::open_out(dir / "report.tsv");
      f << kReportTsvHeader << '\n' << report_tsv_row(rep, condition_label) << '\n';
      out << "accuracy " << rep.accuracy << " over " << rep.n_items << " items\n";
    } else if (*report_cmd) {
      echo["subcommand"] = "report";
      echo["reports"] = report_paths;
      auto f = detail::open_out(dir / "table.tsv");
      f << kReportTsvHeader << '\n';
      for (const auto& p : report_paths) {
        auto in = detail::open_in(p);
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
          throw Error(p + ": " + e.what());
        }
        EvaluationReport rep;
        rep.mean_wellformed_slor = j.at("mean_wellformed_slor").get<double>();
        rep.accuracy = j.at("accuracy").get<double>();
        rep.n_items = j.at("n_items").get<std::size_t>();
        f << report_tsv_row(rep, j.at("condition").get<std::string>()) << '\n';
      }
      out << report_paths.size() << " reports collected\n";
    }
    detail::write_json(dir / "config.json", echo);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitProcessing;
  }
  return kExitOk;
}

}  // namespace aann::pipeline
