// Unigram estimator and interpolated modified Kneser-Ney n-gram models.
//
// All log-probabilities are natural logs. N-gram models are stored in the
// backoff form used by ARPA files: every observed n-gram keeps its fully
// interpolated probability and every observed context keeps its backoff
// weight, so p(w | h) is either a table hit or backoff(h) * p(w | h').
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "aann/corpus.hpp"
#include "aann/error.hpp"
#include "aann/text.hpp"

namespace aann {

inline constexpr std::string_view kUnk = "<unk>";
inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";
// Tokenization produced by ngram_tokenize.
inline constexpr std::string_view kNgramTokenizerTag = "ws-lower";

// Lower-cases and splits on whitespace after separating punctuation marks
// into their own tokens.
inline std::vector<std::string> ngram_tokenize(std::string_view line) {
  static constexpr std::string_view kPunct = ".,!?;:\"()[]{}";
  std::string spaced;
  spaced.reserve(line.size() + 8);
  for (char c : line) {
    if (kPunct.find(c) != std::string_view::npos) {
      spaced += ' ';
      spaced += c;
      spaced += ' ';
    } else {
      spaced += c;
    }
  }
  auto out = text::split_ws(spaced);
  for (auto& t : out) t = text::fold(t);
  return out;
}

// Corpus utterances under ngram_tokenize, one token list per sentence.
inline std::vector<std::vector<std::string>> ngram_utterances(const Corpus& corpus) {
  std::vector<std::vector<std::string>> out;
  out.reserve(corpus.size());
  for (const auto& s : corpus.sentences()) {
    std::vector<std::string> toks;
    for (const auto& t : s.tokens) {
      for (auto& piece : ngram_tokenize(t.surface)) toks.push_back(std::move(piece));
    }
    if (!toks.empty()) out.push_back(std::move(toks));
  }
  return out;
}

inline std::vector<std::string> flatten(const std::vector<std::vector<std::string>>& utterances) {
  std::vector<std::string> out;
  for (const auto& u : utterances) out.insert(out.end(), u.begin(), u.end());
  return out;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Unigram

class UnigramModel {
 public:
  UnigramModel() = default;
  UnigramModel(std::map<std::string, std::uint64_t> counts, double alpha, std::string tokenizer_tag)
      : counts_(std::move(counts)), alpha_(alpha), tokenizer_tag_(std::move(tokenizer_tag)) {
    if (alpha_ < 0) throw Error("unigram smoothing alpha must be non-negative");
    for (const auto& [w, c] : counts_) total_ += c;
  }

  // (count(w) + alpha) / (total + alpha * (|V| + 1)); unseen words share the
  // unknown bucket's alpha mass.
  double prob(const std::string& w) const {
    auto it = counts_.find(w);
    const double c = it == counts_.end() ? 0.0 : static_cast<double>(it->second);
    return (c + alpha_) / denominator();
  }
  double unk_prob() const { return alpha_ / denominator(); }
  double logprob(const std::string& w) const { return std::log(prob(w)); }

  const std::map<std::string, std::uint64_t>& vocabulary() const { return counts_; }
  std::uint64_t total() const { return total_; }
  double alpha() const { return alpha_; }
  const std::string& tokenizer_tag() const { return tokenizer_tag_; }

 private:
  double denominator() const {
    return static_cast<double>(total_) + alpha_ * static_cast<double>(counts_.size() + 1);
  }

  std::map<std::string, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
  double alpha_ = 1.0;
  std::string tokenizer_tag_ = std::string(kNgramTokenizerTag);
};

inline UnigramModel train_unigram(std::span<const std::string> tokens, double alpha,
                                  std::string tokenizer_tag = std::string(kNgramTokenizerTag)) {
  if (tokens.empty()) throw Error("cannot train a unigram model on an empty token stream");
  if (alpha < 0) throw Error("unigram smoothing alpha must be non-negative");
  std::map<std::string, std::uint64_t> counts;
  for (const auto& t : tokens) ++counts[t];
  return UnigramModel(std::move(counts), alpha, std::move(tokenizer_tag));
}

inline double logprob_sequence(const UnigramModel& model, std::span<const std::string> tokens,
                               std::span<const std::string> /*context*/ = {}) {
  double sum = 0;
  for (const auto& t : tokens) sum += model.logprob(t);
  return sum;
}

// Sorted TSV: a "#" header line, then token<TAB>count per line.
inline void write_unigram_tsv(std::ostream& out, const UnigramModel& m) {
  out << "# aann-unigram v1\talpha=" << format_double(m.alpha())
      << "\ttokenizer=" << m.tokenizer_tag() << '\n';
  for (const auto& [w, c] : m.vocabulary()) out << w << '\t' << c << '\n';
}

inline UnigramModel read_unigram_tsv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  double alpha = 1.0;
  std::string tag(kNgramTokenizerTag);
  std::map<std::string, std::uint64_t> counts;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      for (auto part : text::split(line, '\t')) {
        if (part.substr(0, 6) == "alpha=") alpha = std::stod(std::string(part.substr(6)));
        if (part.substr(0, 10) == "tokenizer=") tag = std::string(part.substr(10));
      }
      continue;
    }
    auto cols = text::split(line, '\t');
    if (cols.size() != 2) throw ParseError(line_no, "expected token<TAB>count");
    std::uint64_t c = 0;
    auto [p, ec] = std::from_chars(cols[1].data(), cols[1].data() + cols[1].size(), c);
    if (ec != std::errc() || p != cols[1].data() + cols[1].size()) {
      throw ParseError(line_no, "count is not a non-negative integer");
    }
    counts[std::string(cols[0])] += c;
  }
  return UnigramModel(std::move(counts), alpha, std::move(tag));
}

// ---------------------------------------------------------------------------
// Modified Kneser-Ney

namespace detail {

using WordId = std::uint32_t;
using Gram = std::vector<WordId>;

struct GramHash {
  std::size_t operator()(const Gram& g) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (WordId w : g) {
      h ^= w;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace detail

struct DiscountSet {
  std::array<double, 3> d{0.75, 0.75, 0.75};  // for counts 1, 2, 3+
  bool fallback = false;

  double for_count(std::uint64_t c) const { return c == 0 ? 0.0 : d[std::min<std::uint64_t>(c, 3) - 1]; }
};

class NGramModel {
 public:
  struct Entry {
    double logprob = 0.0;  // natural log; -inf for <s>
    double backoff = 0.0;  // natural log of the context's interpolation weight
  };

  NGramModel() = default;

  int order() const { return order_; }
  const std::vector<std::string>& words() const { return words_; }
  // Discounts per order (index 0 is unigrams).
  const std::vector<DiscountSet>& discounts() const { return discounts_; }

  detail::WordId id(std::string_view w) const {
    auto it = ids_.find(std::string(w));
    return it == ids_.end() ? kUnkId : it->second;
  }

  // ln p(word | context), using at most order-1 trailing context words.
  double logprob(std::string_view word, std::span<const std::string> context) const {
    detail::Gram ctx;
    const std::size_t keep = std::min<std::size_t>(context.size(), static_cast<std::size_t>(order_ - 1));
    for (std::size_t i = context.size() - keep; i < context.size(); ++i) ctx.push_back(id(context[i]));
    return logprob_ids(id(word), ctx);
  }

  double logprob_ids(detail::WordId w, std::span<const detail::WordId> ctx) const {
    double bo = 0.0;
    for (std::size_t start = 0; start <= ctx.size(); ++start) {
      std::span<const detail::WordId> h = ctx.subspan(start);
      detail::Gram g(h.begin(), h.end());
      g.push_back(w);
      const auto& table = tables_[g.size() - 1];
      auto it = table.find(g);
      if (it != table.end()) return bo + it->second.logprob;
      if (!h.empty()) {
        detail::Gram hg(h.begin(), h.end());
        const auto& ctable = tables_[hg.size() - 1];
        auto ct = ctable.find(hg);
        if (ct != ctable.end()) bo += ct->second.backoff;
      }
    }
    // Only reachable for ids outside the vocabulary table.
    return bo + tables_[0].at(detail::Gram{kUnkId}).logprob;
  }

  // Observed n-grams of the given order (1-based).
  const std::unordered_map<detail::Gram, Entry, detail::GramHash>& table(int n) const {
    return tables_.at(static_cast<std::size_t>(n - 1));
  }

  // Words that can be predicted: the vocabulary without <s>.
  std::vector<detail::WordId> predictable() const {
    std::vector<detail::WordId> out;
    for (detail::WordId i = 0; i < words_.size(); ++i) {
      if (i != kBosId) out.push_back(i);
    }
    return out;
  }

  static constexpr detail::WordId kUnkId = 0;
  static constexpr detail::WordId kBosId = 1;
  static constexpr detail::WordId kEosId = 2;

 private:
  friend NGramModel train_ngram(const std::vector<std::vector<std::string>>&, int);
  friend NGramModel read_arpa(std::istream&);

  detail::WordId intern(const std::string& w) {
    auto [it, inserted] = ids_.emplace(w, static_cast<detail::WordId>(words_.size()));
    if (inserted) words_.push_back(w);
    return it->second;
  }
  void init_vocab() {
    words_.clear();
    ids_.clear();
    intern(std::string(kUnk));
    intern(std::string(kBos));
    intern(std::string(kEos));
  }

  int order_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, detail::WordId> ids_;
  std::vector<std::unordered_map<detail::Gram, Entry, detail::GramHash>> tables_;
  std::vector<DiscountSet> discounts_;
};

// Closed-form modified Kneser-Ney discounts from count-of-counts t1..t4 of
// adjusted counts. Falls back to 0.75 when any count-of-count is zero or a
// discount leaves its valid range.
inline DiscountSet kn_discounts(const std::array<std::uint64_t, 4>& t) {
  DiscountSet ds;
  if (t[0] == 0 || t[1] == 0 || t[2] == 0 || t[3] == 0) {
    ds.fallback = true;
    return ds;
  }
  const double t1 = static_cast<double>(t[0]), t2 = static_cast<double>(t[1]),
               t3 = static_cast<double>(t[2]), t4 = static_cast<double>(t[3]);
  const double y = t1 / (t1 + 2.0 * t2);
  std::array<double, 3> d{1.0 - 2.0 * y * t2 / t1, 2.0 - 3.0 * y * t3 / t2, 3.0 - 4.0 * y * t4 / t3};
  for (int k = 0; k < 3; ++k) {
    if (!(d[k] > 0.0 && d[k] < k + 1.0)) {
      ds.fallback = true;
      return ds;
    }
  }
  ds.d = d;
  return ds;
}

// Trains an interpolated modified Kneser-Ney model. Each utterance is padded
// with <s> and </s>. Highest-order n-grams and n-grams starting with <s> use
// raw counts; other lower-order n-grams use continuation counts.
inline NGramModel train_ngram(const std::vector<std::vector<std::string>>& utterances, int order) {
  using detail::Gram;
  using detail::WordId;
  if (order < 2 || order > 4) throw Error("n-gram order must be 2, 3 or 4");
  std::size_t token_total = 0;
  for (const auto& u : utterances) token_total += u.size();
  if (token_total < static_cast<std::size_t>(order)) {
    throw Error("need at least " + std::to_string(order) + " tokens to train an order-" +
                std::to_string(order) + " model");
  }

  NGramModel m;
  m.order_ = order;
  m.init_vocab();
  const std::size_t N = static_cast<std::size_t>(order);

  // Raw counts per order.
  std::vector<std::unordered_map<Gram, std::uint64_t, detail::GramHash>> raw(N);
  for (const auto& u : utterances) {
    if (u.empty()) continue;
    Gram padded{NGramModel::kBosId};
    for (const auto& w : u) {
      if (w == kBos || w == kEos || w == kUnk) throw Error("reserved token in training data: " + w);
      padded.push_back(m.intern(w));
    }
    padded.push_back(NGramModel::kEosId);
    for (std::size_t end = 1; end < padded.size(); ++end) {
      for (std::size_t n = 1; n <= N && n <= end + 1; ++n) {
        ++raw[n - 1][Gram(padded.begin() + static_cast<std::ptrdiff_t>(end + 1 - n),
                          padded.begin() + static_cast<std::ptrdiff_t>(end + 1))];
      }
    }
  }

  // Adjusted counts.
  std::vector<std::unordered_map<Gram, std::uint64_t, detail::GramHash>> adj(N);
  adj[N - 1] = raw[N - 1];
  for (std::size_t n = 1; n < N; ++n) {
    auto& a = adj[n - 1];
    for (const auto& [g, c] : raw[n - 1]) {
      if (g.front() == NGramModel::kBosId) a[g] = c;
    }
    for (const auto& [g, c] : raw[n]) {
      Gram suffix(g.begin() + 1, g.end());
      ++a[suffix];
    }
  }

  // Discounts.
  m.discounts_.assign(N, DiscountSet{});
  for (std::size_t n = 0; n < N; ++n) {
    std::array<std::uint64_t, 4> t{0, 0, 0, 0};
    for (const auto& [g, c] : adj[n]) {
      if (c >= 1 && c <= 4) ++t[c - 1];
    }
    m.discounts_[n] = kn_discounts(t);
  }

  // Per-context denominators and N1/N2/N3+ for every order.
  struct ContextStats {
    std::uint64_t total = 0;
    std::array<std::uint64_t, 3> n{0, 0, 0};
  };
  std::vector<std::unordered_map<Gram, ContextStats, detail::GramHash>> ctx(N);
  for (std::size_t n = 0; n < N; ++n) {
    for (const auto& [g, c] : adj[n]) {
      auto& st = ctx[n][Gram(g.begin(), g.end() - 1)];
      st.total += c;
      ++st.n[std::min<std::uint64_t>(c, 3) - 1];
    }
  }

  m.tables_.assign(N, {});
  // Unigrams: interpolate with the uniform distribution over predictable
  // words (vocabulary without <s>, including <unk>).
  {
    const auto& st = ctx[0].at(Gram{});
    const auto& D = m.discounts_[0];
    const double total = static_cast<double>(st.total);
    const double gamma = (D.d[0] * st.n[0] + D.d[1] * st.n[1] + D.d[2] * st.n[2]) / total;
    const double uniform = 1.0 / static_cast<double>(m.words_.size() - 1);
    for (WordId w = 0; w < m.words_.size(); ++w) {
      NGramModel::Entry e;
      if (w == NGramModel::kBosId) {
        e.logprob = -std::numeric_limits<double>::infinity();
      } else {
        auto it = adj[0].find(Gram{w});
        const std::uint64_t c = it == adj[0].end() ? 0 : it->second;
        const double p = (static_cast<double>(c) - D.for_count(c)) / total + gamma * uniform;
        e.logprob = std::log(p);
      }
      m.tables_[0][Gram{w}] = e;
    }
  }
  for (std::size_t n = 2; n <= N; ++n) {
    const auto& D = m.discounts_[n - 1];
    for (const auto& [g, c] : adj[n - 1]) {
      Gram h(g.begin(), g.end() - 1);
      const auto& st = ctx[n - 1].at(h);
      const double total = static_cast<double>(st.total);
      const double gamma = (D.d[0] * st.n[0] + D.d[1] * st.n[1] + D.d[2] * st.n[2]) / total;
      Gram lower_ctx(h.begin() + 1, h.end());
      const double lower = std::exp(m.logprob_ids(g.back(), lower_ctx));
      const double p = (static_cast<double>(c) - D.for_count(c)) / total + gamma * lower;
      m.tables_[n - 1][g].logprob = std::log(p);
    }
    // Backoff weights live on the context n-gram one order down.
    for (const auto& [h, st] : ctx[n - 1]) {
      const double total = static_cast<double>(st.total);
      const double gamma = (D.d[0] * st.n[0] + D.d[1] * st.n[1] + D.d[2] * st.n[2]) / total;
      m.tables_[n - 2][h].backoff = std::log(gamma);
    }
  }
  return m;
}

// Sum of ln p(token | running context); the context is extended with each
// scored token.
inline double logprob_sequence(const NGramModel& model, std::span<const std::string> tokens,
                               std::span<const std::string> context = {}) {
  std::vector<std::string> running(context.begin(), context.end());
  double sum = 0;
  for (const auto& t : tokens) {
    sum += model.logprob(t, running);
    running.push_back(t);
  }
  return sum;
}

// Per-token perplexity over utterances, each scored from <s> through </s>.
inline double perplexity(const NGramModel& model, const std::vector<std::vector<std::string>>& utterances) {
  double sum = 0;
  std::size_t n = 0;
  for (const auto& u : utterances) {
    std::vector<std::string> ctx{std::string(kBos)};
    std::vector<std::string> toks(u);
    toks.emplace_back(kEos);
    sum += logprob_sequence(model, toks, ctx);
    n += toks.size();
  }
  return std::exp(-sum / static_cast<double>(n));
}

// ARPA text with log10 values, preceded by "#" metadata lines carrying the
// format version and the discounts.
inline void write_arpa(std::ostream& out, const NGramModel& m) {
  const double ln10 = std::log(10.0);
  out << "# aann-ngram v1\n";
  out << "# order " << m.order() << '\n';
  for (std::size_t n = 0; n < m.discounts().size(); ++n) {
    const auto& d = m.discounts()[n];
    out << "# discounts " << (n + 1) << ' ' << format_double(d.d[0]) << ' ' << format_double(d.d[1])
        << ' ' << format_double(d.d[2]) << " fallback=" << (d.fallback ? 1 : 0) << '\n';
  }
  out << "\n\\data\\\n";
  for (int n = 1; n <= m.order(); ++n) out << "ngram " << n << '=' << m.table(n).size() << '\n';
  for (int n = 1; n <= m.order(); ++n) {
    out << "\n\\" << n << "-grams:\n";
    std::vector<std::pair<std::string, const NGramModel::Entry*>> rows;
    for (const auto& [g, e] : m.table(n)) {
      std::string key;
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (i) key += ' ';
        key += m.words()[g[i]];
      }
      rows.emplace_back(std::move(key), &e);
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [key, e] : rows) {
      out << (std::isinf(e->logprob) ? std::string("-99") : format_double(e->logprob / ln10)) << '\t'
          << key;
      if (n < m.order() && e->backoff != 0.0) out << '\t' << format_double(e->backoff / ln10);
      out << '\n';
    }
  }
  out << "\n\\end\\\n";
}

inline NGramModel read_arpa(std::istream& in) {
  const double ln10 = std::log(10.0);
  NGramModel m;
  m.init_vocab();
  std::string line;
  std::size_t line_no = 0;
  int section = 0;
  int max_order = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto parts = text::split_ws(line);
      if (parts.size() >= 6 && parts[1] == "discounts") {
        std::size_t n = std::stoul(parts[2]);
        if (m.discounts_.size() < n) m.discounts_.resize(n);
        m.discounts_[n - 1].d = {std::stod(parts[3]), std::stod(parts[4]), std::stod(parts[5])};
        m.discounts_[n - 1].fallback = parts.size() > 6 && parts[6] == "fallback=1";
      }
      continue;
    }
    if (line == "\\data\\") continue;
    if (line == "\\end\\") break;
    if (line.rfind("ngram ", 0) == 0) {
      max_order = std::max(max_order, std::stoi(line.substr(6, line.find('=') - 6)));
      continue;
    }
    if (line.front() == '\\') {
      section = std::stoi(line.substr(1));
      if (section < 1 || section > max_order) throw ParseError(line_no, "unexpected section");
      if (m.tables_.size() < static_cast<std::size_t>(max_order)) m.tables_.resize(max_order);
      continue;
    }
    if (section == 0) throw ParseError(line_no, "n-gram line outside a section");
    auto cols = text::split(line, '\t');
    if (cols.size() < 2) throw ParseError(line_no, "expected logprob<TAB>words[<TAB>backoff]");
    auto ws = text::split_ws(cols[1]);
    if (static_cast<int>(ws.size()) != section) throw ParseError(line_no, "n-gram length mismatch");
    detail::Gram g;
    for (const auto& w : ws) g.push_back(m.intern(w));
    NGramModel::Entry e;
    const double lp = std::stod(std::string(cols[0]));
    e.logprob = lp <= -99.0 ? -std::numeric_limits<double>::infinity() : lp * ln10;
    if (cols.size() > 2) e.backoff = std::stod(std::string(cols[2])) * ln10;
    m.tables_[section - 1][g] = e;
  }
  if (max_order < 1) throw ParseError(line_no, "no \\data\\ section");
  m.order_ = max_order;
  m.discounts_.resize(max_order);
  if (!m.tables_[0].count(detail::Gram{NGramModel::kUnkId})) {
    throw ParseError(line_no, "model has no <unk> unigram");
  }
  return m;
}

}  // namespace aann
