// Brute-force interpolated modified Kneser-Ney, written from the textbook
// definitions and scanning the raw padded sentences for every count. Slow
// on purpose; shares no code with the model under test.
#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace aann::testing {

class KnOracle {
 public:
  using Seq = std::vector<std::string>;

  KnOracle(const std::vector<Seq>& utterances, int order) : order_(order) {
    for (const auto& u : utterances) {
      if (u.empty()) continue;
      Seq p{"<s>"};
      p.insert(p.end(), u.begin(), u.end());
      p.push_back("</s>");
      padded_.push_back(p);
      for (const auto& w : p) {
        if (w != "<s>") vocab_.insert(w);
      }
    }
    vocab_.insert("<unk>");
    for (int k = 1; k <= order_; ++k) {
      std::set<Seq> grams;
      for (const auto& p : padded_) {
        for (std::size_t i = 0; i + k <= p.size(); ++i) {
          Seq g(p.begin() + i, p.begin() + i + k);
          if (g == Seq{"<s>"}) continue;
          grams.insert(g);
        }
      }
      std::array<double, 4> t{0, 0, 0, 0};
      for (const auto& g : grams) {
        const long c = adjusted(g);
        if (c >= 1 && c <= 4) t[c - 1] += 1;
      }
      std::array<double, 3> d{0.75, 0.75, 0.75};
      if (t[0] > 0 && t[1] > 0 && t[2] > 0 && t[3] > 0) {
        const double y = t[0] / (t[0] + 2 * t[1]);
        std::array<double, 3> c{1 - 2 * y * t[1] / t[0], 2 - 3 * y * t[2] / t[1],
                                3 - 4 * y * t[3] / t[2]};
        if (c[0] > 0 && c[0] < 1 && c[1] > 0 && c[1] < 2 && c[2] > 0 && c[2] < 3) d = c;
      }
      discounts_.push_back(d);
    }
  }

  const std::set<std::string>& vocabulary() const { return vocab_; }

  // p(w | context), using at most order-1 trailing context words.
  double prob(const std::string& w, Seq context) const {
    const std::size_t keep = std::min<std::size_t>(context.size(), order_ - 1);
    context.erase(context.begin(), context.end() - keep);
    const std::string word = vocab_.count(w) ? w : "<unk>";
    return interpolated(word, context);
  }

 private:
  long raw(const Seq& g) const {
    long c = 0;
    for (const auto& p : padded_) {
      for (std::size_t i = 0; i + g.size() <= p.size(); ++i) {
        if (std::equal(g.begin(), g.end(), p.begin() + i)) ++c;
      }
    }
    return c;
  }

  // Raw counts for the top order and for grams starting with <s>; otherwise
  // the number of distinct words seen immediately before the gram.
  long adjusted(const Seq& g) const {
    if (static_cast<int>(g.size()) == order_ || g.front() == "<s>") return raw(g);
    std::set<std::string> before;
    for (const auto& p : padded_) {
      for (std::size_t i = 1; i + g.size() <= p.size(); ++i) {
        if (std::equal(g.begin(), g.end(), p.begin() + i)) before.insert(p[i - 1]);
      }
    }
    return static_cast<long>(before.size());
  }

  double discount(std::size_t k, long c) const {
    if (c <= 0) return 0;
    return discounts_[k - 1][std::min<long>(c, 3) - 1];
  }

  double interpolated(const std::string& w, const Seq& h) const {
    const std::size_t k = h.size() + 1;
    double total = 0, mass = 0;
    for (const auto& v : vocab_) {
      Seq g = h;
      g.push_back(v);
      const long c = adjusted(g);
      total += c;
      mass += discount(k, c);
    }
    Seq g = h;
    g.push_back(w);
    const long c = adjusted(g);
    if (h.empty()) {
      return (c - discount(k, c)) / total + (mass / total) / static_cast<double>(vocab_.size());
    }
    const Seq shorter(h.begin() + 1, h.end());
    if (total == 0) return interpolated(w, shorter);
    return (c - discount(k, c)) / total + (mass / total) * interpolated(w, shorter);
  }

  int order_;
  std::vector<Seq> padded_;
  std::set<std::string> vocab_;
  std::vector<std::array<double, 3>> discounts_;
};

}  // namespace aann::testing
