// Word orders of the construction and its counterfactual variants.
#pragma once

#include <array>
#include <string>
#include <string_view>

#include "aann/detector.hpp"
#include "aann/error.hpp"

namespace aann {

// AANN: a whopping ninety LMs
// ANAN: a ninety whopping LMs
// NAAN: ninety whopping a LMs
enum class Variant { kAann, kAnan, kNaan };

inline std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kAann: return "AANN";
    case Variant::kAnan: return "ANAN";
    case Variant::kNaan: return "NAAN";
  }
  return "?";
}

inline Variant parse_variant(std::string_view name) {
  std::string up(name);
  for (char& c : up) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  if (up == "AANN") return Variant::kAann;
  if (up == "ANAN") return Variant::kAnan;
  if (up == "NAAN") return Variant::kNaan;
  throw Error("unknown construction variant: " + std::string(name));
}

inline std::array<Slot, 4> well_formed_order(Variant v) {
  switch (v) {
    case Variant::kAann: return {Slot::kArticle, Slot::kAdjective, Slot::kNumeral, Slot::kNoun};
    case Variant::kAnan: return {Slot::kArticle, Slot::kNumeral, Slot::kAdjective, Slot::kNoun};
    case Variant::kNaan: return {Slot::kNumeral, Slot::kAdjective, Slot::kArticle, Slot::kNoun};
  }
  return {};
}

}  // namespace aann
