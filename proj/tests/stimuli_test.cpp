#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "aann/stimuli.hpp"
#include "test_util.hpp"

namespace aann {
namespace {

StimulusItem whopping(Variant v = Variant::kAann) {
  StimulusItem it;
  it.id = "w";
  it.article = "a";
  it.adjective = "whopping";
  it.numeral = "ninety";
  it.noun = "LMs";
  return derive_variant(it, v);
}

std::string seq(const std::vector<std::string>& v) { return text::join(v); }

TEST(Corruptions, TableGridAllThreeVariants) {
  struct Row {
    Variant v;
    const char *wf, *swap, *no_article, *no_modifier, *no_numeral;
  };
  const Row rows[] = {
      {Variant::kAann, "a whopping ninety LMs", "a ninety whopping LMs", "whopping ninety LMs",
       "a ninety LMs", "a whopping LMs"},
      {Variant::kAnan, "a ninety whopping LMs", "a whopping ninety LMs", "ninety whopping LMs",
       "a ninety LMs", "a whopping LMs"},
      {Variant::kNaan, "ninety whopping a LMs", "whopping ninety a LMs", "ninety whopping LMs",
       "ninety a LMs", "whopping a LMs"},
  };
  for (const auto& r : rows) {
    auto it = whopping(r.v);
    EXPECT_EQ(seq(well_formed_tokens(it)), r.wf);
    EXPECT_EQ(seq(it.corruptions.at(Corruption::kOrderSwap)), r.swap);
    EXPECT_EQ(seq(it.corruptions.at(Corruption::kNoArticle)), r.no_article);
    EXPECT_EQ(seq(it.corruptions.at(Corruption::kNoModifier)), r.no_modifier);
    EXPECT_EQ(seq(it.corruptions.at(Corruption::kNoNumeral)), r.no_numeral);
  }
}

TEST(Corruptions, MultiWordSlotsStayTogether) {
  StimulusItem it;
  it.id = "m";
  it.article = "an";
  it.adjective = "awful last";
  it.numeral = "couple";
  it.noun = "of days";
  it = generate_corruptions(it);
  EXPECT_EQ(seq(it.corruptions.at(Corruption::kOrderSwap)), "an couple awful last of days");
}

TEST(Corruptions, EmptySlotIsError) {
  StimulusItem it = whopping();
  it.adjective = " ";
  EXPECT_THROW(generate_corruptions(it), Error);
}

TEST(Corruptions, EveryCorruptionDiffersFromWellFormed) {
  for (auto v : {Variant::kAann, Variant::kAnan, Variant::kNaan}) {
    auto it = whopping(v);
    for (const auto& [c, toks] : it.corruptions) EXPECT_NE(toks, well_formed_tokens(it));
  }
}

TEST(Load, CsvFixture) {
  std::ifstream in(testing::data_path("stimuli.csv"));
  auto items = load_stimuli(in);
  ASSERT_EQ(items.size(), 2u);
  EXPECT_EQ(items[0].prefix, "The family spent");
  EXPECT_EQ(*items[0].suffix, "in London.");
  EXPECT_DOUBLE_EQ(*items[0].rating, 8.5);
  EXPECT_EQ(items[1].prefix, "He ran, quickly,");
  EXPECT_FALSE(items[1].suffix.has_value());
}

TEST(Load, JsonlFixture) {
  std::ifstream in(testing::data_path("stimuli.jsonl"));
  auto items = load_stimuli(in);
  ASSERT_EQ(items.size(), 3u);
  EXPECT_EQ(items[2].article, "an");
}

TEST(Load, MissingNounNamesRecord) {
  std::istringstream in(
      "{\"id\":\"a\",\"article\":\"a\",\"adjective\":\"b\",\"numeral\":\"c\",\"noun\":\"d\"}\n"
      "{\"id\":\"b\",\"article\":\"a\",\"adjective\":\"b\",\"numeral\":\"c\"}\n");
  try {
    load_stimuli(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("record 2"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("noun"), std::string::npos) << e.what();
  }
}

TEST(Load, RatingOutOfRange) {
  std::istringstream in("id,article,adjective,numeral,noun,rating\nx,a,b,c,d,11\n");
  EXPECT_THROW(load_stimuli(in), Error);
}

TEST(Load, SuppliedCorruptionsAreKept) {
  std::istringstream in(
      "{\"id\":\"a\",\"article\":\"a\",\"adjective\":\"b\",\"numeral\":\"c\",\"noun\":\"d\","
      "\"corruptions\":{\"no_article\":\"b c d\"}}\n");
  auto items = load_stimuli(in);
  EXPECT_EQ(items[0].corruptions.at(Corruption::kNoArticle), (std::vector<std::string>{"b", "c", "d"}));
}

TEST(Filter, StrictThreshold) {
  std::ifstream in(testing::data_path("stimuli.jsonl"));
  auto items = load_stimuli(in);
  auto kept = filter_acceptable(items, 7.0);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].id, "j2");
  EXPECT_TRUE(filter_acceptable({}, 7.0).empty());
  StimulusItem unrated = whopping();
  EXPECT_TRUE(filter_acceptable({unrated}, 0.0).empty());
}

TEST(Overlap, OneOfThreeAppearsVerbatim) {
  std::ifstream in(testing::data_path("stimuli.jsonl"));
  auto items = load_stimuli(in);
  Corpus c;
  c.add(testing::tagged("c1", "she/PRP saw/VBD A/DT Lovely/JJ three/CD weeks/NNS pass/VB"));
  c.add(testing::tagged("c2", "a/DT whopping/JJ ninety/CD"));
  auto kept = remove_training_overlap(items, c);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].id, "j1");
  EXPECT_EQ(kept[1].id, "j3");
  Corpus disjoint;
  disjoint.add(testing::filler("d", 5));
  EXPECT_EQ(remove_training_overlap(items, disjoint).size(), 3u);
}

TEST(Suite, WriteThenLoadPreservesSequences) {
  std::vector<StimulusItem> items{whopping(Variant::kNaan)};
  items[0].prefix = "We trained";
  items[0].rating = 8;
  std::stringstream io;
  write_suite_jsonl(io, items);
  auto back = load_stimuli(io);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].variant, Variant::kNaan);
  EXPECT_EQ(back[0].corruptions, items[0].corruptions);
  EXPECT_EQ(back[0].prefix, "We trained");
}

}  // namespace
}  // namespace aann
