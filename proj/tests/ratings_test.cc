#include "emotag/ratings.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "emotag/error.h"
#include "test_support.h"

namespace emotag {
namespace {

RatingRecord rec(const std::string& rater, const std::string& emoji,
                 Emotion e, int score, const std::string& ts = "") {
  return {rater, emoji, e, score, ts};
}

// Nine raters per cell, with the raw scores listed.
void add_cell(std::vector<RatingRecord>& out, const std::string& emoji,
              Emotion e, const std::vector<int>& scores) {
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out.push_back(rec("r" + std::to_string(i), emoji, e, scores[i]));
  }
}

TEST(RatingLineTest, ParseAndSerialize) {
  RatingRecord r = parse_rating_line(
      R"({"rater":"r1","emoji":"1F602","emotion":"joy","score":4,)"
      R"("timestamp":"2018-03-01T00:00:00Z"})");
  EXPECT_EQ(r.emoji, "1f602");
  EXPECT_EQ(r.emotion, Emotion::kJoy);
  EXPECT_EQ(r.ts, "2018-03-01T00:00:00Z");
  EXPECT_DOUBLE_EQ(r.rescaled(), 1.0);
  EXPECT_EQ(parse_rating_line(to_json_line(r)), r);
}

TEST(RatingLineTest, Invalid) {
  auto code = [](const std::string& line) {
    try {
      parse_rating_line(line);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::kIo;
  };
  const std::string base = R"({"rater":"r","emoji":"1f602","emotion":"joy",)";
  EXPECT_EQ(code(base + R"("score":5})"), Errc::kValidation);
  EXPECT_EQ(code(base + R"("score":-1})"), Errc::kValidation);
  EXPECT_EQ(code(base + R"("score":2.5})"), Errc::kParse);
  EXPECT_EQ(code(R"({"rater":"r","emoji":"1f602","emotion":"glee","score":1})"),
            Errc::kValidation);
  EXPECT_EQ(code(base + R"("score":1,"ts":"yesterday"})"), Errc::kValidation);
  EXPECT_EQ(code("{not json"), Errc::kParse);
}

TEST(RatingSetTest, LatestTimestampWins) {
  RatingSet s({rec("r1", "1f602", Emotion::kJoy, 1, "2018-03-02T00:00:00Z"),
               rec("r1", "1f602", Emotion::kJoy, 3, "2018-03-01T00:00:00Z"),
               rec("r2", "1f602", Emotion::kJoy, 2),
               rec("r2", "1f602", Emotion::kJoy, 0)});
  EXPECT_EQ(s.records().size(), 2u);
  EXPECT_EQ(s.score("r1", "1f602", Emotion::kJoy), 1);
  EXPECT_EQ(s.score("r2", "1f602", Emotion::kJoy), 0);
  EXPECT_FALSE(s.score("r3", "1f602", Emotion::kJoy).has_value());
}

TEST(RatingSetTest, CompletenessAndMissing) {
  std::vector<RatingRecord> rs;
  for (Emotion e : kAllEmotions) rs.push_back(rec("full", "1f602", e, 2));
  rs.push_back(rec("part", "1f602", Emotion::kJoy, 2));
  RatingSet s(rs);
  EXPECT_DOUBLE_EQ(s.completeness("full"), 1.0);
  EXPECT_DOUBLE_EQ(s.completeness("part"), 1.0 / 8.0);
  EXPECT_EQ(s.missing_cells("part").size(), 7u);
  EXPECT_TRUE(s.missing_cells("full").empty());
}

TEST(RatingSetTest, LoadSkipsInvalidLines) {
  RatingsLoad load = parse_ratings(
      "{\"rater\":\"a\",\"emoji\":\"1f602\",\"emotion\":\"joy\",\"score\":2}\n"
      "\n"
      "{\"rater\":\"a\",\"emoji\":\"1f602\",\"emotion\":\"joy\",\"score\":9}\n");
  EXPECT_EQ(load.ratings.records().size(), 1u);
  ASSERT_EQ(load.issues.size(), 1u);
  EXPECT_EQ(load.issues[0].line, 3u);

  RatingsLoad fixture = load_ratings(testing::fixture("ratings.jsonl"));
  EXPECT_TRUE(fixture.issues.empty());
  EXPECT_EQ(fixture.ratings.raters().size(), 5u);
  EXPECT_EQ(fixture.ratings.records().size(), 5u * 20u * 8u);
}

TEST(AggregateTest, ReferenceCellArithmetic) {
  std::vector<RatingRecord> rs;
  add_cell(rs, "1f621", Emotion::kAnger, {4, 4, 4, 4, 4, 4, 4, 4, 4});
  add_cell(rs, "1f60a", Emotion::kJoy, {4, 4, 4, 4, 4, 4, 3, 3, 3});
  add_cell(rs, "1f62d", Emotion::kSadness, {4, 4, 4, 4, 4, 4, 4, 4, 4});
  add_cell(rs, "1f633", Emotion::kFear, {0, 0, 1, 1, 2, 3, 3, 4, 4});
  add_cell(rs, "1f448", Emotion::kAnticipation, {0, 0, 0, 0, 0, 0, 2, 3, 4});
  GoldTable g = aggregate(RatingSet(rs));
  struct Want {
    const char* emoji;
    Emotion e;
    double mean, sd;
  };
  for (const Want& w : {Want{"1f621", Emotion::kAnger, 1.00, 0.0},
                        Want{"1f60a", Emotion::kJoy, 0.9167, 0.1179},
                        Want{"1f62d", Emotion::kSadness, 1.00, 0.0},
                        Want{"1f633", Emotion::kFear, 0.50, 0.3727},
                        Want{"1f448", Emotion::kAnticipation, 0.25, 0.3727}}) {
    const GoldCell* c = g.find(w.emoji, w.e);
    ASSERT_NE(c, nullptr) << w.emoji;
    EXPECT_NEAR(c->gold, w.mean, 5e-5) << w.emoji;
    EXPECT_NEAR(c->sd, w.sd, 5e-5) << w.emoji;
    EXPECT_EQ(c->n, 9u);
  }
  // Cells of the roster nobody rated are reported, not invented.
  EXPECT_EQ(g.cells().size(), 5u);
  EXPECT_EQ(g.warnings().size(), 5u * 8u - 5u);
}

TEST(AggregateTest, GoldTsvRoundTrip) {
  GoldTable g = aggregate(load_ratings(testing::fixture("ratings.jsonl")).ratings);
  EXPECT_EQ(g.cells().size(), 160u);
  EXPECT_EQ(GoldTable::from_tsv(g.to_tsv(), "again"), g);
  EXPECT_THROW(GoldTable::from_tsv("1f602\tjoy\tx\t0\t1\n", "bad"), Error);
}

TEST(AggregateTest, BoundsAndPermutationInvariance) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<RatingRecord> rs;
    for (int r = 0; r < 5; ++r) {
      for (const char* emoji : {"1f602", "2764"}) {
        for (Emotion e : kAllEmotions) {
          if (rng() % 4) {
            rs.push_back(rec("r" + std::to_string(r), emoji, e,
                             static_cast<int>(rng() % 5)));
          }
        }
      }
    }
    GoldTable a = aggregate(RatingSet(rs));
    std::shuffle(rs.begin(), rs.end(), rng);
    EXPECT_EQ(aggregate(RatingSet(rs)), a);
    for (const auto& [key, cell] : a.cells()) {
      EXPECT_GE(cell.gold, 0.0);
      EXPECT_LE(cell.gold, 1.0);
      EXPECT_GE(cell.sd, 0.0);
      EXPECT_LE(cell.sd, 0.5);
    }
  }
}

TEST(PairwiseTest, AgreementAndOpposition) {
  std::vector<RatingRecord> rs;
  const int a[] = {0, 1, 2, 3, 4, 2, 1, 0};
  for (std::size_t i = 0; i < 8; ++i) {
    rs.push_back(rec("a", "1f602", kAllEmotions[i], a[i]));
    rs.push_back(rec("b", "1f602", kAllEmotions[i], a[i]));
    rs.push_back(rec("c", "1f602", kAllEmotions[i], 4 - a[i]));
    rs.push_back(rec("d", "1f602", kAllEmotions[i], 2));
  }
  RaterMatrix m = pairwise_rater_pearson(RatingSet(rs));
  ASSERT_EQ(m.raters, (std::vector<std::string>{"a", "b", "c", "d"}));
  EXPECT_NEAR(*m.r[0][1], 1.0, 1e-12);
  EXPECT_NEAR(*m.r[0][2], -1.0, 1e-12);
  EXPECT_FALSE(m.r[0][3].has_value());
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(m.r[i][i], 1.0);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(m.r[i][j], m.r[j][i]);
  }
  EXPECT_THROW(pairwise_rater_pearson(RatingSet({rs[0]})), Error);
}

// Three raters, four emojis, one emotion. Expected values were computed with
// numpy from the rescaled scores.
std::vector<RatingRecord> three_rater_fixture() {
  const char* emojis[] = {"1f600", "1f601", "1f602", "1f603"};
  const std::map<std::string, std::vector<int>> scores = {
      {"a", {0, 2, 4, 1}}, {"b", {1, 2, 3, 1}}, {"c", {0, 3, 4, 2}}};
  std::vector<RatingRecord> rs;
  for (const auto& [rater, s] : scores) {
    for (std::size_t i = 0; i < 4; ++i) {
      rs.push_back(rec(rater, emojis[i], Emotion::kJoy, s[i]));
    }
  }
  return rs;
}

TEST(RaterVsGoldTest, Inclusive) {
  auto out = rater_vs_gold_by_emotion(RatingSet(three_rater_fixture()));
  const EmotionAgreement& joy = out[index_of(Emotion::kJoy)];
  EXPECT_NEAR(*joy.per_rater.at("a"), 0.9937180375541491, 1e-12);
  EXPECT_NEAR(*joy.per_rater.at("b"), 0.9575896820506055, 1e-12);
  EXPECT_NEAR(*joy.per_rater.at("c"), 0.9708739447368124, 1e-12);
  EXPECT_NEAR(*joy.mean,
              (0.9937180375541491 + 0.9575896820506055 + 0.9708739447368124) /
                  3,
              1e-12);
  EXPECT_FALSE(out[index_of(Emotion::kTrust)].mean.has_value());
}

TEST(RaterVsGoldTest, LeaveOneOut) {
  auto out = rater_vs_gold_by_emotion(RatingSet(three_rater_fixture()), true);
  const EmotionAgreement& joy = out[index_of(Emotion::kJoy)];
  EXPECT_NEAR(*joy.per_rater.at("a"), 0.9827076298239907, 1e-12);
  EXPECT_NEAR(*joy.per_rater.at("b"), 0.9307578419910345, 1e-12);
  EXPECT_NEAR(*joy.per_rater.at("c"), 0.9221388919541467, 1e-12);
}

TEST(RaterVsGoldTest, ConstantRaterExcluded) {
  auto rs = three_rater_fixture();
  for (const char* emoji : {"1f600", "1f601", "1f602", "1f603"}) {
    rs.push_back(rec("flat", emoji, Emotion::kJoy, 2));
  }
  auto out = rater_vs_gold_by_emotion(RatingSet(rs));
  const EmotionAgreement& joy = out[index_of(Emotion::kJoy)];
  EXPECT_FALSE(joy.per_rater.at("flat").has_value());
  EXPECT_EQ(joy.excluded, (std::vector<std::string>{"flat"}));
  EXPECT_EQ(joy.per_rater.size(), 4u);
  ASSERT_TRUE(joy.mean.has_value());
}

TEST(RaterVsGoldTest, IdenticalRatersCorrelatePerfectly) {
  std::vector<RatingRecord> rs;
  std::mt19937_64 rng(8);
  for (Emotion e : kAllEmotions) {
    for (int i = 0; i < 6; ++i) {
      const int s = static_cast<int>(i % 5);
      for (const char* r : {"x", "y", "z"}) {
        rs.push_back(rec(r, "1f6" + std::to_string(10 + i), e, s));
      }
    }
  }
  auto out = rater_vs_gold_by_emotion(RatingSet(rs));
  for (const EmotionAgreement& a : out) EXPECT_NEAR(*a.mean, 1.0, 1e-12);
}

// Reference value from the krippendorff package over raw/4 scores.
TEST(EmojiAlphaTest, MatchesReference) {
  const double nan = std::nan("");
  const double data[3][8] = {{0, 4, 2, 1, 3, nan, 0, 4},
                             {1, 4, 2, 0, 3, 2, 0, 3},
                             {0, 3, 3, 1, 4, 2, nan, 4}};
  std::vector<RatingRecord> rs;
  for (int r = 0; r < 3; ++r) {
    for (std::size_t e = 0; e < 8; ++e) {
      if (std::isnan(data[r][e])) continue;
      rs.push_back(rec("r" + std::to_string(r), "1f602", kAllEmotions[e],
                       static_cast<int>(data[r][e])));
    }
  }
  AlphaResult a = krippendorff_alpha(RatingSet(rs), "1f602");
  EXPECT_NEAR(a.alpha, 0.8802281368821292, 1e-12);
  EXPECT_FALSE(a.degenerate);
}

TEST(EmojiAlphaTest, Preconditions) {
  RatingSet one({rec("a", "1f602", Emotion::kJoy, 1),
                 rec("a", "1f602", Emotion::kFear, 2)});
  EXPECT_THROW(krippendorff_alpha(one, "1f602"), Error);
  std::vector<RatingRecord> same;
  for (Emotion e : kAllEmotions) {
    same.push_back(rec("a", "1f602", e, 3));
    same.push_back(rec("b", "1f602", e, 3));
  }
  AlphaResult a = krippendorff_alpha(RatingSet(same), "1f602");
  EXPECT_EQ(a.alpha, 1.0);
  EXPECT_TRUE(a.degenerate);
}

}  // namespace
}  // namespace emotag
