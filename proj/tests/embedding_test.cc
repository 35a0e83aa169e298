#include "emotag/embedding.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "emotag/error.h"
#include "test_support.h"

namespace emotag {
namespace {

using testing::kClusterEmoji;
using testing::mean_cosine_to_cluster;
using testing::two_cluster_corpus;

Document words(std::initializer_list<const char*> toks) {
  Document d;
  for (const char* t : toks) d.push_back({Token::Kind::kWord, t});
  return d;
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::kIo;
}

TEST(VocabularyTest, MinCount) {
  std::vector<Document> docs = {words({"a", "a", "a", "b", "a", "a"})};
  Vocabulary v = build_vocab(docs, 2);
  EXPECT_EQ(v.size(), 1u);
  EXPECT_TRUE(v.contains("a"));
  EXPECT_EQ(build_vocab(docs, 1).size(), 2u);
  EXPECT_EQ(code_of([&] { build_vocab(docs, 6); }), Errc::kValidation);
  EXPECT_THROW(build_vocab(docs, 0), Error);
}

TEST(VocabularyTest, OrderedByFrequencyThenToken) {
  Vocabulary v = build_vocab({words({"b", "c", "c", "a", "b", "c"})}, 1);
  EXPECT_EQ(v.tokens(), (std::vector<std::string>{"c", "b", "a"}));
  EXPECT_EQ(v.frequency(0), 3u);
}

EmbeddingSpace space_2d() {
  return EmbeddingSpace::from_rows({{"x", {1.0, 0.0}},
                                    {"y", {0.0, 1.0}},
                                    {"xy", {1.0, 1.0}},
                                    {"w1", {0.9, std::sqrt(1 - 0.81)}},
                                    {"w2", {0.1, std::sqrt(1 - 0.01)}}});
}

TEST(CosineTest, Examples) {
  EmbeddingSpace s = space_2d();
  EXPECT_NEAR(s.cosine("x", "x"), 1.0, 1e-9);
  EXPECT_NEAR(s.cosine("x", "y"), 0.0, 1e-12);
  EXPECT_NEAR(s.cosine("x", "xy"), 0.70710678, 1e-8);
}

TEST(CosineTest, OutOfVocabularyNamesToken) {
  EmbeddingSpace s = space_2d();
  try {
    s.cosine("x", "nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kTokenNotInVocabulary);
    EXPECT_NE(std::string(e.what()).find("nope"), std::string::npos);
  }
}

EmbeddingSpace random_space(std::mt19937_64& rng, std::size_t n,
                            std::size_t dim) {
  std::normal_distribution<double> g;
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(dim);
    for (double& x : v) x = g(rng);
    rows.emplace_back("t" + std::to_string(i), v);
  }
  return EmbeddingSpace::from_rows(rows);
}

TEST(CosineTest, Symmetric) {
  std::mt19937_64 rng(1);
  EmbeddingSpace s = random_space(rng, 30, 7);
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = 0; b < s.size(); ++b) {
      EXPECT_NEAR(s.cosine(a, b), s.cosine(b, a), 1e-12);
      EXPECT_LE(std::abs(s.cosine(a, b)), 1.0);
    }
  }
}

TEST(CosineTest, ScaleInvariant) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> factor(1e-3, 1e3);
  for (int trial = 0; trial < 20; ++trial) {
    EmbeddingSpace s = random_space(rng, 12, 5);
    EmbeddingSpace scaled = s;
    for (std::size_t i = 0; i < scaled.size(); ++i) {
      scaled.scale_vector(i, factor(rng));
    }
    for (std::size_t a = 0; a < s.size(); ++a) {
      for (std::size_t b = 0; b < s.size(); ++b) {
        EXPECT_NEAR(s.cosine(a, b), scaled.cosine(a, b), 1e-9);
      }
    }
  }
}

TEST(CosineTest, ZeroVectorHasZeroSimilarity) {
  EmbeddingSpace s =
      EmbeddingSpace::from_rows({{"z", {0.0, 0.0}}, {"x", {1.0, 0.0}}});
  EXPECT_EQ(s.cosine("z", "x"), 0.0);
}

TEST(NearestTest, Examples) {
  EmbeddingSpace s = space_2d();
  auto self = nearest(s, "x", {"x"}, 3);
  ASSERT_EQ(self.neighbors.size(), 1u);
  EXPECT_NEAR(self.neighbors[0].similarity, 1.0, 1e-12);

  auto top = nearest(s, "x", {"w1", "w2"}, 1);
  ASSERT_EQ(top.neighbors.size(), 1u);
  EXPECT_EQ(top.neighbors[0].token, "w1");
  EXPECT_NEAR(top.neighbors[0].similarity, 0.9, 1e-12);

  auto all = nearest(s, "x", {"w1", "w2", "oov1", "oov2"}, 10);
  EXPECT_EQ(all.neighbors.size(), 2u);
  EXPECT_EQ(all.skipped, 2u);
}

TEST(NearestTest, Errors) {
  EmbeddingSpace s = space_2d();
  EXPECT_EQ(code_of([&] { nearest(s, "nope", {"x"}, 1); }),
            Errc::kTokenNotInVocabulary);
  EXPECT_EQ(code_of([&] { nearest(s, "x", {"y"}, 0); }),
            Errc::kInvalidArgument);
}

TEST(NearestTest, MatchesBruteForce) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    EmbeddingSpace s = random_space(rng, 40, 3 + rng() % 6);
    // Duplicate a vector to force a tie.
    s.set_vector(1, s.vector(std::size_t{2}));
    std::vector<std::string> candidates;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (rng() % 2) candidates.push_back(s.vocab().token(i));
    }
    candidates.push_back("missing");
    const std::string anchor = s.vocab().token(rng() % s.size());
    const std::size_t k = 1 + rng() % 45;

    std::vector<std::pair<std::string, double>> all;
    std::set<std::string> unique(candidates.begin(), candidates.end());
    for (const std::string& c : unique) {
      if (s.contains(c)) {
        all.emplace_back(c, testing::raw_cosine(s, anchor, c));
      }
    }
    auto expected = testing::full_sort_top(all, k);
    auto got = nearest(s, anchor, candidates, k);
    ASSERT_EQ(got.neighbors.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      EXPECT_EQ(got.neighbors[i].token, expected[i].first);
      EXPECT_NEAR(got.neighbors[i].similarity, expected[i].second, 1e-12);
    }
  }
}

TEST(PersistenceTest, TextRoundTrip) {
  std::mt19937_64 rng(8);
  EmbeddingSpace s = random_space(rng, 10, 6);
  EmbeddingSpace back = EmbeddingSpace::from_text(s.to_text(), "mem");
  ASSERT_EQ(back.size(), s.size());
  ASSERT_EQ(back.dim(), s.dim());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(back.vocab().token(i), s.vocab().token(i));
    for (std::size_t d = 0; d < s.dim(); ++d) {
      EXPECT_NEAR(back.vector(i)[d], s.vector(i)[d],
                  1e-8 * std::abs(s.vector(i)[d]));
    }
  }
  EXPECT_EQ(s.to_text().substr(0, 5), "10 6\n");
}

TEST(PersistenceTest, MalformedFiles) {
  EXPECT_THROW(EmbeddingSpace::from_text("", "e"), Error);
  EXPECT_THROW(EmbeddingSpace::from_text("2 2\na 1 2\n", "e"), Error);
  EXPECT_THROW(EmbeddingSpace::from_text("1 2\na 1 x\n", "e"), Error);
}

TrainingConfig small_config(std::uint64_t seed) {
  TrainingConfig c;
  c.dim = 16;
  c.window = 4;
  c.epochs = 3;
  c.min_count = 1;
  c.subsample = 0.0;
  c.seed = seed;
  c.deterministic = true;
  return c;
}

TEST(TrainTest, ShapeAndNonzeroVectors) {
  TrainingConfig c = small_config(3);
  c.dim = 8;
  EmbeddingSpace s = train(two_cluster_corpus(1, 400), c);
  EXPECT_EQ(s.dim(), 8u);
  for (std::size_t i = 0; i < s.size(); ++i) {
    ASSERT_EQ(s.vector(i).size(), 8u);
    double norm = 0.0;
    for (double x : s.vector(i)) norm += x * x;
    EXPECT_GT(norm, 0.0);
  }
}

TEST(TrainTest, DeterministicRunsAreByteIdentical) {
  auto docs = two_cluster_corpus(2, 600);
  TrainingConfig c = small_config(7);
  EXPECT_EQ(train(docs, c).to_text(), train(docs, c).to_text());
  TrainingConfig other = small_config(8);
  EXPECT_NE(train(docs, c).to_text(), train(docs, other).to_text());
}

TEST(TrainTest, SeparatesClusters) {
  auto docs = two_cluster_corpus(3, 2000);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    EmbeddingSpace s = train(docs, small_config(seed));
    EXPECT_GT(mean_cosine_to_cluster(s, kClusterEmoji, 'a'),
              mean_cosine_to_cluster(s, kClusterEmoji, 'b'))
        << "seed " << seed;
  }
}

TEST(TrainTest, ProbeLossDecreases) {
  TrainingConfig c = small_config(5);
  c.epochs = 5;
  EmbeddingSpace s = train(two_cluster_corpus(4, 2000), c);
  ASSERT_EQ(s.epoch_losses().size(), 5u);
  EXPECT_LT(s.epoch_losses().back(), s.epoch_losses().front());
}

TEST(TrainTest, MultipleWorkersProduceFiniteVectors) {
  TrainingConfig c = small_config(6);
  c.deterministic = false;
  c.threads = 3;
  EmbeddingSpace s = train(two_cluster_corpus(5, 1500), c);
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (double x : s.vector(i)) ASSERT_TRUE(std::isfinite(x));
  }
  EXPECT_GT(mean_cosine_to_cluster(s, kClusterEmoji, 'a'),
            mean_cosine_to_cluster(s, kClusterEmoji, 'b'));
}

TEST(TrainTest, ConfigAndCorpusErrors) {
  TrainingConfig c = small_config(1);
  c.window = 5;
  EXPECT_EQ(code_of([&] { train({words({"a", "b", "c"})}, c); }),
            Errc::kValidation);
  for (auto mutate : std::vector<std::function<void(TrainingConfig&)>>{
           [](TrainingConfig& t) { t.dim = 1; },
           [](TrainingConfig& t) { t.window = 0; },
           [](TrainingConfig& t) { t.negatives = 0; },
           [](TrainingConfig& t) { t.epochs = 0; },
           [](TrainingConfig& t) { t.min_count = 0; },
           [](TrainingConfig& t) { t.learning_rate = 0.0; }}) {
    TrainingConfig bad = small_config(1);
    mutate(bad);
    EXPECT_EQ(code_of([&] { validate(bad); }), Errc::kInvalidArgument);
  }
  // Enough tokens overall but no document with two of them.
  std::vector<Document> singles(10, words({"a"}));
  EXPECT_EQ(code_of([&] { train(singles, small_config(1)); }),
            Errc::kValidation);
}

}  // namespace
}  // namespace emotag
