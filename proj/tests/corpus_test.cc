#include "emotag/corpus.h"

#include <gtest/gtest.h>

#include <random>

#include "emotag/error.h"

namespace emotag {
namespace {

EmojiInventory test_inventory() {
  return EmojiInventory::parse(
      "1f602\ttears of joy\n"
      "1f631\tscreaming\n"
      "1f44d\tthumbs up\n"
      "2764\tred heart\n"
      "1f469\twoman\n"
      "1f4bb\tlaptop\n"
      "1f468-200d-1f469-200d-1f467\tfamily\n"
      "1f1fa-1f1f8\tflag us\n"
      "0023-20e3\tkeycap\n",
      "test");
}

std::vector<std::string> texts(const Document& doc) {
  std::vector<std::string> out;
  for (const Token& t : doc) out.push_back(t.text);
  return out;
}

using Strings = std::vector<std::string>;

TEST(TokenizeTest, SpecExamples) {
  EmojiInventory inv = test_inventory();
  EXPECT_EQ(texts(tokenize("I love 😂😂", inv)),
            (Strings{"i", "love", "1f602", "1f602"}));
  EXPECT_TRUE(tokenize("", inv).empty());
  EXPECT_EQ(texts(tokenize("Wow!! 😱", inv)), (Strings{"wow", "1f631"}));
}

TEST(TokenizeTest, EmojiGluedToWords) {
  EmojiInventory inv = test_inventory();
  Document doc = tokenize("haha😂lol", inv);
  EXPECT_EQ(texts(doc), (Strings{"haha", "1f602", "lol"}));
  EXPECT_FALSE(doc[0].is_emoji());
  EXPECT_TRUE(doc[1].is_emoji());
}

TEST(TokenizeTest, FoldsSelectorsAndSkinTones) {
  EmojiInventory inv = test_inventory();
  EXPECT_EQ(texts(tokenize("ok 👍🏽 ❤️", inv)),
            (Strings{"ok", "1f44d", "2764"}));
}

TEST(TokenizeTest, ZwjSequences) {
  EmojiInventory inv = test_inventory();
  // Known whole sequence.
  EXPECT_EQ(texts(tokenize("👨‍👩‍👧", inv)),
            (Strings{"1f468-200d-1f469-200d-1f467"}));
  // Unknown sequence decomposes into known members.
  EXPECT_EQ(texts(tokenize("👩‍💻", inv)), (Strings{"1f469", "1f4bb"}));
}

TEST(TokenizeTest, FlagsAndKeycaps) {
  EmojiInventory inv = test_inventory();
  EXPECT_EQ(texts(tokenize("go 🇺🇸 #️⃣", inv)),
            (Strings{"go", "1f1fa-1f1f8", "0023-20e3"}));
}

TEST(TokenizeTest, UnknownEmojiDropped) {
  EmojiInventory inv = test_inventory();
  EXPECT_EQ(texts(tokenize("hi 🦄 there", inv)), (Strings{"hi", "there"}));
}

TEST(TokenizeTest, PunctuationOnlyRunsDropped) {
  EmojiInventory inv = test_inventory();
  EXPECT_EQ(texts(tokenize("... \"Hello,\" -- (world)", inv)),
            (Strings{"hello", "world"}));
}

TEST(TokenizeTest, WordSpellingAKeyIsNotAnEmoji) {
  EmojiInventory inv = test_inventory();
  EXPECT_EQ(texts(tokenize("room 2764 ❤", inv)), (Strings{"room", "2764"}));
  EXPECT_TRUE(tokenize("room 2764 ❤", inv)[1].is_emoji());
}

TEST(TokenizeTest, NonAsciiLowercase) {
  EmojiInventory inv = test_inventory();
  EXPECT_EQ(texts(tokenize("ÉTÉ Привет", inv)), (Strings{"été", "привет"}));
}

TEST(TokenizeTest, IdempotentOnWordOutput) {
  EmojiInventory inv = test_inventory();
  std::mt19937 rng(3);
  const Strings pieces = {"Hello", "WORLD!", "😂", "it's", "(ok)", "👍🏽",
                          "--",    "über",   "a.b", "#️⃣", "🇺🇸", "x😱y"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    for (int i = 0; i < 8; ++i) {
      text += pieces[rng() % pieces.size()];
      text += (rng() % 3 == 0) ? "" : " ";
    }
    Strings words = word_texts(tokenize(text, inv));
    std::string joined;
    for (const std::string& w : words) joined += w + " ";
    EXPECT_EQ(word_texts(tokenize(joined, inv)), words) << text;
  }
}

TEST(IngestTest, CountsDocumentsAndTokens) {
  EmojiInventory inv = test_inventory();
  TokenStream s = ingest_text("one 😂\nplain line\ntwo 😱 😂\n", inv);
  EXPECT_EQ(s.stats.documents, 3u);
  EXPECT_GE(s.stats.emoji_tokens, 2u);
  EXPECT_EQ(s.stats.emoji_documents.at("1f602"), 2u);
}

TEST(IngestTest, EmptyAndSingleLine) {
  EmojiInventory inv = test_inventory();
  EXPECT_EQ(ingest_text("", inv).stats.documents, 0u);
  TokenStream s = ingest_text("😂 haha\n", inv);
  ASSERT_EQ(s.documents.size(), 1u);
  EXPECT_EQ(s.documents[0].size(), 2u);
}

TEST(IngestTest, DropEmojiless) {
  EmojiInventory inv = test_inventory();
  TokenStream s = ingest_text("one 😂\nplain\n", inv, {CorpusFormat::kText, true});
  EXPECT_EQ(s.stats.documents, 1u);
  EXPECT_EQ(s.stats.dropped_documents, 1u);
}

TEST(IngestTest, JsonlWithMalformedLine) {
  EmojiInventory inv = test_inventory();
  TokenStream s = ingest_text(
      "{\"text\": \"good 😂\"}\nnot json\n{\"id\": 3}\n{\"text\": \"ok\"}\n", inv,
      {CorpusFormat::kJsonl, false});
  EXPECT_EQ(s.stats.documents, 2u);
  ASSERT_EQ(s.stats.issues.size(), 2u);
  EXPECT_EQ(s.stats.issues[0].line, 2u);
  EXPECT_EQ(s.stats.issues[1].line, 3u);
}

TEST(IngestTest, MissingFileIsIoError) {
  EmojiInventory inv = test_inventory();
  try {
    ingest("/nonexistent/corpus.txt", inv);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kIo);
  }
}

Document doc(std::initializer_list<const char*> toks) {
  Document d;
  for (const char* t : toks) {
    std::string s(t);
    const bool emoji = EmojiKey::parse(s).has_value() && s.size() >= 4 &&
                       s.find_first_not_of("0123456789abcdef-") == s.npos;
    d.push_back({emoji ? Token::Kind::kEmoji : Token::Kind::kWord, s});
  }
  return d;
}

TEST(CooccurrenceTest, SpecExamples) {
  EXPECT_EQ(build_cooccurrence({doc({"1f602", "haha", "haha"})})
                .count("1f602", "haha"),
            2u);
  EXPECT_EQ(build_cooccurrence({doc({"1f602", "1f631"})}).size(), 0u);
  EXPECT_EQ(build_cooccurrence({doc({"1f602", "x"}), doc({"1f602", "x"})})
                .count("1f602", "x"),
            2u);
}

TEST(CooccurrenceTest, RepeatedEmojiCountsTwice) {
  CooccurrenceTable t = build_cooccurrence({doc({"1f602", "a", "1f602"})});
  EXPECT_EQ(t.count("1f602", "a"), 2u);
}

std::vector<Document> random_docs(std::mt19937& rng, std::size_t n) {
  const Strings emojis = {"1f602", "1f631", "2764"};
  const Strings words = {"a", "b", "c", "d", "e"};
  std::vector<Document> docs;
  for (std::size_t i = 0; i < n; ++i) {
    Document d;
    const std::size_t len = rng() % 9;
    for (std::size_t j = 0; j < len; ++j) {
      if (rng() % 3 == 0) {
        d.push_back({Token::Kind::kEmoji, emojis[rng() % emojis.size()]});
      } else {
        d.push_back({Token::Kind::kWord, words[rng() % words.size()]});
      }
    }
    docs.push_back(std::move(d));
  }
  return docs;
}

TEST(CooccurrenceTest, TotalEqualsSumOfProducts) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Document> docs = random_docs(rng, 40);
    std::uint64_t expected = 0;
    for (const Document& d : docs) {
      std::uint64_t e = 0, w = 0;
      for (const Token& t : d) (t.is_emoji() ? e : w)++;
      expected += e * w;
    }
    CooccurrenceTable t = build_cooccurrence(docs);
    EXPECT_EQ(t.total(), expected);
    EXPECT_EQ(t.doc_count(), docs.size());
  }
}

TEST(CooccurrenceTest, MergeEqualsSequential) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Document> docs = random_docs(rng, 60);
    CooccurrenceTable sequential = build_cooccurrence(docs, 1);
    const std::size_t cut = rng() % docs.size();
    CooccurrenceTable left = build_cooccurrence(
        std::vector<Document>(docs.begin(), docs.begin() + cut));
    CooccurrenceTable right = build_cooccurrence(
        std::vector<Document>(docs.begin() + cut, docs.end()));
    left.merge(right);
    EXPECT_EQ(left, sequential);
    EXPECT_EQ(build_cooccurrence(docs, 4), sequential);
  }
}

TEST(CooccurrenceTest, TsvRoundTrip) {
  std::mt19937 rng(9);
  CooccurrenceTable t = build_cooccurrence(random_docs(rng, 50));
  std::string tsv = t.to_tsv();
  EXPECT_EQ(CooccurrenceTable::from_tsv(tsv, "t"), t);
  EXPECT_EQ(tsv.substr(0, 12), "# documents\t");
}

TEST(CooccurrenceTest, TsvSortedByCountThenWord) {
  CooccurrenceTable t;
  t.add("1f602", "b", 3);
  t.add("1f602", "c", 3);
  t.add("1f602", "a", 1);
  t.add("1f602", "z", 5);
  EXPECT_EQ(t.to_tsv(),
            "# documents\t0\n1f602\tz\t5\n1f602\tb\t3\n1f602\tc\t3\n"
            "1f602\ta\t1\n");
}

TEST(TopCooccurringTest, SpecExamples) {
  CooccurrenceTable t;
  t.add("e", "a", 5);
  t.add("e", "b", 3);
  t.add("e", "c", 3);
  auto r = top_cooccurring(t, "e", {"a", "b", "c"}, 2);
  ASSERT_EQ(r.words.size(), 2u);
  EXPECT_EQ(r.words[0].word, "a");
  EXPECT_EQ(r.words[1].word, "b");
  EXPECT_EQ(top_cooccurring(t, "e", {"a", "c", "q"}, 10).words.size(), 2u);
  EXPECT_TRUE(top_cooccurring(t, "e", {"x", "y"}, 3).words.empty());
}

TEST(TopCooccurringTest, AbsentEmojiIsFlaggedNotThrown) {
  CooccurrenceTable t;
  t.add("e", "a", 1);
  auto r = top_cooccurring(t, "missing", {"a"}, 3);
  EXPECT_FALSE(r.emoji_present);
  EXPECT_TRUE(r.words.empty());
  EXPECT_THROW(top_cooccurring(t, "e", {"a"}, 0), Error);
}

TEST(TopCooccurringTest, PrefixStable) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    CooccurrenceTable t;
    std::set<std::string> candidates;
    for (int w = 0; w < 30; ++w) {
      std::string word = "w" + std::to_string(w);
      if (rng() % 4 != 0) t.add("e", word, 1 + rng() % 5);
      if (rng() % 3 != 0) candidates.insert(word);
    }
    auto full = top_cooccurring(t, "e", candidates, 30).words;
    for (std::size_t k = 1; k <= full.size(); ++k) {
      auto part = top_cooccurring(t, "e", candidates, k).words;
      ASSERT_EQ(part.size(), k);
      EXPECT_TRUE(std::equal(part.begin(), part.end(), full.begin()));
    }
  }
}

}  // namespace
}  // namespace emotag
