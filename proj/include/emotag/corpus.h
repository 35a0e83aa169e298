#ifndef EMOTAG_CORPUS_H_
#define EMOTAG_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "emotag/emoji.h"
#include "emotag/io.h"

namespace emotag {

struct Token {
  enum class Kind { kWord, kEmoji };

  Kind kind = Kind::kWord;
  // Lowercased word, or the canonical EmojiKey string.
  std::string text;

  bool is_emoji() const { return kind == Kind::kEmoji; }
  bool operator==(const Token&) const = default;
};

using Document = std::vector<Token>;

// Emoji-aware tokenizer.
//
// Text is split on whitespace. Every emoji cluster becomes its own token,
// even when glued to words or other emojis. Presentation selectors and
// skin-tone modifiers are folded into the preceding base. A ZWJ sequence is
// kept whole when the inventory has it, otherwise it is decomposed into the
// members the inventory does have. Emoji-like characters outside the
// inventory are dropped. Remaining word runs are lowercased and stripped of
// leading/trailing punctuation; runs that strip to nothing are dropped.
Document tokenize(std::string_view text, const EmojiInventory& inventory);

// Word-token texts only, in order.
std::vector<std::string> word_texts(const Document& doc);

struct CorpusStats {
  std::size_t documents = 0;
  std::size_t word_tokens = 0;
  std::size_t emoji_tokens = 0;
  std::size_t dropped_documents = 0;
  // Documents containing each emoji at least once; exposes corpus imbalance.
  std::map<std::string, std::size_t> emoji_documents;
  std::vector<LineIssue> issues;
};

struct TokenStream {
  std::vector<Document> documents;
  CorpusStats stats;
};

enum class CorpusFormat { kAuto, kText, kJsonl };

struct IngestOptions {
  CorpusFormat format = CorpusFormat::kAuto;
  bool drop_emojiless = false;
};

// One document per line (plain text) or one JSON object with a "text" field
// per line. Malformed JSONL lines are recorded in stats.issues and skipped.
// kAuto picks JSONL for *.jsonl paths or when the first non-blank line
// starts with '{'. Throws Error(kIo) if the file cannot be read.
TokenStream ingest(const std::string& path, const EmojiInventory& inventory,
                   const IngestOptions& options = {});
TokenStream ingest_text(std::string_view content,
                        const EmojiInventory& inventory,
                        const IngestOptions& options = {},
                        bool jsonl_hint = false);

// Occurrence-level emoji/word co-occurrence counts over whole documents.
class CooccurrenceTable {
 public:
  using WordCounts = std::map<std::string, std::uint64_t>;

  void add(const std::string& emoji, const std::string& word,
           std::uint64_t count);
  void add_document_count(std::size_t n) { doc_count_ += n; }
  void merge(const CooccurrenceTable& other);

  std::uint64_t count(std::string_view emoji, std::string_view word) const;
  // nullptr when the emoji never co-occurred with any word.
  const WordCounts* words_for(std::string_view emoji) const;
  bool has_emoji(std::string_view emoji) const;

  std::size_t doc_count() const { return doc_count_; }
  std::uint64_t total() const;
  std::size_t size() const;  // number of (emoji, word) entries
  const std::map<std::string, WordCounts, std::less<>>& rows() const {
    return counts_;
  }

  // TSV "emoji_key<TAB>word<TAB>count" sorted by (emoji_key, count desc,
  // word asc). The document count travels in a leading "# documents" line.
  std::string to_tsv() const;
  static CooccurrenceTable from_tsv(std::string_view tsv,
                                    const std::string& source);
  static CooccurrenceTable load(const std::string& path);

  bool operator==(const CooccurrenceTable&) const = default;

 private:
  std::map<std::string, WordCounts, std::less<>> counts_;
  std::size_t doc_count_ = 0;
};

// Each (emoji, word) pair of tokens within a document adds one, so an emoji
// seen twice counts every word twice. Emoji/emoji pairs are ignored. With
// threads > 1 the stream is sharded by document and the partial tables are
// merged; the result equals the single-threaded table.
CooccurrenceTable build_cooccurrence(const std::vector<Document>& docs,
                                     std::size_t threads = 1);

struct RankedCount {
  std::string word;
  std::uint64_t count = 0;

  bool operator==(const RankedCount&) const = default;
};

struct CooccurrenceRanking {
  bool emoji_present = false;
  std::vector<RankedCount> words;
};

// Up to k candidates with a positive count, by count descending and then
// word ascending. Throws Error(kInvalidArgument) when k == 0.
CooccurrenceRanking top_cooccurring(const CooccurrenceTable& table,
                                    std::string_view emoji,
                                    const std::set<std::string>& candidates,
                                    std::size_t k);

}  // namespace emotag

#endif  // EMOTAG_CORPUS_H_
