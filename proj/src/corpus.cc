#include "emotag/corpus.h"

#include <algorithm>
#include <thread>

#include "emotag/error.h"
#include "json.hpp"

namespace emotag {

namespace {

bool is_space(char32_t cp) {
  return (cp >= 0x09 && cp <= 0x0D) || cp == 0x20 || cp == 0x85 ||
         cp == 0xA0 || cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200B) ||
         cp == 0x2028 || cp == 0x2029 || cp == 0x202F || cp == 0x205F ||
         cp == 0x3000 || cp == 0xFEFF;
}

bool is_punct(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
  }
  switch (cp) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB:
    case 0xBF: case 0xFFFD:
      return true;
    default:
      break;
  }
  if (is_emoji_base(cp)) return false;
  return (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E) ||
         (cp >= 0x3001 && cp <= 0x3003) || (cp >= 0x3008 && cp <= 0x3011) ||
         (cp >= 0x3014 && cp <= 0x301F) || (cp >= 0xFF01 && cp <= 0xFF0F) ||
         (cp >= 0xFF1A && cp <= 0xFF20) || (cp >= 0xFF3B && cp <= 0xFF40) ||
         (cp >= 0xFF5B && cp <= 0xFF65);
}

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp < 0x80) return cp;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  return cp;
}

bool is_tag(char32_t cp) { return cp >= 0xE0020 && cp <= 0xE007F; }

bool is_keycap_base(char32_t cp) {
  return (cp >= '0' && cp <= '9') || cp == '#' || cp == '*';
}

class Tokenizer {
 public:
  Tokenizer(std::u32string_view cps, const EmojiInventory& inventory)
      : cps_(cps), inventory_(inventory) {}

  Document run() {
    while (pos_ < cps_.size()) {
      char32_t cp = cps_[pos_];
      if (is_space(cp)) {
        flush_word();
        ++pos_;
      } else if (starts_emoji(pos_)) {
        flush_word();
        read_cluster();
      } else if (cp == 0x200D || is_emoji_modifier(cp)) {
        // Stray joiners and selectors separate words but carry nothing.
        flush_word();
        ++pos_;
      } else {
        word_.push_back(cp);
        ++pos_;
      }
    }
    flush_word();
    return std::move(out_);
  }

 private:
  // Length of a keycap sequence starting at `i`, or 0.
  std::size_t keycap_length(std::size_t i) const {
    if (!is_keycap_base(cps_[i])) return 0;
    std::size_t j = i + 1;
    if (j < cps_.size() && cps_[j] == 0xFE0F) ++j;
    if (j < cps_.size() && cps_[j] == 0x20E3) return j + 1 - i;
    return 0;
  }

  bool starts_emoji(std::size_t i) const {
    return is_emoji_base(cps_[i]) || keycap_length(i) > 0;
  }

  std::u32string read_component() {
    std::u32string comp;
    char32_t cp = cps_[pos_];
    if (std::size_t len = keycap_length(pos_); len > 0) {
      comp = {cp, 0x20E3};
      pos_ += len;
    } else if (is_regional_indicator(cp) && pos_ + 1 < cps_.size() &&
               is_regional_indicator(cps_[pos_ + 1])) {
      comp = {cp, cps_[pos_ + 1]};
      pos_ += 2;
    } else {
      comp = {cp};
      ++pos_;
    }
    while (pos_ < cps_.size() &&
           (is_emoji_modifier(cps_[pos_]) || is_tag(cps_[pos_]))) {
      if (is_tag(cps_[pos_])) comp.push_back(cps_[pos_]);
      ++pos_;
    }
    return comp;
  }

  void read_cluster() {
    std::vector<std::u32string> parts;
    parts.push_back(read_component());
    while (pos_ + 1 < cps_.size() && cps_[pos_] == 0x200D &&
           starts_emoji(pos_ + 1)) {
      ++pos_;
      parts.push_back(read_component());
    }

    std::u32string whole;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i > 0) whole.push_back(0x200D);
      whole += parts[i];
    }
    if (emit_if_known(whole)) return;
    if (parts.size() == 1 && parts[0].size() == 1) return;
    for (const std::u32string& part : parts) {
      if (parts.size() > 1 && emit_if_known(part)) continue;
      // Flags, keycaps and tag sequences fall back to their emoji members.
      for (char32_t cp : part) {
        if (is_emoji_base(cp)) emit_if_known(std::u32string(1, cp));
      }
    }
  }

  bool emit_if_known(const std::u32string& cps) {
    std::optional<EmojiKey> key = EmojiKey::from_codepoints(cps);
    if (!key || !inventory_.contains(key->str())) return false;
    out_.push_back({Token::Kind::kEmoji, key->str()});
    return true;
  }

  void flush_word() {
    std::size_t b = 0;
    std::size_t e = word_.size();
    while (b < e && is_punct(word_[b])) ++b;
    while (e > b && is_punct(word_[e - 1])) --e;
    if (b < e) {
      std::string text;
      for (std::size_t i = b; i < e; ++i) append_utf8(text, to_lower(word_[i]));
      // A word spelling an inventory key would alias that emoji's vector.
      if (!inventory_.contains(text)) {
        out_.push_back({Token::Kind::kWord, std::move(text)});
      }
    }
    word_.clear();
  }

  std::u32string_view cps_;
  const EmojiInventory& inventory_;
  std::size_t pos_ = 0;
  std::u32string word_;
  Document out_;
};

bool looks_like_jsonl(std::string_view content) {
  for (const std::string& line : split_lines(content)) {
    std::string_view t = trim(line);
    if (t.empty()) continue;
    return t.front() == '{';
  }
  return false;
}

}  // namespace

Document tokenize(std::string_view text, const EmojiInventory& inventory) {
  std::u32string cps = decode_utf8(text);
  return Tokenizer(cps, inventory).run();
}

std::vector<std::string> word_texts(const Document& doc) {
  std::vector<std::string> words;
  for (const Token& t : doc) {
    if (!t.is_emoji()) words.push_back(t.text);
  }
  return words;
}

TokenStream ingest(const std::string& path, const EmojiInventory& inventory,
                   const IngestOptions& options) {
  std::string content = read_file(path);
  bool jsonl = path.size() >= 6 && path.ends_with(".jsonl");
  return ingest_text(content, inventory, options, jsonl);
}

TokenStream ingest_text(std::string_view content,
                        const EmojiInventory& inventory,
                        const IngestOptions& options, bool jsonl_hint) {
  bool jsonl = options.format == CorpusFormat::kJsonl ||
               (options.format == CorpusFormat::kAuto &&
                (jsonl_hint || looks_like_jsonl(content)));
  TokenStream stream;
  CorpusStats& stats = stream.stats;
  std::vector<std::string> lines = split_lines(content);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string& line = lines[n];
    if (trim(line).empty()) continue;
    std::string text;
    if (jsonl) {
      auto parsed = nlohmann::json::parse(line, nullptr, false);
      if (parsed.is_discarded() || !parsed.is_object()) {
        stats.issues.push_back({n + 1, "malformed JSON"});
        continue;
      }
      auto it = parsed.find("text");
      if (it == parsed.end() || !it->is_string()) {
        stats.issues.push_back({n + 1, "missing string field \"text\""});
        continue;
      }
      text = it->get<std::string>();
    } else {
      text = line;
    }
    Document doc = tokenize(text, inventory);
    std::size_t emojis = 0;
    std::set<std::string> seen;
    for (const Token& t : doc) {
      if (t.is_emoji()) {
        ++emojis;
        seen.insert(t.text);
      }
    }
    if (emojis == 0 && options.drop_emojiless) {
      ++stats.dropped_documents;
      continue;
    }
    ++stats.documents;
    stats.emoji_tokens += emojis;
    stats.word_tokens += doc.size() - emojis;
    for (const std::string& e : seen) ++stats.emoji_documents[e];
    stream.documents.push_back(std::move(doc));
  }
  return stream;
}

void CooccurrenceTable::add(const std::string& emoji, const std::string& word,
                            std::uint64_t count) {
  if (count == 0) return;
  auto it = counts_.find(emoji);
  if (it == counts_.end()) it = counts_.emplace(emoji, WordCounts{}).first;
  it->second[word] += count;
}

void CooccurrenceTable::merge(const CooccurrenceTable& other) {
  for (const auto& [emoji, words] : other.counts_) {
    for (const auto& [word, count] : words) add(emoji, word, count);
  }
  doc_count_ += other.doc_count_;
}

std::uint64_t CooccurrenceTable::count(std::string_view emoji,
                                       std::string_view word) const {
  const WordCounts* words = words_for(emoji);
  if (words == nullptr) return 0;
  auto it = words->find(std::string(word));
  return it == words->end() ? 0 : it->second;
}

const CooccurrenceTable::WordCounts* CooccurrenceTable::words_for(
    std::string_view emoji) const {
  auto it = counts_.find(emoji);
  return it == counts_.end() ? nullptr : &it->second;
}

bool CooccurrenceTable::has_emoji(std::string_view emoji) const {
  return words_for(emoji) != nullptr;
}

std::uint64_t CooccurrenceTable::total() const {
  std::uint64_t sum = 0;
  for (const auto& [emoji, words] : counts_) {
    for (const auto& [word, count] : words) sum += count;
  }
  return sum;
}

std::size_t CooccurrenceTable::size() const {
  std::size_t n = 0;
  for (const auto& [emoji, words] : counts_) n += words.size();
  return n;
}

std::string CooccurrenceTable::to_tsv() const {
  std::string out = "# documents\t" + std::to_string(doc_count_) + "\n";
  for (const auto& [emoji, words] : counts_) {
    std::vector<std::pair<std::string, std::uint64_t>> rows(words.begin(),
                                                            words.end());
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      return a.second > b.second;
    });
    for (const auto& [word, count] : rows) {
      out += emoji;
      out += '\t';
      out += word;
      out += '\t';
      out += std::to_string(count);
      out += '\n';
    }
  }
  return out;
}

CooccurrenceTable CooccurrenceTable::from_tsv(std::string_view tsv,
                                              const std::string& source) {
  CooccurrenceTable table;
  std::vector<std::string> lines = split_lines(tsv);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string& line = lines[n];
    if (trim(line).empty()) continue;
    const std::string where = source + ":" + std::to_string(n + 1);
    if (line.front() == '#') {
      std::vector<std::string> f = split(line, '\t');
      if (f.size() == 2 && f[0] == "# documents") {
        std::optional<std::int64_t> docs = parse_int(f[1]);
        if (!docs || *docs < 0) {
          throw Error(Errc::kParse, where + ": bad document count");
        }
        table.doc_count_ = static_cast<std::size_t>(*docs);
      }
      continue;
    }
    std::vector<std::string> f = split(line, '\t');
    if (f.size() != 3) {
      throw Error(Errc::kParse, where + ": expected 3 tab-separated fields");
    }
    std::optional<std::int64_t> count = parse_int(f[2]);
    if (!count || *count <= 0) {
      throw Error(Errc::kParse, where + ": count must be a positive integer");
    }
    table.add(f[0], f[1], static_cast<std::uint64_t>(*count));
  }
  return table;
}

CooccurrenceTable CooccurrenceTable::load(const std::string& path) {
  return from_tsv(read_file(path), path);
}

namespace {

CooccurrenceTable count_range(const std::vector<Document>& docs,
                              std::size_t begin, std::size_t end) {
  CooccurrenceTable table;
  std::map<std::string, std::uint64_t> emojis;
  std::map<std::string, std::uint64_t> words;
  for (std::size_t d = begin; d < end; ++d) {
    emojis.clear();
    words.clear();
    for (const Token& t : docs[d]) {
      ++(t.is_emoji() ? emojis : words)[t.text];
    }
    for (const auto& [emoji, ce] : emojis) {
      for (const auto& [word, cw] : words) table.add(emoji, word, ce * cw);
    }
  }
  table.add_document_count(end - begin);
  return table;
}

}  // namespace

CooccurrenceTable build_cooccurrence(const std::vector<Document>& docs,
                                     std::size_t threads) {
  threads = std::max<std::size_t>(1, std::min(threads, docs.size()));
  if (threads == 1) return count_range(docs, 0, docs.size());

  std::vector<CooccurrenceTable> partial(threads);
  std::vector<std::thread> workers;
  const std::size_t chunk = (docs.size() + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    std::size_t begin = std::min(docs.size(), t * chunk);
    std::size_t end = std::min(docs.size(), begin + chunk);
    workers.emplace_back([&, t, begin, end] {
      partial[t] = count_range(docs, begin, end);
    });
  }
  for (std::thread& w : workers) w.join();
  CooccurrenceTable merged;
  for (const CooccurrenceTable& p : partial) merged.merge(p);
  return merged;
}

CooccurrenceRanking top_cooccurring(const CooccurrenceTable& table,
                                    std::string_view emoji,
                                    const std::set<std::string>& candidates,
                                    std::size_t k) {
  if (k == 0) throw Error(Errc::kInvalidArgument, "k must be at least 1");
  CooccurrenceRanking ranking;
  const CooccurrenceTable::WordCounts* words = table.words_for(emoji);
  if (words == nullptr) return ranking;
  ranking.emoji_present = true;
  for (const std::string& word : candidates) {
    auto it = words->find(word);
    if (it != words->end() && it->second > 0) {
      ranking.words.push_back({word, it->second});
    }
  }
  // Candidates arrive in ascending order, so a stable sort keeps word order
  // among equal counts.
  std::stable_sort(ranking.words.begin(), ranking.words.end(),
                   [](const RankedCount& a, const RankedCount& b) {
                     return a.count > b.count;
                   });
  if (ranking.words.size() > k) ranking.words.resize(k);
  return ranking;
}

}  // namespace emotag
