#ifndef EMOTAG_EMOJI_H_
#define EMOTAG_EMOJI_H_

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace emotag {

// Decodes UTF-8; each invalid byte becomes U+FFFD.
std::u32string decode_utf8(std::string_view text);
void append_utf8(std::string& out, char32_t cp);
std::string encode_utf8(std::u32string_view cps);

// Presentation selectors (U+FE0E, U+FE0F) and skin-tone modifiers
// (U+1F3FB..U+1F3FF). These are folded into the preceding base and never
// appear in a canonical key.
bool is_emoji_modifier(char32_t cp);

// Codepoints that start an emoji cluster on their own. Digits, '#' and '*'
// only start one when followed by U+20E3 and are not covered here.
bool is_emoji_base(char32_t cp);

bool is_regional_indicator(char32_t cp);

// Canonical identifier for an emoji: lowercase hex codepoints of at least
// four digits joined by '-', with presentation selectors and skin tones
// removed ("1f602", "1f469-200d-1f4bb", "0023-20e3").
class EmojiKey {
 public:
  // Accepts any hex case and zero padding; folds modifiers. Returns nullopt
  // for empty sequences, invalid codepoints, or a key made only of modifiers.
  static std::optional<EmojiKey> parse(std::string_view text);
  static std::optional<EmojiKey> from_codepoints(std::u32string_view cps);

  const std::string& str() const { return key_; }
  std::u32string codepoints() const;
  // The emoji as UTF-8 text (without the folded modifiers).
  std::string glyph() const;

  auto operator<=>(const EmojiKey&) const = default;

 private:
  explicit EmojiKey(std::string key) : key_(std::move(key)) {}
  std::string key_;
};

struct InventoryEntry {
  EmojiKey key;
  std::string name;
};

// The configured set of emojis the toolkit tracks. Keys are unique after
// canonicalization and the inventory is never empty.
class EmojiInventory {
 public:
  // Throws Error(kValidation) on duplicates, invalid keys, or no entries.
  explicit EmojiInventory(std::vector<InventoryEntry> entries);

  // TSV "key<TAB>name"; '#' comment lines and blank lines are skipped.
  static EmojiInventory load(const std::string& path);
  static EmojiInventory parse(std::string_view tsv, const std::string& source);

  bool contains(std::string_view key) const;
  const InventoryEntry* find(std::string_view key) const;
  const std::vector<InventoryEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<InventoryEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace emotag

#endif  // EMOTAG_EMOJI_H_
