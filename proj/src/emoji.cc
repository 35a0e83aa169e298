#include "emotag/emoji.h"

#include <cstdio>

#include "emotag/error.h"
#include "emotag/io.h"

namespace emotag {

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  const auto byte = [&](std::size_t k) {
    return static_cast<unsigned char>(text[k]);
  };
  while (i < text.size()) {
    unsigned char c = byte(i);
    char32_t cp = 0;
    std::size_t len = 0;
    if (c < 0x80) {
      cp = c;
      len = 1;
    } else if ((c & 0xE0) == 0xC0) {
      cp = c & 0x1F;
      len = 2;
    } else if ((c & 0xF0) == 0xE0) {
      cp = c & 0x0F;
      len = 3;
    } else if ((c & 0xF8) == 0xF0) {
      cp = c & 0x07;
      len = 4;
    } else {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    bool ok = i + len <= text.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      unsigned char cc = byte(i + k);
      if ((cc & 0xC0) != 0x80) {
        ok = false;
      } else {
        cp = (cp << 6) | (cc & 0x3F);
      }
    }
    // Reject overlong forms, surrogates and out-of-range values.
    static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
    if (ok && (cp < kMin[len] || cp > 0x10FFFF ||
               (cp >= 0xD800 && cp <= 0xDFFF))) {
      ok = false;
    }
    if (!ok) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(std::u32string_view cps) {
  std::string out;
  for (char32_t cp : cps) append_utf8(out, cp);
  return out;
}

bool is_emoji_modifier(char32_t cp) {
  return cp == 0xFE0E || cp == 0xFE0F || (cp >= 0x1F3FB && cp <= 0x1F3FF);
}

bool is_regional_indicator(char32_t cp) {
  return cp >= 0x1F1E6 && cp <= 0x1F1FF;
}

bool is_emoji_base(char32_t cp) {
  if (is_emoji_modifier(cp)) return false;
  if (cp >= 0x1F000 && cp <= 0x1FAFF) return true;
  if (cp >= 0x2600 && cp <= 0x27BF) return true;
  if (cp >= 0x2300 && cp <= 0x23FF) return true;
  if (cp >= 0x2190 && cp <= 0x21FF) return true;
  if (cp >= 0x25A0 && cp <= 0x25FF) return true;
  if (cp >= 0x2B00 && cp <= 0x2BFF) return true;
  switch (cp) {
    case 0x00A9: case 0x00AE: case 0x203C: case 0x2049: case 0x2122:
    case 0x2139: case 0x24C2: case 0x2934: case 0x2935: case 0x3030:
    case 0x303D: case 0x3297: case 0x3299:
      return true;
    default:
      return false;
  }
}

std::optional<EmojiKey> EmojiKey::from_codepoints(std::u32string_view cps) {
  std::string key;
  for (char32_t cp : cps) {
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return std::nullopt;
    if (is_emoji_modifier(cp)) continue;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04x", static_cast<unsigned>(cp));
    if (!key.empty()) key.push_back('-');
    key += buf;
  }
  if (key.empty()) return std::nullopt;
  return EmojiKey(std::move(key));
}

std::optional<EmojiKey> EmojiKey::parse(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  std::u32string cps;
  for (const std::string& part : split(text, '-')) {
    if (part.empty() || part.size() > 8) return std::nullopt;
    char32_t cp = 0;
    for (char c : part) {
      int digit;
      if (c >= '0' && c <= '9') {
        digit = c - '0';
      } else if (c >= 'a' && c <= 'f') {
        digit = c - 'a' + 10;
      } else if (c >= 'A' && c <= 'F') {
        digit = c - 'A' + 10;
      } else {
        return std::nullopt;
      }
      cp = cp * 16 + static_cast<char32_t>(digit);
      if (cp > 0x10FFFF) return std::nullopt;
    }
    cps.push_back(cp);
  }
  return from_codepoints(cps);
}

std::u32string EmojiKey::codepoints() const {
  std::u32string cps;
  for (const std::string& part : split(key_, '-')) {
    cps.push_back(static_cast<char32_t>(std::stoul(part, nullptr, 16)));
  }
  return cps;
}

std::string EmojiKey::glyph() const { return encode_utf8(codepoints()); }

EmojiInventory::EmojiInventory(std::vector<InventoryEntry> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw Error(Errc::kValidation, "emoji inventory is empty");
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    auto [it, inserted] = index_.emplace(entries_[i].key.str(), i);
    if (!inserted) {
      throw Error(Errc::kValidation,
                  "duplicate emoji key in inventory: " + entries_[i].key.str());
    }
  }
}

EmojiInventory EmojiInventory::load(const std::string& path) {
  return parse(read_file(path), path);
}

EmojiInventory EmojiInventory::parse(std::string_view tsv,
                                     const std::string& source) {
  std::vector<InventoryEntry> entries;
  std::vector<std::string> lines = split_lines(tsv);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    std::string_view line = lines[n];
    if (trim(line).empty() || line.front() == '#') continue;
    std::size_t tab = line.find('\t');
    std::string_view key_text = line.substr(0, tab);
    std::string name =
        tab == std::string_view::npos ? "" : std::string(trim(line.substr(tab + 1)));
    std::optional<EmojiKey> key = EmojiKey::parse(key_text);
    if (!key) {
      throw Error(Errc::kValidation, source + ":" + std::to_string(n + 1) +
                                         ": invalid emoji key '" +
                                         std::string(key_text) + "'");
    }
    entries.push_back({*key, std::move(name)});
  }
  return EmojiInventory(std::move(entries));
}

bool EmojiInventory::contains(std::string_view key) const {
  return find(key) != nullptr;
}

const InventoryEntry* EmojiInventory::find(std::string_view key) const {
  auto it = index_.find(std::string(key));
  return it == index_.end() ? nullptr : &entries_[it->second];
}

}  // namespace emotag
