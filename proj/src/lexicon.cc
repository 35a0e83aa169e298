#include "emotag/lexicon.h"

#include <algorithm>
#include <cmath>

#include "emotag/error.h"
#include "emotag/io.h"

namespace emotag {

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(c >= 'A' && c <= 'Z' ? c + 32 : c);
  });
  return out;
}

// Non-comment, non-blank lines split on tabs, with their 1-based numbers.
template <typename Fn>
void for_each_row(std::string_view tsv, Fn&& fn) {
  std::vector<std::string> lines = split_lines(tsv);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string& line = lines[n];
    if (trim(line).empty() || line.front() == '#') continue;
    fn(n + 1, split(line, '\t'));
  }
}

}  // namespace

void BinaryLexicon::add(const std::string& word, Emotion emotion) {
  sets_[index_of(emotion)].insert(word);
}

std::string BinaryLexicon::to_tsv() const {
  std::string out;
  for (Emotion e : kAllEmotions) {
    for (const std::string& w : words_for(e)) {
      out += w + "\t" + std::string(emotion_name(e)) + "\t1\n";
    }
  }
  return out;
}

BinaryLexicon load_binary(const std::string& path) {
  return parse_binary(read_file(path), path);
}

BinaryLexicon parse_binary(std::string_view tsv, const std::string& source) {
  BinaryLexicon lex;
  std::map<std::pair<std::string, Emotion>, bool> seen;
  for_each_row(tsv, [&](std::size_t line,
                        const std::vector<std::string>& f) {
    const std::string where = source + ":" + std::to_string(line);
    if (f.size() != 3) {
      throw Error(Errc::kParse, where + ": expected word<TAB>emotion<TAB>flag");
    }
    std::string word = lowercase(trim(f[0]));
    if (word.empty()) throw Error(Errc::kParse, where + ": empty word");
    std::optional<Emotion> emotion = parse_emotion(lowercase(trim(f[1])));
    if (!emotion) {
      throw Error(Errc::kParse, where + ": unknown emotion '" + f[1] + "'");
    }
    std::string_view flag = trim(f[2]);
    if (flag != "0" && flag != "1") {
      throw Error(Errc::kParse, where + ": flag must be 0 or 1");
    }
    const bool member = flag == "1";
    auto [it, inserted] = seen.emplace(std::make_pair(word, *emotion), member);
    if (!inserted && it->second != member) {
      throw Error(Errc::kParse, where + ": conflicting flags for '" + word +
                                    "' / " +
                                    std::string(emotion_name(*emotion)));
    }
    if (member) lex.add(word, *emotion);
  });
  return lex;
}

EmotionMapping EmotionMapping::identity() {
  EmotionMapping m;
  for (Emotion e : kAllEmotions) m.add(std::string(emotion_name(e)), e);
  return m;
}

EmotionMapping EmotionMapping::depeche_mood(AngerSource anger) {
  EmotionMapping m;
  m.add(anger == AngerSource::kAngry ? "angry" : "annoyed", Emotion::kAnger);
  m.add("afraid", Emotion::kFear);
  m.add("happy", Emotion::kJoy);
  m.add("sad", Emotion::kSadness);
  m.add("amused", Emotion::kSurprise);
  return m;
}

void EmotionMapping::add(const std::string& label, Emotion emotion) {
  for (const auto& [existing, target] : labels_) {
    if (target == emotion && existing != label) {
      throw Error(Errc::kInvalidArgument,
                  "emotion " + std::string(emotion_name(emotion)) +
                      " already mapped from '" + existing + "'");
    }
  }
  labels_[lowercase(label)] = emotion;
}

std::optional<Emotion> EmotionMapping::map(std::string_view label) const {
  auto it = labels_.find(label);
  if (it == labels_.end()) return std::nullopt;
  return it->second;
}

std::string_view anger_source_name(EmotionMapping::AngerSource source) {
  return source == EmotionMapping::AngerSource::kAngry ? "angry" : "annoyed";
}

std::optional<EmotionMapping::AngerSource> parse_anger_source(
    std::string_view name) {
  if (name == "angry") return EmotionMapping::AngerSource::kAngry;
  if (name == "annoyed") return EmotionMapping::AngerSource::kAnnoyed;
  return std::nullopt;
}

IntensityLexicon::IntensityLexicon(std::vector<IntensityEntry> entries,
                                   std::set<Emotion> coverage)
    : entries_(std::move(entries)), coverage_(std::move(coverage)) {
  std::set<std::pair<std::string, std::string>> keys;
  for (const IntensityEntry& e : entries_) {
    if (!(e.intensity >= 0.0 && e.intensity <= 1.0)) {
      throw Error(Errc::kValidation, "intensity outside [0, 1] for '" +
                                         e.word + "'");
    }
    if (!keys.emplace(e.word, e.source_label).second) {
      throw Error(Errc::kValidation, "duplicate entry '" + e.word + "' / " +
                                         e.source_label);
    }
    coverage_.insert(e.emotion);
    by_emotion_[index_of(e.emotion)][e.word] = e.intensity;
  }
}

const IntensityLexicon::WordScores& IntensityLexicon::words_for(
    Emotion emotion) const {
  if (!covers(emotion)) {
    throw Error(Errc::kEmotionNotCovered,
                "lexicon does not cover " + std::string(emotion_name(emotion)));
  }
  return by_emotion_[index_of(emotion)];
}

std::string IntensityLexicon::to_tsv() const {
  std::string out;
  for (const IntensityEntry& e : entries_) {
    out += e.word + "\t" + e.source_label + "\t" + format_real(e.intensity);
    if (e.frequency) out += "\t" + std::to_string(*e.frequency);
    out += '\n';
  }
  return out;
}

IntensityLexicon load_intensity(const std::string& path,
                                const EmotionMapping& mapping,
                                std::uint64_t min_frequency) {
  return parse_intensity(read_file(path), path, mapping, min_frequency);
}

IntensityLexicon parse_intensity(std::string_view tsv,
                                 const std::string& source,
                                 const EmotionMapping& mapping,
                                 std::uint64_t min_frequency) {
  std::vector<IntensityEntry> entries;
  std::set<Emotion> coverage;
  std::set<std::pair<std::string, std::string>> keys;
  for_each_row(tsv, [&](std::size_t line,
                        const std::vector<std::string>& f) {
    const std::string where = source + ":" + std::to_string(line);
    if (f.size() != 3 && f.size() != 4) {
      throw Error(Errc::kParse,
                  where + ": expected word<TAB>label<TAB>score[<TAB>frequency]");
    }
    IntensityEntry entry;
    entry.word = lowercase(trim(f[0]));
    entry.source_label = lowercase(trim(f[1]));
    if (entry.word.empty()) throw Error(Errc::kParse, where + ": empty word");
    std::optional<double> score = parse_real(f[2]);
    if (!score || !std::isfinite(*score)) {
      throw Error(Errc::kParse, where + ": malformed score '" + f[2] + "'");
    }
    if (*score < 0.0 || *score > 1.0) {
      throw Error(Errc::kParse, where + ": score " + f[2] +
                                    " outside [0, 1]");
    }
    entry.intensity = *score;
    if (f.size() == 4) {
      std::optional<std::int64_t> freq = parse_int(f[3]);
      if (!freq || *freq < 0) {
        throw Error(Errc::kParse, where + ": malformed frequency '" + f[3] + "'");
      }
      entry.frequency = static_cast<std::uint64_t>(*freq);
    } else if (min_frequency > 0) {
      throw Error(Errc::kParse, where + ": frequency threshold " +
                                    std::to_string(min_frequency) +
                                    " needs a frequency column");
    }
    std::optional<Emotion> emotion = mapping.map(entry.source_label);
    if (!emotion) return;
    entry.emotion = *emotion;
    if (!keys.emplace(entry.word, entry.source_label).second) {
      throw Error(Errc::kParse, where + ": duplicate entry '" + entry.word +
                                    "' / " + entry.source_label);
    }
    coverage.insert(*emotion);
    if (entry.frequency.value_or(0) < min_frequency) return;
    entries.push_back(std::move(entry));
  });
  return IntensityLexicon(std::move(entries), std::move(coverage));
}

}  // namespace emotag
