#ifndef EMOTAG_LEXICON_H_
#define EMOTAG_LEXICON_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "emotag/emotion.h"

namespace emotag {

// Word sets V_a with binary membership, one per emotion. Covers all eight
// emotions; a set may be empty.
class BinaryLexicon {
 public:
  void add(const std::string& word, Emotion emotion);
  const std::set<std::string>& words_for(Emotion emotion) const {
    return sets_[index_of(emotion)];
  }
  bool operator==(const BinaryLexicon&) const = default;

  // TSV "word<TAB>emotion<TAB>flag", flag rows of 1 only.
  std::string to_tsv() const;

 private:
  std::array<std::set<std::string>, kNumEmotions> sets_;
};

// TSV "word<TAB>emotion<TAB>flag(0|1)". Words are lowercased. Throws
// Error(kParse) with the line number for malformed lines, unknown emotions,
// or a (word, emotion) pair listed with conflicting flags.
BinaryLexicon load_binary(const std::string& path);
BinaryLexicon parse_binary(std::string_view tsv, const std::string& source);

// Partial map from a lexicon's own labels onto the eight emotions. At most
// one source label may feed each emotion.
class EmotionMapping {
 public:
  EmotionMapping() = default;

  // Plutchik labels map onto themselves.
  static EmotionMapping identity();

  enum class AngerSource { kAngry, kAnnoyed };
  // afraid->fear, happy->joy, sad->sadness, amused->surprise, plus either
  // angry->anger or annoyed->anger.
  static EmotionMapping depeche_mood(AngerSource anger);

  // Throws Error(kInvalidArgument) if `emotion` already has a source.
  void add(const std::string& label, Emotion emotion);
  std::optional<Emotion> map(std::string_view label) const;
  const std::map<std::string, Emotion, std::less<>>& entries() const {
    return labels_;
  }

 private:
  std::map<std::string, Emotion, std::less<>> labels_;
};

std::string_view anger_source_name(EmotionMapping::AngerSource source);
std::optional<EmotionMapping::AngerSource> parse_anger_source(
    std::string_view name);

struct IntensityEntry {
  std::string word;
  std::string source_label;
  Emotion emotion = Emotion::kAnger;
  double intensity = 0.0;
  std::optional<std::uint64_t> frequency;

  bool operator==(const IntensityEntry&) const = default;
};

// Real-valued word/emotion intensities tau(w, a) in [0, 1]. Coverage is the
// set of emotions that at least one mapped row reached, before frequency
// filtering; querying anything else raises Error(kEmotionNotCovered).
class IntensityLexicon {
 public:
  using WordScores = std::map<std::string, double>;

  // Throws Error(kValidation) on out-of-range intensities or a repeated
  // (word, source_label) pair.
  IntensityLexicon(std::vector<IntensityEntry> entries,
                   std::set<Emotion> coverage);

  bool covers(Emotion emotion) const { return coverage_.contains(emotion); }
  const std::set<Emotion>& coverage() const { return coverage_; }
  const WordScores& words_for(Emotion emotion) const;
  const std::vector<IntensityEntry>& entries() const { return entries_; }

  // TSV "word<TAB>label<TAB>score[<TAB>frequency]" of the retained rows.
  std::string to_tsv() const;

  bool operator==(const IntensityLexicon& other) const {
    return entries_ == other.entries_ && coverage_ == other.coverage_;
  }

 private:
  std::vector<IntensityEntry> entries_;
  std::set<Emotion> coverage_;
  std::array<WordScores, kNumEmotions> by_emotion_;
};

// TSV "word<TAB>label<TAB>score[<TAB>frequency]". Rows whose label is not in
// the mapping are dropped, as are rows with frequency < min_frequency.
// Throws Error(kParse) with the line number on malformed scores, scores
// outside [0, 1], or a missing frequency column when min_frequency > 0.
IntensityLexicon load_intensity(const std::string& path,
                                const EmotionMapping& mapping,
                                std::uint64_t min_frequency = 0);
IntensityLexicon parse_intensity(std::string_view tsv,
                                 const std::string& source,
                                 const EmotionMapping& mapping,
                                 std::uint64_t min_frequency = 0);

}  // namespace emotag

#endif  // EMOTAG_LEXICON_H_
