#ifndef EMOTAG_EMOTION_H_
#define EMOTAG_EMOTION_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace emotag {

// Plutchik's eight basic emotions, in the column order used by every report.
enum class Emotion : std::size_t {
  kAnger,
  kAnticipation,
  kDisgust,
  kFear,
  kJoy,
  kSadness,
  kSurprise,
  kTrust,
};

inline constexpr std::size_t kNumEmotions = 8;

inline constexpr std::array<Emotion, kNumEmotions> kAllEmotions = {
    Emotion::kAnger, Emotion::kAnticipation, Emotion::kDisgust,
    Emotion::kFear,  Emotion::kJoy,          Emotion::kSadness,
    Emotion::kSurprise, Emotion::kTrust,
};

std::string_view emotion_name(Emotion emotion);

// Accepts the lowercase label only ("anger", "joy", ...).
std::optional<Emotion> parse_emotion(std::string_view label);

inline constexpr std::size_t index_of(Emotion emotion) {
  return static_cast<std::size_t>(emotion);
}

}  // namespace emotag

#endif  // EMOTAG_EMOTION_H_
