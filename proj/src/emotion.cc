#include "emotag/emotion.h"

namespace emotag {

namespace {

constexpr std::array<std::string_view, kNumEmotions> kNames = {
    "anger", "anticipation", "disgust", "fear",
    "joy",   "sadness",      "surprise", "trust",
};

}  // namespace

std::string_view emotion_name(Emotion emotion) {
  return kNames[index_of(emotion)];
}

std::optional<Emotion> parse_emotion(std::string_view label) {
  for (std::size_t i = 0; i < kNumEmotions; ++i) {
    if (kNames[i] == label) return static_cast<Emotion>(i);
  }
  return std::nullopt;
}

}  // namespace emotag
