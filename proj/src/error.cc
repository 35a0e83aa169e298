#include "emotag/error.h"

namespace emotag {

std::string_view category_name(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument: return "invalid_argument";
    case Errc::kIo: return "io";
    case Errc::kParse: return "parse";
    case Errc::kValidation: return "validation";
    case Errc::kPrecondition: return "precondition";
    case Errc::kTokenNotInVocabulary: return "token_not_in_vocabulary";
    case Errc::kEmojiNotInVocabulary: return "emoji_not_in_vocabulary";
    case Errc::kNoCandidateWords: return "no_candidate_words";
    case Errc::kEmotionNotCovered: return "emotion_not_covered";
    case Errc::kUndefinedCorrelation: return "undefined_correlation";
  }
  return "unknown";
}

}  // namespace emotag
