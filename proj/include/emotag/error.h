#ifndef EMOTAG_ERROR_H_
#define EMOTAG_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace emotag {

// Error categories. The CLI prints category_name() as the machine-parseable
// part of its one-line failure message.
enum class Errc {
  kInvalidArgument,
  kIo,
  kParse,
  kValidation,
  kPrecondition,
  kTokenNotInVocabulary,
  kEmojiNotInVocabulary,
  kNoCandidateWords,
  kEmotionNotCovered,
  kUndefinedCorrelation,
};

std::string_view category_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace emotag

#endif  // EMOTAG_ERROR_H_
