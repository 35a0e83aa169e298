#ifndef EMOTAG_SCORING_H_
#define EMOTAG_SCORING_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "emotag/corpus.h"
#include "emotag/embedding.h"
#include "emotag/emotion.h"
#include "emotag/error.h"
#include "emotag/lexicon.h"

namespace emotag {

enum class ScoringMethod {
  kBinaryTopkSum,      // sum of cosines over the top-k lexicon words
  kIntensitySimMean,   // mean intensity of the top-k words by cosine
  kIntensityFreqMean,  // mean intensity of the top-k words by co-occurrence
};

std::string_view method_name(ScoringMethod method);
std::optional<ScoringMethod> parse_method(std::string_view name);

struct ScoringParams {
  ScoringMethod method = ScoringMethod::kBinaryTopkSum;
  std::size_t k = 5;
  std::uint64_t min_frequency = 0;  // lexicon filter F, recorded only
  std::optional<EmotionMapping::AngerSource> anger_source;

  bool operator==(const ScoringParams&) const = default;
};

struct ScoredWord {
  std::string word;
  double rank_key = 0.0;  // cosine or co-occurrence count
};

struct ScoreResult {
  double score = 0.0;
  std::vector<ScoredWord> used_words;  // in rank order

  std::size_t used_word_count() const { return used_words.size(); }
};

// sigma(e,a) = sum of cosine(v_w, v_e) over the k words of V_a (within the
// vocabulary) most similar to the emoji. Fewer than k candidates sums what
// exists. No clamping of negative cosines.
// Throws kEmojiNotInVocabulary, kNoCandidateWords, kInvalidArgument (k == 0).
ScoreResult score_binary(std::string_view emoji, Emotion emotion,
                         const EmbeddingSpace& space, const BinaryLexicon& lex,
                         std::size_t k);

// Mean tau(w,a) over the top-k words by cosine, dividing by the number of
// words actually used. Additionally throws kEmotionNotCovered.
ScoreResult score_intensity_sim(std::string_view emoji, Emotion emotion,
                                const EmbeddingSpace& space,
                                const IntensityLexicon& lex, std::size_t k);

// As score_intensity_sim, ranking instead by co-occurrence count with the
// emoji (positive counts only).
ScoreResult score_intensity_freq(std::string_view emoji, Emotion emotion,
                                 const CooccurrenceTable& cooc,
                                 const IntensityLexicon& lex, std::size_t k);

struct ScoreCell {
  std::optional<double> score;  // nullopt: absent
  std::size_t used_word_count = 0;
  std::optional<Errc> reason;   // set iff absent

  bool present() const { return score.has_value(); }
  bool operator==(const ScoreCell&) const = default;
};

// Predicted scores for one (method, params) setting.
class ScoreTable {
 public:
  using Key = std::pair<std::string, Emotion>;

  ScoreTable() = default;
  explicit ScoreTable(ScoringParams params) : params_(params) {}

  const ScoringParams& params() const { return params_; }
  void set(const std::string& emoji, Emotion emotion, ScoreCell cell);
  const ScoreCell* find(std::string_view emoji, Emotion emotion) const;
  const std::map<Key, ScoreCell>& cells() const { return cells_; }
  std::size_t present_count() const;

  bool operator==(const ScoreTable&) const = default;

 private:
  ScoringParams params_;
  std::map<Key, ScoreCell> cells_;
};

using LexiconRef =
    std::variant<const BinaryLexicon*, const IntensityLexicon*>;

struct ScoringInputs {
  const EmbeddingSpace* space = nullptr;     // sim-based methods
  const CooccurrenceTable* cooc = nullptr;   // frequency-based method
  LexiconRef lexicon;
};

// Scores every (emoji, emotion) cell. Emotions outside an intensity
// lexicon's coverage and per-cell failures are stored as absent with their
// reason; the batch itself only throws for unusable inputs (k == 0, a method
// whose lexicon or model is missing). threads > 1 splits the emoji list and
// yields the same table as a sequential run.
ScoreTable score_all(const std::vector<std::string>& emojis,
                     const ScoringInputs& inputs, const ScoringParams& params,
                     std::size_t threads = 1);

// TSV "emoji_key<TAB>emotion<TAB>method<TAB>k<TAB>F<TAB>score<TAB>
// used_word_count", sorted by (emoji_key, emotion). Absent cells follow as
// "# absent<TAB>emoji_key<TAB>emotion<TAB>method<TAB>k<TAB>F<TAB>reason"
// comment lines, which generic TSV readers skip. Tables are written in the
// order given.
std::string score_tables_to_tsv(const std::vector<ScoreTable>& tables);

// Groups rows back into tables by (method, k, F), in first-seen order.
std::vector<ScoreTable> score_tables_from_tsv(std::string_view tsv,
                                              const std::string& source);

}  // namespace emotag

#endif  // EMOTAG_SCORING_H_
