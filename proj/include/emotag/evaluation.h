#ifndef EMOTAG_EVALUATION_H_
#define EMOTAG_EVALUATION_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "emotag/emotion.h"
#include "emotag/ratings.h"
#include "emotag/scoring.h"
#include "emotag/stats.h"

namespace emotag {

enum class NaReason { kNotCovered, kInsufficientData, kUndefinedCorrelation };

std::string_view na_reason_name(NaReason reason);

struct EvaluationCell {
  std::optional<double> r;
  std::optional<NaReason> na;  // set iff r is empty
  std::size_t n = 0;           // emojis paired
  std::size_t dropped = 0;     // gold emojis without a prediction
};

// One report row: a setting and its per-emotion correlations. The average is
// always derived from the cells.
struct EvaluationRow {
  ScoringParams params;
  std::array<EvaluationCell, kNumEmotions> cells;

  // Mean over cells that have a value; nullopt if there are none.
  std::optional<double> average() const;
  std::string label() const;
};

// Builds a row from bare per-emotion values (nullopt = N/A, not covered).
EvaluationRow make_row(const ScoringParams& params,
                       const std::array<std::optional<double>, kNumEmotions>&
                           values);

// Pearson between gold and predicted scores per emotion over the emojis
// present in both. An emotion with no predictions, all absent for lack of
// coverage, is N/A(not covered); fewer than two shared emojis is
// N/A(insufficient data).
EvaluationRow evaluate(const GoldTable& gold, const ScoreTable& scores);

std::string report_to_tsv(const std::vector<EvaluationRow>& rows);
// Aligned plain-text table: method | settings | 8 emotions | average.
std::string report_to_text(const std::vector<EvaluationRow>& rows);

enum Bucket : std::size_t { kB1, kB2, kB3, kB4 };
inline constexpr std::size_t kNumBuckets = 4;

// B1 = [0, .25), B2 = [.25, .5), B3 = [.5, .75), B4 = [.75, 1].
Bucket bucket_of(double gold);

struct BucketDistribution {
  std::array<std::array<std::size_t, kNumBuckets>, kNumEmotions> counts{};

  std::size_t total(Emotion emotion) const;
};

BucketDistribution bucket_distribution(const GoldTable& gold);

// Rows B4..B1, one column per emotion.
std::string buckets_to_text(const BucketDistribution& dist);
std::string buckets_to_tsv(const BucketDistribution& dist);

// Top n emojis by gold descending, ties by key ascending.
std::vector<std::pair<std::string, double>> top_emojis(const GoldTable& gold,
                                                       Emotion emotion,
                                                       std::size_t n);

// Plot data. "emotion,rater,r" rows for the rater-vs-gold breakdown and
// "rater_a,rater_b,r" rows for the pairwise matrix; undefined values are
// written as NA.
std::string agreement_to_csv(
    const std::array<EmotionAgreement, kNumEmotions>& agreement);
std::string rater_matrix_to_csv(const RaterMatrix& matrix);

}  // namespace emotag

#endif  // EMOTAG_EVALUATION_H_
