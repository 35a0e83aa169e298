#ifndef EMOTAG_RATINGS_H_
#define EMOTAG_RATINGS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "emotag/emotion.h"
#include "emotag/io.h"
#include "emotag/stats.h"

namespace emotag {

inline constexpr int kMinRating = 0;
inline constexpr int kMaxRating = 4;

struct RatingRecord {
  std::string rater;
  std::string emoji;  // canonical EmojiKey string
  Emotion emotion = Emotion::kAnger;
  int score = 0;      // raw 0..4
  std::string ts;     // ISO-8601, may be empty

  double rescaled() const { return static_cast<double>(score) / kMaxRating; }
  bool operator==(const RatingRecord&) const = default;
};

// One JSON object per line:
// {"rater": ..., "emoji": ..., "emotion": ..., "score": ..., "ts": ...}
std::string to_json_line(const RatingRecord& record);

// Parses and validates one line; "timestamp" is accepted for "ts". Throws
// Error(kValidation) for bad scores, emotions, or emoji keys and
// Error(kParse) for malformed JSON.
RatingRecord parse_rating_line(std::string_view line);

// Ratings deduplicated to one record per (rater, emoji, emotion). The record
// with the latest timestamp wins; equal or missing timestamps fall back to
// input order, later wins.
class RatingSet {
 public:
  using CellKey = std::pair<std::string, Emotion>;  // (emoji, emotion)

  RatingSet() = default;
  explicit RatingSet(const std::vector<RatingRecord>& records);

  // Sorted by (rater, emoji, emotion).
  const std::vector<RatingRecord>& records() const { return records_; }
  const std::vector<std::string>& raters() const { return raters_; }
  const std::vector<std::string>& emojis() const { return emojis_; }
  bool empty() const { return records_.empty(); }

  std::optional<int> score(std::string_view rater, std::string_view emoji,
                           Emotion emotion) const;

  // Raw scores per cell, in rater order.
  std::map<CellKey, std::vector<std::pair<std::string, int>>> by_cell() const;

  // Cells of the full emoji roster x 8 emotions grid the rater has not rated.
  std::vector<CellKey> missing_cells(std::string_view rater) const;
  // Rated cells over grid cells, in [0, 1].
  double completeness(std::string_view rater) const;

 private:
  std::vector<RatingRecord> records_;
  std::vector<std::string> raters_;
  std::vector<std::string> emojis_;
  std::map<std::string, std::set<CellKey>, std::less<>> rated_;
};

struct RatingsLoad {
  RatingSet ratings;
  std::vector<LineIssue> issues;  // invalid lines are skipped
};

// Throws Error(kIo) if the file cannot be read.
RatingsLoad load_ratings(const std::string& path);
RatingsLoad parse_ratings(std::string_view jsonl);

struct GoldCell {
  double gold = 0.0;  // mean of raw / 4
  double sd = 0.0;    // population SD of raw / 4
  std::size_t n = 0;

  bool operator==(const GoldCell&) const = default;
};

class GoldTable {
 public:
  using Key = std::pair<std::string, Emotion>;

  void set(const std::string& emoji, Emotion emotion, GoldCell cell);
  const GoldCell* find(std::string_view emoji, Emotion emotion) const;
  const std::map<Key, GoldCell>& cells() const { return cells_; }
  bool empty() const { return cells_.empty(); }
  std::vector<std::string> emojis() const;

  // Cells skipped by aggregate() because nobody rated them.
  std::vector<std::string>& warnings() { return warnings_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  // TSV "emoji<TAB>emotion<TAB>gold<TAB>sd<TAB>n" sorted by (emoji, emotion),
  // reals in shortest round-trip form.
  std::string to_tsv() const;
  static GoldTable from_tsv(std::string_view tsv, const std::string& source);
  static GoldTable load(const std::string& path);

  bool operator==(const GoldTable& other) const {
    return cells_ == other.cells_;
  }

 private:
  std::map<Key, GoldCell> cells_;
  std::vector<std::string> warnings_;
};

// Mean and population SD of the rescaled ratings per (emoji, emotion).
// Roster cells without any rating are left out and listed in warnings().
GoldTable aggregate(const RatingSet& ratings);

struct RaterMatrix {
  std::vector<std::string> raters;
  // Symmetric; nullopt where the pair has fewer than two co-rated cells or a
  // zero-variance vector. Diagonal is 1.
  std::vector<std::vector<std::optional<double>>> r;
};

// Pearson between every pair of raters over their co-rated cells, all
// emotions pooled. Throws Error(kPrecondition) with fewer than two raters.
RaterMatrix pairwise_rater_pearson(const RatingSet& ratings);

struct EmotionAgreement {
  std::optional<double> mean;  // over raters with a defined correlation
  std::map<std::string, std::optional<double>> per_rater;
  std::vector<std::string> excluded;
};

// Per emotion, each rater's scores against the gold means over the emojis
// they rated, averaged over raters. Gold includes the rater's own rating
// unless leave_one_out is set. Undefined correlations exclude the rater from
// that emotion's mean.
std::array<EmotionAgreement, kNumEmotions> rater_vs_gold_by_emotion(
    const RatingSet& ratings, bool leave_one_out = false);

// Interval alpha for one emoji: units are its emotions, coders the raters,
// values the rescaled scores. Throws Error(kPrecondition) unless at least two
// emotions carry ratings from at least two raters.
AlphaResult krippendorff_alpha(const RatingSet& ratings,
                               std::string_view emoji);

}  // namespace emotag

#endif  // EMOTAG_RATINGS_H_
