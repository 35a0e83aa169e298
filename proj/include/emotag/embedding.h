#ifndef EMOTAG_EMBEDDING_H_
#define EMOTAG_EMBEDDING_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "emotag/corpus.h"

namespace emotag {

// Dense token index. Indices run 0..n-1 in order of decreasing frequency,
// ties by token text, so the layout is independent of hash iteration order.
class Vocabulary {
 public:
  Vocabulary() = default;
  // `tokens` must be unique; frequencies are stored as given.
  Vocabulary(std::vector<std::string> tokens,
             std::vector<std::uint64_t> frequencies);

  std::optional<std::size_t> index(std::string_view token) const;
  bool contains(std::string_view token) const { return index(token).has_value(); }
  const std::string& token(std::size_t i) const { return tokens_[i]; }
  std::uint64_t frequency(std::size_t i) const { return frequencies_[i]; }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> frequencies_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Counts every token (words and emojis alike) and keeps those seen at least
// min_count times. Throws Error(kInvalidArgument) for min_count == 0 and
// Error(kValidation) when nothing survives.
Vocabulary build_vocab(const std::vector<Document>& docs,
                       std::uint64_t min_count);

struct TrainingConfig {
  std::size_t dim = 100;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  std::uint64_t min_count = 5;
  double subsample = 1e-4;  // 0 disables subsampling
  double learning_rate = 0.025;
  std::uint64_t seed = 1;
  bool deterministic = false;  // forces a single worker
  std::size_t threads = 1;
  // Training pairs in the fixed batch used to report per-epoch loss.
  std::size_t probe_pairs = 2000;
};

// Throws Error(kInvalidArgument) naming the first violated bound.
void validate(const TrainingConfig& config);

// Token vectors sharing one space for words and emojis.
class EmbeddingSpace {
 public:
  EmbeddingSpace() = default;
  // `vectors` is row-major, vocab.size() x dim.
  EmbeddingSpace(Vocabulary vocab, std::size_t dim, std::vector<double> vectors);

  // Hand-built spaces for tests and small tools. Rows must share one length.
  static EmbeddingSpace from_rows(
      const std::vector<std::pair<std::string, std::vector<double>>>& rows);

  const Vocabulary& vocab() const { return vocab_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vocab_.size(); }
  bool contains(std::string_view token) const { return vocab_.contains(token); }

  std::span<const double> vector(std::size_t i) const;
  // Throws Error(kTokenNotInVocabulary) naming the token.
  std::span<const double> vector(std::string_view token) const;
  void set_vector(std::size_t i, std::span<const double> values);
  void scale_vector(std::size_t i, double factor);

  // Cosine in [-1, 1]; 0 when either vector is all zeros.
  double cosine(std::size_t a, std::size_t b) const;
  double cosine(std::string_view a, std::string_view b) const;

  const TrainingConfig& config() const { return config_; }
  void set_config(const TrainingConfig& config) { config_ = config; }
  // Average SGNS loss on the probe batch after each epoch (training only).
  const std::vector<double>& epoch_losses() const { return epoch_losses_; }
  void set_epoch_losses(std::vector<double> losses) {
    epoch_losses_ = std::move(losses);
  }

  // "n d" header, then "token v1 ... vd" per line, 9 significant digits.
  std::string to_text() const;
  static EmbeddingSpace from_text(std::string_view text,
                                  const std::string& source);
  void save(const std::string& path) const;
  static EmbeddingSpace load(const std::string& path);

 private:
  void refresh_norm(std::size_t i);

  Vocabulary vocab_;
  std::size_t dim_ = 0;
  std::vector<double> vectors_;
  std::vector<double> norms_;
  TrainingConfig config_;
  std::vector<double> epoch_losses_;
};

// Skip-gram with negative sampling. Every (center, context) pair inside the
// window of a document is trained against `negatives` noise tokens drawn from
// the unigram distribution raised to 0.75. Frequent tokens are discarded with
// probability 1 - sqrt(t / f). The learning rate decays linearly to
// lr * 1e-4. Returns the input vectors.
//
// Throws Error(kInvalidArgument) on bad config and Error(kValidation) when
// the vocabulary is empty or the corpus is shorter than one window.
EmbeddingSpace train(const std::vector<Document>& docs,
                     const TrainingConfig& config);

struct Neighbor {
  std::string token;
  double similarity = 0.0;
};

struct NeighborList {
  std::vector<Neighbor> neighbors;
  std::size_t skipped = 0;  // candidates not in the vocabulary
};

// Candidates ranked by cosine to `anchor`, descending, ties by token text.
// Throws Error(kTokenNotInVocabulary) when the anchor is unknown and
// Error(kInvalidArgument) when k == 0.
NeighborList nearest(const EmbeddingSpace& space, std::string_view anchor,
                     const std::vector<std::string>& candidates,
                     std::size_t k);

}  // namespace emotag

#endif  // EMOTAG_EMBEDDING_H_
