#ifndef EMOTAG_ANNOTATION_SERVICE_H_
#define EMOTAG_ANNOTATION_SERVICE_H_

#include <cstdint>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "emotag/emoji.h"
#include "emotag/ratings.h"

namespace httplib {
class Server;
}

namespace emotag {

struct CampaignEmoji {
  std::string key;
  std::string name;
};

// A fixed split of the emoji roster into equally sized sets, 1-based ids.
struct Campaign {
  std::uint64_t seed = 0;
  std::vector<std::vector<CampaignEmoji>> sets;

  std::size_t emoji_count() const;
  // Set id containing the emoji, or 0.
  std::size_t set_of(std::string_view key) const;

  std::string to_json() const;
  static Campaign from_json(std::string_view text);
  static Campaign load(const std::string& path);
  void save(const std::string& path) const;
};

// Shuffles the roster with the seed and deals it into num_sets sets.
// Throws Error(kValidation) for an empty or duplicated roster, num_sets == 0,
// or a roster size not divisible by num_sets.
Campaign make_campaign(const std::vector<InventoryEntry>& roster,
                       std::size_t num_sets, std::uint64_t seed);

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

struct ServiceOptions {
  std::string store_path;              // ratings JSONL, append-only
  std::optional<std::string> secret;   // gates POST /api/ratings
  std::string static_dir;              // UI bundle served at /, optional
};

inline constexpr const char* kSecretHeader = "X-Emotag-Secret";

// Gold table and agreement summary as served by /api/results/aggregate. The
// CLI writes the same document, so both sides agree field for field.
std::string results_json(const RatingSet& ratings);

// Gold cells read back from a results_json() document.
GoldTable gold_from_results_json(std::string_view text);

// The annotation endpoints as plain methods; mount() wires them to an HTTP
// server. Existing store contents are loaded at construction.
class AnnotationService {
 public:
  explicit AnnotationService(ServiceOptions options);

  void set_campaign(Campaign campaign);
  bool initialized() const;

  HttpResponse get_campaign() const;
  HttpResponse get_set(std::string_view id, std::string_view rater);
  HttpResponse post_ratings(std::string_view body,
                            std::optional<std::string_view> secret);
  HttpResponse get_progress(std::string_view rater) const;
  HttpResponse get_aggregate() const;
  HttpResponse get_export() const;

  void mount(httplib::Server& server);

 private:
  RatingSet snapshot() const;
  void append(const std::vector<RatingRecord>& batch);

  ServiceOptions options_;
  std::optional<Campaign> campaign_;
  std::vector<RatingRecord> log_;
  std::string log_text_;
  mutable std::shared_mutex mu_;
  std::mutex rng_mu_;
  std::mt19937_64 rng_;
};

}  // namespace emotag

#endif  // EMOTAG_ANNOTATION_SERVICE_H_
