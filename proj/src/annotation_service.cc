#include "emotag/annotation_service.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <filesystem>
#include <map>
#include <set>

#include "emotag/error.h"
#include "emotag/io.h"
#include "httplib.h"
#include "json.hpp"

namespace emotag {

using nlohmann::json;

namespace {

// Unbiased draw in [0, bound) so a saved seed gives the same partition on
// every standard library.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

template <typename T>
void fisher_yates(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[bounded(rng, i)]);
  }
}

HttpResponse json_response(int status, const json& body) {
  return {status, body.dump(), "application/json"};
}

HttpResponse error_response(int status, std::string_view message,
                            json extra = json::object()) {
  extra["error"] = std::string(message);
  return json_response(status, extra);
}

json emotions_json() {
  json out = json::array();
  for (Emotion e : kAllEmotions) out.push_back(std::string(emotion_name(e)));
  return out;
}

json emoji_json(const CampaignEmoji& e) {
  std::optional<EmojiKey> key = EmojiKey::parse(e.key);
  return {{"key", e.key},
          {"glyph", key ? key->glyph() : std::string()},
          {"name", e.name}};
}

json opt_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<std::size_t> parse_set_id(std::string_view text) {
  std::optional<std::int64_t> id = parse_int(text);
  if (!id || *id < 1) return std::nullopt;
  return static_cast<std::size_t>(*id);
}

}  // namespace

std::size_t Campaign::emoji_count() const {
  std::size_t n = 0;
  for (const auto& s : sets) n += s.size();
  return n;
}

std::size_t Campaign::set_of(std::string_view key) const {
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (const CampaignEmoji& e : sets[i]) {
      if (e.key == key) return i + 1;
    }
  }
  return 0;
}

std::string Campaign::to_json() const {
  json j;
  j["seed"] = seed;
  j["emotions"] = emotions_json();
  j["scale"] = {{"min", kMinRating}, {"max", kMaxRating}};
  j["sets"] = json::array();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    json emojis = json::array();
    for (const CampaignEmoji& e : sets[i]) emojis.push_back(emoji_json(e));
    j["sets"].push_back({{"id", i + 1}, {"emojis", emojis}});
  }
  return j.dump(2) + "\n";
}

Campaign Campaign::from_json(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(Errc::kParse, "campaign: malformed JSON");
  }
  Campaign c;
  try {
    c.seed = j.at("seed").get<std::uint64_t>();
    for (const json& s : j.at("sets")) {
      std::vector<CampaignEmoji> set;
      for (const json& e : s.at("emojis")) {
        std::string key = e.at("key").get<std::string>();
        std::optional<EmojiKey> parsed = EmojiKey::parse(key);
        if (!parsed) throw Error(Errc::kValidation, "campaign: bad key " + key);
        set.push_back({parsed->str(), e.value("name", std::string())});
      }
      c.sets.push_back(std::move(set));
    }
  } catch (const json::exception& ex) {
    throw Error(Errc::kParse, std::string("campaign: ") + ex.what());
  }
  std::set<std::string> seen;
  for (const auto& s : c.sets) {
    if (s.size() != c.sets.front().size()) {
      throw Error(Errc::kValidation, "campaign: sets differ in size");
    }
    for (const CampaignEmoji& e : s) {
      if (!seen.insert(e.key).second) {
        throw Error(Errc::kValidation, "campaign: " + e.key + " in two sets");
      }
    }
  }
  if (seen.empty()) throw Error(Errc::kValidation, "campaign: no emojis");
  return c;
}

Campaign Campaign::load(const std::string& path) {
  return from_json(read_file(path));
}

void Campaign::save(const std::string& path) const {
  write_file_atomic(path, to_json());
}

Campaign make_campaign(const std::vector<InventoryEntry>& roster,
                       std::size_t num_sets, std::uint64_t seed) {
  if (roster.empty()) throw Error(Errc::kValidation, "empty emoji roster");
  if (num_sets == 0) throw Error(Errc::kValidation, "need at least one set");
  if (roster.size() % num_sets != 0) {
    throw Error(Errc::kValidation,
                std::to_string(roster.size()) + " emojis cannot be split into " +
                    std::to_string(num_sets) + " equal sets");
  }
  std::vector<CampaignEmoji> emojis;
  std::set<std::string> seen;
  for (const InventoryEntry& e : roster) {
    if (!seen.insert(e.key.str()).second) {
      throw Error(Errc::kValidation, "duplicate emoji " + e.key.str());
    }
    emojis.push_back({e.key.str(), e.name});
  }
  std::sort(emojis.begin(), emojis.end(),
            [](const auto& a, const auto& b) { return a.key < b.key; });
  std::mt19937_64 rng(seed);
  fisher_yates(emojis, rng);
  Campaign c;
  c.seed = seed;
  const std::size_t size = emojis.size() / num_sets;
  for (std::size_t i = 0; i < num_sets; ++i) {
    c.sets.emplace_back(emojis.begin() + i * size,
                        emojis.begin() + (i + 1) * size);
  }
  return c;
}

std::string results_json(const RatingSet& ratings) {
  GoldTable gold = aggregate(ratings);
  json j;
  j["gold"] = json::array();
  for (const auto& [key, cell] : gold.cells()) {
    j["gold"].push_back({{"emoji", key.first},
                         {"emotion", std::string(emotion_name(key.second))},
                         {"gold", cell.gold},
                         {"sd", cell.sd},
                         {"n", cell.n}});
  }
  j["warnings"] = gold.warnings();
  j["raters"] = ratings.raters();

  json agreement;
  json by_emotion = json::object();
  auto per_emotion = rater_vs_gold_by_emotion(ratings);
  for (Emotion e : kAllEmotions) {
    const EmotionAgreement& a = per_emotion[index_of(e)];
    json per_rater = json::object();
    for (const auto& [rater, r] : a.per_rater) per_rater[rater] = opt_json(r);
    by_emotion[std::string(emotion_name(e))] = {{"mean", opt_json(a.mean)},
                                                {"per_rater", per_rater},
                                                {"excluded", a.excluded}};
  }
  agreement["rater_vs_gold"] = by_emotion;
  if (ratings.raters().size() >= 2) {
    RaterMatrix m = pairwise_rater_pearson(ratings);
    json rows = json::array();
    for (const auto& row : m.r) {
      json values = json::array();
      for (const auto& v : row) values.push_back(opt_json(v));
      rows.push_back(values);
    }
    agreement["pairwise"] = {{"raters", m.raters}, {"r", rows}};
  } else {
    agreement["pairwise"] = nullptr;
  }
  json alpha = json::object();
  for (const std::string& emoji : ratings.emojis()) {
    try {
      AlphaResult a = krippendorff_alpha(ratings, emoji);
      alpha[emoji] = {{"alpha", a.alpha}, {"degenerate", a.degenerate}};
    } catch (const Error&) {
      alpha[emoji] = nullptr;
    }
  }
  agreement["alpha"] = alpha;
  j["agreement"] = agreement;
  return j.dump();
}

GoldTable gold_from_results_json(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.contains("gold")) {
    throw Error(Errc::kParse, "results: malformed JSON");
  }
  GoldTable table;
  for (const json& row : j["gold"]) {
    std::optional<Emotion> e =
        parse_emotion(row.at("emotion").get<std::string>());
    if (!e) throw Error(Errc::kParse, "results: unknown emotion");
    table.set(row.at("emoji").get<std::string>(), *e,
              {row.at("gold").get<double>(), row.at("sd").get<double>(),
               row.at("n").get<std::size_t>()});
  }
  return table;
}

AnnotationService::AnnotationService(ServiceOptions options)
    : options_(std::move(options)), rng_(std::random_device{}()) {
  if (options_.store_path.empty()) {
    throw Error(Errc::kInvalidArgument, "service needs a ratings store path");
  }
  if (std::filesystem::exists(options_.store_path)) {
    log_text_ = read_file(options_.store_path);
    for (const std::string& line : split_lines(log_text_)) {
      if (trim(line).empty()) continue;
      try {
        log_.push_back(parse_rating_line(line));
      } catch (const Error&) {
        // Skipped like any other invalid ratings line.
      }
    }
  }
}

void AnnotationService::set_campaign(Campaign campaign) {
  std::unique_lock lock(mu_);
  campaign_ = std::move(campaign);
}

bool AnnotationService::initialized() const {
  std::shared_lock lock(mu_);
  return campaign_.has_value();
}

RatingSet AnnotationService::snapshot() const {
  std::shared_lock lock(mu_);
  return RatingSet(log_);
}

HttpResponse AnnotationService::get_campaign() const {
  std::shared_lock lock(mu_);
  if (!campaign_) return error_response(503, "campaign not initialized");
  return {200, campaign_->to_json(), "application/json"};
}

HttpResponse AnnotationService::get_set(std::string_view id,
                                        std::string_view rater) {
  std::vector<CampaignEmoji> emojis;
  std::size_t set_id = 0;
  {
    std::shared_lock lock(mu_);
    if (!campaign_) return error_response(503, "campaign not initialized");
    std::optional<std::size_t> parsed = parse_set_id(id);
    if (!parsed || *parsed > campaign_->sets.size()) {
      return error_response(404, "unknown set '" + std::string(id) + "'");
    }
    set_id = *parsed;
    emojis = campaign_->sets[set_id - 1];
  }
  {
    std::lock_guard lock(rng_mu_);
    fisher_yates(emojis, rng_);
  }
  json j;
  j["id"] = set_id;
  j["emotions"] = emotions_json();
  j["scale"] = {{"min", kMinRating}, {"max", kMaxRating}};
  j["emojis"] = json::array();
  for (const CampaignEmoji& e : emojis) j["emojis"].push_back(emoji_json(e));
  j["ratings"] = json::array();
  if (!rater.empty()) {
    RatingSet ratings = snapshot();
    for (const CampaignEmoji& e : emojis) {
      for (Emotion emotion : kAllEmotions) {
        std::optional<int> s = ratings.score(rater, e.key, emotion);
        if (!s) continue;
        j["ratings"].push_back(
            {{"emoji", e.key},
             {"emotion", std::string(emotion_name(emotion))},
             {"score", *s}});
      }
    }
  }
  return json_response(200, j);
}

HttpResponse AnnotationService::post_ratings(
    std::string_view body, std::optional<std::string_view> secret) {
  if (options_.secret && (!secret || *secret != *options_.secret)) {
    return error_response(401, "missing or wrong shared secret");
  }
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return error_response(400, "malformed JSON body");
  }
  if (!j.contains("rater") || !j["rater"].is_string() ||
      j["rater"].get<std::string>().empty()) {
    return error_response(400, "missing rater");
  }
  const std::string rater = j["rater"].get<std::string>();
  std::optional<std::size_t> set_id;
  if (j.contains("set")) {
    const json& s = j["set"];
    if (s.is_number_unsigned()) {
      set_id = s.get<std::size_t>();
    } else if (s.is_string()) {
      set_id = parse_set_id(s.get<std::string>());
    }
  }
  if (!j.contains("ratings") || !j["ratings"].is_array()) {
    return error_response(400, "missing ratings array");
  }

  std::vector<CampaignEmoji> members;
  {
    std::shared_lock lock(mu_);
    if (!campaign_) return error_response(503, "campaign not initialized");
    if (!set_id || *set_id < 1 || *set_id > campaign_->sets.size()) {
      return error_response(404, "unknown set");
    }
    members = campaign_->sets[*set_id - 1];
  }
  std::set<std::string> member_keys;
  for (const CampaignEmoji& e : members) member_keys.insert(e.key);

  json unknown = json::array();
  json invalid = json::array();
  std::map<std::pair<std::string, Emotion>, int> cells;
  for (const json& item : j["ratings"]) {
    if (!item.is_object()) {
      invalid.push_back({{"entry", item}, {"reason", "not an object"}});
      continue;
    }
    const std::string emoji_text = item.value("emoji", std::string());
    const std::string emotion_text = item.value("emotion", std::string());
    std::optional<EmojiKey> key = EmojiKey::parse(emoji_text);
    std::optional<Emotion> emotion = parse_emotion(emotion_text);
    if (!key || !member_keys.contains(key->str()) || !emotion) {
      unknown.push_back({{"emoji", emoji_text}, {"emotion", emotion_text}});
      continue;
    }
    const json score = item.value("score", json());
    if (!score.is_number_integer() || score.get<std::int64_t>() < kMinRating ||
        score.get<std::int64_t>() > kMaxRating) {
      invalid.push_back({{"emoji", key->str()},
                         {"emotion", emotion_text},
                         {"score", score},
                         {"reason", "score must be an integer 0-4"}});
      continue;
    }
    auto [it, inserted] = cells.emplace(std::make_pair(key->str(), *emotion),
                                        score.get<int>());
    if (!inserted) {
      invalid.push_back({{"emoji", key->str()},
                         {"emotion", emotion_text},
                         {"reason", "cell rated twice in one batch"}});
    }
  }
  if (!unknown.empty()) {
    return error_response(409, "unknown emoji or emotion for this set",
                          {{"unknown", unknown}});
  }
  if (!invalid.empty()) {
    return error_response(422, "invalid ratings", {{"invalid", invalid}});
  }
  json missing = json::array();
  for (const CampaignEmoji& e : members) {
    for (Emotion emotion : kAllEmotions) {
      if (!cells.contains({e.key, emotion})) {
        missing.push_back(
            {{"emoji", e.key}, {"emotion", std::string(emotion_name(emotion))}});
      }
    }
  }
  if (!missing.empty()) {
    return error_response(422, "incomplete batch", {{"missing", missing}});
  }

  const std::string ts = now_iso8601();
  std::vector<RatingRecord> batch;
  batch.reserve(cells.size());
  for (const auto& [cell, score] : cells) {
    batch.push_back({rater, cell.first, cell.second, score, ts});
  }
  try {
    append(batch);
  } catch (const Error& err) {
    return error_response(500, err.what());
  }
  return json_response(200, {{"accepted", batch.size()}, {"ts", ts}});
}

void AnnotationService::append(const std::vector<RatingRecord>& batch) {
  std::string text;
  for (const RatingRecord& r : batch) text += to_json_line(r) + "\n";
  std::unique_lock lock(mu_);
  std::filesystem::path path(options_.store_path);
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  const int fd =
      ::open(options_.store_path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) {
    throw Error(Errc::kIo, "cannot open store: " + std::string(strerror(errno)));
  }
  std::size_t written = 0;
  while (written < text.size()) {
    const ssize_t n = ::write(fd, text.data() + written, text.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      const int saved = errno;
      ::close(fd);
      throw Error(Errc::kIo, "store write failed: " +
                                 std::string(strerror(saved)));
    }
    written += static_cast<std::size_t>(n);
  }
  const bool synced = ::fsync(fd) == 0;
  ::close(fd);
  if (!synced) throw Error(Errc::kIo, "store fsync failed");
  log_text_ += text;
  log_.insert(log_.end(), batch.begin(), batch.end());
}

HttpResponse AnnotationService::get_progress(std::string_view rater) const {
  RatingSet ratings = snapshot();
  std::shared_lock lock(mu_);
  if (!campaign_) return error_response(503, "campaign not initialized");
  json sets = json::array();
  for (std::size_t i = 0; i < campaign_->sets.size(); ++i) {
    const auto& members = campaign_->sets[i];
    std::size_t done = 0;
    for (const CampaignEmoji& e : members) {
      for (Emotion emotion : kAllEmotions) {
        if (ratings.score(rater, e.key, emotion)) ++done;
      }
    }
    const double total = static_cast<double>(members.size() * kNumEmotions);
    sets.push_back({{"id", i + 1},
                    {"completed", done},
                    {"total", members.size() * kNumEmotions},
                    {"fraction", static_cast<double>(done) / total}});
  }
  return json_response(200, {{"rater", std::string(rater)}, {"sets", sets}});
}

HttpResponse AnnotationService::get_aggregate() const {
  return {200, results_json(snapshot()), "application/json"};
}

HttpResponse AnnotationService::get_export() const {
  std::shared_lock lock(mu_);
  return {200, log_text_, "application/x-ndjson"};
}

void AnnotationService::mount(httplib::Server& server) {
  auto reply = [](httplib::Response& res, const HttpResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server.Get("/api/campaign",
             [this, reply](const httplib::Request&, httplib::Response& res) {
               reply(res, get_campaign());
             });
  server.Get(R"(/api/sets/([^/]+))",
             [this, reply](const httplib::Request& req,
                           httplib::Response& res) {
               reply(res, get_set(req.matches[1].str(),
                                  req.get_param_value("rater")));
             });
  server.Post("/api/ratings", [this, reply](const httplib::Request& req,
                                            httplib::Response& res) {
    std::optional<std::string_view> secret;
    std::string header;
    if (req.has_header(kSecretHeader)) {
      header = req.get_header_value(kSecretHeader);
      secret = header;
    }
    reply(res, post_ratings(req.body, secret));
  });
  server.Get(R"(/api/progress/([^/]+))",
             [this, reply](const httplib::Request& req,
                           httplib::Response& res) {
               reply(res, get_progress(req.matches[1].str()));
             });
  server.Get("/api/results/aggregate",
             [this, reply](const httplib::Request&, httplib::Response& res) {
               reply(res, get_aggregate());
             });
  server.Get("/api/export",
             [this, reply](const httplib::Request&, httplib::Response& res) {
               reply(res, get_export());
             });
  if (!options_.static_dir.empty()) {
    server.set_mount_point("/", options_.static_dir);
  }
}

}  // namespace emotag
