#include "emotag/annotation_service.h"

#include <gtest/gtest.h>

#include <chrono>
#include <cstdio>
#include <set>
#include <thread>

#include "emotag/error.h"
#include "emotag/io.h"
#include "httplib.h"
#include "json.hpp"
#include "test_support.h"

namespace emotag {
namespace {

using nlohmann::json;

std::vector<InventoryEntry> synthetic_roster(std::size_t n) {
  std::vector<InventoryEntry> out;
  for (std::size_t i = 0; i < n; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%x", 0x1f300 + static_cast<unsigned>(i));
    out.push_back({*EmojiKey::parse(buf), "emoji " + std::to_string(i)});
  }
  return out;
}

std::vector<InventoryEntry> roster_of(std::initializer_list<const char*> keys) {
  std::vector<InventoryEntry> out;
  for (const char* k : keys) out.push_back({*EmojiKey::parse(k), k});
  return out;
}

TEST(CampaignTest, Arithmetic) {
  Campaign small = make_campaign(synthetic_roster(10), 2, 1);
  ASSERT_EQ(small.sets.size(), 2u);
  EXPECT_EQ(small.sets[0].size(), 5u);
  EXPECT_EQ(small.sets[1].size(), 5u);

  Campaign full = make_campaign(synthetic_roster(150), 6, 7);
  ASSERT_EQ(full.sets.size(), 6u);
  std::set<std::string> seen;
  for (const auto& set : full.sets) {
    EXPECT_EQ(set.size(), 25u);
    for (const CampaignEmoji& e : set) seen.insert(e.key);
  }
  EXPECT_EQ(seen.size(), 150u);
  EXPECT_EQ(full.emoji_count(), 150u);

  EXPECT_THROW(make_campaign(synthetic_roster(10), 3, 1), Error);
  EXPECT_THROW(make_campaign(synthetic_roster(10), 0, 1), Error);
  EXPECT_THROW(make_campaign({}, 1, 1), Error);
}

TEST(CampaignTest, SeedDeterminesMembership) {
  auto roster = synthetic_roster(40);
  Campaign a = make_campaign(roster, 4, 11);
  Campaign b = make_campaign(roster, 4, 11);
  Campaign c = make_campaign(roster, 4, 12);
  EXPECT_EQ(a.to_json(), b.to_json());
  EXPECT_NE(a.to_json(), c.to_json());
  // Input order does not matter, only the seed.
  std::reverse(roster.begin(), roster.end());
  EXPECT_EQ(make_campaign(roster, 4, 11).to_json(), a.to_json());
}

TEST(CampaignTest, JsonRoundTrip) {
  Campaign c = make_campaign(synthetic_roster(12), 3, 5);
  Campaign back = Campaign::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
  EXPECT_EQ(back.set_of(c.sets[2][0].key), 3u);
  EXPECT_EQ(back.set_of("2764"), 0u);
  json j = json::parse(c.to_json());
  j["sets"][1]["emojis"][0] = j["sets"][0]["emojis"][0];
  EXPECT_THROW(Campaign::from_json(j.dump()), Error);
}

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::temp_dir("service");
    store_ = (dir_ / "ratings.jsonl").string();
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  AnnotationService make(std::optional<std::string> secret = std::nullopt) {
    return AnnotationService(ServiceOptions{store_, secret, ""});
  }

  // A full batch for a set, every cell scored by fn(emoji index, emotion).
  static std::string batch(const std::string& rater, std::size_t set,
                           const std::vector<CampaignEmoji>& emojis,
                           const std::function<int(std::size_t, Emotion)>& fn) {
    json j;
    j["rater"] = rater;
    j["set"] = set;
    j["ratings"] = json::array();
    for (std::size_t i = 0; i < emojis.size(); ++i) {
      for (Emotion e : kAllEmotions) {
        j["ratings"].push_back({{"emoji", emojis[i].key},
                                {"emotion", std::string(emotion_name(e))},
                                {"score", fn(i, e)}});
      }
    }
    return j.dump();
  }

  std::filesystem::path dir_;
  std::string store_;
};

TEST_F(ServiceTest, UninitializedCampaign) {
  AnnotationService s = make();
  EXPECT_FALSE(s.initialized());
  EXPECT_EQ(s.get_campaign().status, 503);
  EXPECT_EQ(s.get_set("1", "").status, 503);
}

TEST_F(ServiceTest, SetsAreStableButShuffled) {
  AnnotationService s = make();
  Campaign c = make_campaign(synthetic_roster(50), 2, 3);
  s.set_campaign(c);
  EXPECT_EQ(s.get_set("0", "").status, 404);
  EXPECT_EQ(s.get_set("3", "").status, 404);
  EXPECT_EQ(s.get_set("abc", "").status, 404);

  std::set<std::string> members;
  for (const CampaignEmoji& e : c.sets[0]) members.insert(e.key);
  std::set<std::vector<std::string>> orders;
  for (int fetch = 0; fetch < 20; ++fetch) {
    HttpResponse r = s.get_set("1", "");
    ASSERT_EQ(r.status, 200);
    json j = json::parse(r.body);
    EXPECT_EQ(j["emotions"].size(), 8u);
    std::vector<std::string> order;
    for (const json& e : j["emojis"]) order.push_back(e["key"]);
    EXPECT_EQ(std::set<std::string>(order.begin(), order.end()), members);
    orders.insert(order);
  }
  EXPECT_GE(orders.size(), 19u);
}

TEST_F(ServiceTest, PostValidation) {
  AnnotationService s = make();
  Campaign c = make_campaign(synthetic_roster(4), 2, 3);
  s.set_campaign(c);
  auto ok = [](std::size_t, Emotion) { return 2; };

  EXPECT_EQ(s.post_ratings("{oops", std::nullopt).status, 400);
  EXPECT_EQ(s.post_ratings(R"({"set":1,"ratings":[]})", std::nullopt).status,
            400);
  EXPECT_EQ(s.post_ratings(batch("r", 9, c.sets[0], ok), std::nullopt).status,
            404);

  // A score of 5 names the offending cell.
  HttpResponse bad = s.post_ratings(
      batch("r", 1, c.sets[0],
            [](std::size_t i, Emotion e) {
              return i == 1 && e == Emotion::kFear ? 5 : 2;
            }),
      std::nullopt);
  EXPECT_EQ(bad.status, 422);
  json bj = json::parse(bad.body);
  ASSERT_EQ(bj["invalid"].size(), 1u);
  EXPECT_EQ(bj["invalid"][0]["emoji"], c.sets[0][1].key);
  EXPECT_EQ(bj["invalid"][0]["emotion"], "fear");

  // Incomplete batches list the missing cells.
  json partial = json::parse(batch("r", 1, c.sets[0], ok));
  partial["ratings"].erase(partial["ratings"].begin());
  HttpResponse inc = s.post_ratings(partial.dump(), std::nullopt);
  EXPECT_EQ(inc.status, 422);
  EXPECT_EQ(json::parse(inc.body)["missing"].size(), 1u);

  // An emoji from the other set.
  json foreign = json::parse(batch("r", 1, c.sets[0], ok));
  foreign["ratings"][0]["emoji"] = c.sets[1][0].key;
  EXPECT_EQ(s.post_ratings(foreign.dump(), std::nullopt).status, 409);
  json emo = json::parse(batch("r", 1, c.sets[0], ok));
  emo["ratings"][0]["emotion"] = "glee";
  EXPECT_EQ(s.post_ratings(emo.dump(), std::nullopt).status, 409);

  // Nothing was stored by the rejected requests.
  EXPECT_EQ(s.get_export().body, "");

  HttpResponse good = s.post_ratings(batch("r", 1, c.sets[0], ok), std::nullopt);
  EXPECT_EQ(good.status, 200);
  EXPECT_EQ(json::parse(good.body)["accepted"], 16);
}

TEST_F(ServiceTest, SharedSecret) {
  AnnotationService s = make("hunter2");
  Campaign c = make_campaign(synthetic_roster(2), 1, 3);
  s.set_campaign(c);
  std::string body = batch("r", 1, c.sets[0], [](auto, auto) { return 1; });
  EXPECT_EQ(s.post_ratings(body, std::nullopt).status, 401);
  EXPECT_EQ(s.post_ratings(body, "wrong").status, 401);
  EXPECT_EQ(s.post_ratings(body, "hunter2").status, 200);
}

TEST_F(ServiceTest, ProgressAndResume) {
  AnnotationService s = make();
  Campaign c = make_campaign(synthetic_roster(6), 2, 3);
  s.set_campaign(c);
  ASSERT_EQ(s.post_ratings(batch("amy", 2, c.sets[1],
                                 [](auto, auto) { return 3; }),
                           std::nullopt)
                .status,
            200);
  json p = json::parse(s.get_progress("amy").body);
  ASSERT_EQ(p["sets"].size(), 2u);
  EXPECT_EQ(p["sets"][0]["completed"], 0);
  EXPECT_EQ(p["sets"][1]["completed"], 24);
  EXPECT_EQ(p["sets"][1]["total"], 24);
  EXPECT_DOUBLE_EQ(p["sets"][1]["fraction"].get<double>(), 1.0);

  json set = json::parse(s.get_set("2", "amy").body);
  EXPECT_EQ(set["ratings"].size(), 24u);
  EXPECT_TRUE(json::parse(s.get_set("2", "bob").body)["ratings"].empty());

  // A new service over the same store picks up where it left off.
  AnnotationService again = make();
  again.set_campaign(c);
  EXPECT_EQ(json::parse(again.get_progress("amy").body)["sets"][1]["completed"],
            24);
}

TEST_F(ServiceTest, AggregateReproducesReferenceCells) {
  AnnotationService s = make();
  Campaign c = make_campaign(
      roster_of({"1f621", "1f60a", "1f62d", "1f633", "1f448"}), 1, 3);
  s.set_campaign(c);
  EXPECT_EQ(json::parse(s.get_aggregate().body)["gold"].size(), 0u);

  const std::map<std::pair<std::string, Emotion>, std::vector<int>> cells = {
      {{"1f621", Emotion::kAnger}, {4, 4, 4, 4, 4, 4, 4, 4, 4}},
      {{"1f60a", Emotion::kJoy}, {4, 4, 4, 4, 4, 4, 3, 3, 3}},
      {{"1f62d", Emotion::kSadness}, {4, 4, 4, 4, 4, 4, 4, 4, 4}},
      {{"1f633", Emotion::kFear}, {0, 0, 1, 1, 2, 3, 3, 4, 4}},
      {{"1f448", Emotion::kAnticipation}, {0, 0, 0, 0, 0, 0, 2, 3, 4}}};
  const auto& emojis = c.sets[0];
  for (std::size_t r = 0; r < 9; ++r) {
    auto fn = [&](std::size_t i, Emotion e) {
      auto it = cells.find({emojis[i].key, e});
      return it == cells.end() ? static_cast<int>((r + i) % 5) : it->second[r];
    };
    ASSERT_EQ(
        s.post_ratings(batch("r" + std::to_string(r), 1, emojis, fn),
                       std::nullopt)
            .status,
        200);
    if (r == 0) {
      json one = json::parse(s.get_aggregate().body);
      EXPECT_EQ(one["gold"].size(), 40u);
      EXPECT_TRUE(one["agreement"]["pairwise"].is_null());
    }
  }
  GoldTable g = gold_from_results_json(s.get_aggregate().body);
  EXPECT_NEAR(g.find("1f621", Emotion::kAnger)->gold, 1.00, 0.005);
  EXPECT_NEAR(g.find("1f60a", Emotion::kJoy)->gold, 0.9167, 0.005);
  EXPECT_NEAR(g.find("1f60a", Emotion::kJoy)->sd, 0.1179, 0.005);
  EXPECT_NEAR(g.find("1f633", Emotion::kFear)->sd, 0.3727, 0.005);
  EXPECT_NEAR(g.find("1f448", Emotion::kAnticipation)->gold, 0.25, 0.005);

  // Export then offline aggregation gives the same table.
  RatingsLoad offline = parse_ratings(s.get_export().body);
  EXPECT_TRUE(offline.issues.empty());
  EXPECT_EQ(aggregate(offline.ratings), g);
  EXPECT_EQ(results_json(offline.ratings), s.get_aggregate().body);
  EXPECT_EQ(read_file(store_), s.get_export().body);
}

TEST_F(ServiceTest, HttpRoundTrip) {
  AnnotationService s = make("key");
  Campaign c = make_campaign(synthetic_roster(4), 2, 9);
  s.set_campaign(c);
  httplib::Server server;
  s.mount(server);
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto campaign = client.Get("/api/campaign");
  ASSERT_TRUE(campaign);
  EXPECT_EQ(campaign->status, 200);
  EXPECT_EQ(json::parse(campaign->body)["sets"].size(), 2u);
  EXPECT_EQ(client.Get("/api/sets/7")->status, 404);

  std::string body = batch("zoe", 1, c.sets[0], [](auto, auto) { return 4; });
  EXPECT_EQ(client.Post("/api/ratings", body, "application/json")->status, 401);
  httplib::Headers headers = {{kSecretHeader, "key"}};
  auto posted = client.Post("/api/ratings", headers, body, "application/json");
  ASSERT_TRUE(posted);
  EXPECT_EQ(posted->status, 200);

  auto progress = client.Get("/api/progress/zoe");
  EXPECT_EQ(json::parse(progress->body)["sets"][0]["completed"], 16);
  auto set = client.Get("/api/sets/1?rater=zoe");
  EXPECT_EQ(json::parse(set->body)["ratings"].size(), 16u);
  auto agg = client.Get("/api/results/aggregate");
  EXPECT_EQ(json::parse(agg->body)["gold"].size(), 16u);
  auto exported = client.Get("/api/export");
  EXPECT_EQ(exported->body, s.get_export().body);

  server.stop();
  th.join();
}

}  // namespace
}  // namespace emotag
