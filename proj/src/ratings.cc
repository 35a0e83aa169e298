#include "emotag/ratings.h"

#include <algorithm>
#include <cmath>

#include "emotag/emoji.h"
#include "emotag/error.h"
#include "json.hpp"

namespace emotag {

using nlohmann::json;

std::string to_json_line(const RatingRecord& record) {
  json j = {{"rater", record.rater},
            {"emoji", record.emoji},
            {"emotion", std::string(emotion_name(record.emotion))},
            {"score", record.score},
            {"ts", record.ts}};
  return j.dump();
}

RatingRecord parse_rating_line(std::string_view line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(Errc::kParse, "malformed JSON");
  }
  auto str_field = [&](const char* name) -> std::string {
    auto it = j.find(name);
    if (it == j.end() || !it->is_string()) {
      throw Error(Errc::kParse, std::string("missing string field \"") + name +
                                    "\"");
    }
    return it->get<std::string>();
  };
  RatingRecord r;
  r.rater = str_field("rater");
  if (r.rater.empty()) throw Error(Errc::kValidation, "empty rater id");
  const std::string emoji = str_field("emoji");
  std::optional<EmojiKey> key = EmojiKey::parse(emoji);
  if (!key) throw Error(Errc::kValidation, "invalid emoji key '" + emoji + "'");
  r.emoji = key->str();
  const std::string emotion = str_field("emotion");
  std::optional<Emotion> e = parse_emotion(emotion);
  if (!e) throw Error(Errc::kValidation, "unknown emotion '" + emotion + "'");
  r.emotion = *e;
  auto score = j.find("score");
  if (score == j.end() || !score->is_number_integer()) {
    throw Error(Errc::kParse, "missing integer field \"score\"");
  }
  const std::int64_t raw = score->get<std::int64_t>();
  if (raw < kMinRating || raw > kMaxRating) {
    throw Error(Errc::kValidation,
                "score " + std::to_string(raw) + " outside 0-4");
  }
  r.score = static_cast<int>(raw);
  for (const char* name : {"ts", "timestamp"}) {
    auto it = j.find(name);
    if (it != j.end() && it->is_string()) {
      r.ts = it->get<std::string>();
      if (!r.ts.empty() && !parse_iso8601(r.ts)) {
        throw Error(Errc::kValidation, "invalid timestamp '" + r.ts + "'");
      }
      break;
    }
  }
  return r;
}

RatingSet::RatingSet(const std::vector<RatingRecord>& records) {
  using Key = std::tuple<std::string, std::string, Emotion>;
  struct Winner {
    std::size_t position;
    std::optional<std::int64_t> ts;
  };
  std::map<Key, Winner> winners;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const RatingRecord& r = records[i];
    std::optional<std::int64_t> ts =
        r.ts.empty() ? std::nullopt : parse_iso8601(r.ts);
    Key key{r.rater, r.emoji, r.emotion};
    auto it = winners.find(key);
    if (it == winners.end()) {
      winners.emplace(key, Winner{i, ts});
      continue;
    }
    const bool older = ts && it->second.ts && *ts < *it->second.ts;
    if (!older) it->second = Winner{i, ts};
  }
  std::set<std::string> raters;
  std::set<std::string> emojis;
  for (const auto& [key, winner] : winners) {
    const RatingRecord& r = records[winner.position];
    records_.push_back(r);
    raters.insert(r.rater);
    emojis.insert(r.emoji);
    rated_[r.rater].insert({r.emoji, r.emotion});
  }
  raters_.assign(raters.begin(), raters.end());
  emojis_.assign(emojis.begin(), emojis.end());
}

std::optional<int> RatingSet::score(std::string_view rater,
                                    std::string_view emoji,
                                    Emotion emotion) const {
  auto it = std::lower_bound(
      records_.begin(), records_.end(), std::tie(rater, emoji, emotion),
      [](const RatingRecord& r, const auto& key) {
        return std::tie(r.rater, r.emoji, r.emotion) <
               std::make_tuple(std::string(std::get<0>(key)),
                               std::string(std::get<1>(key)),
                               std::get<2>(key));
      });
  if (it == records_.end() || it->rater != rater || it->emoji != emoji ||
      it->emotion != emotion) {
    return std::nullopt;
  }
  return it->score;
}

std::map<RatingSet::CellKey, std::vector<std::pair<std::string, int>>>
RatingSet::by_cell() const {
  std::map<CellKey, std::vector<std::pair<std::string, int>>> cells;
  for (const RatingRecord& r : records_) {
    cells[{r.emoji, r.emotion}].emplace_back(r.rater, r.score);
  }
  return cells;
}

std::vector<RatingSet::CellKey> RatingSet::missing_cells(
    std::string_view rater) const {
  std::vector<CellKey> missing;
  auto it = rated_.find(rater);
  for (const std::string& emoji : emojis_) {
    for (Emotion e : kAllEmotions) {
      if (it == rated_.end() || !it->second.contains({emoji, e})) {
        missing.emplace_back(emoji, e);
      }
    }
  }
  return missing;
}

double RatingSet::completeness(std::string_view rater) const {
  const std::size_t grid = emojis_.size() * kNumEmotions;
  if (grid == 0) return 0.0;
  auto it = rated_.find(rater);
  const std::size_t rated = it == rated_.end() ? 0 : it->second.size();
  return static_cast<double>(rated) / static_cast<double>(grid);
}

RatingsLoad load_ratings(const std::string& path) {
  return parse_ratings(read_file(path));
}

RatingsLoad parse_ratings(std::string_view jsonl) {
  RatingsLoad out;
  std::vector<RatingRecord> records;
  std::vector<std::string> lines = split_lines(jsonl);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (trim(lines[n]).empty()) continue;
    try {
      records.push_back(parse_rating_line(lines[n]));
    } catch (const Error& err) {
      out.issues.push_back({n + 1, err.what()});
    }
  }
  out.ratings = RatingSet(records);
  return out;
}

void GoldTable::set(const std::string& emoji, Emotion emotion, GoldCell cell) {
  cells_[{emoji, emotion}] = cell;
}

const GoldCell* GoldTable::find(std::string_view emoji, Emotion emotion) const {
  auto it = cells_.find({std::string(emoji), emotion});
  return it == cells_.end() ? nullptr : &it->second;
}

std::vector<std::string> GoldTable::emojis() const {
  std::vector<std::string> out;
  for (const auto& [key, cell] : cells_) {
    if (out.empty() || out.back() != key.first) out.push_back(key.first);
  }
  return out;
}

std::string GoldTable::to_tsv() const {
  std::string out;
  for (const auto& [key, cell] : cells_) {
    out += key.first + "\t" + std::string(emotion_name(key.second)) + "\t" +
           format_real(cell.gold) + "\t" + format_real(cell.sd) + "\t" +
           std::to_string(cell.n) + "\n";
  }
  return out;
}

GoldTable GoldTable::from_tsv(std::string_view tsv, const std::string& source) {
  GoldTable table;
  std::vector<std::string> lines = split_lines(tsv);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string& line = lines[n];
    if (trim(line).empty() || line.front() == '#') continue;
    const std::string where = source + ":" + std::to_string(n + 1);
    std::vector<std::string> f = split(line, '\t');
    if (f.size() != 5) {
      throw Error(Errc::kParse, where + ": expected 5 tab-separated fields");
    }
    std::optional<EmojiKey> key = EmojiKey::parse(f[0]);
    std::optional<Emotion> e = parse_emotion(f[1]);
    std::optional<double> gold = parse_real(f[2]);
    std::optional<double> sd = parse_real(f[3]);
    std::optional<std::int64_t> count = parse_int(f[4]);
    if (!key || !e || !gold || !sd || !count || *count < 0) {
      throw Error(Errc::kParse, where + ": malformed gold row");
    }
    table.set(key->str(), *e, {*gold, *sd, static_cast<std::size_t>(*count)});
  }
  return table;
}

GoldTable GoldTable::load(const std::string& path) {
  return from_tsv(read_file(path), path);
}

GoldTable aggregate(const RatingSet& ratings) {
  GoldTable table;
  auto cells = ratings.by_cell();
  std::vector<double> values;
  for (const std::string& emoji : ratings.emojis()) {
    for (Emotion e : kAllEmotions) {
      auto it = cells.find({emoji, e});
      if (it == cells.end()) {
        table.warnings().push_back("no ratings for " + emoji + " / " +
                                   std::string(emotion_name(e)));
        continue;
      }
      values.clear();
      for (const auto& [rater, score] : it->second) {
        values.push_back(static_cast<double>(score) / kMaxRating);
      }
      table.set(emoji, e, {mean(values), population_sd(values), values.size()});
    }
  }
  return table;
}

RaterMatrix pairwise_rater_pearson(const RatingSet& ratings) {
  const std::vector<std::string>& raters = ratings.raters();
  if (raters.size() < 2) {
    throw Error(Errc::kPrecondition, "pairwise correlation needs two raters");
  }
  std::map<std::string, std::map<RatingSet::CellKey, int>> by_rater;
  for (const RatingRecord& r : ratings.records()) {
    by_rater[r.rater][{r.emoji, r.emotion}] = r.score;
  }
  RaterMatrix m;
  m.raters = raters;
  m.r.assign(raters.size(), std::vector<std::optional<double>>(raters.size()));
  std::vector<double> xs, ys;
  for (std::size_t a = 0; a < raters.size(); ++a) {
    m.r[a][a] = 1.0;
    const auto& ca = by_rater[raters[a]];
    for (std::size_t b = a + 1; b < raters.size(); ++b) {
      const auto& cb = by_rater[raters[b]];
      xs.clear();
      ys.clear();
      for (const auto& [cell, score] : ca) {
        auto it = cb.find(cell);
        if (it == cb.end()) continue;
        xs.push_back(score);
        ys.push_back(it->second);
      }
      std::optional<double> r =
          xs.size() >= 2 ? try_pearson(xs, ys) : std::nullopt;
      m.r[a][b] = r;
      m.r[b][a] = r;
    }
  }
  return m;
}

std::array<EmotionAgreement, kNumEmotions> rater_vs_gold_by_emotion(
    const RatingSet& ratings, bool leave_one_out) {
  std::array<EmotionAgreement, kNumEmotions> out;
  auto cells = ratings.by_cell();
  std::vector<double> xs, ys;
  for (Emotion e : kAllEmotions) {
    EmotionAgreement& agreement = out[index_of(e)];
    double sum = 0.0;
    std::size_t defined = 0;
    for (const std::string& rater : ratings.raters()) {
      xs.clear();
      ys.clear();
      for (const std::string& emoji : ratings.emojis()) {
        auto it = cells.find({emoji, e});
        if (it == cells.end()) continue;
        std::optional<int> own;
        double total = 0.0;
        std::size_t n = 0;
        for (const auto& [who, score] : it->second) {
          if (who == rater) own = score;
          if (leave_one_out && who == rater) continue;
          total += static_cast<double>(score) / kMaxRating;
          ++n;
        }
        if (!own || n == 0) continue;
        xs.push_back(static_cast<double>(*own) / kMaxRating);
        ys.push_back(total / static_cast<double>(n));
      }
      std::optional<double> r =
          xs.size() >= 2 ? try_pearson(xs, ys) : std::nullopt;
      agreement.per_rater[rater] = r;
      if (r) {
        sum += *r;
        ++defined;
      } else {
        agreement.excluded.push_back(rater);
      }
    }
    if (defined > 0) agreement.mean = sum / static_cast<double>(defined);
  }
  return out;
}

AlphaResult krippendorff_alpha(const RatingSet& ratings,
                               std::string_view emoji) {
  std::vector<std::vector<double>> units(kNumEmotions);
  std::set<std::string> raters;
  for (const RatingRecord& r : ratings.records()) {
    if (r.emoji != emoji) continue;
    units[index_of(r.emotion)].push_back(r.rescaled());
    raters.insert(r.rater);
  }
  if (raters.size() < 2) {
    throw Error(Errc::kPrecondition, "alpha for " + std::string(emoji) +
                                         " needs ratings from two raters");
  }
  return interval_alpha(units);
}

}  // namespace emotag
