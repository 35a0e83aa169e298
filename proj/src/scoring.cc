#include "emotag/scoring.h"

#include <algorithm>
#include <thread>

#include "emotag/io.h"

namespace emotag {

std::string_view method_name(ScoringMethod method) {
  switch (method) {
    case ScoringMethod::kBinaryTopkSum: return "binary_topk_sum";
    case ScoringMethod::kIntensitySimMean: return "intensity_sim_mean";
    case ScoringMethod::kIntensityFreqMean: return "intensity_freq_mean";
  }
  return "unknown";
}

std::optional<ScoringMethod> parse_method(std::string_view name) {
  for (ScoringMethod m :
       {ScoringMethod::kBinaryTopkSum, ScoringMethod::kIntensitySimMean,
        ScoringMethod::kIntensityFreqMean}) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

namespace {

void check_k(std::size_t k) {
  if (k == 0) throw Error(Errc::kInvalidArgument, "k must be at least 1");
}

std::size_t emoji_index(const EmbeddingSpace& space, std::string_view emoji) {
  std::optional<std::size_t> i = space.vocab().index(emoji);
  if (!i) {
    throw Error(Errc::kEmojiNotInVocabulary,
                "emoji not in vocabulary: " + std::string(emoji));
  }
  return *i;
}

[[noreturn]] void no_candidates(std::string_view emoji, Emotion emotion) {
  throw Error(Errc::kNoCandidateWords,
              "no candidate words for " + std::string(emoji) + " / " +
                  std::string(emotion_name(emotion)));
}

// Keeps the k best entries under (key desc, word asc), in that order.
void keep_top(std::vector<ScoredWord>& ranked, std::size_t k) {
  auto better = [](const ScoredWord& a, const ScoredWord& b) {
    return a.rank_key != b.rank_key ? a.rank_key > b.rank_key
                                    : a.word < b.word;
  };
  if (ranked.size() > k) {
    std::partial_sort(ranked.begin(), ranked.begin() + k, ranked.end(),
                      better);
    ranked.resize(k);
  } else {
    std::sort(ranked.begin(), ranked.end(), better);
  }
}

// Lexicon words present in the vocabulary, ranked by cosine to the emoji.
template <typename WordRange, typename WordOf>
std::vector<ScoredWord> rank_by_similarity(const EmbeddingSpace& space,
                                           std::size_t emoji,
                                           const WordRange& words,
                                           WordOf word_of, std::size_t k) {
  std::vector<ScoredWord> ranked;
  for (const auto& item : words) {
    const std::string& word = word_of(item);
    if (std::optional<std::size_t> i = space.vocab().index(word)) {
      ranked.push_back({word, space.cosine(emoji, *i)});
    }
  }
  keep_top(ranked, k);
  return ranked;
}

double mean_intensity(const std::vector<ScoredWord>& used,
                      const IntensityLexicon::WordScores& scores) {
  double sum = 0.0;
  for (const ScoredWord& w : used) sum += scores.at(w.word);
  return sum / static_cast<double>(used.size());
}

}  // namespace

ScoreResult score_binary(std::string_view emoji, Emotion emotion,
                         const EmbeddingSpace& space, const BinaryLexicon& lex,
                         std::size_t k) {
  check_k(k);
  const std::size_t e = emoji_index(space, emoji);
  ScoreResult result;
  result.used_words = rank_by_similarity(
      space, e, lex.words_for(emotion),
      [](const std::string& w) -> const std::string& { return w; }, k);
  if (result.used_words.empty()) no_candidates(emoji, emotion);
  for (const ScoredWord& w : result.used_words) result.score += w.rank_key;
  return result;
}

ScoreResult score_intensity_sim(std::string_view emoji, Emotion emotion,
                                const EmbeddingSpace& space,
                                const IntensityLexicon& lex, std::size_t k) {
  check_k(k);
  const IntensityLexicon::WordScores& scores = lex.words_for(emotion);
  const std::size_t e = emoji_index(space, emoji);
  ScoreResult result;
  result.used_words = rank_by_similarity(
      space, e, scores,
      [](const auto& entry) -> const std::string& { return entry.first; }, k);
  if (result.used_words.empty()) no_candidates(emoji, emotion);
  result.score = mean_intensity(result.used_words, scores);
  return result;
}

ScoreResult score_intensity_freq(std::string_view emoji, Emotion emotion,
                                 const CooccurrenceTable& cooc,
                                 const IntensityLexicon& lex, std::size_t k) {
  check_k(k);
  const IntensityLexicon::WordScores& scores = lex.words_for(emotion);
  const CooccurrenceTable::WordCounts* counts = cooc.words_for(emoji);
  if (counts == nullptr) no_candidates(emoji, emotion);
  ScoreResult result;
  if (counts->size() < scores.size()) {
    for (const auto& [word, count] : *counts) {
      if (count > 0 && scores.contains(word)) {
        result.used_words.push_back({word, static_cast<double>(count)});
      }
    }
  } else {
    for (const auto& [word, tau] : scores) {
      auto it = counts->find(word);
      if (it != counts->end() && it->second > 0) {
        result.used_words.push_back({word, static_cast<double>(it->second)});
      }
    }
  }
  keep_top(result.used_words, k);
  if (result.used_words.empty()) no_candidates(emoji, emotion);
  result.score = mean_intensity(result.used_words, scores);
  return result;
}

void ScoreTable::set(const std::string& emoji, Emotion emotion,
                     ScoreCell cell) {
  cells_[{emoji, emotion}] = cell;
}

const ScoreCell* ScoreTable::find(std::string_view emoji,
                                  Emotion emotion) const {
  auto it = cells_.find({std::string(emoji), emotion});
  return it == cells_.end() ? nullptr : &it->second;
}

std::size_t ScoreTable::present_count() const {
  return static_cast<std::size_t>(
      std::count_if(cells_.begin(), cells_.end(),
                    [](const auto& kv) { return kv.second.present(); }));
}

namespace {

ScoreCell score_cell(const std::string& emoji, Emotion emotion,
                     const ScoringInputs& in, const ScoringParams& params) {
  ScoreCell cell;
  try {
    ScoreResult r;
    switch (params.method) {
      case ScoringMethod::kBinaryTopkSum:
        r = score_binary(emoji, emotion, *in.space,
                         *std::get<const BinaryLexicon*>(in.lexicon), params.k);
        break;
      case ScoringMethod::kIntensitySimMean:
        r = score_intensity_sim(emoji, emotion, *in.space,
                                *std::get<const IntensityLexicon*>(in.lexicon),
                                params.k);
        break;
      case ScoringMethod::kIntensityFreqMean:
        r = score_intensity_freq(emoji, emotion, *in.cooc,
                                 *std::get<const IntensityLexicon*>(in.lexicon),
                                 params.k);
        break;
    }
    cell.score = r.score;
    cell.used_word_count = r.used_word_count();
  } catch (const Error& err) {
    cell.reason = err.code();
  }
  return cell;
}

void check_inputs(const ScoringInputs& in, const ScoringParams& params) {
  check_k(params.k);
  const bool binary = params.method == ScoringMethod::kBinaryTopkSum;
  const bool has_lexicon =
      binary ? std::holds_alternative<const BinaryLexicon*>(in.lexicon) &&
                   std::get<const BinaryLexicon*>(in.lexicon) != nullptr
             : std::holds_alternative<const IntensityLexicon*>(in.lexicon) &&
                   std::get<const IntensityLexicon*>(in.lexicon) != nullptr;
  if (!has_lexicon) {
    throw Error(Errc::kInvalidArgument,
                std::string(method_name(params.method)) + " needs " +
                    (binary ? "a binary" : "an intensity") + " lexicon");
  }
  if (params.method == ScoringMethod::kIntensityFreqMean) {
    if (in.cooc == nullptr) {
      throw Error(Errc::kInvalidArgument,
                  "intensity_freq_mean needs a co-occurrence table");
    }
  } else if (in.space == nullptr) {
    throw Error(Errc::kInvalidArgument,
                std::string(method_name(params.method)) +
                    " needs an embedding space");
  }
}

void score_range(const std::vector<std::string>& emojis, std::size_t begin,
                 std::size_t end, const ScoringInputs& in,
                 const ScoringParams& params, ScoreTable& out) {
  const IntensityLexicon* intensity =
      std::holds_alternative<const IntensityLexicon*>(in.lexicon)
          ? std::get<const IntensityLexicon*>(in.lexicon)
          : nullptr;
  for (std::size_t i = begin; i < end; ++i) {
    for (Emotion a : kAllEmotions) {
      if (intensity != nullptr && !intensity->covers(a)) {
        out.set(emojis[i], a, {std::nullopt, 0, Errc::kEmotionNotCovered});
        continue;
      }
      out.set(emojis[i], a, score_cell(emojis[i], a, in, params));
    }
  }
}

}  // namespace

ScoreTable score_all(const std::vector<std::string>& emojis,
                     const ScoringInputs& inputs, const ScoringParams& params,
                     std::size_t threads) {
  check_inputs(inputs, params);
  ScoreTable table(params);
  threads = std::max<std::size_t>(1, std::min(threads, emojis.size()));
  if (threads == 1) {
    score_range(emojis, 0, emojis.size(), inputs, params, table);
    return table;
  }
  std::vector<ScoreTable> partial(threads, ScoreTable(params));
  std::vector<std::thread> workers;
  const std::size_t chunk = (emojis.size() + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = std::min(emojis.size(), t * chunk);
    const std::size_t end = std::min(emojis.size(), begin + chunk);
    workers.emplace_back([&, t, begin, end] {
      score_range(emojis, begin, end, inputs, params, partial[t]);
    });
  }
  for (std::thread& w : workers) w.join();
  for (const ScoreTable& p : partial) {
    for (const auto& [key, cell] : p.cells()) table.set(key.first, key.second, cell);
  }
  return table;
}

namespace {

constexpr std::string_view kTableMarker = "# table";
constexpr std::string_view kAbsentMarker = "# absent";

std::string reason_name(Errc code) { return std::string(category_name(code)); }

std::optional<Errc> parse_reason(std::string_view name) {
  for (Errc c : {Errc::kInvalidArgument, Errc::kIo, Errc::kParse,
                 Errc::kValidation, Errc::kPrecondition,
                 Errc::kTokenNotInVocabulary, Errc::kEmojiNotInVocabulary,
                 Errc::kNoCandidateWords, Errc::kEmotionNotCovered,
                 Errc::kUndefinedCorrelation}) {
    if (category_name(c) == name) return c;
  }
  return std::nullopt;
}

}  // namespace

std::string score_tables_to_tsv(const std::vector<ScoreTable>& tables) {
  std::string out;
  for (const ScoreTable& table : tables) {
    const ScoringParams& p = table.params();
    const std::string prefix = std::string(method_name(p.method)) + "\t" +
                               std::to_string(p.k) + "\t" +
                               std::to_string(p.min_frequency);
    out += std::string(kTableMarker) + "\t" + prefix + "\t" +
           (p.anger_source ? std::string(anger_source_name(*p.anger_source))
                           : "-") +
           "\n";
    std::string absent;
    for (const auto& [key, cell] : table.cells()) {
      const std::string head =
          key.first + "\t" + std::string(emotion_name(key.second)) + "\t";
      if (cell.present()) {
        out += head + prefix + "\t" + format_real(*cell.score) + "\t" +
               std::to_string(cell.used_word_count) + "\n";
      } else {
        absent += std::string(kAbsentMarker) + "\t" + head + prefix + "\t" +
                  reason_name(cell.reason.value_or(Errc::kNoCandidateWords)) +
                  "\n";
      }
    }
    out += absent;
  }
  return out;
}

std::vector<ScoreTable> score_tables_from_tsv(std::string_view tsv,
                                              const std::string& source) {
  std::vector<ScoreTable> tables;
  std::optional<EmotionMapping::AngerSource> anger;

  auto table_for = [&](const ScoringParams& p) -> ScoreTable& {
    for (ScoreTable& t : tables) {
      if (t.params() == p) return t;
    }
    tables.emplace_back(p);
    return tables.back();
  };
  auto parse_params = [&](const std::vector<std::string>& f, std::size_t at,
                          const std::string& where) {
    ScoringParams p;
    std::optional<ScoringMethod> m = parse_method(f[at]);
    std::optional<std::int64_t> k = parse_int(f[at + 1]);
    std::optional<std::int64_t> F = parse_int(f[at + 2]);
    if (!m) throw Error(Errc::kParse, where + ": unknown method '" + f[at] + "'");
    if (!k || *k < 1 || !F || *F < 0) {
      throw Error(Errc::kParse, where + ": bad k or F");
    }
    p.method = *m;
    p.k = static_cast<std::size_t>(*k);
    p.min_frequency = static_cast<std::uint64_t>(*F);
    p.anger_source = anger;
    return p;
  };

  std::vector<std::string> lines = split_lines(tsv);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string& line = lines[n];
    if (trim(line).empty()) continue;
    const std::string where = source + ":" + std::to_string(n + 1);
    std::vector<std::string> f = split(line, '\t');
    if (line.front() == '#') {
      if (f[0] == kTableMarker && f.size() == 5) {
        anger = parse_anger_source(f[4]);
        table_for(parse_params(f, 1, where));
      } else if (f[0] == kAbsentMarker && f.size() == 7) {
        std::optional<Emotion> e = parse_emotion(f[2]);
        std::optional<Errc> reason = parse_reason(f[6]);
        if (!e || !reason) throw Error(Errc::kParse, where + ": bad absent row");
        table_for(parse_params(f, 3, where))
            .set(f[1], *e, {std::nullopt, 0, *reason});
      }
      continue;
    }
    if (f.size() != 7) {
      throw Error(Errc::kParse, where + ": expected 7 tab-separated fields");
    }
    std::optional<Emotion> e = parse_emotion(f[1]);
    if (!e) throw Error(Errc::kParse, where + ": unknown emotion '" + f[1] + "'");
    std::optional<double> score = parse_real(f[5]);
    std::optional<std::int64_t> used = parse_int(f[6]);
    if (!score || !used || *used < 0) {
      throw Error(Errc::kParse, where + ": bad score or used_word_count");
    }
    table_for(parse_params(f, 2, where))
        .set(f[0], *e, {*score, static_cast<std::size_t>(*used), std::nullopt});
  }
  return tables;
}

}  // namespace emotag
