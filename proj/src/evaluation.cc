#include "emotag/evaluation.h"

#include <algorithm>
#include <cstdio>

#include "emotag/error.h"
#include "emotag/io.h"

namespace emotag {

namespace {

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string cell_text(const EvaluationCell& cell) {
  if (cell.r) return fixed2(*cell.r);
  return "N/A";
}

std::string pad(std::string s, std::size_t width, bool left) {
  if (s.size() >= width) return s;
  std::string fill(width - s.size(), ' ');
  return left ? s + fill : fill + s;
}

std::string opt_csv(const std::optional<double>& v) {
  return v ? format_real(*v) : "NA";
}

}  // namespace

std::string_view na_reason_name(NaReason reason) {
  switch (reason) {
    case NaReason::kNotCovered:
      return "not_covered";
    case NaReason::kInsufficientData:
      return "insufficient_data";
    case NaReason::kUndefinedCorrelation:
      return "undefined_correlation";
  }
  return "unknown";
}

std::optional<double> EvaluationRow::average() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const EvaluationCell& c : cells) {
    if (!c.r) continue;
    sum += *c.r;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::string EvaluationRow::label() const {
  std::string s = std::string(method_name(params.method)) +
                  " k=" + std::to_string(params.k);
  if (params.method != ScoringMethod::kBinaryTopkSum) {
    s += " F=" + std::to_string(params.min_frequency);
  }
  if (params.anger_source) {
    s += " anger=" + std::string(anger_source_name(*params.anger_source));
  }
  return s;
}

EvaluationRow make_row(
    const ScoringParams& params,
    const std::array<std::optional<double>, kNumEmotions>& values) {
  EvaluationRow row;
  row.params = params;
  for (std::size_t i = 0; i < kNumEmotions; ++i) {
    row.cells[i].r = values[i];
    if (!values[i]) row.cells[i].na = NaReason::kNotCovered;
  }
  return row;
}

EvaluationRow evaluate(const GoldTable& gold, const ScoreTable& scores) {
  EvaluationRow row;
  row.params = scores.params();
  for (Emotion e : kAllEmotions) {
    EvaluationCell& cell = row.cells[index_of(e)];
    bool any_present = false;
    bool all_uncovered = true;
    for (const auto& [key, sc] : scores.cells()) {
      if (key.second != e) continue;
      if (sc.present()) {
        any_present = true;
      } else if (sc.reason != Errc::kEmotionNotCovered) {
        all_uncovered = false;
      }
    }
    if (!any_present && all_uncovered) {
      cell.na = NaReason::kNotCovered;
      continue;
    }
    std::vector<double> xs, ys;
    for (const auto& [key, g] : gold.cells()) {
      if (key.second != e) continue;
      const ScoreCell* sc = scores.find(key.first, e);
      if (sc == nullptr || !sc->present()) {
        ++cell.dropped;
        continue;
      }
      xs.push_back(g.gold);
      ys.push_back(*sc->score);
    }
    cell.n = xs.size();
    if (xs.size() < 2) {
      cell.na = NaReason::kInsufficientData;
      continue;
    }
    cell.r = try_pearson(xs, ys);
    if (!cell.r) cell.na = NaReason::kUndefinedCorrelation;
  }
  return row;
}

std::string report_to_tsv(const std::vector<EvaluationRow>& rows) {
  std::string out = "method\tk\tF\tanger";
  for (Emotion e : kAllEmotions) out += "\t" + std::string(emotion_name(e));
  out += "\taverage\n";
  for (const EvaluationRow& row : rows) {
    out += std::string(method_name(row.params.method)) + "\t" +
           std::to_string(row.params.k) + "\t" +
           std::to_string(row.params.min_frequency) + "\t" +
           (row.params.anger_source
                ? std::string(anger_source_name(*row.params.anger_source))
                : std::string("-"));
    for (const EvaluationCell& c : row.cells) {
      out += "\t";
      out += c.r ? format_real(*c.r)
                 : "NA(" + std::string(na_reason_name(*c.na)) + ")";
    }
    std::optional<double> avg = row.average();
    out += "\t" + (avg ? format_real(*avg) : std::string("NA")) + "\n";
  }
  return out;
}

std::string report_to_text(const std::vector<EvaluationRow>& rows) {
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> header = {"method / settings"};
  for (Emotion e : kAllEmotions) header.emplace_back(emotion_name(e));
  header.emplace_back("average");
  table.push_back(header);
  for (const EvaluationRow& row : rows) {
    std::vector<std::string> line = {row.label()};
    for (const EvaluationCell& c : row.cells) line.push_back(cell_text(c));
    std::optional<double> avg = row.average();
    line.push_back(avg ? fixed2(*avg) : "N/A");
    table.push_back(std::move(line));
  }
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& line : table) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      widths[i] = std::max(widths[i], line[i].size());
    }
  }
  std::string out;
  for (const auto& line : table) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i > 0) out += "  ";
      out += pad(line[i], widths[i], i == 0);
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  }
  return out;
}

Bucket bucket_of(double gold) {
  if (gold < 0.25) return kB1;
  if (gold < 0.5) return kB2;
  if (gold < 0.75) return kB3;
  return kB4;
}

std::size_t BucketDistribution::total(Emotion emotion) const {
  std::size_t n = 0;
  for (std::size_t c : counts[index_of(emotion)]) n += c;
  return n;
}

BucketDistribution bucket_distribution(const GoldTable& gold) {
  BucketDistribution dist;
  for (const auto& [key, cell] : gold.cells()) {
    ++dist.counts[index_of(key.second)][bucket_of(cell.gold)];
  }
  return dist;
}

std::string buckets_to_text(const BucketDistribution& dist) {
  std::string out = "bucket";
  for (Emotion e : kAllEmotions) {
    out += "  " + pad(std::string(emotion_name(e)), 12, false);
  }
  out += '\n';
  for (std::size_t b = kNumBuckets; b-- > 0;) {
    out += "B" + std::to_string(b + 1) + "    ";
    for (Emotion e : kAllEmotions) {
      out += "  " + pad(std::to_string(dist.counts[index_of(e)][b]), 12, false);
    }
    out += '\n';
  }
  return out;
}

std::string buckets_to_tsv(const BucketDistribution& dist) {
  std::string out = "bucket";
  for (Emotion e : kAllEmotions) out += "\t" + std::string(emotion_name(e));
  out += '\n';
  for (std::size_t b = kNumBuckets; b-- > 0;) {
    out += "B" + std::to_string(b + 1);
    for (Emotion e : kAllEmotions) {
      out += "\t" + std::to_string(dist.counts[index_of(e)][b]);
    }
    out += '\n';
  }
  return out;
}

std::vector<std::pair<std::string, double>> top_emojis(const GoldTable& gold,
                                                       Emotion emotion,
                                                       std::size_t n) {
  if (n == 0) throw Error(Errc::kInvalidArgument, "top_emojis: n must be >= 1");
  std::vector<std::pair<std::string, double>> all;
  for (const auto& [key, cell] : gold.cells()) {
    if (key.second == emotion) all.emplace_back(key.first, cell.gold);
  }
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (all.size() > n) all.resize(n);
  return all;
}

std::string agreement_to_csv(
    const std::array<EmotionAgreement, kNumEmotions>& agreement) {
  std::string out = "emotion,rater,r\n";
  for (Emotion e : kAllEmotions) {
    for (const auto& [rater, r] : agreement[index_of(e)].per_rater) {
      out += std::string(emotion_name(e)) + "," + rater + "," + opt_csv(r) +
             "\n";
    }
  }
  return out;
}

std::string rater_matrix_to_csv(const RaterMatrix& matrix) {
  std::string out = "rater_a,rater_b,r\n";
  for (std::size_t a = 0; a < matrix.raters.size(); ++a) {
    for (std::size_t b = 0; b < matrix.raters.size(); ++b) {
      out += matrix.raters[a] + "," + matrix.raters[b] + "," +
             opt_csv(matrix.r[a][b]) + "\n";
    }
  }
  return out;
}

}  // namespace emotag
