#include "emotag/stats.h"

#include <cmath>

#include "emotag/error.h"

namespace emotag {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw Error(Errc::kInvalidArgument, "mean of no values");
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double population_sd(std::span<const double> xs) {
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size()));
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error(Errc::kInvalidArgument, "pearson: length mismatch");
  }
  if (xs.size() < 2) {
    throw Error(Errc::kInvalidArgument, "pearson: need at least two points");
  }
  const double mx = mean(xs);
  const double my = mean(ys);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(Errc::kUndefinedCorrelation, "pearson: zero variance");
  }
  const double r = sxy / std::sqrt(sxx * syy);
  return r > 1.0 ? 1.0 : (r < -1.0 ? -1.0 : r);
}

std::optional<double> try_pearson(std::span<const double> xs,
                                  std::span<const double> ys) {
  try {
    return pearson(xs, ys);
  } catch (const Error&) {
    return std::nullopt;
  }
}

AlphaResult interval_alpha(const std::vector<std::vector<double>>& units) {
  std::vector<const std::vector<double>*> pairable;
  for (const auto& u : units) {
    if (u.size() >= 2) pairable.push_back(&u);
  }
  if (pairable.size() < 2) {
    throw Error(Errc::kPrecondition,
                "krippendorff alpha needs at least two pairable units");
  }
  std::size_t n = 0;
  double within = 0.0;
  for (const auto* u : pairable) {
    const std::size_t m = u->size();
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const double d = (*u)[i] - (*u)[j];
        sum += d * d;
      }
    }
    within += sum / static_cast<double>(m - 1);
    n += m;
  }
  // Sum of squared differences over all ordered pairs of pooled values,
  // sum_{i,j} (v_i - v_j)^2 = 2 n sum (v - mean)^2.
  const double nd = static_cast<double>(n);
  double total = 0.0;
  for (const auto* u : pairable) {
    for (double v : *u) total += v;
  }
  const double centre = total / nd;
  double ss = 0.0;
  for (const auto* u : pairable) {
    for (double v : *u) ss += (v - centre) * (v - centre);
  }
  const double pooled = 2.0 * nd * ss;

  AlphaResult result;
  result.pairable_values = n;
  result.observed_disagreement = within / nd;
  result.expected_disagreement = pooled / (nd * (nd - 1.0));
  if (result.expected_disagreement <= 1e-15) {
    result.alpha = 1.0;
    result.degenerate = true;
    return result;
  }
  result.alpha =
      1.0 - result.observed_disagreement / result.expected_disagreement;
  return result;
}

}  // namespace emotag
