#ifndef EMOTAG_STATS_H_
#define EMOTAG_STATS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace emotag {

double mean(std::span<const double> xs);

// Standard deviation with divisor n.
double population_sd(std::span<const double> xs);

// Sample Pearson correlation. Throws Error(kInvalidArgument) on length
// mismatch or fewer than two points and Error(kUndefinedCorrelation) when
// either side has zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

// Same, returning nullopt instead of throwing for undefined inputs.
std::optional<double> try_pearson(std::span<const double> xs,
                                  std::span<const double> ys);

struct AlphaResult {
  double alpha = 1.0;
  double observed_disagreement = 0.0;  // D_o
  double expected_disagreement = 0.0;  // D_e
  std::size_t pairable_values = 0;
  // True when D_e == 0 and alpha was set to 1 by convention.
  bool degenerate = false;
};

// Krippendorff's alpha with the interval (squared difference) metric. Each
// inner vector holds the values coded for one unit; units with fewer than two
// values are not pairable and are ignored.
//
//   D_o = 1/n * sum_u 1/(m_u - 1) * sum_{i != j in u} (v_i - v_j)^2
//   D_e = 1/(n (n - 1)) * sum_{i != j over all pairable values} (v_i - v_j)^2
//   alpha = 1 - D_o / D_e
//
// Throws Error(kPrecondition) when fewer than two units are pairable.
AlphaResult interval_alpha(const std::vector<std::vector<double>>& units);

}  // namespace emotag

#endif  // EMOTAG_STATS_H_
