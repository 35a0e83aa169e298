#include "emotag/embedding.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <thread>

#include "emotag/error.h"
#include "emotag/io.h"

namespace emotag {

Vocabulary::Vocabulary(std::vector<std::string> tokens,
                       std::vector<std::uint64_t> frequencies)
    : tokens_(std::move(tokens)), frequencies_(std::move(frequencies)) {
  if (frequencies_.size() != tokens_.size()) {
    throw Error(Errc::kInvalidArgument, "vocabulary size mismatch");
  }
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], i).second) {
      throw Error(Errc::kValidation, "duplicate vocabulary token: " + tokens_[i]);
    }
  }
}

std::optional<std::size_t> Vocabulary::index(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocab(const std::vector<Document>& docs,
                       std::uint64_t min_count) {
  if (min_count == 0) {
    throw Error(Errc::kInvalidArgument, "min_count must be at least 1");
  }
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const Document& doc : docs) {
    for (const Token& t : doc) ++counts[t.text];
  }
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [token, count] : counts) {
    if (count >= min_count) kept.emplace_back(token, count);
  }
  if (kept.empty()) {
    throw Error(Errc::kValidation,
                "empty vocabulary: no token occurs at least " +
                    std::to_string(min_count) + " times");
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<std::string> tokens;
  std::vector<std::uint64_t> freqs;
  for (auto& [token, count] : kept) {
    tokens.push_back(std::move(token));
    freqs.push_back(count);
  }
  return Vocabulary(std::move(tokens), std::move(freqs));
}

void validate(const TrainingConfig& c) {
  auto fail = [](const std::string& what) {
    throw Error(Errc::kInvalidArgument, "invalid training config: " + what);
  };
  if (c.dim < 2) fail("dim must be at least 2");
  if (c.window < 1) fail("window must be at least 1");
  if (c.negatives < 1) fail("negatives must be at least 1");
  if (c.epochs < 1) fail("epochs must be at least 1");
  if (c.min_count < 1) fail("min_count must be at least 1");
  if (!(c.subsample >= 0.0)) fail("subsample must be non-negative");
  if (!(c.learning_rate > 0.0)) fail("learning rate must be positive");
  if (c.threads < 1) fail("threads must be at least 1");
}

EmbeddingSpace::EmbeddingSpace(Vocabulary vocab, std::size_t dim,
                               std::vector<double> vectors)
    : vocab_(std::move(vocab)), dim_(dim), vectors_(std::move(vectors)) {
  if (vectors_.size() != vocab_.size() * dim_) {
    throw Error(Errc::kInvalidArgument, "embedding matrix has wrong shape");
  }
  norms_.resize(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) refresh_norm(i);
}

EmbeddingSpace EmbeddingSpace::from_rows(
    const std::vector<std::pair<std::string, std::vector<double>>>& rows) {
  if (rows.empty()) throw Error(Errc::kInvalidArgument, "no rows");
  const std::size_t dim = rows.front().second.size();
  std::vector<std::string> tokens;
  std::vector<double> values;
  for (const auto& [token, vec] : rows) {
    if (vec.size() != dim) {
      throw Error(Errc::kInvalidArgument, "row length mismatch for " + token);
    }
    tokens.push_back(token);
    values.insert(values.end(), vec.begin(), vec.end());
  }
  std::vector<std::uint64_t> freqs(tokens.size(), 0);
  return EmbeddingSpace(Vocabulary(std::move(tokens), std::move(freqs)), dim,
                        std::move(values));
}

std::span<const double> EmbeddingSpace::vector(std::size_t i) const {
  return {vectors_.data() + i * dim_, dim_};
}

std::span<const double> EmbeddingSpace::vector(std::string_view token) const {
  std::optional<std::size_t> i = vocab_.index(token);
  if (!i) {
    throw Error(Errc::kTokenNotInVocabulary,
                "token not in vocabulary: " + std::string(token));
  }
  return vector(*i);
}

void EmbeddingSpace::set_vector(std::size_t i, std::span<const double> values) {
  if (values.size() != dim_) {
    throw Error(Errc::kInvalidArgument, "vector has wrong dimension");
  }
  std::copy(values.begin(), values.end(), vectors_.begin() + i * dim_);
  refresh_norm(i);
}

void EmbeddingSpace::scale_vector(std::size_t i, double factor) {
  for (std::size_t k = 0; k < dim_; ++k) vectors_[i * dim_ + k] *= factor;
  refresh_norm(i);
}

void EmbeddingSpace::refresh_norm(std::size_t i) {
  double sum = 0.0;
  for (double x : vector(i)) sum += x * x;
  norms_[i] = std::sqrt(sum);
}

double EmbeddingSpace::cosine(std::size_t a, std::size_t b) const {
  if (norms_[a] == 0.0 || norms_[b] == 0.0) return 0.0;
  std::span<const double> va = vector(a);
  std::span<const double> vb = vector(b);
  double dot = 0.0;
  for (std::size_t k = 0; k < dim_; ++k) dot += va[k] * vb[k];
  return std::clamp(dot / (norms_[a] * norms_[b]), -1.0, 1.0);
}

double EmbeddingSpace::cosine(std::string_view a, std::string_view b) const {
  std::optional<std::size_t> ia = vocab_.index(a);
  if (!ia) {
    throw Error(Errc::kTokenNotInVocabulary,
                "token not in vocabulary: " + std::string(a));
  }
  std::optional<std::size_t> ib = vocab_.index(b);
  if (!ib) {
    throw Error(Errc::kTokenNotInVocabulary,
                "token not in vocabulary: " + std::string(b));
  }
  return cosine(*ia, *ib);
}

std::string EmbeddingSpace::to_text() const {
  std::string out = std::to_string(size()) + " " + std::to_string(dim_) + "\n";
  char buf[32];
  for (std::size_t i = 0; i < size(); ++i) {
    out += vocab_.token(i);
    for (double x : vector(i)) {
      std::snprintf(buf, sizeof(buf), " %.9g", x);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

EmbeddingSpace EmbeddingSpace::from_text(std::string_view text,
                                         const std::string& source) {
  std::vector<std::string> lines = split_lines(text);
  if (lines.empty()) throw Error(Errc::kParse, source + ": empty file");
  std::vector<std::string> header = split(trim(lines[0]), ' ');
  std::optional<std::int64_t> n, d;
  if (header.size() == 2) {
    n = parse_int(header[0]);
    d = parse_int(header[1]);
  }
  if (!n || !d || *n < 1 || *d < 1) {
    throw Error(Errc::kParse, source + ":1: expected header \"n d\"");
  }
  const auto rows = static_cast<std::size_t>(*n);
  const auto dim = static_cast<std::size_t>(*d);
  std::vector<std::string> tokens;
  std::vector<double> values;
  values.reserve(rows * dim);
  for (std::size_t line = 1; line < lines.size() && tokens.size() < rows;
       ++line) {
    std::string_view row = trim(lines[line]);
    if (row.empty()) continue;
    std::vector<std::string> fields;
    for (std::string& f : split(row, ' ')) {
      if (!f.empty()) fields.push_back(std::move(f));
    }
    const std::string where = source + ":" + std::to_string(line + 1);
    if (fields.size() != dim + 1) {
      throw Error(Errc::kParse, where + ": expected token and " +
                                    std::to_string(dim) + " values");
    }
    tokens.push_back(fields[0]);
    for (std::size_t k = 1; k <= dim; ++k) {
      std::optional<double> v = parse_real(fields[k]);
      if (!v || !std::isfinite(*v)) {
        throw Error(Errc::kParse, where + ": bad value '" + fields[k] + "'");
      }
      values.push_back(*v);
    }
  }
  if (tokens.size() != rows) {
    throw Error(Errc::kParse, source + ": expected " + std::to_string(rows) +
                                  " rows, found " +
                                  std::to_string(tokens.size()));
  }
  std::vector<std::uint64_t> freqs(rows, 0);
  return EmbeddingSpace(Vocabulary(std::move(tokens), std::move(freqs)), dim,
                        std::move(values));
}

void EmbeddingSpace::save(const std::string& path) const {
  write_file_atomic(path, to_text());
}

EmbeddingSpace EmbeddingSpace::load(const std::string& path) {
  return from_text(read_file(path), path);
}

namespace {

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementations.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(sigmoid(x)) without overflow for large |x|.
double log_sigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

class NoiseDistribution {
 public:
  explicit NoiseDistribution(const Vocabulary& vocab) {
    cumulative_.reserve(vocab.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      sum += std::pow(static_cast<double>(vocab.frequency(i)), 0.75);
      cumulative_.push_back(sum);
    }
  }

  std::size_t sample(std::mt19937_64& rng) const {
    double u = uniform01(rng) * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min<std::size_t>(it - cumulative_.begin(),
                                 cumulative_.size() - 1);
  }

 private:
  std::vector<double> cumulative_;
};

// Element access for the parameter matrices. Shared workers go through
// relaxed atomics so concurrent updates race benignly instead of being UB.
template <bool kShared>
struct Cell {
  static double load(double& x) {
    if constexpr (kShared) {
      return std::atomic_ref<double>(x).load(std::memory_order_relaxed);
    } else {
      return x;
    }
  }
  static void add(double& x, double delta) {
    if constexpr (kShared) {
      std::atomic_ref<double> ref(x);
      ref.store(ref.load(std::memory_order_relaxed) + delta,
                std::memory_order_relaxed);
    } else {
      x += delta;
    }
  }
};

struct Model {
  std::size_t dim = 0;
  std::vector<double> input;
  std::vector<double> output;

  double* in(std::size_t i) { return input.data() + i * dim; }
  double* out(std::size_t i) { return output.data() + i * dim; }
};

template <bool kShared>
void train_pair(Model& model, std::size_t center, std::size_t context,
                std::size_t negatives, const NoiseDistribution& noise,
                double lr, std::mt19937_64& rng, std::vector<double>& grad) {
  using C = Cell<kShared>;
  const std::size_t dim = model.dim;
  double* v = model.in(center);
  std::fill(grad.begin(), grad.end(), 0.0);
  for (std::size_t s = 0; s <= negatives; ++s) {
    std::size_t target;
    double label;
    if (s == 0) {
      target = context;
      label = 1.0;
    } else {
      target = noise.sample(rng);
      if (target == context) continue;
      label = 0.0;
    }
    double* u = model.out(target);
    double dot = 0.0;
    for (std::size_t k = 0; k < dim; ++k) dot += C::load(v[k]) * C::load(u[k]);
    const double g = (label - sigmoid(dot)) * lr;
    for (std::size_t k = 0; k < dim; ++k) {
      const double uk = C::load(u[k]);
      grad[k] += g * uk;
      C::add(u[k], g * C::load(v[k]));
    }
  }
  for (std::size_t k = 0; k < dim; ++k) C::add(v[k], grad[k]);
}

struct ProbePair {
  std::size_t center;
  std::size_t context;
  std::vector<std::size_t> noise;
};

double probe_loss(Model& model, const std::vector<ProbePair>& probe) {
  if (probe.empty()) return 0.0;
  double total = 0.0;
  auto dot = [&](std::size_t a, std::size_t b) {
    const double* v = model.in(a);
    const double* u = model.out(b);
    double s = 0.0;
    for (std::size_t k = 0; k < model.dim; ++k) s += v[k] * u[k];
    return s;
  };
  for (const ProbePair& p : probe) {
    double loss = -log_sigmoid(dot(p.center, p.context));
    for (std::size_t n : p.noise) loss -= log_sigmoid(-dot(p.center, n));
    total += loss;
  }
  return total / static_cast<double>(probe.size());
}

using IndexedDoc = std::vector<std::size_t>;

template <bool kShared>
void run_shard(Model& model, const std::vector<IndexedDoc>& docs,
               std::size_t begin, std::size_t end,
               const std::vector<double>& keep_prob,
               const NoiseDistribution& noise, const TrainingConfig& config,
               double total_work, std::atomic<std::uint64_t>& processed,
               std::mt19937_64& rng) {
  std::vector<double> grad(model.dim);
  IndexedDoc kept;
  for (std::size_t d = begin; d < end; ++d) {
    const IndexedDoc& doc = docs[d];
    const double progress =
        static_cast<double>(processed.load(std::memory_order_relaxed)) /
        (total_work + 1.0);
    const double lr = config.learning_rate * std::max(1e-4, 1.0 - progress);
    kept.clear();
    for (std::size_t w : doc) {
      if (keep_prob[w] >= 1.0 || uniform01(rng) < keep_prob[w]) {
        kept.push_back(w);
      }
    }
    for (std::size_t i = 0; i < kept.size(); ++i) {
      const std::size_t lo = i >= config.window ? i - config.window : 0;
      const std::size_t hi = std::min(kept.size() - 1, i + config.window);
      for (std::size_t j = lo; j <= hi; ++j) {
        if (j == i) continue;
        train_pair<kShared>(model, kept[i], kept[j], config.negatives, noise,
                            lr, rng, grad);
      }
    }
    processed.fetch_add(doc.size(), std::memory_order_relaxed);
  }
}

}  // namespace

EmbeddingSpace train(const std::vector<Document>& docs,
                     const TrainingConfig& config) {
  validate(config);
  Vocabulary vocab = build_vocab(docs, config.min_count);
  const std::size_t n = vocab.size();
  const std::size_t dim = config.dim;

  std::vector<IndexedDoc> indexed;
  indexed.reserve(docs.size());
  std::uint64_t total_tokens = 0;
  bool has_pair = false;
  for (const Document& doc : docs) {
    IndexedDoc ids;
    for (const Token& t : doc) {
      if (auto i = vocab.index(t.text)) ids.push_back(*i);
    }
    total_tokens += ids.size();
    has_pair = has_pair || ids.size() >= 2;
    indexed.push_back(std::move(ids));
  }
  if (total_tokens < config.window + 1) {
    throw Error(Errc::kValidation,
                "corpus smaller than one window: " +
                    std::to_string(total_tokens) + " tokens for window " +
                    std::to_string(config.window));
  }
  if (!has_pair) {
    throw Error(Errc::kValidation,
                "no training pairs: every document has fewer than two "
                "in-vocabulary tokens");
  }

  std::mt19937_64 rng(config.seed);
  Model model;
  model.dim = dim;
  model.input.resize(n * dim);
  model.output.assign(n * dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    bool nonzero = false;
    for (std::size_t k = 0; k < dim; ++k) {
      double x = (uniform01(rng) - 0.5) / static_cast<double>(dim);
      model.in(i)[k] = x;
      nonzero = nonzero || x != 0.0;
    }
    if (!nonzero) model.in(i)[0] = 0.5 / static_cast<double>(dim);
  }

  std::vector<double> keep_prob(n, 1.0);
  if (config.subsample > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double f = static_cast<double>(vocab.frequency(i)) /
                       static_cast<double>(total_tokens);
      keep_prob[i] = std::min(1.0, std::sqrt(config.subsample / f));
    }
  }
  NoiseDistribution noise(vocab);

  // Fixed probe batch, drawn from its own generator so it does not perturb
  // the training stream.
  std::vector<ProbePair> probe;
  {
    std::mt19937_64 probe_rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
    std::vector<std::size_t> usable;
    for (std::size_t d = 0; d < indexed.size(); ++d) {
      if (indexed[d].size() >= 2) usable.push_back(d);
    }
    for (std::size_t p = 0; p < config.probe_pairs; ++p) {
      const IndexedDoc& doc =
          indexed[usable[static_cast<std::size_t>(uniform01(probe_rng) *
                                                  usable.size())]];
      std::size_t i = static_cast<std::size_t>(uniform01(probe_rng) * doc.size());
      std::size_t lo = i >= config.window ? i - config.window : 0;
      std::size_t hi = std::min(doc.size() - 1, i + config.window);
      std::size_t j = i;
      while (j == i) {
        j = lo + static_cast<std::size_t>(uniform01(probe_rng) * (hi - lo + 1));
      }
      ProbePair pair{doc[i], doc[j], {}};
      for (std::size_t s = 0; s < config.negatives; ++s) {
        pair.noise.push_back(noise.sample(probe_rng));
      }
      probe.push_back(std::move(pair));
    }
  }

  const std::size_t workers =
      config.deterministic ? 1 : std::min(config.threads, indexed.size());
  const double total_work =
      static_cast<double>(total_tokens) * static_cast<double>(config.epochs);
  std::atomic<std::uint64_t> processed{0};
  std::vector<double> losses;

  std::vector<std::mt19937_64> worker_rngs;
  for (std::size_t w = 0; w < workers; ++w) {
    worker_rngs.emplace_back(w == 0 ? rng() : config.seed + 7919 * (w + 1));
  }

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    if (workers == 1) {
      run_shard<false>(model, indexed, 0, indexed.size(), keep_prob, noise,
                       config, total_work, processed, worker_rngs[0]);
    } else {
      std::vector<std::thread> threads;
      const std::size_t chunk = (indexed.size() + workers - 1) / workers;
      for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(indexed.size(), w * chunk);
        const std::size_t end = std::min(indexed.size(), begin + chunk);
        threads.emplace_back([&, w, begin, end] {
          run_shard<true>(model, indexed, begin, end, keep_prob, noise, config,
                          total_work, processed, worker_rngs[w]);
        });
      }
      for (std::thread& t : threads) t.join();
    }
    losses.push_back(probe_loss(model, probe));
  }

  EmbeddingSpace space(std::move(vocab), dim, std::move(model.input));
  space.set_config(config);
  space.set_epoch_losses(std::move(losses));
  return space;
}

NeighborList nearest(const EmbeddingSpace& space, std::string_view anchor,
                     const std::vector<std::string>& candidates,
                     std::size_t k) {
  if (k == 0) throw Error(Errc::kInvalidArgument, "k must be at least 1");
  std::optional<std::size_t> a = space.vocab().index(anchor);
  if (!a) {
    throw Error(Errc::kTokenNotInVocabulary,
                "token not in vocabulary: " + std::string(anchor));
  }
  NeighborList result;
  std::set<std::string> unique(candidates.begin(), candidates.end());
  for (const std::string& c : unique) {
    std::optional<std::size_t> i = space.vocab().index(c);
    if (!i) {
      ++result.skipped;
      continue;
    }
    result.neighbors.push_back({c, space.cosine(*a, *i)});
  }
  std::sort(result.neighbors.begin(), result.neighbors.end(),
            [](const Neighbor& x, const Neighbor& y) {
              return x.similarity != y.similarity ? x.similarity > y.similarity
                                                  : x.token < y.token;
            });
  if (result.neighbors.size() > k) result.neighbors.resize(k);
  return result;
}

}  // namespace emotag
