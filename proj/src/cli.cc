#include "emotag/cli.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "emotag/annotation_service.h"
#include "emotag/corpus.h"
#include "emotag/embedding.h"
#include "emotag/error.h"
#include "emotag/evaluation.h"
#include "emotag/io.h"
#include "emotag/lexicon.h"
#include "emotag/ratings.h"
#include "emotag/scoring.h"
#include "httplib.h"

namespace emotag::cli {

namespace {

// Every input path is checked before a stage starts, so a typo fails fast
// instead of after an expensive training run.
void require_files(std::initializer_list<const std::string*> paths) {
  for (const std::string* p : paths) {
    if (p->empty()) continue;
    if (!std::filesystem::is_regular_file(*p)) {
      throw Error(Errc::kIo, "missing input file '" + *p + "'");
    }
  }
}

// Writes to the file atomically, or to out when no path was given.
void emit(const std::string& path, const std::string& content,
          std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    write_file_atomic(path, content);
  }
}

std::string env_name(std::string flag) {
  std::string name = "EMOTAG_";
  for (char c : flag) {
    name += c == '-' ? '_' : static_cast<char>(std::toupper(
                                 static_cast<unsigned char>(c)));
  }
  return name;
}

CorpusFormat parse_format(const std::string& name) {
  if (name == "auto") return CorpusFormat::kAuto;
  if (name == "text") return CorpusFormat::kText;
  if (name == "jsonl") return CorpusFormat::kJsonl;
  throw Error(Errc::kInvalidArgument, "unknown corpus format '" + name + "'");
}

struct CorpusArgs {
  std::string corpus;
  std::string inventory;
  std::string format = "auto";
  bool drop_emojiless = false;
};

void report_issues(const std::vector<LineIssue>& issues,
                   const std::string& source, std::ostream& err) {
  for (const LineIssue& issue : issues) {
    err << "warning\t" << source << ":" << issue.line << "\t" << issue.message
        << "\n";
  }
}

TokenStream load_corpus(const CorpusArgs& a, std::ostream& err) {
  require_files({&a.corpus, &a.inventory});
  EmojiInventory inventory = EmojiInventory::load(a.inventory);
  TokenStream stream = ingest(a.corpus, inventory,
                              {parse_format(a.format), a.drop_emojiless});
  report_issues(stream.stats.issues, a.corpus, err);
  return stream;
}

std::string stats_to_tsv(const CorpusStats& s) {
  std::ostringstream os;
  os << "documents\t" << s.documents << "\n"
     << "dropped_documents\t" << s.dropped_documents << "\n"
     << "word_tokens\t" << s.word_tokens << "\n"
     << "emoji_tokens\t" << s.emoji_tokens << "\n"
     << "malformed_lines\t" << s.issues.size() << "\n";
  for (const auto& [emoji, docs] : s.emoji_documents) {
    os << "emoji_documents\t" << emoji << "\t" << docs << "\n";
  }
  return os.str();
}

std::string tokens_to_text(const std::vector<Document>& docs) {
  std::string out;
  for (const Document& doc : docs) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (i > 0) out += ' ';
      out += doc[i].text;
    }
    out += '\n';
  }
  return out;
}

struct LexiconArgs {
  std::string path;
  std::string format = "binary";  // binary | nrc | depechemood
  std::string anger = "angry";
  std::uint64_t min_frequency = 0;
};

struct LoadedLexicon {
  std::optional<BinaryLexicon> binary;
  std::optional<IntensityLexicon> intensity;
  std::optional<EmotionMapping::AngerSource> anger;
};

LoadedLexicon load_lexicon(const LexiconArgs& a) {
  require_files({&a.path});
  LoadedLexicon out;
  if (a.format == "binary") {
    out.binary = load_binary(a.path);
  } else if (a.format == "nrc") {
    out.intensity =
        load_intensity(a.path, EmotionMapping::identity(), a.min_frequency);
  } else if (a.format == "depechemood") {
    std::optional<EmotionMapping::AngerSource> anger =
        parse_anger_source(a.anger);
    if (!anger) {
      throw Error(Errc::kInvalidArgument, "unknown anger source '" + a.anger +
                                              "' (angry or annoyed)");
    }
    out.anger = anger;
    out.intensity = load_intensity(
        a.path, EmotionMapping::depeche_mood(*anger), a.min_frequency);
  } else {
    throw Error(Errc::kInvalidArgument,
                "unknown lexicon format '" + a.format + "'");
  }
  return out;
}

std::vector<std::string> read_list(const std::string& path) {
  std::vector<std::string> out;
  for (const std::string& line : split_lines(read_file(path))) {
    std::string_view t = trim(line);
    if (!t.empty() && t.front() != '#') out.emplace_back(t);
  }
  return out;
}

Emotion require_emotion(const std::string& name) {
  std::optional<Emotion> e = parse_emotion(name);
  if (!e) throw Error(Errc::kInvalidArgument, "unknown emotion '" + name + "'");
  return *e;
}

void add_corpus_options(CLI::App* cmd, CorpusArgs& a) {
  cmd->add_option("--corpus", a.corpus, "Corpus file, one document per line")
      ->required()
      ->envname(env_name("corpus"));
  cmd->add_option("--inventory", a.inventory, "Emoji inventory TSV")
      ->required()
      ->envname(env_name("inventory"));
  cmd->add_option("--format", a.format, "Corpus format: auto, text, jsonl")
      ->check(CLI::IsMember({"auto", "text", "jsonl"}))
      ->envname(env_name("format"))
      ->capture_default_str();
  cmd->add_flag("--drop-emojiless", a.drop_emojiless,
                "Skip documents without an inventory emoji");
}

void add_lexicon_options(CLI::App* cmd, LexiconArgs& a) {
  cmd->add_option("--lexicon", a.path, "Lexicon TSV")
      ->required()
      ->envname(env_name("lexicon"));
  cmd->add_option("--lexicon-format", a.format,
                  "binary, nrc (intensity, 8 emotions) or depechemood")
      ->check(CLI::IsMember({"binary", "nrc", "depechemood"}))
      ->envname(env_name("lexicon-format"))
      ->capture_default_str();
  cmd->add_option("--anger", a.anger,
                  "DepecheMood column mapped to anger: angry or annoyed")
      ->check(CLI::IsMember({"angry", "annoyed"}))
      ->envname(env_name("anger"))
      ->capture_default_str();
  cmd->add_option("--min-frequency,-F", a.min_frequency,
                  "Drop intensity entries with a lower frequency")
      ->envname(env_name("min-frequency"))
      ->capture_default_str();
}

// CLI11 reads the config file before the environment and then skips env
// lookups for options that already have a value, so the config file would
// win. Dropping config entries whose variable is set restores
// flag > env > config > default.
class EnvOverridesConfig : public CLI::ConfigTOML {
 public:
  explicit EnvOverridesConfig(const CLI::App* app) : app_(app) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    std::vector<CLI::ConfigItem> items = CLI::ConfigTOML::from_config(input);
    std::erase_if(items, [this](const CLI::ConfigItem& item) {
      const CLI::Option* opt = find(item);
      if (opt == nullptr || opt->get_envname().empty()) return false;
      return std::getenv(opt->get_envname().c_str()) != nullptr;
    });
    return items;
  }

 private:
  const CLI::Option* find(const CLI::ConfigItem& item) const {
    const CLI::App* sub = app_;
    for (const std::string& p : item.parents) {
      sub = sub->get_subcommand_no_throw(p);
      if (sub == nullptr) return nullptr;
    }
    const std::string dashes = item.name.size() == 1 ? "-" : "--";
    return sub->get_option_no_throw(dashes + item.name);
  }

  const CLI::App* app_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Emoji emotion tagging pipeline", "emotag"};
  app.set_config("--config", "",
                 "TOML-like key = value file; env vars and flags override");
  app.config_formatter(std::make_shared<EnvOverridesConfig>(&app));
  app.require_subcommand(1);
  std::size_t threads = 1;
  app.add_option("--threads", threads, "Worker threads (default 1)")
      ->check(CLI::Range(std::size_t{1}, std::size_t{256}))
      ->envname(env_name("threads"));

  // ingest
  CorpusArgs ingest_args;
  std::string ingest_out, tokens_out;
  CLI::App* ingest_cmd =
      app.add_subcommand("ingest", "Tokenize a corpus and report statistics");
  add_corpus_options(ingest_cmd, ingest_args);
  ingest_cmd->add_option("--out,-o", ingest_out, "Statistics TSV (stdout)");
  ingest_cmd->add_option("--tokens-out", tokens_out,
                         "Tokenized documents, one per line");

  // cooc
  CorpusArgs cooc_args;
  std::string cooc_out;
  CLI::App* cooc_cmd =
      app.add_subcommand("cooc", "Count emoji-word co-occurrences");
  add_corpus_options(cooc_cmd, cooc_args);
  cooc_cmd->add_option("--out,-o", cooc_out, "Co-occurrence TSV (stdout)")
      ->envname(env_name("cooc-out"));

  // train
  CorpusArgs train_args;
  TrainingConfig tc;
  std::string train_out, loss_out;
  CLI::App* train_cmd =
      app.add_subcommand("train", "Train skip-gram embeddings");
  add_corpus_options(train_cmd, train_args);
  train_cmd->add_option("--out,-o", train_out, "Embedding text file")
      ->required()
      ->envname(env_name("embeddings-out"));
  train_cmd->add_option("--dim", tc.dim, "Vector dimension")
      ->envname(env_name("dim"))->capture_default_str();
  train_cmd->add_option("--window", tc.window, "Context window radius")
      ->envname(env_name("window"))->capture_default_str();
  train_cmd->add_option("--negatives", tc.negatives, "Negative samples")
      ->envname(env_name("negatives"))->capture_default_str();
  train_cmd->add_option("--epochs", tc.epochs, "Passes over the corpus")
      ->envname(env_name("epochs"))->capture_default_str();
  train_cmd->add_option("--min-count", tc.min_count, "Vocabulary threshold")
      ->envname(env_name("min-count"))->capture_default_str();
  train_cmd->add_option("--subsample", tc.subsample,
                        "Frequent-token subsampling threshold, 0 disables")
      ->envname(env_name("subsample"))->capture_default_str();
  train_cmd->add_option("--learning-rate", tc.learning_rate,
                        "Initial learning rate")
      ->envname(env_name("learning-rate"))->capture_default_str();
  train_cmd->add_option("--seed", tc.seed, "Random seed")
      ->envname(env_name("seed"))->capture_default_str();
  train_cmd->add_flag("--deterministic", tc.deterministic,
                      "Single worker, byte-reproducible output")
      ->envname(env_name("deterministic"));
  train_cmd->add_option("--loss-out", loss_out, "Per-epoch probe loss TSV");

  // similar
  std::string sim_embeddings, sim_anchor, sim_candidates, sim_lexicon,
      sim_emotion;
  std::size_t sim_k = 10;
  CLI::App* similar_cmd =
      app.add_subcommand("similar", "Nearest tokens to an anchor");
  similar_cmd->add_option("--embeddings", sim_embeddings, "Embedding file")
      ->required()
      ->envname(env_name("embeddings"));
  similar_cmd->add_option("--anchor", sim_anchor, "Word or emoji key")
      ->required();
  similar_cmd->add_option("--candidates", sim_candidates,
                          "Candidate list, one token per line");
  similar_cmd->add_option("--lexicon", sim_lexicon,
                          "Binary lexicon supplying candidates (with --emotion)");
  similar_cmd->add_option("--emotion", sim_emotion, "Emotion for --lexicon");
  similar_cmd->add_option("-k", sim_k, "Neighbours to list")
      ->capture_default_str();

  // score
  std::string score_method = "binary_topk_sum";
  std::vector<std::size_t> score_ks = {5};
  std::string score_embeddings, score_cooc, score_inventory, score_emojis,
      score_out;
  LexiconArgs score_lex;
  CLI::App* score_cmd =
      app.add_subcommand("score", "Predict emoji-emotion scores");
  score_cmd->add_option("--method", score_method,
                        "binary_topk_sum, intensity_sim_mean or "
                        "intensity_freq_mean")
      ->check(CLI::IsMember(
          {"binary_topk_sum", "intensity_sim_mean", "intensity_freq_mean"}))
      ->envname(env_name("method"))
      ->capture_default_str();
  score_cmd->add_option("-k,--top-k", score_ks,
                        "Words per score; a list such as 5,25 sweeps k")
      ->delimiter(',')
      ->envname(env_name("k"));
  score_cmd->add_option("--embeddings", score_embeddings,
                        "Embedding file (similarity methods)")
      ->envname(env_name("embeddings"));
  score_cmd->add_option("--cooc", score_cooc,
                        "Co-occurrence TSV (frequency method)")
      ->envname(env_name("cooc"));
  score_cmd->add_option("--inventory", score_inventory,
                        "Emoji inventory; every key is scored")
      ->envname(env_name("inventory"));
  score_cmd->add_option("--emojis", score_emojis,
                        "Emoji keys to score, one per line");
  score_cmd->add_option("--out,-o", score_out, "Score TSV (stdout)")
      ->envname(env_name("scores-out"));
  add_lexicon_options(score_cmd, score_lex);

  // aggregate
  std::string agg_ratings, agg_out, agg_json;
  CLI::App* aggregate_cmd =
      app.add_subcommand("aggregate", "Gold scores from ratings");
  aggregate_cmd->add_option("--ratings", agg_ratings, "Ratings JSONL")
      ->required()
      ->envname(env_name("ratings"));
  aggregate_cmd->add_option("--out,-o", agg_out, "Gold TSV (stdout)")
      ->envname(env_name("gold-out"));
  aggregate_cmd->add_option("--json", agg_json,
                            "Also write the service's results document");

  // agree
  std::string agree_ratings, agree_out, agree_csv, agree_matrix_csv;
  bool agree_loo = false;
  CLI::App* agree_cmd =
      app.add_subcommand("agree", "Inter-rater agreement statistics");
  agree_cmd->add_option("--ratings", agree_ratings, "Ratings JSONL")
      ->required()
      ->envname(env_name("ratings"));
  agree_cmd->add_option("--out,-o", agree_out,
                        "Results JSON, as served by the annotation service");
  agree_cmd->add_option("--csv", agree_csv,
                        "Per-emotion rater-vs-gold plot data");
  agree_cmd->add_option("--matrix-csv", agree_matrix_csv,
                        "Pairwise rater correlation plot data");
  agree_cmd->add_flag("--leave-one-out", agree_loo,
                      "Exclude each rater from the gold they are compared to");

  // evaluate
  std::string eval_gold, eval_scores, eval_out, eval_text;
  CLI::App* evaluate_cmd =
      app.add_subcommand("evaluate", "Correlate predictions with gold");
  evaluate_cmd->add_option("--gold", eval_gold, "Gold TSV")
      ->required()
      ->envname(env_name("gold"));
  evaluate_cmd->add_option("--scores", eval_scores, "Score TSV")
      ->required()
      ->envname(env_name("scores"));
  evaluate_cmd->add_option("--out,-o", eval_out, "Report TSV");
  evaluate_cmd->add_option("--text", eval_text,
                           "Aligned text report (stdout when omitted)");

  // buckets
  std::string buckets_gold, buckets_out;
  bool buckets_tsv = false;
  CLI::App* buckets_cmd =
      app.add_subcommand("buckets", "Gold score distribution per emotion");
  buckets_cmd->add_option("--gold", buckets_gold, "Gold TSV")
      ->required()
      ->envname(env_name("gold"));
  buckets_cmd->add_option("--out,-o", buckets_out, "Output file (stdout)");
  buckets_cmd->add_flag("--tsv", buckets_tsv, "TSV instead of aligned text");

  // top
  std::string top_gold, top_emotion, top_out;
  std::size_t top_n = 3;
  CLI::App* top_cmd =
      app.add_subcommand("top", "Highest-gold emojis per emotion");
  top_cmd->add_option("--gold", top_gold, "Gold TSV")
      ->required()
      ->envname(env_name("gold"));
  top_cmd->add_option("--emotion", top_emotion, "One emotion (default all)");
  top_cmd->add_option("-n", top_n, "Emojis per emotion")
      ->capture_default_str();
  top_cmd->add_option("--out,-o", top_out, "Output TSV (stdout)");

  // serve
  std::string serve_host = "127.0.0.1", serve_store, serve_campaign,
              serve_inventory, serve_static;
  std::optional<std::string> serve_secret;
  int serve_port = 8080;
  std::size_t serve_sets = 6;
  std::uint64_t serve_seed = 1;
  CLI::App* serve_cmd =
      app.add_subcommand("serve", "Run the annotation service");
  serve_cmd->add_option("--host", serve_host, "Bind address")
      ->envname(env_name("host"))->capture_default_str();
  serve_cmd->add_option("--port", serve_port, "Port")
      ->envname(env_name("port"))->capture_default_str();
  serve_cmd->add_option("--store", serve_store, "Ratings JSONL store")
      ->required()
      ->envname(env_name("store"));
  serve_cmd->add_option("--campaign", serve_campaign,
                        "Campaign JSON; created from --inventory if absent")
      ->required()
      ->envname(env_name("campaign"));
  serve_cmd->add_option("--inventory", serve_inventory,
                        "Emoji roster for a new campaign")
      ->envname(env_name("inventory"));
  serve_cmd->add_option("--sets", serve_sets, "Sets in a new campaign")
      ->envname(env_name("sets"))->capture_default_str();
  serve_cmd->add_option("--seed", serve_seed, "Partition seed for a new campaign")
      ->envname(env_name("seed"))->capture_default_str();
  serve_cmd->add_option("--secret", serve_secret,
                        "Shared secret required on POST /api/ratings")
      ->envname(env_name("secret"));
  serve_cmd->add_option("--static-dir", serve_static, "UI bundle served at /")
      ->envname(env_name("static-dir"));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error\tusage\t" << msg << "\n";
    return kUsage;
  }

  try {
    if (*ingest_cmd) {
      TokenStream stream = load_corpus(ingest_args, err);
      if (!tokens_out.empty()) {
        write_file_atomic(tokens_out, tokens_to_text(stream.documents));
      }
      emit(ingest_out, stats_to_tsv(stream.stats), out);
    } else if (*cooc_cmd) {
      TokenStream stream = load_corpus(cooc_args, err);
      emit(cooc_out, build_cooccurrence(stream.documents, threads).to_tsv(),
           out);
    } else if (*train_cmd) {
      require_files({&train_args.corpus, &train_args.inventory});
      tc.threads = tc.deterministic ? 1 : threads;
      validate(tc);
      TokenStream stream = load_corpus(train_args, err);
      EmbeddingSpace space = train(stream.documents, tc);
      space.save(train_out);
      if (!loss_out.empty()) {
        std::string text = "epoch\tloss\n";
        for (std::size_t i = 0; i < space.epoch_losses().size(); ++i) {
          text += std::to_string(i + 1) + "\t" +
                  format_real(space.epoch_losses()[i]) + "\n";
        }
        write_file_atomic(loss_out, text);
      }
    } else if (*similar_cmd) {
      require_files({&sim_embeddings, &sim_candidates, &sim_lexicon});
      EmbeddingSpace space = EmbeddingSpace::load(sim_embeddings);
      std::vector<std::string> candidates;
      if (!sim_candidates.empty()) {
        candidates = read_list(sim_candidates);
      } else if (!sim_lexicon.empty()) {
        if (sim_emotion.empty()) {
          throw Error(Errc::kInvalidArgument, "--lexicon needs --emotion");
        }
        const auto& words =
            load_binary(sim_lexicon).words_for(require_emotion(sim_emotion));
        candidates.assign(words.begin(), words.end());
      } else {
        for (const std::string& t : space.vocab().tokens()) {
          if (t != sim_anchor) candidates.push_back(t);
        }
      }
      NeighborList list = nearest(space, sim_anchor, candidates, sim_k);
      std::string text;
      for (const Neighbor& n : list.neighbors) {
        text += n.token + "\t" + format_real(n.similarity) + "\n";
      }
      out << text;
      if (list.skipped > 0) {
        err << "warning\t" << list.skipped
            << " candidates not in the vocabulary\n";
      }
    } else if (*score_cmd) {
      std::optional<ScoringMethod> method = parse_method(score_method);
      const bool by_freq = method == ScoringMethod::kIntensityFreqMean;
      if (by_freq && score_cooc.empty()) {
        throw Error(Errc::kInvalidArgument, score_method + " needs --cooc");
      }
      if (!by_freq && score_embeddings.empty()) {
        throw Error(Errc::kInvalidArgument,
                    score_method + " needs --embeddings");
      }
      if (score_inventory.empty() && score_emojis.empty()) {
        throw Error(Errc::kInvalidArgument, "need --inventory or --emojis");
      }
      const bool binary = method == ScoringMethod::kBinaryTopkSum;
      if (binary != (score_lex.format == "binary")) {
        throw Error(Errc::kInvalidArgument,
                    score_method + " does not take a " + score_lex.format +
                        " lexicon");
      }
      require_files({&score_embeddings, &score_cooc, &score_inventory,
                     &score_emojis, &score_lex.path});
      std::vector<std::string> emojis;
      if (!score_emojis.empty()) {
        for (const std::string& k : read_list(score_emojis)) {
          std::optional<EmojiKey> key = EmojiKey::parse(k);
          if (!key) throw Error(Errc::kParse, "invalid emoji key '" + k + "'");
          emojis.push_back(key->str());
        }
      } else {
        EmojiInventory inventory = EmojiInventory::load(score_inventory);
        for (const InventoryEntry& e : inventory.entries()) {
          emojis.push_back(e.key.str());
        }
      }
      LoadedLexicon lex = load_lexicon(score_lex);
      std::optional<EmbeddingSpace> space;
      std::optional<CooccurrenceTable> cooc;
      if (!score_embeddings.empty() && !by_freq) {
        space = EmbeddingSpace::load(score_embeddings);
      }
      if (by_freq) cooc = CooccurrenceTable::load(score_cooc);
      ScoringInputs inputs;
      inputs.space = space ? &*space : nullptr;
      inputs.cooc = cooc ? &*cooc : nullptr;
      if (lex.binary) {
        inputs.lexicon = &*lex.binary;
      } else {
        inputs.lexicon = &*lex.intensity;
      }
      std::vector<ScoreTable> tables;
      for (std::size_t k : score_ks) {
        ScoringParams params;
        params.method = *method;
        params.k = k;
        params.min_frequency = binary ? 0 : score_lex.min_frequency;
        params.anger_source = lex.anger;
        tables.push_back(score_all(emojis, inputs, params, threads));
      }
      emit(score_out, score_tables_to_tsv(tables), out);
    } else if (*aggregate_cmd) {
      require_files({&agg_ratings});
      RatingsLoad load = load_ratings(agg_ratings);
      report_issues(load.issues, agg_ratings, err);
      GoldTable gold = aggregate(load.ratings);
      for (const std::string& w : gold.warnings()) {
        err << "warning\t" << w << "\n";
      }
      emit(agg_out, gold.to_tsv(), out);
      if (!agg_json.empty()) {
        write_file_atomic(agg_json, results_json(load.ratings));
      }
    } else if (*agree_cmd) {
      require_files({&agree_ratings});
      RatingsLoad load = load_ratings(agree_ratings);
      report_issues(load.issues, agree_ratings, err);
      const RatingSet& ratings = load.ratings;
      auto agreement = rater_vs_gold_by_emotion(ratings, agree_loo);
      if (!agree_out.empty()) {
        write_file_atomic(agree_out, results_json(ratings));
      }
      if (!agree_csv.empty()) {
        write_file_atomic(agree_csv, agreement_to_csv(agreement));
      }
      if (!agree_matrix_csv.empty()) {
        write_file_atomic(agree_matrix_csv,
                          rater_matrix_to_csv(pairwise_rater_pearson(ratings)));
      }
      std::string text = "emotion\tmean_r\texcluded\n";
      for (Emotion e : kAllEmotions) {
        const EmotionAgreement& a = agreement[index_of(e)];
        text += std::string(emotion_name(e)) + "\t" +
                (a.mean ? format_real(*a.mean) : std::string("NA")) + "\t" +
                std::to_string(a.excluded.size()) + "\n";
      }
      text += "emoji\talpha\n";
      for (const std::string& emoji : ratings.emojis()) {
        std::string value = "NA";
        try {
          AlphaResult a = krippendorff_alpha(ratings, emoji);
          value = format_real(a.alpha) + (a.degenerate ? " (degenerate)" : "");
        } catch (const Error&) {
        }
        text += emoji + "\t" + value + "\n";
      }
      out << text;
    } else if (*evaluate_cmd) {
      require_files({&eval_gold, &eval_scores});
      GoldTable gold = GoldTable::load(eval_gold);
      std::vector<EvaluationRow> rows;
      for (const ScoreTable& t :
           score_tables_from_tsv(read_file(eval_scores), eval_scores)) {
        rows.push_back(evaluate(gold, t));
      }
      if (!eval_out.empty()) write_file_atomic(eval_out, report_to_tsv(rows));
      emit(eval_text, report_to_text(rows), out);
    } else if (*buckets_cmd) {
      require_files({&buckets_gold});
      BucketDistribution dist =
          bucket_distribution(GoldTable::load(buckets_gold));
      emit(buckets_out, buckets_tsv ? buckets_to_tsv(dist)
                                    : buckets_to_text(dist),
           out);
    } else if (*top_cmd) {
      require_files({&top_gold});
      GoldTable gold = GoldTable::load(top_gold);
      std::vector<Emotion> emotions(kAllEmotions.begin(), kAllEmotions.end());
      if (!top_emotion.empty()) emotions = {require_emotion(top_emotion)};
      std::string text = "emotion\trank\temoji\tgold\n";
      for (Emotion e : emotions) {
        auto ranked = top_emojis(gold, e, top_n);
        for (std::size_t i = 0; i < ranked.size(); ++i) {
          text += std::string(emotion_name(e)) + "\t" + std::to_string(i + 1) +
                  "\t" + ranked[i].first + "\t" +
                  format_real(ranked[i].second) + "\n";
        }
      }
      emit(top_out, text, out);
    } else if (*serve_cmd) {
      Campaign campaign;
      if (std::filesystem::exists(serve_campaign)) {
        campaign = Campaign::load(serve_campaign);
      } else {
        if (serve_inventory.empty()) {
          throw Error(Errc::kInvalidArgument,
                      "no campaign at '" + serve_campaign +
                          "'; pass --inventory to create one");
        }
        require_files({&serve_inventory});
        campaign = make_campaign(EmojiInventory::load(serve_inventory).entries(),
                                 serve_sets, serve_seed);
        campaign.save(serve_campaign);
      }
      AnnotationService service({serve_store, serve_secret, serve_static});
      service.set_campaign(std::move(campaign));
      httplib::Server server;
      service.mount(server);
      err << "listening on " << serve_host << ":" << serve_port << "\n";
      if (!server.listen(serve_host, serve_port)) {
        throw Error(Errc::kIo, "cannot listen on " + serve_host + ":" +
                                   std::to_string(serve_port));
      }
    }
  } catch (const Error& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error\t" << category_name(e.code()) << "\t" << msg << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    err << "error\tinternal\t" << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}

}  // namespace emotag::cli
