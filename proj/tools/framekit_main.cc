// framekit command-line tool. Uses only the C API.

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "framekit/framekit.h"

namespace {

// Thrown to leave a subcommand with a diagnostic and exit code 1.
struct Failure {
  std::string message;
};

void Check(fk_status status, const std::string &context) {
  if (status != FK_OK) {
    throw Failure{context + ": " + fk_last_error() + " [" + fk_status_name(status) + "]"};
  }
}

struct CorpusDeleter {
  void operator()(fk_corpus *c) const { fk_corpus_free(c); }
};
struct ModelDeleter {
  void operator()(fk_model *m) const { fk_model_free(m); }
};
struct ConfigDeleter {
  void operator()(fk_config *c) const { fk_config_free(c); }
};
struct ReportDeleter {
  void operator()(fk_report *r) const { fk_report_free(r); }
};
struct StringDeleter {
  void operator()(char *s) const { fk_string_free(s); }
};
using Corpus = std::unique_ptr<fk_corpus, CorpusDeleter>;
using ModelPtr = std::unique_ptr<fk_model, ModelDeleter>;
using Config = std::unique_ptr<fk_config, ConfigDeleter>;
using Report = std::unique_ptr<fk_report, ReportDeleter>;
using String = std::unique_ptr<char, StringDeleter>;

Corpus ReadCorpus(const std::string &path) {
  fk_corpus *c = nullptr;
  Check(fk_corpus_read(path.c_str(), &c), path);
  return Corpus(c);
}

std::string ReadText(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{path + ": cannot open"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw Failure{path + ": write failed"};
}

Config MakeConfig(const std::vector<std::string> &sets) {
  fk_config *raw = nullptr;
  Check(fk_config_new(&raw), "config");
  Config config(raw);
  for (const std::string &kv : sets) {
    size_t eq = kv.find('=');
    if (eq == std::string::npos) throw Failure{"--set expects key=value, got '" + kv + "'"};
    std::string key = kv.substr(0, eq);
    Check(fk_config_set(config.get(), key.c_str(), kv.c_str() + eq + 1), "--set " + kv);
  }
  return config;
}

std::string FormatDouble(const char *format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

struct GenCorpusArgs {
  uint64_t seed = 1;
  int docs = 100;
  std::string out;
};

int GenCorpus(const GenCorpusArgs &args) {
  fk_corpus *raw = nullptr;
  Check(fk_corpus_generate(args.seed, args.docs, &raw), "gen-corpus");
  Corpus corpus(raw);
  Check(fk_corpus_write(corpus.get(), args.out.c_str()), args.out);
  std::cout << "documents=" << fk_corpus_size(corpus.get()) << "\n";
  return 0;
}

struct OracleArgs {
  std::string in, out;
};

int Oracle(const OracleArgs &args) {
  Corpus corpus = ReadCorpus(args.in);
  char *seq = nullptr, *stats = nullptr;
  Check(fk_oracle(corpus.get(), &seq, &stats), args.in);
  String seq_owner(seq), stats_owner(stats);
  if (args.out.empty()) {
    std::cout << seq;
    if (seq[0] != '\0') std::cout << "\n";
  } else {
    WriteText(args.out, seq);
  }
  std::cout << stats;
  return 0;
}

struct TrainArgs {
  std::string train, dev, out, best_out, metrics_out;
  std::vector<std::string> sets;
  int steps = 1000;
  int checkpoint_every = 100;
  uint64_t seed = 1;
  int jobs = 1;
};

struct TrainLog {
  std::vector<std::string> lines;
};

void OnCheckpoint(const fk_checkpoint_info *info, const fk_model *, void *user) {
  auto *log = static_cast<TrainLog *>(user);
  std::string line = "step=" + std::to_string(info->step) +
                     " loss=" + FormatDouble("%.6f", info->loss);
  if (info->has_dev) {
    line += " dev_slot_f1=" + FormatDouble("%.2f", info->slot_f1);
    line += " dev_span_f1=" + FormatDouble("%.2f", info->span_f1);
  }
  std::cout << line << std::endl;
  log->lines.push_back(line);
}

int Train(const TrainArgs &args) {
  Config config = MakeConfig(args.sets);
  Corpus train = ReadCorpus(args.train);
  Corpus dev;
  if (!args.dev.empty()) dev = ReadCorpus(args.dev);
  fk_train_options options;
  fk_train_options_init(&options);
  options.steps = args.steps;
  options.checkpoint_every = args.checkpoint_every;
  options.seed = args.seed;
  options.jobs = args.jobs;
  TrainLog log;
  fk_model *final_raw = nullptr, *best_raw = nullptr;
  int best_step = 0;
  Check(fk_train(train.get(), dev.get(), config.get(), &options, OnCheckpoint, &log,
                 &final_raw, &best_raw, &best_step),
        "train");
  ModelPtr final_model(final_raw), best_model(best_raw);
  std::string best_path = args.best_out.empty() ? args.out + ".best" : args.best_out;
  Check(fk_model_save(final_model.get(), args.out.c_str()), args.out);
  Check(fk_model_save(best_model.get(), best_path.c_str()), best_path);
  std::string summary = "best_step=" + std::to_string(best_step);
  std::cout << summary << "\n";
  if (!args.metrics_out.empty()) {
    std::string text;
    for (const std::string &line : log.lines) text += line + "\n";
    WriteText(args.metrics_out, text + summary + "\n");
  }
  return 0;
}

struct ParseArgs {
  std::string model, in, text, out;
  int jobs = 1;
};

int Parse(const ParseArgs &args) {
  fk_model *raw_model = nullptr;
  Check(fk_model_load(args.model.c_str(), &raw_model), args.model);
  ModelPtr model(raw_model);
  Corpus input;
  if (!args.in.empty()) {
    input = ReadCorpus(args.in);
  } else {
    std::string text = ReadText(args.text);
    fk_corpus *raw = nullptr;
    Check(fk_corpus_from_lines(text.data(), text.size(), &raw), args.text);
    input.reset(raw);
  }
  fk_corpus *raw_out = nullptr;
  Check(fk_parse(model.get(), input.get(), args.jobs, &raw_out), "parse");
  Corpus output(raw_out);
  Check(fk_corpus_write(output.get(), args.out.c_str()), args.out);
  return 0;
}

struct EvalArgs {
  std::string gold, pred, metrics_out;
  int jobs = 1;
};

int Eval(const EvalArgs &args) {
  Corpus gold = ReadCorpus(args.gold);
  Corpus pred = ReadCorpus(args.pred);
  fk_report *raw = nullptr;
  Check(fk_evaluate(gold.get(), pred.get(), args.jobs, &raw), "eval");
  Report report(raw);
  char *table = nullptr, *metrics = nullptr;
  Check(fk_report_table(report.get(), &table), "eval");
  String table_owner(table);
  Check(fk_report_metrics(report.get(), &metrics), "eval");
  String metrics_owner(metrics);
  std::cout << table << "\n" << metrics;
  if (!args.metrics_out.empty()) WriteText(args.metrics_out, metrics);
  return 0;
}

struct GradCheckArgs {
  uint64_t seed = 1;
  int configs = 20;
  double threshold = 1e-4;
  std::vector<std::string> sets;
};

// Random small configurations; --set overrides are applied after them.
int GradCheck(const GradCheckArgs &args) {
  if (args.configs < 1) throw Failure{"--configs must be >= 1"};
  fk_corpus *raw = nullptr;
  Check(fk_corpus_generate(args.seed, args.configs, &raw), "grad-check");
  Corpus corpus(raw);
  std::mt19937_64 rng(args.seed);
  auto pick = [&](int lo, int hi) {
    return std::to_string(lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1)));
  };
  const char *activations[] = {"relu", "tanh", "identity"};
  double worst = 0;
  for (int i = 0; i < args.configs; ++i) {
    std::vector<std::string> sets = {
        "word_dim=" + pick(2, 6),    "affix_dim=" + pick(1, 4),
        "shape_dim=" + pick(1, 3),   "max_affix=" + pick(1, 3),
        "lstm_dim=" + pick(2, 8),    "hidden_dim=" + pick(2, 8),
        "link_dim=" + pick(2, 5),    "role_dim=" + pick(2, 4),
        "k_attention=" + pick(1, 4), "k_history=" + pick(1, 4),
        std::string("activation=") + activations[rng() % 3],
    };
    sets.insert(sets.end(), args.sets.begin(), args.sets.end());
    Config config = MakeConfig(sets);
    fk_grad_check_result result;
    Check(fk_grad_check(corpus.get(), static_cast<size_t>(i), config.get(),
                        args.seed + static_cast<uint64_t>(i), &result),
          "grad-check config " + std::to_string(i));
    worst = std::max(worst, result.max_relative_error);
    std::string line = "config=" + std::to_string(i);
    for (size_t k = 0; k < sets.size(); ++k) line += " " + sets[k];
    std::printf("%s values=%" PRId64 " max_rel_error=%.3e\n", line.c_str(),
                result.values_checked, result.max_relative_error);
  }
  bool ok = worst < args.threshold;
  std::printf("max_relative_error=%.3e threshold=%.1e %s\n", worst, args.threshold,
              ok ? "PASS" : "FAIL");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"framekit: frame-graph parsing toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fk_version());

  GenCorpusArgs gen;
  auto *gen_cmd = app.add_subcommand("gen-corpus", "Write a synthetic annotated corpus");
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--docs", gen.docs, "Number of documents")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--out", gen.out, "Output corpus")->required();

  OracleArgs oracle;
  auto *oracle_cmd =
      app.add_subcommand("oracle", "Print oracle transition sequences and statistics");
  oracle_cmd->add_option("--in", oracle.in, "Input corpus")->required();
  oracle_cmd->add_option("--out", oracle.out, "Sequence output file (default stdout)");

  TrainArgs train;
  auto *train_cmd = app.add_subcommand("train", "Train a parser");
  train_cmd->add_option("--train", train.train, "Training corpus")->required();
  train_cmd->add_option("--dev", train.dev, "Dev corpus for checkpoint selection");
  train_cmd->add_option("--out", train.out, "Final checkpoint path")->required();
  train_cmd->add_option("--best-out", train.best_out, "Best checkpoint (default <out>.best)");
  train_cmd->add_option("--steps", train.steps, "Optimizer steps")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--checkpoint-every", train.checkpoint_every, "Checkpoint interval")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--seed", train.seed, "Random seed")->capture_default_str();
  train_cmd->add_option("--jobs", train.jobs, "Threads for dev parsing")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--set", train.sets, "Model config override key=value");
  train_cmd->add_option("--metrics-out", train.metrics_out, "Checkpoint log file");

  ParseArgs parse;
  auto *parse_cmd = app.add_subcommand("parse", "Parse text with a trained model");
  parse_cmd->add_option("--model", parse.model, "Checkpoint")->required();
  auto *in_opt = parse_cmd->add_option("--in", parse.in, "Corpus whose tokens are parsed");
  auto *text_opt =
      parse_cmd->add_option("--text", parse.text, "Raw text file, one document per line");
  in_opt->excludes(text_opt);
  parse_cmd->add_option("--out", parse.out, "Output corpus")->required();
  parse_cmd->add_option("--jobs", parse.jobs, "Worker threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  EvalArgs eval;
  auto *eval_cmd = app.add_subcommand("eval", "Score predicted against gold corpus");
  eval_cmd->add_option("--gold", eval.gold, "Gold corpus")->required();
  eval_cmd->add_option("--pred", eval.pred, "Predicted corpus")->required();
  eval_cmd->add_option("--metrics-out", eval.metrics_out, "key=value output file");
  eval_cmd->add_option("--jobs", eval.jobs, "Worker threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  GradCheckArgs grad;
  auto *grad_cmd =
      app.add_subcommand("grad-check", "Finite-difference gradient check on random configs");
  grad_cmd->add_option("--seed", grad.seed, "Random seed")->capture_default_str();
  grad_cmd->add_option("--configs", grad.configs, "Number of configurations")
      ->capture_default_str();
  grad_cmd->add_option("--threshold", grad.threshold, "Maximum relative error")
      ->capture_default_str();
  grad_cmd->add_option("--set", grad.sets, "Model config override key=value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen_cmd) return GenCorpus(gen);
    if (*oracle_cmd) return Oracle(oracle);
    if (*train_cmd) return Train(train);
    if (*parse_cmd) {
      if (parse.in.empty() == parse.text.empty()) {
        throw Failure{"parse needs exactly one of --in or --text"};
      }
      return Parse(parse);
    }
    if (*eval_cmd) return Eval(eval);
    if (*grad_cmd) return GradCheck(grad);
  } catch (const Failure &f) {
    std::cerr << "error: " << f.message << "\n";
    return 1;
  }
  return 1;
}
