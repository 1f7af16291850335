// Acceptance run: one PASS/FAIL line per criterion. Exit status 0 iff all
// selected criteria pass. Arguments select criteria by number (default: all).
#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "framekit/document.h"
#include "framekit/error.h"
#include "framekit/evaluator.h"
#include "framekit/model/grad_check.h"
#include "framekit/model/trainer.h"
#include "framekit/notation.h"
#include "framekit/oracle.h"
#include "support/brute_eval.h"
#include "support/generators.h"
#include "support/graph_iso.h"

namespace fs = std::filesystem;
using namespace framekit;
namespace ft = framekit::testing;

namespace {

// Pinned limits.
constexpr double kWorkedExampleSeconds = 1.0;
constexpr double kOracleRoundTripSeconds = 30.0;
constexpr double kNotationSeconds = 60.0;
constexpr double kGradCheckSeconds = 120.0;
constexpr double kEndToEndSeconds = 600.0;
constexpr double kGradTolerance = 1e-4;
constexpr int kGradConfigs = 24;
constexpr double kSlotF1Target = 90.0;
constexpr double kSpanF1Target = 95.0;
constexpr int kMaxTrainSteps = 5000;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Data(const std::string &name) { return std::string(FRAMEKIT_TEST_DATA) + "/" + name; }

std::string Slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Workdir {
 public:
  Workdir() {
    std::string pattern = (fs::temp_directory_path() / "framekit_accept_XXXXXX").string();
    dir_ = mkdtemp(pattern.data());
  }
  ~Workdir() { fs::remove_all(dir_); }
  std::string operator/(const std::string &name) const { return (fs::path(dir_) / name).string(); }

 private:
  std::string dir_;
};

// Runs the CLI; returns the exit status and fills *out with stdout.
int Cli(const std::string &args, std::string *out) {
  std::string command = std::string(FRAMEKIT_CLI) + " " + args + " 2>&1";
  FILE *pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return -1;
  out->clear();
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out->append(buf, n);
  int raw = pclose(pipe);
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string Fmt(const char *format, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

Outcome WorkedExample() {
  Workdir wd;
  std::string out;
  auto start = std::chrono::steady_clock::now();
  int status = Cli("oracle --in " + Data("john_hit_the_ball.frames") + " --out " + (wd / "seq.txt"),
                   &out);
  double secs = Seconds(start);
  std::string got = Slurp(wd / "seq.txt");
  std::string want = Slurp(Data("john_hit_the_ball.actions"));
  size_t lines = static_cast<size_t>(std::count(want.begin(), want.end(), '\n'));
  bool pass = status == 0 && got == want && lines == 10 && secs < kWorkedExampleSeconds;
  return {pass, Fmt("exit=%.0f identical=%.0f %.3fs", status, got == want, secs)};
}

Outcome OracleRoundTrip() {
  auto start = std::chrono::steady_clock::now();
  int failures = 0, total = 0;
  auto check = [&](const Document &doc) {
    ++total;
    try {
      if (!RoundTripCheck(doc)) ++failures;
    } catch (const std::exception &) {
      ++failures;
    }
  };
  for (const Document &doc : GenerateCorpus(7, 1000)) check(doc);
  ft::Rng rng(2024);
  for (int i = 0; i < 1000; ++i) check(ft::RandomRepresentableDocument(rng));
  double secs = Seconds(start);
  return {failures == 0 && total == 2000 && secs < kOracleRoundTripSeconds,
          Fmt("%.0f/%.0f round-trips %.2fs", total - failures, total, secs)};
}

Outcome NotationRoundTrip() {
  auto start = std::chrono::steady_clock::now();
  ft::Rng rng(99);
  int cyclic = 0, failures = 0;
  for (int i = 0; i < 1000; ++i) {
    auto g = ft::RandomStore(rng, i % 5 == 0);
    if (ft::HasCycle(*g.store, g.roots)) ++cyclic;
    try {
      Store a, b;
      ParseResult ra = ParseNotation(PrintNotation(g.roots, *g.store), a);
      if (!ra.ok()) {
        ++failures;
        continue;
      }
      ParseResult rb = ParseNotation(PrintNotation(ra.top, a), b);
      if (!rb.ok() || !ft::Isomorphic(ft::GraphFromStore(a, ra.top), ft::GraphFromStore(b, rb.top)) ||
          !ft::Isomorphic(ft::GraphFromStore(*g.store, g.roots), ft::GraphFromStore(a, ra.top))) {
        ++failures;
      }
    } catch (const std::exception &) {
      ++failures;
    }
  }
  std::string seed_text = Slurp(Data("john_hit_the_ball.frames"));
  int faults = 0, accepted = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string input = i % 2 ? ft::RandomBytes(rng, 256) : ft::MutateText(seed_text, rng);
    try {
      Store s;
      ParseResult r = ParseNotation(input, s);
      if (r.ok()) {
        ++accepted;
        Store t;
        if (!ParseNotation(PrintNotation(r.top, s), t).ok()) ++faults;
      }
    } catch (const std::exception &) {
      ++faults;
    }
  }
  double secs = Seconds(start);
  bool pass = failures == 0 && cyclic >= 100 && faults == 0 && secs < kNotationSeconds;
  return {pass, Fmt("isomorphic=%.0f/1000 cyclic=%.0f ", 1000 - failures, cyclic) +
                    Fmt("fuzz_faults=%.0f/10000 accepted=%.0f %.2fs", faults, accepted, secs)};
}

ft::Counts AsArray(const MetricCounts &c) {
  return {c.matched_pred, c.total_pred, c.matched_gold, c.total_gold};
}

Outcome EvaluatorIdentity() {
  int imperfect = 0, docs = 0;
  // Synthetic documents only: the worked example has no label items, and
  // 0/0 scores 0.
  std::vector<std::vector<Document>> corpora = {GenerateCorpus(7, 1000), GenerateCorpus(8, 200)};
  for (const auto &corpus : corpora) {
    for (const Document &doc : corpus) {
      ++docs;
      EvalReport r = Evaluate(doc, doc);
      bool perfect = r[Metric::kSpan].total_gold > 0;
      for (const MetricCounts &c : r.counts) {
        perfect = perfect && c.matched_pred == c.total_pred && c.matched_gold == c.total_gold &&
                  c.F1() == 1.0;
      }
      if (!perfect) ++imperfect;
    }
  }
  ft::Rng rng(4242);
  auto base = GenerateCorpus(11, 100);
  int mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    Document gold = i % 2 ? ft::RandomRepresentableDocument(rng) : base[i / 2];
    Document pred = ft::Perturb(gold, rng);
    EvalReport r = Evaluate(gold, pred);
    ft::BruteReport b = ft::BruteForceEvaluate(gold, pred);
    if (AsArray(r[Metric::kSpan]) != b.span || AsArray(r[Metric::kFrame]) != b.frame ||
        AsArray(r[Metric::kType]) != b.type || AsArray(r[Metric::kRole]) != b.role ||
        AsArray(r[Metric::kLabel]) != b.label) {
      ++mismatches;
    }
  }
  return {imperfect == 0 && mismatches == 0,
          Fmt("identity=%.0f/%.0f brute_force_mismatches=%.0f/200", docs - imperfect, docs,
              mismatches)};
}

Outcome GradientChecks() {
  auto start = std::chrono::steady_clock::now();
  ft::Rng rng(515);
  auto corpus = GenerateCorpus(515, kGradConfigs);
  const char *activations[] = {"relu", "tanh", "identity"};
  double worst = 0;
  int checked = 0;
  for (int i = 0; i < kGradConfigs; ++i) {
    auto pick = [&](int lo, int hi) { return std::to_string(lo + ft::Pick(rng, hi - lo + 1)); };
    ModelConfig config;
    config.Apply({"word_dim=" + pick(2, 6), "affix_dim=" + pick(1, 4), "shape_dim=" + pick(1, 3),
                  "max_affix=" + pick(1, 3), "lstm_dim=" + pick(2, 8), "hidden_dim=" + pick(2, 8),
                  "link_dim=" + pick(2, 5), "role_dim=" + pick(2, 4),
                  "k_attention=" + pick(1, 4), "k_history=" + pick(1, 4),
                  std::string("activation=") + activations[ft::Pick(rng, 3)]});
    config.Validate();
    Document doc = i % 2 ? ft::RandomRepresentableDocument(rng) : corpus[i];
    GradCheckResult r = GradCheck(doc, config, 1000 + i);
    if (r.values_checked == 0) return {false, "config checked no values"};
    worst = std::max(worst, r.max_relative_error);
    ++checked;
  }
  double secs = Seconds(start);
  return {worst < kGradTolerance && checked >= 20 && secs < kGradCheckSeconds,
          Fmt("configs=%.0f max_rel_error=%.3e %.2fs", checked, worst, secs)};
}

Outcome EndToEnd() {
  auto start = std::chrono::steady_clock::now();
  auto all = GenerateCorpus(31, 2400);
  std::span<const Document> train(all.data(), 2000);
  std::span<const Document> dev(all.data() + 2000, 200);
  std::span<const Document> test(all.data() + 2200, 200);
  ModelConfig config;
  config.Apply({"lstm_dim=64", "hidden_dim=32"});
  TrainOptions options;
  options.steps = kMaxTrainSteps;
  options.checkpoint_every = 500;
  options.seed = 1;
  TrainResult result = Train(train, dev, config, options);
  std::vector<Document> parsed = result.best_model.ParseCorpus(test);
  EvalReport r = EvaluateCorpus(test, parsed);
  double slot = 100 * r[Metric::kSlot].F1();
  double span = 100 * r[Metric::kSpan].F1();
  double secs = Seconds(start);
  return {slot >= kSlotF1Target && span >= kSpanF1Target && secs < kEndToEndSeconds,
          Fmt("slot_f1=%.2f span_f1=%.2f ", slot, span) +
              Fmt("best_step=%.0f %.1fs", result.best_step, secs)};
}

Outcome StructuralStatistics() {
  std::vector<std::vector<Document>> corpora;
  for (uint64_t seed : {1, 2, 3, 7}) corpora.push_back(GenerateCorpus(seed, 300));
  corpora.push_back(ReadCorpusFile(Data("john_hit_the_ball.frames")));
  corpora.push_back({});
  ft::Rng rng(77);
  std::vector<Document> random;
  for (int i = 0; i < 300; ++i) random.push_back(ft::RandomRepresentableDocument(rng));
  corpora.push_back(std::move(random));
  int bad = 0;
  for (const auto &corpus : corpora) {
    int64_t tokens = 0;
    for (const Document &doc : corpus) tokens += doc.num_tokens();
    ActionStats stats = ComputeActionStats(corpus);
    const auto &shift = stats.rows[static_cast<int>(ActionKind::kShift)];
    const auto &stop = stats.rows[static_cast<int>(ActionKind::kStop)];
    if (shift.raw != tokens || stop.raw != static_cast<int64_t>(corpus.size()) ||
        stats.tokens != tokens || stats.documents != static_cast<int64_t>(corpus.size())) {
      ++bad;
    }
  }
  return {bad == 0, Fmt("corpora=%.0f mismatches=%.0f", corpora.size(), bad)};
}

Outcome Determinism() {
  Workdir a, b;
  std::vector<std::string> files = {"train.frames", "dev.frames", "m.bin",    "m.bin.best",
                                    "pred.frames",  "log.txt",   "eval.txt", "pred4.frames"};
  std::vector<std::string> outputs[2];
  for (int run = 0; run < 2; ++run) {
    const Workdir &wd = run == 0 ? a : b;
    std::vector<std::string> commands = {
        "gen-corpus --seed 5 --docs 120 --out " + (wd / "train.frames"),
        "gen-corpus --seed 6 --docs 30 --out " + (wd / "dev.frames"),
        "train --train " + (wd / "train.frames") + " --dev " + (wd / "dev.frames") +
            " --steps 200 --checkpoint-every 50 --seed 3 --set lstm_dim=16 --set hidden_dim=16"
            " --out " + (wd / "m.bin") + " --metrics-out " + (wd / "log.txt"),
        "parse --model " + (wd / "m.bin.best") + " --in " + (wd / "dev.frames") + " --out " +
            (wd / "pred.frames"),
        "parse --model " + (wd / "m.bin.best") + " --in " + (wd / "dev.frames") + " --out " +
            (wd / "pred4.frames") + " --jobs 4",
        "eval --gold " + (wd / "dev.frames") + " --pred " + (wd / "pred.frames") +
            " --metrics-out " + (wd / "eval.txt"),
    };
    for (const std::string &command : commands) {
      std::string out;
      if (Cli(command, &out) != 0) return {false, "command failed: " + command + "\n" + out};
      outputs[run].push_back(out);
    }
  }
  int differing = 0;
  for (const std::string &f : files) {
    std::string x = Slurp(a / f);
    if (x.empty() || x != Slurp(b / f)) ++differing;
  }
  if (Slurp(a / "pred.frames") != Slurp(a / "pred4.frames")) ++differing;
  bool same_stdout = outputs[0] == outputs[1];
  return {differing == 0 && same_stdout,
          Fmt("files=%.0f differing=%.0f stdout_identical=%.0f", files.size(), differing,
              same_stdout)};
}

struct Criterion {
  int number;
  const char *name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char **argv) {
  std::vector<Criterion> criteria = {
      {1, "worked example oracle", WorkedExample},
      {2, "oracle round trip", OracleRoundTrip},
      {3, "notation round trip and fuzz", NotationRoundTrip},
      {4, "evaluator identity and brute force", EvaluatorIdentity},
      {5, "gradient checks", GradientChecks},
      {6, "end-to-end learning", EndToEnd},
      {7, "structural statistics", StructuralStatistics},
      {8, "determinism", Determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  bool all_pass = true;
  for (const Criterion &c : criteria) {
    if (!selected.empty() && !selected.count(c.number)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all_pass = all_pass && o.pass;
    std::printf("criterion %d %-36s %s  %s\n", c.number, c.name, o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
