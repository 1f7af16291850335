#include "framekit/evaluator.h"

#include <set>

#include "doctest.h"
#include "framekit/notation.h"
#include "support/brute_eval.h"
#include "support/generators.h"

using namespace framekit;
using framekit::testing::BruteForceEvaluate;
using framekit::testing::Counts;
using framekit::testing::DocSpec;
using framekit::testing::Materialize;
using framekit::testing::SpecFromDocument;

namespace {

Document WorkedExample() {
  auto docs = ReadCorpusFile(std::string(FRAMEKIT_TEST_DATA) + "/john_hit_the_ball.frames");
  REQUIRE(docs.size() == 1);
  return docs[0];
}

Counts AsArray(const MetricCounts &c) {
  return {c.matched_pred, c.total_pred, c.matched_gold, c.total_gold};
}

void CheckPerfect(const EvalReport &r) {
  for (int m = 0; m < kNumMetrics; ++m) {
    const MetricCounts &c = r.counts[m];
    CHECK_MESSAGE(c.matched_pred == c.total_pred, MetricName(static_cast<Metric>(m)));
    CHECK_MESSAGE(c.matched_gold == c.total_gold, MetricName(static_cast<Metric>(m)));
    if (c.total_gold > 0) CHECK(c.F1() == 1.0);
  }
}

void CheckAggregates(const EvalReport &r) {
  MetricCounts slot = r[Metric::kType];
  slot += r[Metric::kRole];
  slot += r[Metric::kLabel];
  CHECK(r[Metric::kSlot] == slot);
  MetricCounts combined = r[Metric::kSpan];
  combined += r[Metric::kFrame];
  combined += slot;
  CHECK(r[Metric::kCombined] == combined);
}

ErrorCode CodeOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("ratios") {
  MetricCounts c{1, 2, 3, 4};
  CHECK(c.Precision() == doctest::Approx(0.5));
  CHECK(c.Recall() == doctest::Approx(0.75));
  CHECK(c.F1() == doctest::Approx(2 * 0.5 * 0.75 / 1.25));
  MetricCounts zero;
  CHECK(zero.Precision() == 0.0);
  CHECK(zero.Recall() == 0.0);
  CHECK(zero.F1() == 0.0);
}

TEST_CASE("a document evaluated against itself is perfect") {
  Document d = WorkedExample();
  EvalReport r = Evaluate(d, d);
  CheckPerfect(r);
  CHECK(r[Metric::kSpan].total_gold == 3);
  CHECK(r[Metric::kFrame].total_gold == 3);
  CHECK(r[Metric::kType].total_gold == 3);
  CHECK(r[Metric::kRole].total_gold == 2);
  CHECK(r[Metric::kLabel].total_gold == 0);
  CheckAggregates(r);
  for (const Document &g : GenerateCorpus(4, 100)) CheckPerfect(Evaluate(g, g));
}

TEST_CASE("a retyped frame costs one type match") {
  Document gold = WorkedExample();
  DocSpec spec = SpecFromDocument(gold);
  bool retyped = false;
  for (auto &f : spec.frames) {
    if (f.type == "/saft/consumer_good") {
      f.type = "/saft/other";
      retyped = true;
    }
  }
  REQUIRE(retyped);
  EvalReport r = Evaluate(gold, Materialize(spec));
  CHECK(r[Metric::kSpan].F1() == 1.0);
  CHECK(r[Metric::kFrame].F1() == 1.0);
  CHECK(AsArray(r[Metric::kType]) == Counts{2, 3, 2, 3});
  CHECK(AsArray(r[Metric::kRole]) == Counts{2, 2, 2, 2});
  CheckAggregates(r);
}

TEST_CASE("alignment extends along links to non-evoked frames") {
  // A (evoked) -r-> B (not evoked) -s-> C (not evoked), on both sides.
  auto make = [](const std::string &btype) {
    auto store = std::make_shared<Store>();
    auto top = ParseNotationOrThrow(
        "{:/s/document /s/document/text: \"x y\" /s/document/mention: "
        "{/s/phrase/begin: 0 /s/phrase/evokes: {:/t/a /r: {:" + btype +
            " /s: {:/t/c}}}}}",
        *store);
    return DocumentFromFrame(top.at(0), store);
  };
  Document gold = make("/t/b"), pred = make("/t/other");
  Alignment al = Align(gold, pred);
  CHECK(al.size() == 3);
  EvalReport r = Evaluate(gold, pred);
  CHECK(AsArray(r[Metric::kFrame]) == Counts{3, 3, 3, 3});
  CHECK(AsArray(r[Metric::kType]) == Counts{2, 3, 2, 3});
  CHECK(AsArray(r[Metric::kRole]) == Counts{2, 2, 2, 2});

  // Incoming links align too: pred lacks the mention on A but evokes C.
  auto store = std::make_shared<Store>();
  auto top = ParseNotationOrThrow(
      "{:/s/document /s/document/text: \"x y\" /s/document/mention: "
      "{/s/phrase/begin: 0 /s/phrase/evokes: {:/t/a /r: {:/t/b /s: #1}}} "
      "/s/document/mention: {/s/phrase/begin: 1 /s/phrase/evokes: {=#1 :/t/c}}}",
      *store);
  Document both = DocumentFromFrame(top.at(0), store);
  auto store2 = std::make_shared<Store>();
  auto top2 = ParseNotationOrThrow(
      "{:/s/document /s/document/text: \"x y\" /s/document/theme: "
      "{:/t/a /r: {:/t/b /s: #1}} "
      "/s/document/mention: {/s/phrase/begin: 1 /s/phrase/evokes: {=#1 :/t/c}}}",
      *store2);
  Document tail = DocumentFromFrame(top2.at(0), store2);
  CHECK(Align(both, tail).size() == 3);
}

TEST_CASE("a missing mention leaves its frame unaligned") {
  Document gold = WorkedExample();
  DocSpec spec = SpecFromDocument(gold);
  // Drop the ball mention and the link to it.
  spec.mentions.pop_back();
  int ball = -1;
  for (size_t i = 0; i < spec.frames.size(); ++i) {
    if (spec.frames[i].type == "/saft/consumer_good") ball = static_cast<int>(i);
  }
  REQUIRE(ball >= 0);
  for (auto &f : spec.frames) {
    std::erase_if(f.slots, [&](const auto &s) { return s.target == ball; });
  }
  Document pred = Materialize(spec);
  EvalReport r = Evaluate(gold, pred);
  CHECK(AsArray(r[Metric::kSpan]) == Counts{2, 2, 2, 3});
  CHECK(AsArray(r[Metric::kFrame]) == Counts{2, 2, 2, 3});
  CHECK(AsArray(r[Metric::kRole]) == Counts{1, 1, 1, 2});
  CHECK(Align(gold, pred).size() == 2);
}

TEST_CASE("corpus scores are micro-averaged") {
  std::vector<Document> gold = GenerateCorpus(9, 2);
  std::vector<Document> pred{gold[0], Document(gold[1].shared_store(), gold[1].text())};
  int64_t n0 = 0, n1 = 0;
  std::set<std::pair<int, int>> s0, s1;
  for (const Mention &m : gold[0].mentions()) s0.emplace(m.begin, m.length);
  for (const Mention &m : gold[1].mentions()) s1.emplace(m.begin, m.length);
  n0 = static_cast<int64_t>(s0.size());
  n1 = static_cast<int64_t>(s1.size());
  REQUIRE(n1 > 0);
  EvalReport r = EvaluateCorpus(gold, pred);
  CHECK(AsArray(r[Metric::kSpan]) == Counts{n0, n0, n0, n0 + n1});
  CHECK(r[Metric::kSpan].Recall() == doctest::Approx(double(n0) / double(n0 + n1)));
  CHECK(r[Metric::kSpan].Precision() == 1.0);
  CheckAggregates(r);

  EvalReport sum = Evaluate(gold[0], pred[0]);
  sum.Merge(Evaluate(gold[1], pred[1]));
  CHECK(sum == r);
  CHECK(EvaluateCorpus(gold, pred, 4) == r);
}

TEST_CASE("empty corpus and mismatches") {
  std::vector<Document> none;
  EvalReport r = EvaluateCorpus(none, none);
  for (int m = 0; m < kNumMetrics; ++m) CHECK(r.counts[m].F1() == 0.0);
  auto docs = GenerateCorpus(1, 2);
  CHECK(CodeOf([&] { EvaluateCorpus(docs, std::span<const Document>(docs).first(1)); }) ==
        ErrorCode::kLengthMismatch);
  Document other(docs[0].shared_store(), "completely different text");
  CHECK(CodeOf([&] { Evaluate(docs[0], other); }) == ErrorCode::kTokenMismatch);
}

TEST_CASE("report formats") {
  Document d = WorkedExample();
  EvalReport r = Evaluate(d, d);
  std::string table = FormatReport(r);
  size_t last = 0;
  for (int m = 0; m < kNumMetrics; ++m) {
    size_t at = table.find(MetricName(static_cast<Metric>(m)), last);
    REQUIRE(at != std::string::npos);
    last = at;
  }
  std::string kv = FormatMetrics(r);
  CHECK(kv.find("slot.f1=100.00\n") != std::string::npos);
  CHECK(kv.find("combined.precision=100.00\n") != std::string::npos);
  CHECK(kv.find("span.recall=100.00\n") != std::string::npos);
  CHECK(kv.find("label.f1=0.00\n") != std::string::npos);
}

TEST_CASE("library counts equal the brute-force enumeration") {
  framekit::testing::Rng rng(31);
  auto corpus = GenerateCorpus(5, 100);
  for (int i = 0; i < 400; ++i) {
    Document gold = i % 2 ? framekit::testing::RandomRepresentableDocument(rng)
                          : corpus[i / 2 % corpus.size()];
    Document pred = framekit::testing::Perturb(gold, rng);
    EvalReport r = Evaluate(gold, pred);
    auto b = BruteForceEvaluate(gold, pred);
    CHECK(AsArray(r[Metric::kSpan]) == b.span);
    CHECK(AsArray(r[Metric::kFrame]) == b.frame);
    CHECK(AsArray(r[Metric::kType]) == b.type);
    CHECK(AsArray(r[Metric::kRole]) == b.role);
    CHECK(AsArray(r[Metric::kLabel]) == b.label);
    CheckAggregates(r);
    Alignment al = Align(gold, pred);
    CHECK(al.size() == b.alignment.size());
    for (const auto &[g, p] : b.alignment) {
      REQUIRE(al.HasGold(g));
      CHECK(al.gold_to_pred.at(g) == p);
    }
    for (int m = 0; m < kNumMetrics; ++m) {
      const MetricCounts &c = r.counts[m];
      CHECK(c.matched_pred <= c.total_pred);
      CHECK(c.matched_gold <= c.total_gold);
    }
  }
}

TEST_CASE("swapping gold and prediction swaps precision and recall") {
  framekit::testing::Rng rng(32);
  auto corpus = GenerateCorpus(6, 100);
  for (int i = 0; i < 200; ++i) {
    Document gold = i % 2 ? framekit::testing::RandomRepresentableDocument(rng)
                          : corpus[i / 2 % corpus.size()];
    Document pred = framekit::testing::Perturb(gold, rng);
    EvalReport a = Evaluate(gold, pred), b = Evaluate(pred, gold);
    for (int m = 0; m < kNumMetrics; ++m) {
      CHECK(a.counts[m].Precision() == doctest::Approx(b.counts[m].Recall()));
      CHECK(a.counts[m].Recall() == doctest::Approx(b.counts[m].Precision()));
      CHECK(a.counts[m].F1() == doctest::Approx(b.counts[m].F1()));
    }
  }
}

TEST_CASE("deleting a predicted mention never raises span recall") {
  framekit::testing::Rng rng(33);
  auto corpus = GenerateCorpus(8, 100);
  for (int i = 0; i < 200; ++i) {
    Document gold = corpus[i % corpus.size()];
    Document pred = framekit::testing::Perturb(gold, rng);
    DocSpec spec = SpecFromDocument(pred);
    if (spec.mentions.empty()) continue;
    spec.mentions.erase(spec.mentions.begin() + framekit::testing::Pick(rng, spec.mentions.size()));
    Document smaller = Materialize(spec);
    EvalReport before = Evaluate(gold, pred), after = Evaluate(gold, smaller);
    CHECK(after[Metric::kSpan].Recall() <= before[Metric::kSpan].Recall());
  }
}

TEST_CASE("span seeds pair frames in mention order") {
  // Pred evokes a person and the predicate on the same span. The seed pairs
  // the gold predicate with the first predicted frame, so removing the stray
  // mention raises frame recall from 2/3 to 3/3.
  Document gold = WorkedExample();
  DocSpec spec = SpecFromDocument(gold);
  spec.mentions[0].begin = 1;
  Document pred = Materialize(spec);
  EvalReport with_stray = Evaluate(gold, pred);
  CHECK(AsArray(with_stray[Metric::kFrame]) == Counts{2, 3, 2, 3});

  spec.mentions.erase(spec.mentions.begin());
  EvalReport without = Evaluate(gold, Materialize(spec));
  CHECK(AsArray(without[Metric::kFrame]) == Counts{3, 3, 3, 3});
}
