#ifndef FRAMEKIT_EVALUATOR_H_
#define FRAMEKIT_EVALUATOR_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>

#include "framekit/document.h"

namespace framekit {

struct MetricCounts {
  int64_t matched_pred = 0;
  int64_t total_pred = 0;
  int64_t matched_gold = 0;
  int64_t total_gold = 0;

  // 0/0 is 0.
  double Precision() const;
  double Recall() const;
  double F1() const;

  MetricCounts &operator+=(const MetricCounts &other);
  friend bool operator==(const MetricCounts &, const MetricCounts &) = default;
};

enum class Metric { kSpan, kFrame, kType, kRole, kLabel, kSlot, kCombined };
inline constexpr int kNumMetrics = 7;
// Span, Frame, Type, Role, Label are measured; Slot and Combined are sums.
inline constexpr int kNumBaseMetrics = 5;

const char *MetricName(Metric metric);
// Lower-case key used in the key=value block.
const char *MetricKey(Metric metric);

struct EvalReport {
  std::array<MetricCounts, kNumMetrics> counts;

  MetricCounts &operator[](Metric m) { return counts[static_cast<int>(m)]; }
  const MetricCounts &operator[](Metric m) const {
    return counts[static_cast<int>(m)];
  }

  // Adds the base counts of `other` and recomputes the aggregates.
  void Merge(const EvalReport &other);
  void UpdateAggregates();

  friend bool operator==(const EvalReport &, const EvalReport &) = default;
};

// Partial bijection between gold and predicted frames.
struct Alignment {
  std::unordered_map<Handle, Handle, HandleHash> gold_to_pred;
  std::unordered_map<Handle, Handle, HandleHash> pred_to_gold;

  void Add(Handle gold, Handle pred);
  bool HasGold(Handle h) const { return gold_to_pred.count(h) != 0; }
  bool HasPred(Handle h) const { return pred_to_gold.count(h) != 0; }
  size_t size() const { return gold_to_pred.size(); }
};

// Seeds the alignment with frames evoked by identical spans (paired in
// mention order), then extends it over role links in both directions until
// nothing changes. Throws Error(kTokenMismatch) if the token sequences differ.
Alignment Align(const Document &gold, const Document &pred);

EvalReport Evaluate(const Document &gold, const Document &pred);

// Micro-average over document pairs. Throws Error(kLengthMismatch) when the
// corpora differ in size. `jobs` > 1 evaluates documents on worker threads;
// the result does not depend on it.
EvalReport EvaluateCorpus(std::span<const Document> gold,
                          std::span<const Document> pred, int jobs = 1);

// Fixed-width table, one row per metric with P/R/F1 in percent.
std::string FormatReport(const EvalReport &report);

// key=value lines: <metric>.precision/recall/f1 with two decimals and the
// four raw counts.
std::string FormatMetrics(const EvalReport &report);

}  // namespace framekit

#endif  // FRAMEKIT_EVALUATOR_H_
