#ifndef FRAMEKIT_ORACLE_H_
#define FRAMEKIT_ORACLE_H_

#include <array>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "framekit/action.h"
#include "framekit/document.h"

namespace framekit {

struct TransitionSequence {
  std::vector<Action> actions;
};

// Oracle output plus the document frames in the order the sequence creates
// them. frames[i] corresponds to the i-th frame created on replay.
struct OracleTrace {
  TransitionSequence sequence;
  std::vector<Handle> frames;
};

// Canonical transition sequence for an annotated document. Per token, left
// to right: evocations of the mentions starting there (longer spans first),
// each followed by the CONNECTs that became possible, ASSIGNs of the new
// frame and EMBED/ELABORATE for its non-evoked neighbours; then SHIFT. One
// STOP ends the sequence. Throws Error(kUnrepresentable) for documents the
// transition system cannot produce.
TransitionSequence GenerateOracle(const Document &doc);
OracleTrace GenerateOracleTrace(const Document &doc);

// Replays the oracle sequence and checks that the result has the same
// mentions and an isomorphic frame graph.
bool RoundTripCheck(const Document &doc);

// One action per line in textual form.
std::string FormatSequence(const TransitionSequence &sequence);

struct ActionStats {
  struct Row {
    std::set<std::string> unique;
    int64_t raw = 0;
  };
  std::array<Row, kNumActionKinds> rows;
  int64_t documents = 0;
  int64_t tokens = 0;

  void Add(const TransitionSequence &sequence);
  void Merge(const ActionStats &other);
  int64_t Raw(ActionKind kind) const { return rows[static_cast<int>(kind)].raw; }
  int64_t Unique(ActionKind kind) const {
    return static_cast<int64_t>(rows[static_cast<int>(kind)].unique.size());
  }
};

ActionStats ComputeActionStats(std::span<const Document> corpus);

// Three-column table: action type, unique argument count, raw count.
std::string FormatActionStats(const ActionStats &stats);

}  // namespace framekit

#endif  // FRAMEKIT_ORACLE_H_
