#ifndef FRAMEKIT_MODEL_FEATURES_H_
#define FRAMEKIT_MODEL_FEATURES_H_

#include <array>
#include <vector>

#include "framekit/model/lexicon.h"
#include "framekit/parser_state.h"

namespace framekit {

// Role feature tables: (s, r, t) triples and their three back-offs.
enum RoleTable { kRoleSRT, kRoleSR, kRoleRT, kRoleST };
inline constexpr int kNumRoleTables = 4;

// Per-step feature ids. -1 marks an absent linked feature; an empty role
// list means the reserved id 0.
struct StepFeatures {
  int cursor = -1;                   // token under the cursor
  std::vector<int> attention_token;  // last token of the most recent phrase
  std::vector<int> create_step;      // step that created the frame
  std::vector<int> focus_step;       // step that last fronted the frame
  std::vector<int> history_step;     // previous k steps, most recent first
  std::array<std::vector<int>, kNumRoleTables> roles;

  friend bool operator==(const StepFeatures &, const StepFeatures &) = default;
};

class FeatureExtractor {
 public:
  FeatureExtractor(int k_attention, int k_history, const Vocabulary *roles);

  StepFeatures Extract(const ParserState &state) const;

  int RoleTableSize(int table) const;
  int k_attention() const { return k_attention_; }
  int k_history() const { return k_history_; }

  // Feature ids for one triple of attention positions and a role id.
  int TripleId(int s, int r, int t) const;
  int SourceRoleId(int s, int r) const;
  int RoleTargetId(int r, int t) const;
  int SourceTargetId(int s, int t) const;

 private:
  int k_attention_;
  int k_history_;
  const Vocabulary *roles_;
};

}  // namespace framekit

#endif  // FRAMEKIT_MODEL_FEATURES_H_
