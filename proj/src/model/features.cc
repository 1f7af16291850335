#include "framekit/model/features.h"

namespace framekit {

FeatureExtractor::FeatureExtractor(int k_attention, int k_history,
                                   const Vocabulary *roles)
    : k_attention_(k_attention), k_history_(k_history), roles_(roles) {}

int FeatureExtractor::RoleTableSize(int table) const {
  int k = k_attention_, r = roles_->size();
  switch (table) {
    case kRoleSRT: return 1 + k * r * k;
    case kRoleSR: return 1 + k * r;
    case kRoleRT: return 1 + r * k;
    case kRoleST: return 1 + k * k;
  }
  return 1;
}

int FeatureExtractor::TripleId(int s, int r, int t) const {
  return 1 + (s * roles_->size() + r) * k_attention_ + t;
}
int FeatureExtractor::SourceRoleId(int s, int r) const {
  return 1 + s * roles_->size() + r;
}
int FeatureExtractor::RoleTargetId(int r, int t) const {
  return 1 + r * k_attention_ + t;
}
int FeatureExtractor::SourceTargetId(int s, int t) const {
  return 1 + s * k_attention_ + t;
}

StepFeatures FeatureExtractor::Extract(const ParserState &state) const {
  StepFeatures f;
  f.cursor = state.cursor() < state.num_tokens() ? state.cursor() : -1;
  f.attention_token.assign(k_attention_, -1);
  f.create_step.assign(k_attention_, -1);
  f.focus_step.assign(k_attention_, -1);
  f.history_step.assign(k_history_, -1);
  int top = std::min(k_attention_, state.AttentionSize());
  for (int j = 0; j < top; ++j) {
    const ParserState::FrameInfo &info = state.InfoAt(j);
    f.attention_token[j] = info.phrase_end;
    f.create_step[j] = info.created_step;
    f.focus_step[j] = info.focused_step;
  }
  for (int j = 0; j < k_history_; ++j) {
    int s = state.step() - 1 - j;
    if (s >= 0) f.history_step[j] = s;
  }
  const Store &store = state.store();
  for (int s = 0; s < top; ++s) {
    for (const Slot &slot : store.Slots(state.AttentionAt(s))) {
      if (slot.role == store.id() || slot.role == store.isa()) continue;
      if (!IsFrameValue(slot.value)) continue;
      int t = state.AttentionIndex(std::get<Handle>(slot.value));
      if (t < 0 || t >= k_attention_) continue;
      int r = slot.role.IsSymbol() ? roles_->Lookup(store.SymbolName(slot.role))
                                   : Vocabulary::kUnknown;
      f.roles[kRoleSRT].push_back(TripleId(s, r, t));
      f.roles[kRoleSR].push_back(SourceRoleId(s, r));
      f.roles[kRoleRT].push_back(RoleTargetId(r, t));
      f.roles[kRoleST].push_back(SourceTargetId(s, t));
    }
  }
  return f;
}

}  // namespace framekit
