#include "framekit/parser_state.h"

#include <algorithm>

namespace framekit {

namespace {

bool SameHandle(Handle a, Handle b) {
  return a.kind == b.kind && a.index == b.index;
}

bool SameMentions(const std::vector<Mention> &a, const std::vector<Mention> &b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].begin != b[i].begin || a[i].length != b[i].length) return false;
    if (a[i].evoked.size() != b[i].evoked.size()) return false;
    for (size_t j = 0; j < a[i].evoked.size(); ++j) {
      if (!SameHandle(a[i].evoked[j], b[i].evoked[j])) return false;
    }
  }
  return true;
}

bool SameHandles(const std::vector<Handle> &a, const std::vector<Handle> &b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), SameHandle);
}

}  // namespace

ParserState::ParserState(const Document &input)
    : doc_(std::make_shared<Store>(), input.text(), input.tokens()) {}

ParserState::ParserState(const ParserState &other)
    : doc_(other.doc_.Rebind(std::make_shared<Store>(other.doc_.store()))),
      cursor_(other.cursor_),
      step_(other.step_),
      done_(other.done_),
      attention_(other.attention_),
      created_(other.created_) {}

ParserState &ParserState::operator=(const ParserState &other) {
  if (this != &other) *this = ParserState(other);
  return *this;
}

bool ParserState::IsValid(const Action &a) const {
  const int n = num_tokens();
  const int size = AttentionSize();
  auto in_buffer = [size](int i) { return i >= 0 && i < size; };
  if (a.kind == ActionKind::kStop) return cursor_ == n;
  if (done_) return false;
  switch (a.kind) {
    case ActionKind::kShift:
      return cursor_ < n;
    case ActionKind::kEvoke: {
      if (a.length < 1 || cursor_ + a.length > n || a.type.empty()) return false;
      auto type = doc_.store().FindSymbol(a.type);
      if (!type) return true;
      for (const Mention &m : doc_.mentions()) {
        if (m.begin != cursor_ || m.length != a.length) continue;
        for (Handle f : m.evoked) {
          Value isa = doc_.store().GetRole(f, doc_.store().isa());
          if (const Handle *h = AsHandle(isa); h != nullptr && *h == *type) {
            return false;
          }
        }
      }
      return true;
    }
    case ActionKind::kRefer:
      return a.length >= 1 && cursor_ + a.length <= n && in_buffer(a.source);
    case ActionKind::kConnect:
      return in_buffer(a.source) && in_buffer(a.target) && !a.role.empty();
    case ActionKind::kAssign:
      return in_buffer(a.source) && !a.role.empty();
    case ActionKind::kEmbed:
      return in_buffer(a.target) && !a.role.empty() && !a.type.empty();
    case ActionKind::kElaborate:
      return in_buffer(a.source) && !a.role.empty() && !a.type.empty();
    default:
      return false;
  }
}

void ParserState::Apply(const Action &a) {
  if (!IsValid(a)) {
    throw Error(ErrorCode::kInvalidAction,
                "invalid action " + ToString(a) + " at step " +
                    std::to_string(step_));
  }
  Store &store = doc_.store();
  switch (a.kind) {
    case ActionKind::kShift:
      ++cursor_;
      break;
    case ActionKind::kStop:
      done_ = true;
      break;
    case ActionKind::kEvoke: {
      Handle frame = store.NewFrame({{store.isa(), InternSymbol(a.type)}});
      doc_.AddMention(cursor_, a.length, {frame});
      PushFront(frame, cursor_ + a.length - 1);
      break;
    }
    case ActionKind::kRefer: {
      Handle frame = attention_[a.source].frame;
      doc_.AddMention(cursor_, a.length, {frame});
      attention_[a.source].phrase_end = cursor_ + a.length - 1;
      Front(a.source, true);
      break;
    }
    case ActionKind::kConnect:
      store.AddSlot(attention_[a.source].frame, InternSymbol(a.role),
                    attention_[a.target].frame);
      Front(a.source, true);
      break;
    case ActionKind::kAssign:
      store.AddSlot(attention_[a.source].frame, InternSymbol(a.role),
                    ToValue(a.value));
      Front(a.source, true);
      break;
    case ActionKind::kEmbed: {
      Handle frame = store.NewFrame({{store.isa(), InternSymbol(a.type)},
                                     {InternSymbol(a.role),
                                      attention_[a.target].frame}});
      doc_.AddTheme(frame);
      PushFront(frame, -1);
      break;
    }
    case ActionKind::kElaborate: {
      Handle frame = store.NewFrame({{store.isa(), InternSymbol(a.type)}});
      store.AddSlot(attention_[a.source].frame, InternSymbol(a.role), frame);
      PushFront(frame, -1);
      break;
    }
  }
  ++step_;
}

Handle ParserState::AttentionAt(int index) const {
  return InfoAt(index).frame;
}

const ParserState::FrameInfo &ParserState::InfoAt(int index) const {
  if (index < 0 || index >= AttentionSize()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "attention index " + std::to_string(index) + " out of range");
  }
  return attention_[index];
}

int ParserState::AttentionIndex(Handle frame) const {
  for (int i = 0; i < AttentionSize(); ++i) {
    if (attention_[i].frame == frame) return i;
  }
  return -1;
}

void ParserState::Front(int index, bool focus) {
  FrameInfo info = attention_[index];
  if (focus) info.focused_step = step_;
  attention_.erase(attention_.begin() + index);
  attention_.insert(attention_.begin(), info);
}

void ParserState::PushFront(Handle frame, int phrase_end) {
  attention_.insert(attention_.begin(),
                    FrameInfo{frame, step_, step_, phrase_end});
  created_.push_back(frame);
}

Handle ParserState::InternSymbol(const std::string &name) {
  return doc_.store().Intern(name);
}

Value ParserState::ToValue(const Constant &c) {
  switch (c.index()) {
    case 1: return std::get<int64_t>(c);
    case 2: return std::get<double>(c);
    case 3: return std::get<std::string>(c);
    case 4: return InternSymbol(std::get<SymbolName>(c).name);
    default: return Value{};
  }
}

bool operator==(const ParserState &a, const ParserState &b) {
  if (a.cursor_ != b.cursor_ || a.step_ != b.step_ || a.done_ != b.done_) {
    return false;
  }
  if (a.attention_.size() != b.attention_.size()) return false;
  for (size_t i = 0; i < a.attention_.size(); ++i) {
    const auto &x = a.attention_[i];
    const auto &y = b.attention_[i];
    if (!SameHandle(x.frame, y.frame) || x.created_step != y.created_step ||
        x.focused_step != y.focused_step || x.phrase_end != y.phrase_end) {
      return false;
    }
  }
  const Document &da = a.doc_;
  const Document &db = b.doc_;
  return SameHandles(a.created_, b.created_) && da.text() == db.text() &&
         da.tokens() == db.tokens() && SameMentions(da.mentions(), db.mentions()) &&
         SameHandles(da.themes(), db.themes()) && da.store() == db.store();
}

bool IsValid(const ParserState &state, const Action &action) {
  return state.IsValid(action);
}

ParserState Apply(ParserState state, const Action &action) {
  state.Apply(action);
  return state;
}

}  // namespace framekit
