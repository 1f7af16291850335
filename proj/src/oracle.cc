#include "framekit/oracle.h"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "framekit/notation.h"
#include "framekit/parser_state.h"

namespace framekit {

namespace {

[[noreturn]] void Unrepresentable(const std::string &why) {
  throw Error(ErrorCode::kUnrepresentable, why);
}

class OracleBuilder {
 public:
  explicit OracleBuilder(const Document &doc)
      : doc_(doc), store_(doc.store()) {}

  OracleTrace Run() {
    Prepare();
    for (int cursor = 0; cursor < doc_.num_tokens(); ++cursor) {
      for (const Mention &m : doc_.mentions()) {
        if (m.begin != cursor) continue;
        for (Handle f : m.evoked) Evoke(f, m);
      }
      Emit(Action::Shift());
    }
    Emit(Action::Stop());
    for (Handle f : universe_) {
      if (!position_known(f)) Unrepresentable("frame is never created");
      const auto &slots = store_.Slots(f);
      for (size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].role == store_.id()) continue;
        if (!realized_.count({f, i})) Unrepresentable("slot is never realized");
      }
    }
    return std::move(trace_);
  }

 private:
  using SlotKey = std::pair<Handle, size_t>;
  struct SlotKeyHash {
    size_t operator()(const SlotKey &k) const {
      return HandleHash()(k.first) * 31 + k.second;
    }
  };

  const std::string &Name(Handle symbol) const {
    const std::string &name = store_.SymbolName(symbol);
    if (!IsBareName(name)) Unrepresentable("symbol cannot be printed: " + name);
    return name;
  }

  void Prepare() {
    universe_ = doc_.Frames();
    for (const Mention &m : doc_.mentions()) {
      for (Handle f : m.evoked) evoked_.insert(f);
    }
    for (size_t i = 0; i < universe_.size(); ++i) order_[universe_[i]] = i;
    for (Handle f : universe_) {
      const auto &slots = store_.Slots(f);
      int type_slot = -1;
      for (size_t i = 0; i < slots.size(); ++i) {
        const Slot &slot = slots[i];
        if (slot.role == store_.id()) continue;
        if (!slot.role.IsSymbol()) Unrepresentable("slot role is not a symbol");
        Name(slot.role);
        const Handle *h = AsHandle(slot.value);
        if (h != nullptr && h->IsArray()) Unrepresentable("array-valued slot");
        if (h != nullptr && h->IsSymbol()) Name(*h);
        if (slot.role == store_.isa() && type_slot < 0 && h != nullptr &&
            h->IsSymbol()) {
          type_slot = static_cast<int>(i);
        }
      }
      if (type_slot < 0) Unrepresentable("frame has no symbol type");
      type_slot_[f] = static_cast<size_t>(type_slot);
    }
    for (Handle f : universe_) {
      if (evoked_.count(f)) continue;
      if (!AttachedToEvoked(f)) {
        Unrepresentable("frame is neither evoked nor one role away from an "
                        "evoked frame");
      }
    }
  }

  bool AttachedToEvoked(Handle f) const {
    for (const Slot &slot : store_.Slots(f)) {
      const Handle *h = AsHandle(slot.value);
      if (h != nullptr && evoked_.count(*h) && slot.role != store_.isa()) {
        return true;
      }
    }
    for (Handle e : evoked_) {
      for (const Slot &slot : store_.Slots(e)) {
        const Handle *h = AsHandle(slot.value);
        if (h != nullptr && *h == f && slot.role != store_.isa()) return true;
      }
    }
    return false;
  }

  bool position_known(Handle f) const {
    return std::find(buffer_.begin(), buffer_.end(), f) != buffer_.end();
  }

  int Position(Handle f) const {
    auto it = std::find(buffer_.begin(), buffer_.end(), f);
    return static_cast<int>(it - buffer_.begin());
  }

  void ToFront(Handle f) {
    auto it = std::find(buffer_.begin(), buffer_.end(), f);
    buffer_.erase(it);
    buffer_.insert(buffer_.begin(), f);
  }

  void Create(Handle f) {
    buffer_.insert(buffer_.begin(), f);
    trace_.frames.push_back(f);
    realized_.insert({f, type_slot_.at(f)});
  }

  const std::string &TypeName(Handle f) const {
    const Slot &slot = store_.Slots(f)[type_slot_.at(f)];
    return Name(std::get<Handle>(slot.value));
  }

  void Emit(Action action) { trace_.sequence.actions.push_back(std::move(action)); }

  void Evoke(Handle f, const Mention &m) {
    if (position_known(f)) {
      Emit(Action::Refer(Position(f), m.length));
      ToFront(f);
      Settle({});
      return;
    }
    const std::string &type = TypeName(f);
    auto key = std::make_tuple(m.begin, m.length, type);
    if (!evoked_spans_.insert(key).second) {
      Unrepresentable("two frames of type " + type + " evoked by one span");
    }
    Emit(Action::Evoke(type, m.length));
    Create(f);
    Settle({f});
  }

  void Settle(std::deque<Handle> queue) {
    EmitConnects();
    while (!queue.empty()) {
      Handle g = queue.front();
      queue.pop_front();
      EmitAssigns(g);
      const auto &slots = store_.Slots(g);
      for (size_t i = 0; i < slots.size(); ++i) {
        const Handle *h = AsHandle(slots[i].value);
        if (h == nullptr || !h->IsFrame() || evoked_.count(*h)) continue;
        if (position_known(*h) || realized_.count({g, i})) continue;
        if (slots[i].role == store_.isa() || slots[i].role == store_.id()) continue;
        Emit(Action::Elaborate(Position(g), Name(slots[i].role), TypeName(*h)));
        realized_.insert({g, i});
        Create(*h);
        queue.push_back(*h);
        EmitConnects();
      }
      for (Handle h : universe_) {
        if (evoked_.count(h) || position_known(h)) continue;
        const auto &hs = store_.Slots(h);
        for (size_t j = 0; j < hs.size(); ++j) {
          const Handle *v = AsHandle(hs[j].value);
          if (v == nullptr || *v != g) continue;
          if (hs[j].role == store_.isa() || hs[j].role == store_.id()) continue;
          if (!position_known(g)) break;
          Emit(Action::Embed(Position(g), Name(hs[j].role), TypeName(h)));
          realized_.insert({h, j});
          Create(h);
          queue.push_back(h);
          EmitConnects();
          break;
        }
      }
    }
  }

  void EmitConnects() {
    std::vector<std::pair<size_t, size_t>> pending;  // (creation rank, slot)
    std::vector<Handle> sources;
    for (size_t rank = 0; rank < trace_.frames.size(); ++rank) {
      Handle s = trace_.frames[rank];
      const auto &slots = store_.Slots(s);
      for (size_t i = 0; i < slots.size(); ++i) {
        if (realized_.count({s, i})) continue;
        if (slots[i].role == store_.id()) continue;
        const Handle *t = AsHandle(slots[i].value);
        if (t == nullptr || !t->IsFrame() || !position_known(*t)) continue;
        pending.emplace_back(rank, i);
      }
    }
    for (auto [rank, i] : pending) {
      Handle s = trace_.frames[rank];
      const Slot &slot = store_.Slots(s)[i];
      Handle t = std::get<Handle>(slot.value);
      Emit(Action::Connect(Position(s), Name(slot.role), Position(t)));
      realized_.insert({s, i});
      ToFront(s);
    }
  }

  void EmitAssigns(Handle g) {
    const auto &slots = store_.Slots(g);
    for (size_t i = 0; i < slots.size(); ++i) {
      if (realized_.count({g, i}) || slots[i].role == store_.id()) continue;
      if (IsFrameValue(slots[i].value)) continue;
      Emit(Action::Assign(Position(g), Name(slots[i].role), ToConstant(slots[i].value)));
      realized_.insert({g, i});
      ToFront(g);
    }
  }

  Constant ToConstant(const Value &v) const {
    switch (v.index()) {
      case 1: return std::get<int64_t>(v);
      case 2: return std::get<double>(v);
      case 3: return std::get<std::string>(v);
      case 4: return SymbolName{Name(std::get<Handle>(v))};
      default: return std::monostate{};
    }
  }

  const Document &doc_;
  const Store &store_;
  std::vector<Handle> universe_;
  std::unordered_map<Handle, size_t, HandleHash> order_;
  std::unordered_set<Handle, HandleHash> evoked_;
  std::unordered_map<Handle, size_t, HandleHash> type_slot_;
  std::unordered_set<SlotKey, SlotKeyHash> realized_;
  std::set<std::tuple<int, int, std::string>> evoked_spans_;
  std::vector<Handle> buffer_;
  OracleTrace trace_;
};

// Canonical description of a value relative to a frame numbering.
std::string Describe(const Store &store, const Value &v,
                     const std::unordered_map<Handle, size_t, HandleHash> &ids) {
  switch (v.index()) {
    case 0: return "nil";
    case 1: return "i" + std::to_string(std::get<int64_t>(v));
    case 2: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "f%.17g", std::get<double>(v));
      return buf;
    }
    case 3: return "s" + QuoteString(std::get<std::string>(v));
    case 4: {
      Handle h = std::get<Handle>(v);
      if (h.IsSymbol()) return "y" + store.SymbolName(h);
      if (h.IsFrame()) {
        auto it = ids.find(h);
        return it == ids.end() ? "?" : "#" + std::to_string(it->second);
      }
      return "a";
    }
  }
  return "?";
}

std::vector<std::string> SlotSignature(
    const Store &store, Handle frame,
    const std::unordered_map<Handle, size_t, HandleHash> &ids) {
  std::vector<std::string> out;
  for (const Slot &slot : store.Slots(frame)) {
    if (slot.role == store.id()) continue;
    out.push_back(Describe(store, slot.role, ids) + "=" +
                  Describe(store, slot.value, ids));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::set<std::tuple<int, int, size_t>> Evocations(
    const Document &doc, const std::unordered_map<Handle, size_t, HandleHash> &ids) {
  std::set<std::tuple<int, int, size_t>> out;
  for (const Mention &m : doc.mentions()) {
    for (Handle f : m.evoked) out.emplace(m.begin, m.length, ids.at(f));
  }
  return out;
}

}  // namespace

OracleTrace GenerateOracleTrace(const Document &doc) {
  return OracleBuilder(doc).Run();
}

TransitionSequence GenerateOracle(const Document &doc) {
  return GenerateOracleTrace(doc).sequence;
}

bool RoundTripCheck(const Document &doc) {
  OracleTrace trace = GenerateOracleTrace(doc);
  ParserState state(doc);
  try {
    for (const Action &a : trace.sequence.actions) state.Apply(a);
  } catch (const Error &e) {
    if (e.code() == ErrorCode::kInvalidAction) return false;
    throw;
  }
  if (!state.done()) return false;
  const std::vector<Handle> &replayed = state.created();
  std::vector<Handle> original_universe = doc.Frames();
  std::vector<Handle> replayed_universe = state.document().Frames();
  if (replayed.size() != trace.frames.size() ||
      original_universe.size() != trace.frames.size() ||
      replayed_universe.size() != replayed.size()) {
    return false;
  }
  std::unordered_map<Handle, size_t, HandleHash> original_ids, replayed_ids;
  for (size_t i = 0; i < trace.frames.size(); ++i) {
    original_ids[trace.frames[i]] = i;
    replayed_ids[replayed[i]] = i;
  }
  for (size_t i = 0; i < trace.frames.size(); ++i) {
    if (SlotSignature(doc.store(), trace.frames[i], original_ids) !=
        SlotSignature(state.store(), replayed[i], replayed_ids)) {
      return false;
    }
  }
  return Evocations(doc, original_ids) ==
         Evocations(state.document(), replayed_ids);
}

std::string FormatSequence(const TransitionSequence &sequence) {
  std::string out;
  for (const Action &a : sequence.actions) {
    out += ToString(a);
    out += '\n';
  }
  return out;
}

void ActionStats::Add(const TransitionSequence &sequence) {
  for (const Action &a : sequence.actions) {
    Row &row = rows[static_cast<int>(a.kind)];
    ++row.raw;
    row.unique.insert(ToString(a));
  }
}

void ActionStats::Merge(const ActionStats &other) {
  for (int k = 0; k < kNumActionKinds; ++k) {
    rows[k].raw += other.rows[k].raw;
    rows[k].unique.insert(other.rows[k].unique.begin(), other.rows[k].unique.end());
  }
  documents += other.documents;
  tokens += other.tokens;
}

ActionStats ComputeActionStats(std::span<const Document> corpus) {
  ActionStats stats;
  for (size_t i = 0; i < corpus.size(); ++i) {
    try {
      stats.Add(GenerateOracle(corpus[i]));
    } catch (const Error &e) {
      throw Error(e.code(), "document " + std::to_string(i) + ": " + e.what());
    }
    ++stats.documents;
    stats.tokens += corpus[i].num_tokens();
  }
  return stats;
}

std::string FormatActionStats(const ActionStats &stats) {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof(line), "%-12s %14s %14s\n", "Action Type",
                "# Unique Args", "Raw Count");
  out += line;
  int64_t total_unique = 0, total_raw = 0;
  for (int k = 0; k < kNumActionKinds; ++k) {
    auto kind = static_cast<ActionKind>(k);
    std::snprintf(line, sizeof(line), "%-12s %14lld %14lld\n",
                  ActionKindName(kind), static_cast<long long>(stats.Unique(kind)),
                  static_cast<long long>(stats.Raw(kind)));
    out += line;
    total_unique += stats.Unique(kind);
    total_raw += stats.Raw(kind);
  }
  std::snprintf(line, sizeof(line), "%-12s %14lld %14lld\n", "Total",
                static_cast<long long>(total_unique),
                static_cast<long long>(total_raw));
  out += line;
  return out;
}

}  // namespace framekit
