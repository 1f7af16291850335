#include "framekit/store.h"

#include <atomic>

namespace framekit {

namespace {

std::atomic<uint32_t> next_store_id{1};

const char *KindName(HandleKind kind) {
  switch (kind) {
    case HandleKind::kNil: return "nil";
    case HandleKind::kFrame: return "frame";
    case HandleKind::kSymbol: return "symbol";
    case HandleKind::kArray: return "array";
  }
  return "?";
}

}  // namespace

const char *ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kFrozenStore: return "frozen store";
    case ErrorCode::kEmptyName: return "empty name";
    case ErrorCode::kForeignHandle: return "foreign handle";
    case ErrorCode::kDanglingHandle: return "dangling handle";
    case ErrorCode::kDuplicateId: return "duplicate id";
    case ErrorCode::kSyntax: return "syntax error";
    case ErrorCode::kUnresolvedReference: return "unresolved reference";
    case ErrorCode::kDuplicateLabel: return "duplicate label";
    case ErrorCode::kSchema: return "schema error";
    case ErrorCode::kInvalidAction: return "invalid action";
    case ErrorCode::kIndexOutOfRange: return "index out of range";
    case ErrorCode::kUnrepresentable: return "unrepresentable document";
    case ErrorCode::kTokenMismatch: return "token mismatch";
    case ErrorCode::kLengthMismatch: return "length mismatch";
    case ErrorCode::kShapeMismatch: return "shape mismatch";
    case ErrorCode::kNonFiniteLoss: return "non-finite loss";
    case ErrorCode::kIo: return "i/o error";
  }
  return "unknown error";
}

Store::Store() : id_(next_store_id.fetch_add(1)) {
  for (const char *name : {"id", "isa", "is"}) Intern(name);
}

Handle Store::Intern(std::string_view name) {
  CheckMutable();
  if (name.empty()) throw Error(ErrorCode::kEmptyName, "symbol name is empty");
  auto it = symbol_index_.find(std::string(name));
  if (it != symbol_index_.end()) return Sym(it->second);
  auto index = static_cast<uint32_t>(symbols_.size());
  symbols_.push_back(Symbol{std::string(name), Handle{}});
  symbol_index_.emplace(std::string(name), index);
  return Sym(index);
}

std::optional<Handle> Store::FindSymbol(std::string_view name) const {
  auto it = symbol_index_.find(std::string(name));
  if (it == symbol_index_.end()) return std::nullopt;
  return Sym(it->second);
}

const std::string &Store::SymbolName(Handle symbol) const {
  CheckOwned(symbol);
  if (!symbol.IsSymbol()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("expected symbol, got ") + KindName(symbol.kind));
  }
  return symbols_[symbol.index].name;
}

Handle Store::BoundFrame(Handle symbol) const {
  CheckOwned(symbol);
  if (!symbol.IsSymbol()) return Handle{};
  return symbols_[symbol.index].frame;
}

Handle Store::LookupFrame(std::string_view name) const {
  auto sym = FindSymbol(name);
  return sym ? symbols_[sym->index].frame : Handle{};
}

Handle Store::NewFrame(std::vector<Slot> slots) {
  CheckMutable();
  for (const Slot &slot : slots) {
    if (slot.role.IsNil()) {
      throw Error(ErrorCode::kInvalidArgument, "slot role is nil");
    }
    CheckOwned(slot.role);
    CheckValue(slot.value);
    if (slot.role == id()) {
      const Handle *name = AsHandle(slot.value);
      if (name == nullptr || !name->IsSymbol()) {
        throw Error(ErrorCode::kInvalidArgument, "id value must be a symbol");
      }
      if (!symbols_[name->index].frame.IsNil()) {
        throw Error(ErrorCode::kDuplicateId,
                    "id already bound: " + symbols_[name->index].name);
      }
    }
  }
  Handle frame{id_, static_cast<uint32_t>(frames_.size()), HandleKind::kFrame};
  for (const Slot &slot : slots) {
    if (slot.role == id()) BindId(frame, slot.value);
  }
  frames_.push_back(std::move(slots));
  return frame;
}

Handle Store::NewArray(std::vector<Value> elements) {
  CheckMutable();
  for (const Value &v : elements) CheckValue(v);
  Handle array{id_, static_cast<uint32_t>(arrays_.size()), HandleKind::kArray};
  arrays_.push_back(std::move(elements));
  return array;
}

void Store::AddSlot(Handle frame, Handle role, Value value) {
  CheckMutable();
  CheckOwned(frame);
  if (!frame.IsFrame()) {
    throw Error(ErrorCode::kInvalidArgument, "add_slot target is not a frame");
  }
  if (role.IsNil()) throw Error(ErrorCode::kInvalidArgument, "slot role is nil");
  CheckOwned(role);
  CheckValue(value);
  if (role == id()) {
    const Handle *name = AsHandle(value);
    if (name == nullptr || !name->IsSymbol()) {
      throw Error(ErrorCode::kInvalidArgument, "id value must be a symbol");
    }
    Handle bound = symbols_[name->index].frame;
    if (!bound.IsNil() && bound != frame) {
      throw Error(ErrorCode::kDuplicateId,
                  "id already bound: " + symbols_[name->index].name);
    }
    BindId(frame, value);
  }
  frames_[frame.index].push_back(Slot{role, std::move(value)});
}

Value Store::GetRole(Handle frame, Handle role) const {
  for (const Slot &slot : Slots(frame)) {
    if (slot.role == role) return slot.value;
  }
  return Value{};
}

std::span<const Slot> Store::Slots(Handle frame) const {
  CheckOwned(frame);
  if (!frame.IsFrame()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("expected frame, got ") + KindName(frame.kind));
  }
  return frames_[frame.index];
}

std::span<const Value> Store::Elements(Handle array) const {
  CheckOwned(array);
  if (!array.IsArray()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("expected array, got ") + KindName(array.kind));
  }
  return arrays_[array.index];
}

bool Store::Owns(Handle h) const {
  if (h.store != id_) return false;
  switch (h.kind) {
    case HandleKind::kNil: return false;
    case HandleKind::kFrame: return h.index < frames_.size();
    case HandleKind::kSymbol: return h.index < symbols_.size();
    case HandleKind::kArray: return h.index < arrays_.size();
  }
  return false;
}

Handle Store::FrameAt(size_t index) const {
  if (index >= frames_.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "frame index out of range");
  }
  return Handle{id_, static_cast<uint32_t>(index), HandleKind::kFrame};
}

namespace {

bool SameHandle(const Handle &a, const Handle &b) {
  return a.kind == b.kind && a.index == b.index;
}

bool SameValue(const Value &a, const Value &b) {
  if (a.index() != b.index()) return false;
  if (const Handle *h = AsHandle(a)) return SameHandle(*h, std::get<Handle>(b));
  return a == b;
}

bool SameValues(const std::vector<Value> &a, const std::vector<Value> &b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!SameValue(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace

// Handles are compared by kind and index so that two stores built by the same
// sequence of operations compare equal even though their ids differ.
bool operator==(const Store &a, const Store &b) {
  if (a.frames_.size() != b.frames_.size()) return false;
  if (a.arrays_.size() != b.arrays_.size()) return false;
  if (a.symbols_.size() != b.symbols_.size()) return false;
  for (size_t i = 0; i < a.symbols_.size(); ++i) {
    if (a.symbols_[i].name != b.symbols_[i].name) return false;
    if (!SameHandle(a.symbols_[i].frame, b.symbols_[i].frame)) return false;
  }
  for (size_t i = 0; i < a.frames_.size(); ++i) {
    const auto &fa = a.frames_[i];
    const auto &fb = b.frames_[i];
    if (fa.size() != fb.size()) return false;
    for (size_t j = 0; j < fa.size(); ++j) {
      if (!SameHandle(fa[j].role, fb[j].role)) return false;
      if (!SameValue(fa[j].value, fb[j].value)) return false;
    }
  }
  for (size_t i = 0; i < a.arrays_.size(); ++i) {
    if (!SameValues(a.arrays_[i], b.arrays_[i])) return false;
  }
  return true;
}

void Store::CheckMutable() const {
  if (frozen_) throw Error(ErrorCode::kFrozenStore, "store is frozen");
}

void Store::CheckOwned(Handle h) const {
  if (h.IsNil()) throw Error(ErrorCode::kDanglingHandle, "nil handle");
  if (h.store != id_) {
    throw Error(ErrorCode::kForeignHandle, "handle belongs to another store");
  }
  if (!Owns(h)) {
    throw Error(ErrorCode::kDanglingHandle,
                std::string("dangling ") + KindName(h.kind) + " handle");
  }
}

void Store::CheckValue(const Value &v) const {
  if (const Handle *h = AsHandle(v)) CheckOwned(*h);
}

void Store::BindId(Handle frame, const Value &value) {
  symbols_[std::get<Handle>(value).index].frame = frame;
}

}  // namespace framekit
