#ifndef FRAMEKIT_STORE_H_
#define FRAMEKIT_STORE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "framekit/error.h"

namespace framekit {

enum class HandleKind : uint8_t { kNil, kFrame, kSymbol, kArray };

// Reference to an object owned by one store. Handles are plain values; they
// carry the id of the issuing store so that cross-store use is detected.
struct Handle {
  uint32_t store = 0;
  uint32_t index = 0;
  HandleKind kind = HandleKind::kNil;

  bool IsNil() const { return kind == HandleKind::kNil; }
  bool IsFrame() const { return kind == HandleKind::kFrame; }
  bool IsSymbol() const { return kind == HandleKind::kSymbol; }
  bool IsArray() const { return kind == HandleKind::kArray; }

  friend bool operator==(const Handle &, const Handle &) = default;
  friend auto operator<=>(const Handle &, const Handle &) = default;
};

struct HandleHash {
  size_t operator()(const Handle &h) const {
    uint64_t key = (uint64_t{h.store} << 34) ^ (uint64_t{h.index} << 2) ^
                   static_cast<uint64_t>(h.kind);
    return std::hash<uint64_t>()(key);
  }
};

// Slot value: nil, integer, float, string literal or a handle.
using Value = std::variant<std::monostate, int64_t, double, std::string, Handle>;

inline bool IsNil(const Value &v) {
  return std::holds_alternative<std::monostate>(v);
}
inline const Handle *AsHandle(const Value &v) {
  return std::get_if<Handle>(&v);
}
inline bool IsFrameValue(const Value &v) {
  const Handle *h = AsHandle(v);
  return h != nullptr && h->IsFrame();
}

struct Slot {
  Handle role;
  Value value;

  friend bool operator==(const Slot &, const Slot &) = default;
};

// Arena for frames, arrays and interned symbols. Frames are never freed
// before the store itself, so every handle the store issued stays valid for
// the lifetime of the store. Copies of a store keep its id; handles issued by
// the original resolve in the copy.
class Store {
 public:
  Store();

  Store(const Store &) = default;
  Store &operator=(const Store &) = default;
  Store(Store &&) = default;
  Store &operator=(Store &&) = default;

  // Built-in roles, pre-interned in every store.
  Handle id() const { return Sym(kIdIndex); }
  Handle isa() const { return Sym(kIsaIndex); }
  Handle is() const { return Sym(kIsIndex); }

  Handle Intern(std::string_view name);
  std::optional<Handle> FindSymbol(std::string_view name) const;
  const std::string &SymbolName(Handle symbol) const;

  // Frame bound to the symbol through an id slot, or a nil handle.
  Handle BoundFrame(Handle symbol) const;
  Handle LookupFrame(std::string_view name) const;

  Handle NewFrame(std::vector<Slot> slots = {});
  Handle NewArray(std::vector<Value> elements);

  void AddSlot(Handle frame, Handle role, Value value);
  Value GetRole(Handle frame, Handle role) const;
  std::span<const Slot> Slots(Handle frame) const;
  std::span<const Value> Elements(Handle array) const;

  // True if the handle was issued by this store and resolves.
  bool Owns(Handle h) const;

  void Freeze() { frozen_ = true; }
  // Copy that accepts mutation even if this store is frozen.
  Store MutableCopy() const {
    Store copy(*this);
    copy.frozen_ = false;
    return copy;
  }
  bool frozen() const { return frozen_; }

  uint32_t store_id() const { return id_; }
  size_t num_frames() const { return frames_.size(); }
  size_t num_symbols() const { return symbols_.size(); }
  size_t num_arrays() const { return arrays_.size(); }
  Handle FrameAt(size_t index) const;

  // Structural equality: same symbols, frames and arrays by index.
  friend bool operator==(const Store &a, const Store &b);

 private:
  static constexpr uint32_t kIdIndex = 0;
  static constexpr uint32_t kIsaIndex = 1;
  static constexpr uint32_t kIsIndex = 2;

  struct Symbol {
    std::string name;
    Handle frame;  // nil unless bound through an id slot
  };

  Handle Sym(uint32_t index) const {
    return Handle{id_, index, HandleKind::kSymbol};
  }
  void CheckMutable() const;
  void CheckOwned(Handle h) const;
  void CheckValue(const Value &v) const;
  void BindId(Handle frame, const Value &value);

  uint32_t id_;
  bool frozen_ = false;
  std::vector<std::vector<Slot>> frames_;
  std::vector<std::vector<Value>> arrays_;
  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, uint32_t> symbol_index_;
};

}  // namespace framekit

#endif  // FRAMEKIT_STORE_H_
