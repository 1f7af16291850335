#ifndef FRAMEKIT_ACTION_H_
#define FRAMEKIT_ACTION_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace framekit {

enum class ActionKind : uint8_t {
  kShift,
  kStop,
  kEvoke,
  kRefer,
  kConnect,
  kAssign,
  kEmbed,
  kElaborate,
};

inline constexpr int kNumActionKinds = 8;

const char *ActionKindName(ActionKind kind);

// Symbol reference inside a constant, printed bare.
struct SymbolName {
  std::string name;
  friend bool operator==(const SymbolName &, const SymbolName &) = default;
};

// Store-independent constant for ASSIGN.
using Constant =
    std::variant<std::monostate, int64_t, double, std::string, SymbolName>;

// One transition. Symbols are carried by name so that actions can be shared
// across stores (oracle output, action vocabularies, checkpoints).
//
//   SHIFT, STOP
//   EVOKE(type, length)            REFER(source, length)
//   CONNECT(source, role, target)  ASSIGN(source, role, value)
//   EMBED(target, role, type)      ELABORATE(source, role, type)
//
// For EMBED the buffer index lives in `target`; everything else indexing the
// attention buffer uses `source`.
struct Action {
  ActionKind kind = ActionKind::kShift;
  int length = 0;
  int source = 0;
  int target = 0;
  std::string role;
  std::string type;
  Constant value;

  static Action Of(ActionKind kind) {
    Action a;
    a.kind = kind;
    return a;
  }
  static Action Shift() { return Of(ActionKind::kShift); }
  static Action Stop() { return Of(ActionKind::kStop); }
  static Action Evoke(std::string type, int length);
  static Action Refer(int frame, int length);
  static Action Connect(int source, std::string role, int target);
  static Action Assign(int source, std::string role, Constant value);
  static Action Embed(int target, std::string role, std::string type);
  static Action Elaborate(int source, std::string role, std::string type);

  friend bool operator==(const Action &, const Action &) = default;
};

// Textual form, e.g. "EVOKE(/saft/person, 1)" or "CONNECT(0, /pb/arg0, 1)".
std::string ToString(const Action &action);

// Inverse of ToString. Throws Error(kSyntax) on malformed input.
Action ParseAction(std::string_view text);

std::string ConstantToString(const Constant &value);

}  // namespace framekit

#endif  // FRAMEKIT_ACTION_H_
