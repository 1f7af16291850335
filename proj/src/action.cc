#include "framekit/action.h"

#include <charconv>
#include <cmath>
#include <vector>

#include "framekit/error.h"
#include "framekit/notation.h"

namespace framekit {

namespace {

std::string FormatDouble(double d) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), d);
  std::string s(buf, ptr);
  if (std::isfinite(d) && s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

[[noreturn]] void Malformed(std::string_view text, const std::string &why) {
  throw Error(ErrorCode::kSyntax,
              "malformed action '" + std::string(text) + "': " + why);
}

int ParseInt(std::string_view text, std::string_view arg) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), value);
  if (ec != std::errc() || ptr != arg.data() + arg.size()) {
    Malformed(text, "expected integer, got '" + std::string(arg) + "'");
  }
  return value;
}

Constant ParseConstant(std::string_view text, std::string_view arg) {
  if (arg == "null") return std::monostate{};
  if (!arg.empty() && arg[0] == '"') {
    size_t used = 0;
    std::string s = UnquoteString(arg, &used);
    if (used != arg.size()) Malformed(text, "trailing characters after string");
    return s;
  }
  if (IsBareName(arg)) return SymbolName{std::string(arg)};
  const char *first = arg.data();
  const char *last = arg.data() + arg.size();
  if (arg.find_first_of(".eEni") != std::string_view::npos) {
    double d = 0;
    auto [ptr, ec] = std::from_chars(first, last, d);
    if (ec != std::errc() || ptr != last) Malformed(text, "bad float constant");
    return d;
  }
  int64_t i = 0;
  auto [ptr, ec] = std::from_chars(first, last, i);
  if (ec != std::errc() || ptr != last) Malformed(text, "bad constant");
  return i;
}

// Splits "a, b, c" at top-level commas; quoted strings may contain commas.
std::vector<std::string_view> SplitArgs(std::string_view text,
                                        std::string_view args) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i <= args.size()) {
    while (i < args.size() && args[i] == ' ') ++i;
    size_t begin = i;
    if (i < args.size() && args[i] == '"') {
      size_t used = 0;
      UnquoteString(args.substr(i), &used);
      i += used;
    } else {
      while (i < args.size() && args[i] != ',') ++i;
    }
    size_t end = i;
    while (end > begin && args[end - 1] == ' ') --end;
    out.push_back(args.substr(begin, end - begin));
    while (i < args.size() && args[i] == ' ') ++i;
    if (i >= args.size()) break;
    if (args[i] != ',') Malformed(text, "expected ','");
    ++i;
  }
  return out;
}

}  // namespace

const char *ActionKindName(ActionKind kind) {
  switch (kind) {
    case ActionKind::kShift: return "SHIFT";
    case ActionKind::kStop: return "STOP";
    case ActionKind::kEvoke: return "EVOKE";
    case ActionKind::kRefer: return "REFER";
    case ActionKind::kConnect: return "CONNECT";
    case ActionKind::kAssign: return "ASSIGN";
    case ActionKind::kEmbed: return "EMBED";
    case ActionKind::kElaborate: return "ELABORATE";
  }
  return "?";
}

Action Action::Evoke(std::string type, int length) {
  Action a = Of(ActionKind::kEvoke);
  a.type = std::move(type);
  a.length = length;
  return a;
}

Action Action::Refer(int frame, int length) {
  Action a = Of(ActionKind::kRefer);
  a.source = frame;
  a.length = length;
  return a;
}

Action Action::Connect(int source, std::string role, int target) {
  Action a = Of(ActionKind::kConnect);
  a.source = source;
  a.role = std::move(role);
  a.target = target;
  return a;
}

Action Action::Assign(int source, std::string role, Constant value) {
  Action a = Of(ActionKind::kAssign);
  a.source = source;
  a.role = std::move(role);
  a.value = std::move(value);
  return a;
}

Action Action::Embed(int target, std::string role, std::string type) {
  Action a = Of(ActionKind::kEmbed);
  a.target = target;
  a.role = std::move(role);
  a.type = std::move(type);
  return a;
}

Action Action::Elaborate(int source, std::string role, std::string type) {
  Action a = Of(ActionKind::kElaborate);
  a.source = source;
  a.role = std::move(role);
  a.type = std::move(type);
  return a;
}

std::string ConstantToString(const Constant &value) {
  switch (value.index()) {
    case 0: return "null";
    case 1: return std::to_string(std::get<int64_t>(value));
    case 2: return FormatDouble(std::get<double>(value));
    case 3: return QuoteString(std::get<std::string>(value));
    case 4: return std::get<SymbolName>(value).name;
  }
  return "null";
}

std::string ToString(const Action &a) {
  std::string name = ActionKindName(a.kind);
  auto i = [](int v) { return std::to_string(v); };
  switch (a.kind) {
    case ActionKind::kShift:
    case ActionKind::kStop:
      return name;
    case ActionKind::kEvoke:
      return name + "(" + a.type + ", " + i(a.length) + ")";
    case ActionKind::kRefer:
      return name + "(" + i(a.source) + ", " + i(a.length) + ")";
    case ActionKind::kConnect:
      return name + "(" + i(a.source) + ", " + a.role + ", " + i(a.target) + ")";
    case ActionKind::kAssign:
      return name + "(" + i(a.source) + ", " + a.role + ", " +
             ConstantToString(a.value) + ")";
    case ActionKind::kEmbed:
      return name + "(" + i(a.target) + ", " + a.role + ", " + a.type + ")";
    case ActionKind::kElaborate:
      return name + "(" + i(a.source) + ", " + a.role + ", " + a.type + ")";
  }
  return name;
}

Action ParseAction(std::string_view text) {
  size_t open = text.find('(');
  std::string_view name = text.substr(0, open);
  ActionKind kind{};
  bool found = false;
  for (int k = 0; k < kNumActionKinds; ++k) {
    if (name == ActionKindName(static_cast<ActionKind>(k))) {
      kind = static_cast<ActionKind>(k);
      found = true;
    }
  }
  if (!found) Malformed(text, "unknown action kind");
  if (kind == ActionKind::kShift || kind == ActionKind::kStop) {
    if (open != std::string_view::npos) Malformed(text, "unexpected arguments");
    return Action::Of(kind);
  }
  if (open == std::string_view::npos || text.back() != ')') {
    Malformed(text, "expected argument list");
  }
  auto args = SplitArgs(text, text.substr(open + 1, text.size() - open - 2));
  size_t expected = (kind == ActionKind::kEvoke || kind == ActionKind::kRefer) ? 2 : 3;
  if (args.size() != expected) Malformed(text, "wrong number of arguments");
  auto symbol = [&](std::string_view arg) {
    if (!IsBareName(arg)) Malformed(text, "bad symbol '" + std::string(arg) + "'");
    return std::string(arg);
  };
  switch (kind) {
    case ActionKind::kEvoke:
      return Action::Evoke(symbol(args[0]), ParseInt(text, args[1]));
    case ActionKind::kRefer:
      return Action::Refer(ParseInt(text, args[0]), ParseInt(text, args[1]));
    case ActionKind::kConnect:
      return Action::Connect(ParseInt(text, args[0]), symbol(args[1]),
                             ParseInt(text, args[2]));
    case ActionKind::kAssign:
      return Action::Assign(ParseInt(text, args[0]), symbol(args[1]),
                            ParseConstant(text, args[2]));
    case ActionKind::kEmbed:
      return Action::Embed(ParseInt(text, args[0]), symbol(args[1]),
                           symbol(args[2]));
    case ActionKind::kElaborate:
      return Action::Elaborate(ParseInt(text, args[0]), symbol(args[1]),
                               symbol(args[2]));
    default:
      break;
  }
  Malformed(text, "unreachable");
}

}  // namespace framekit
