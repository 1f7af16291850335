#include "framekit/notation.h"

#include <charconv>
#include <cmath>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace framekit {

namespace {

constexpr int kMaxDepth = 512;

bool IsSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v' || c == ',';
}

bool IsDigit(unsigned char c) { return c >= '0' && c <= '9'; }

bool IsAlpha(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool IsNameStart(unsigned char c) {
  return IsAlpha(c) || c == '/' || c == '_' || c == '$' || c == '@' || c >= 0x80;
}

bool IsNameChar(unsigned char c) {
  return IsNameStart(c) || IsDigit(c) || c == '-' || c == '.';
}

// Parsed syntax tree. Frame children come in (role, value) pairs.
struct Node {
  enum Kind {
    kFrame, kArray, kString, kInt, kFloat, kNull, kRef, kName,
    kIdRole, kIsaRole, kIsRole,
  };
  Kind kind = kNull;
  size_t offset = 0;
  std::string text;
  int64_t integer = 0;
  double number = 0.0;
  std::vector<Node> children;
  std::vector<int64_t> labels;  // =#n definitions on a frame
  int frame = -1;               // frame ordinal assigned before materializing
};

struct SyntaxError {
  size_t offset;
  ErrorCode code;
  std::string message;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<Node> ParseTop() {
    std::vector<Node> top;
    for (;;) {
      SkipSpace();
      if (pos_ >= text_.size()) break;
      unsigned char c = Peek();
      if (c == '{') {
        top.push_back(ParseFrame(0));
      } else if (c == '#') {
        top.push_back(ParseRef());
      } else if (IsNameStart(c)) {
        top.push_back(ParseName());
        if (top.back().kind != Node::kName) Fail("expected a frame at top level");
      } else {
        Fail("expected a frame at top level");
      }
    }
    return top;
  }

  // Reads one quoted string starting at the current position.
  std::string ReadQuoted(size_t *end) {
    std::string text = ParseString().text;
    *end = pos_;
    return text;
  }

 private:
  [[noreturn]] void Fail(const std::string &message) {
    throw SyntaxError{pos_, ErrorCode::kSyntax, message};
  }

  void SkipSpace() {
    while (pos_ < text_.size() &&
           IsSpace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool AtEnd() const { return pos_ >= text_.size(); }
  unsigned char Peek() const { return static_cast<unsigned char>(text_[pos_]); }

  Node ParseFrame(int depth) {
    if (depth > kMaxDepth) Fail("nesting too deep");
    Node frame;
    frame.kind = Node::kFrame;
    frame.offset = pos_;
    ++pos_;  // '{'
    for (;;) {
      SkipSpace();
      if (AtEnd()) Fail("unterminated frame");
      unsigned char c = Peek();
      if (c == '}') {
        ++pos_;
        return frame;
      }
      if (c == '=') {
        ++pos_;
        SkipSpace();
        if (AtEnd()) Fail("expected label after '='");
        if (Peek() == '#') {
          frame.labels.push_back(ParseRef().integer);
        } else if (IsNameStart(Peek())) {
          Node role;
          role.kind = Node::kIdRole;
          role.offset = pos_;
          Node name = ParseName();
          if (name.kind != Node::kName) Fail("'null' is not a valid id");
          frame.children.push_back(std::move(role));
          frame.children.push_back(std::move(name));
        } else {
          Fail("expected #n or name after '='");
        }
      } else if (c == ':' || c == '+') {
        Node role;
        role.kind = c == ':' ? Node::kIsaRole : Node::kIsRole;
        role.offset = pos_;
        ++pos_;
        frame.children.push_back(std::move(role));
        frame.children.push_back(ParseValue(depth + 1));
      } else {
        Node role = ParseValue(depth + 1);
        if (role.kind != Node::kName && role.kind != Node::kRef &&
            role.kind != Node::kFrame) {
          pos_ = role.offset;
          Fail("slot role must be a name, reference or frame");
        }
        SkipSpace();
        if (AtEnd() || Peek() != ':') Fail("expected ':' after slot role");
        ++pos_;
        frame.children.push_back(std::move(role));
        frame.children.push_back(ParseValue(depth + 1));
      }
    }
  }

  Node ParseArray(int depth) {
    if (depth > kMaxDepth) Fail("nesting too deep");
    Node array;
    array.kind = Node::kArray;
    array.offset = pos_;
    ++pos_;  // '['
    for (;;) {
      SkipSpace();
      if (AtEnd()) Fail("unterminated array");
      if (Peek() == ']') {
        ++pos_;
        return array;
      }
      array.children.push_back(ParseValue(depth + 1));
    }
  }

  Node ParseValue(int depth) {
    SkipSpace();
    if (AtEnd()) Fail("expected value");
    unsigned char c = Peek();
    if (c == '{') return ParseFrame(depth);
    if (c == '[') return ParseArray(depth);
    if (c == '"') return ParseString();
    if (c == '#') return ParseRef();
    if (IsDigit(c) || (c == '-' && pos_ + 1 < text_.size() &&
                       IsDigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      return ParseNumber();
    }
    if (IsNameStart(c)) return ParseName();
    Fail(std::string("unexpected character '") + static_cast<char>(c) + "'");
  }

  Node ParseRef() {
    Node ref;
    ref.kind = Node::kRef;
    ref.offset = pos_;
    ++pos_;  // '#'
    size_t begin = pos_;
    while (!AtEnd() && IsDigit(Peek())) ++pos_;
    if (begin == pos_) Fail("expected digits after '#'");
    auto [ptr, ec] = std::from_chars(text_.data() + begin, text_.data() + pos_,
                                     ref.integer);
    if (ec != std::errc()) Fail("reference number out of range");
    return ref;
  }

  Node ParseName() {
    Node name;
    name.offset = pos_;
    size_t begin = pos_;
    while (!AtEnd() && IsNameChar(Peek())) ++pos_;
    name.text = std::string(text_.substr(begin, pos_ - begin));
    name.kind = name.text == "null" ? Node::kNull : Node::kName;
    return name;
  }

  Node ParseNumber() {
    Node num;
    num.offset = pos_;
    size_t begin = pos_;
    bool is_float = false;
    if (Peek() == '-') ++pos_;
    while (!AtEnd() && IsDigit(Peek())) ++pos_;
    if (!AtEnd() && Peek() == '.') {
      is_float = true;
      ++pos_;
      size_t frac = pos_;
      while (!AtEnd() && IsDigit(Peek())) ++pos_;
      if (frac == pos_) Fail("expected digits after decimal point");
    }
    if (!AtEnd() && (Peek() == 'e' || Peek() == 'E')) {
      is_float = true;
      ++pos_;
      if (!AtEnd() && (Peek() == '+' || Peek() == '-')) ++pos_;
      size_t exp = pos_;
      while (!AtEnd() && IsDigit(Peek())) ++pos_;
      if (exp == pos_) Fail("expected exponent digits");
    }
    if (!AtEnd() && IsNameChar(Peek())) Fail("malformed number");
    const char *first = text_.data() + begin;
    const char *last = text_.data() + pos_;
    if (is_float) {
      num.kind = Node::kFloat;
      auto [ptr, ec] = std::from_chars(first, last, num.number);
      if (ec != std::errc() || ptr != last) {
        pos_ = begin;
        Fail("float out of range");
      }
    } else {
      num.kind = Node::kInt;
      auto [ptr, ec] = std::from_chars(first, last, num.integer);
      if (ec != std::errc() || ptr != last) {
        pos_ = begin;
        Fail("integer out of range");
      }
    }
    return num;
  }

  static void AppendUtf8(std::string &out, uint32_t cp) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }

  uint32_t ParseHex4() {
    if (pos_ + 4 > text_.size()) Fail("truncated \\u escape");
    uint32_t cp = 0;
    for (int i = 0; i < 4; ++i) {
      unsigned char c = Peek();
      cp <<= 4;
      if (IsDigit(c)) cp |= c - '0';
      else if (c >= 'a' && c <= 'f') cp |= c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') cp |= c - 'A' + 10;
      else Fail("bad hex digit in \\u escape");
      ++pos_;
    }
    return cp;
  }

  Node ParseString() {
    Node str;
    str.kind = Node::kString;
    str.offset = pos_;
    ++pos_;  // '"'
    for (;;) {
      if (AtEnd()) {
        pos_ = str.offset;
        Fail("unterminated string");
      }
      char c = text_[pos_++];
      if (c == '"') return str;
      if (c != '\\') {
        str.text += c;
        continue;
      }
      if (AtEnd()) Fail("unterminated escape");
      char e = text_[pos_++];
      switch (e) {
        case '"': str.text += '"'; break;
        case '\\': str.text += '\\'; break;
        case '/': str.text += '/'; break;
        case 'b': str.text += '\b'; break;
        case 'f': str.text += '\f'; break;
        case 'n': str.text += '\n'; break;
        case 'r': str.text += '\r'; break;
        case 't': str.text += '\t'; break;
        case 'u': {
          uint32_t cp = ParseHex4();
          if (cp >= 0xD800 && cp < 0xDC00) {
            if (pos_ + 2 > text_.size() || text_[pos_] != '\\' ||
                text_[pos_ + 1] != 'u') {
              Fail("unpaired surrogate in \\u escape");
            }
            pos_ += 2;
            uint32_t low = ParseHex4();
            if (low < 0xDC00 || low >= 0xE000) Fail("bad low surrogate");
            cp = 0x10000 + ((cp - 0xD800) << 10) + (low - 0xDC00);
          } else if (cp >= 0xDC00 && cp < 0xE000) {
            Fail("unpaired surrogate in \\u escape");
          }
          AppendUtf8(str.text, cp);
          break;
        }
        default:
          --pos_;
          Fail("unknown escape");
      }
    }
  }

  std::string_view text_;
  size_t pos_ = 0;
};

// Resolves labels and names, then creates the frames in the store.
class Materializer {
 public:
  explicit Materializer(Store &store) : store_(store) {}

  std::vector<Handle> Run(std::vector<Node> &top) {
    for (Node &n : top) Collect(n);
    for (Node &n : top) Check(n);
    // Top-level names must denote frames, not symbols.
    for (const Node &n : top) {
      if (n.kind == Node::kName && !names_.count(n.text) &&
          store_.LookupFrame(n.text).IsNil()) {
        throw SyntaxError{n.offset, ErrorCode::kUnresolvedReference,
                          "no frame named " + n.text};
      }
    }
    if (store_.frozen()) {
      throw SyntaxError{0, ErrorCode::kFrozenStore, "store is frozen"};
    }
    for (size_t i = 0; i < frames_.size(); ++i) {
      handles_.push_back(store_.NewFrame());
    }
    for (Node *frame : frames_) Fill(*frame);
    std::vector<Handle> result;
    for (Node &n : top) result.push_back(Resolve(n));
    return result;
  }

 private:
  void Collect(Node &node) {
    if (node.kind == Node::kFrame) {
      node.frame = static_cast<int>(frames_.size());
      frames_.push_back(&node);
      for (int64_t label : node.labels) {
        if (!labels_.emplace(label, node.frame).second) {
          throw SyntaxError{node.offset, ErrorCode::kDuplicateLabel,
                            "duplicate label #" + std::to_string(label)};
        }
      }
      for (size_t i = 0; i + 1 < node.children.size(); i += 2) {
        if (node.children[i].kind != Node::kIdRole) continue;
        const Node &name = node.children[i + 1];
        auto [it, fresh] = names_.emplace(name.text, node.frame);
        if (!fresh && it->second != node.frame) {
          throw SyntaxError{name.offset, ErrorCode::kDuplicateLabel,
                            "duplicate id " + name.text};
        }
        if (!store_.LookupFrame(name.text).IsNil()) {
          throw SyntaxError{name.offset, ErrorCode::kDuplicateId,
                            "id already bound in store: " + name.text};
        }
      }
    }
    for (Node &child : node.children) Collect(child);
  }

  void Check(const Node &node) {
    if (node.kind == Node::kRef && !labels_.count(node.integer)) {
      throw SyntaxError{node.offset, ErrorCode::kUnresolvedReference,
                        "undefined reference #" + std::to_string(node.integer)};
    }
    for (const Node &child : node.children) Check(child);
  }

  Handle Resolve(const Node &node) {
    switch (node.kind) {
      case Node::kFrame: return handles_[node.frame];
      case Node::kRef: return handles_[labels_.at(node.integer)];
      case Node::kName: {
        auto it = names_.find(node.text);
        if (it != names_.end()) return handles_[it->second];
        Handle bound = store_.LookupFrame(node.text);
        if (!bound.IsNil()) return bound;
        return store_.Intern(node.text);
      }
      case Node::kIdRole: return store_.id();
      case Node::kIsaRole: return store_.isa();
      case Node::kIsRole: return store_.is();
      default: return Handle{};
    }
  }

  Value Build(const Node &node) {
    switch (node.kind) {
      case Node::kString: return node.text;
      case Node::kInt: return node.integer;
      case Node::kFloat: return node.number;
      case Node::kNull: return Value{};
      case Node::kArray: {
        std::vector<Value> elements;
        elements.reserve(node.children.size());
        for (const Node &child : node.children) elements.push_back(Build(child));
        return store_.NewArray(std::move(elements));
      }
      default: return Resolve(node);
    }
  }

  void Fill(const Node &frame) {
    Handle handle = handles_[frame.frame];
    for (size_t i = 0; i + 1 < frame.children.size(); i += 2) {
      const Node &role = frame.children[i];
      const Node &value = frame.children[i + 1];
      if (role.kind == Node::kIdRole) {
        store_.AddSlot(handle, store_.id(), store_.Intern(value.text));
      } else {
        Handle r = Resolve(role);
        store_.AddSlot(handle, r, Build(value));
      }
    }
  }

  Store &store_;
  std::vector<Node *> frames_;
  std::vector<Handle> handles_;
  std::unordered_map<int64_t, int> labels_;
  std::unordered_map<std::string, int> names_;
};

class Printer {
 public:
  Printer(const Store &store, std::span<const Handle> roots, int next_label)
      : store_(store), next_label_(next_label) {
    for (Handle root : roots) {
      if (!store_.Owns(root)) {
        throw Error(ErrorCode::kDanglingHandle, "root does not resolve");
      }
      Count(root);
    }
  }

  std::string Print(std::span<const Handle> roots) {
    std::string out;
    for (Handle root : roots) {
      PrintValue(root, out);
      out += '\n';
    }
    return out;
  }

  int next_label() const { return next_label_; }

 private:
  void Count(Handle root) {
    std::vector<Handle> stack{root};
    ++refs_[root];
    while (!stack.empty()) {
      Handle h = stack.back();
      stack.pop_back();
      if (!visited_.insert(h).second) continue;
      auto edge = [&](Handle target) {
        if (!target.IsFrame() && !target.IsArray()) return;
        if (!store_.Owns(target)) {
          throw Error(ErrorCode::kDanglingHandle, "dangling handle in graph");
        }
        ++refs_[target];
        stack.push_back(target);
      };
      if (h.IsFrame()) {
        for (const Slot &slot : store_.Slots(h)) {
          edge(slot.role);
          if (const Handle *v = AsHandle(slot.value)) edge(*v);
        }
      } else if (h.IsArray()) {
        for (const Value &v : store_.Elements(h)) {
          if (const Handle *e = AsHandle(v)) edge(*e);
        }
      }
    }
  }

  Handle IdOf(Handle frame) const {
    for (const Slot &slot : store_.Slots(frame)) {
      if (slot.role == store_.id()) {
        if (const Handle *name = AsHandle(slot.value)) {
          if (name->IsSymbol()) return *name;
        }
      }
    }
    return Handle{};
  }

  void PrintSymbol(Handle symbol, std::string &out) const {
    const std::string &name = store_.SymbolName(symbol);
    if (!IsBareName(name)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "symbol name cannot be printed: " + name);
    }
    out += name;
  }

  void PrintFrame(Handle frame, std::string &out) {
    auto done = printed_.find(frame);
    if (done != printed_.end()) {
      out += done->second;
      return;
    }
    Handle id = IdOf(frame);
    out += '{';
    bool first = true;
    if (!id.IsNil()) {
      printed_.emplace(frame, store_.SymbolName(id));
    } else if (refs_[frame] >= 2) {
      std::string label = "#" + std::to_string(++next_label_);
      printed_.emplace(frame, label);
      out += '=';
      out += label;
      first = false;
    } else {
      printed_.emplace(frame, "");
    }
    for (const Slot &slot : store_.Slots(frame)) {
      if (!first) out += ' ';
      first = false;
      const Handle *sym = AsHandle(slot.value);
      if (slot.role == store_.id() && sym != nullptr && sym->IsSymbol()) {
        out += '=';
        PrintSymbol(*sym, out);
      } else if (slot.role == store_.isa()) {
        out += ':';
        PrintValue(slot.value, out);
      } else if (slot.role == store_.is()) {
        out += '+';
        PrintValue(slot.value, out);
      } else {
        PrintValue(slot.role, out);
        out += ": ";
        PrintValue(slot.value, out);
      }
    }
    out += '}';
  }

  void PrintValue(const Value &value, std::string &out) {
    switch (value.index()) {
      case 0:
        out += "null";
        break;
      case 1:
        out += std::to_string(std::get<int64_t>(value));
        break;
      case 2:
        out += FormatDouble(std::get<double>(value));
        break;
      case 3:
        out += QuoteString(std::get<std::string>(value));
        break;
      case 4: {
        Handle h = std::get<Handle>(value);
        if (h.IsFrame()) {
          PrintFrame(h, out);
        } else if (h.IsSymbol()) {
          PrintSymbol(h, out);
        } else if (h.IsArray()) {
          out += '[';
          bool first = true;
          for (const Value &e : store_.Elements(h)) {
            if (!first) out += ' ';
            first = false;
            PrintValue(e, out);
          }
          out += ']';
        } else {
          out += "null";
        }
        break;
      }
    }
  }

  static std::string FormatDouble(double d) {
    if (!std::isfinite(d)) {
      throw Error(ErrorCode::kInvalidArgument, "non-finite float in graph");
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), d);
    std::string s(buf, ptr);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
  }

  const Store &store_;
  std::unordered_map<Handle, int, HandleHash> refs_;
  std::unordered_set<Handle, HandleHash> visited_;
  std::unordered_map<Handle, std::string, HandleHash> printed_;
  int next_label_ = 0;
};

}  // namespace

ParseResult ParseNotation(std::string_view text, Store &store) {
  ParseResult result;
  try {
    Reader reader(text);
    std::vector<Node> top = reader.ParseTop();
    Materializer materializer(store);
    result.top = materializer.Run(top);
  } catch (const SyntaxError &e) {
    result.top.clear();
    result.diagnostics.push_back(Diagnostic{e.offset, e.code, e.message});
  }
  return result;
}

std::vector<Handle> ParseNotationOrThrow(std::string_view text, Store &store) {
  ParseResult result = ParseNotation(text, store);
  if (!result.ok()) {
    const Diagnostic &d = result.diagnostics.front();
    throw Error(d.code, "offset " + std::to_string(d.offset) + ": " + d.message);
  }
  return result.top;
}

std::string PrintNotation(std::span<const Handle> roots, const Store &store) {
  int next_label = 0;
  return PrintNotation(roots, store, &next_label);
}

std::string PrintNotation(std::span<const Handle> roots, const Store &store,
                          int *next_label) {
  Printer printer(store, roots, *next_label);
  std::string out = printer.Print(roots);
  *next_label = printer.next_label();
  return out;
}

std::string PrintNotation(Handle root, const Store &store) {
  return PrintNotation(std::span<const Handle>(&root, 1), store);
}

std::string QuoteString(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          static const char kHex[] = "0123456789abcdef";
          out += "\\u00";
          out += kHex[c >> 4];
          out += kHex[c & 0xF];
        } else {
          out += ch;
        }
    }
  }
  out += '"';
  return out;
}

std::string UnquoteString(std::string_view text, size_t *consumed) {
  if (text.empty() || text[0] != '"') {
    throw Error(ErrorCode::kSyntax, "expected '\"'");
  }
  try {
    Reader reader(text);
    size_t end = 0;
    std::string out = reader.ReadQuoted(&end);
    if (consumed != nullptr) *consumed = end;
    return out;
  } catch (const SyntaxError &e) {
    throw Error(e.code, e.message);
  }
}

bool IsBareName(std::string_view name) {
  if (name.empty() || name == "null") return false;
  if (!IsNameStart(static_cast<unsigned char>(name[0]))) return false;
  for (char c : name) {
    if (!IsNameChar(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace framekit
