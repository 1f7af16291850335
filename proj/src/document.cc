#include "framekit/document.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "framekit/notation.h"

namespace framekit {

namespace {

bool IsAsciiSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool IsAsciiPunct(unsigned char c) {
  return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
         (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
}

bool IsDigit(unsigned char c) { return c >= '0' && c <= '9'; }

bool IsWordChar(unsigned char c) {
  return IsDigit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         c >= 0x80;
}

// Punctuation at text[i] that stays inside the surrounding word.
bool Joins(std::string_view text, size_t i, size_t begin, size_t end) {
  if (i == begin || i + 1 >= end) return false;
  auto prev = static_cast<unsigned char>(text[i - 1]);
  auto next = static_cast<unsigned char>(text[i + 1]);
  switch (text[i]) {
    case '-':
    case '\'':
      return IsWordChar(prev) && IsWordChar(next);
    case '.':
    case ',':
      return IsDigit(prev) && IsDigit(next);
    default:
      return false;
  }
}

// Symbol names of the document schema.
struct Schema {
  explicit Schema(Store &store)
      : document(store.Intern("/s/document")),
        text(store.Intern("/s/document/text")),
        tokens(store.Intern("/s/document/tokens")),
        mention(store.Intern("/s/document/mention")),
        theme(store.Intern("/s/document/theme")),
        token_text(store.Intern("/s/token/text")),
        token_start(store.Intern("/s/token/start")),
        token_length(store.Intern("/s/token/length")),
        phrase(store.Intern("/s/phrase")),
        begin(store.Intern("/s/phrase/begin")),
        length(store.Intern("/s/phrase/length")),
        evokes(store.Intern("/s/phrase/evokes")) {}

  Handle document, text, tokens, mention, theme;
  Handle token_text, token_start, token_length;
  Handle phrase, begin, length, evokes;
};

[[noreturn]] void SchemaError(const std::string &message) {
  throw Error(ErrorCode::kSchema, message);
}

// Looks up a schema symbol without interning (the store may be frozen).
Handle Find(const Store &store, std::string_view name) {
  auto h = store.FindSymbol(name);
  return h ? *h : Handle{};
}

int64_t RequireInt(const Store &store, Handle frame, Handle role,
                   const char *what) {
  Value v = role.IsNil() ? Value{} : store.GetRole(frame, role);
  const auto *i = std::get_if<int64_t>(&v);
  if (i == nullptr) SchemaError(std::string("missing or non-integer ") + what);
  return *i;
}

}  // namespace

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsAsciiSpace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    size_t begin = i;
    while (i < text.size() &&
           !IsAsciiSpace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    size_t end = i;
    size_t start = begin;
    for (size_t j = begin; j < end; ++j) {
      auto c = static_cast<unsigned char>(text[j]);
      if (!IsAsciiPunct(c) || Joins(text, j, begin, end)) continue;
      if (start < j) {
        tokens.push_back(
            Token{std::string(text.substr(start, j - start)), start, j - start});
      }
      tokens.push_back(Token{std::string(1, text[j]), j, 1});
      start = j + 1;
    }
    if (start < end) {
      tokens.push_back(
          Token{std::string(text.substr(start, end - start)), start, end - start});
    }
  }
  return tokens;
}

Document::Document(std::shared_ptr<Store> store) : store_(std::move(store)) {}

Document::Document(std::shared_ptr<Store> store, std::string text)
    : store_(std::move(store)), text_(std::move(text)) {
  tokens_ = Tokenize(text_);
}

Document::Document(std::shared_ptr<Store> store, std::string text,
                   std::vector<Token> tokens)
    : store_(std::move(store)), text_(std::move(text)),
      tokens_(std::move(tokens)) {}

size_t Document::AddMention(int begin, int length, std::vector<Handle> evoked) {
  if (begin < 0 || length < 1 || begin + length > num_tokens()) {
    throw Error(ErrorCode::kIndexOutOfRange, "mention span out of range");
  }
  if (evoked.empty()) throw Error(ErrorCode::kInvalidArgument, "mention evokes no frame");
  auto pos = std::upper_bound(
      mentions_.begin(), mentions_.end(), std::make_pair(begin, length),
      [](const std::pair<int, int> &span, const Mention &m) {
        if (span.first != m.begin) return span.first < m.begin;
        return span.second > m.length;
      });
  auto it = mentions_.insert(pos, Mention{begin, length, std::move(evoked)});
  return static_cast<size_t>(it - mentions_.begin());
}

void Document::AddTheme(Handle frame) { themes_.push_back(frame); }

Document Document::Rebind(std::shared_ptr<Store> store) const {
  Document copy = *this;
  copy.store_ = std::move(store);
  return copy;
}

std::vector<Handle> Document::Frames() const {
  std::vector<Handle> frames;
  std::unordered_set<Handle, HandleHash> seen;
  auto add = [&](Handle h) {
    if (h.IsFrame() && seen.insert(h).second) frames.push_back(h);
  };
  for (const Mention &m : mentions_) {
    for (Handle h : m.evoked) add(h);
  }
  for (Handle h : themes_) add(h);
  for (size_t i = 0; i < frames.size(); ++i) {
    for (const Slot &slot : store_->Slots(frames[i])) {
      if (slot.role == store_->id() || slot.role == store_->isa()) continue;
      if (const Handle *v = AsHandle(slot.value)) add(*v);
    }
  }
  return frames;
}

bool operator==(const Document &a, const Document &b) {
  return a.store_ == b.store_ && a.text_ == b.text_ && a.tokens_ == b.tokens_ &&
         a.mentions_ == b.mentions_ && a.themes_ == b.themes_;
}

Handle DocumentToFrame(Document &doc) {
  Store &store = doc.store();
  Schema s(store);
  std::vector<Value> tokens;
  for (const Token &t : doc.tokens()) {
    tokens.push_back(store.NewFrame({
        {s.token_text, t.text},
        {s.token_start, static_cast<int64_t>(t.start)},
        {s.token_length, static_cast<int64_t>(t.length)},
    }));
  }
  std::vector<Slot> slots = {
      {store.isa(), s.document},
      {s.text, doc.text()},
      {s.tokens, store.NewArray(std::move(tokens))},
  };
  for (const Mention &m : doc.mentions()) {
    std::vector<Slot> phrase = {
        {store.isa(), s.phrase},
        {s.begin, static_cast<int64_t>(m.begin)},
    };
    if (m.length != 1) phrase.push_back({s.length, static_cast<int64_t>(m.length)});
    for (Handle f : m.evoked) phrase.push_back({s.evokes, f});
    slots.push_back({s.mention, store.NewFrame(std::move(phrase))});
  }
  for (Handle f : doc.themes()) slots.push_back({s.theme, f});
  return store.NewFrame(std::move(slots));
}

Document DocumentFromFrame(Handle frame, std::shared_ptr<Store> store) {
  const Store &st = *store;
  if (!st.Owns(frame) || !frame.IsFrame()) SchemaError("not a frame");
  Handle document = Find(st, "/s/document");
  Handle text_role = Find(st, "/s/document/text");
  Handle tokens_role = Find(st, "/s/document/tokens");
  Handle mention_role = Find(st, "/s/document/mention");
  Handle theme_role = Find(st, "/s/document/theme");
  Handle token_text = Find(st, "/s/token/text");
  Handle token_start = Find(st, "/s/token/start");
  Handle token_length = Find(st, "/s/token/length");
  Handle begin_role = Find(st, "/s/phrase/begin");
  Handle length_role = Find(st, "/s/phrase/length");
  Handle evokes_role = Find(st, "/s/phrase/evokes");

  bool is_document = false;
  for (const Slot &slot : st.Slots(frame)) {
    if (slot.role == st.isa() && !document.IsNil() &&
        AsHandle(slot.value) != nullptr && *AsHandle(slot.value) == document) {
      is_document = true;
    }
  }
  if (!is_document) SchemaError("frame is not a /s/document");

  Value text_value = text_role.IsNil() ? Value{} : st.GetRole(frame, text_role);
  const auto *text = std::get_if<std::string>(&text_value);
  if (text == nullptr) SchemaError("missing /s/document/text");

  std::vector<Token> tokens;
  Value tokens_value =
      tokens_role.IsNil() ? Value{} : st.GetRole(frame, tokens_role);
  if (IsNil(tokens_value)) {
    tokens = Tokenize(*text);
  } else {
    const Handle *array = AsHandle(tokens_value);
    if (array == nullptr || !array->IsArray()) {
      SchemaError("/s/document/tokens is not an array");
    }
    size_t previous_end = 0;
    for (const Value &element : st.Elements(*array)) {
      const Handle *tf = AsHandle(element);
      if (tf == nullptr || !tf->IsFrame()) SchemaError("malformed token frame");
      int64_t start = RequireInt(st, *tf, token_start, "/s/token/start");
      int64_t length = RequireInt(st, *tf, token_length, "/s/token/length");
      if (start < 0 || length < 0 ||
          static_cast<size_t>(start + length) > text->size()) {
        SchemaError("token outside document text");
      }
      if (static_cast<size_t>(start) < previous_end) {
        SchemaError("tokens overlap or are out of order");
      }
      previous_end = static_cast<size_t>(start + length);
      Token token{text->substr(start, length), static_cast<size_t>(start),
                  static_cast<size_t>(length)};
      if (!token_text.IsNil()) {
        Value tv = st.GetRole(*tf, token_text);
        if (!IsNil(tv)) {
          const auto *s = std::get_if<std::string>(&tv);
          if (s == nullptr || *s != token.text) {
            SchemaError("token text does not match document text");
          }
        }
      }
      tokens.push_back(std::move(token));
    }
  }

  Document doc(store, *text, std::move(tokens));
  for (const Slot &slot : st.Slots(frame)) {
    if (!mention_role.IsNil() && slot.role == mention_role) {
      const Handle *mf = AsHandle(slot.value);
      if (mf == nullptr || !mf->IsFrame()) SchemaError("malformed mention");
      int64_t begin = RequireInt(st, *mf, begin_role, "/s/phrase/begin");
      int64_t length = 1;
      if (!length_role.IsNil()) {
        Value lv = st.GetRole(*mf, length_role);
        if (!IsNil(lv)) {
          const auto *l = std::get_if<int64_t>(&lv);
          if (l == nullptr) SchemaError("non-integer /s/phrase/length");
          length = *l;
        }
      }
      if (begin < 0 || length < 1 || begin + length > doc.num_tokens()) {
        SchemaError("mention span outside token range");
      }
      std::vector<Handle> evoked;
      for (const Slot &ms : st.Slots(*mf)) {
        if (evokes_role.IsNil() || ms.role != evokes_role) continue;
        const Handle *f = AsHandle(ms.value);
        if (f == nullptr || !f->IsFrame()) SchemaError("evoked value is not a frame");
        evoked.push_back(*f);
      }
      if (evoked.empty()) SchemaError("mention evokes no frame");
      doc.AddMention(static_cast<int>(begin), static_cast<int>(length),
                     std::move(evoked));
    } else if (!theme_role.IsNil() && slot.role == theme_role) {
      const Handle *f = AsHandle(slot.value);
      if (f == nullptr || !f->IsFrame()) SchemaError("theme is not a frame");
      doc.AddTheme(*f);
    }
  }
  return doc;
}

std::vector<Document> ReadCorpus(std::string_view text) {
  auto store = std::make_shared<Store>();
  std::vector<Handle> top = ParseNotationOrThrow(text, *store);
  std::vector<Document> docs;
  docs.reserve(top.size());
  for (size_t i = 0; i < top.size(); ++i) {
    try {
      docs.push_back(DocumentFromFrame(top[i], store));
    } catch (const Error &e) {
      throw Error(e.code(), "document " + std::to_string(i) + ": " + e.what());
    }
  }
  return docs;
}

std::vector<Document> ReadCorpusFile(const std::string &path) {
  return ReadCorpus(ReadFile(path));
}

std::string WriteCorpus(std::span<const Document> docs) {
  std::string out;
  int next_label = 0;
  std::unordered_map<const Store *, std::shared_ptr<Store>> scratch;
  for (const Document &doc : docs) {
    auto &copy = scratch[&doc.store()];
    if (copy == nullptr) copy = std::make_shared<Store>(doc.store().MutableCopy());
    Document bound = doc.Rebind(copy);
    Handle frame = DocumentToFrame(bound);
    out += PrintNotation(std::span<const Handle>(&frame, 1), *copy, &next_label);
  }
  return out;
}

void WriteCorpusFile(std::span<const Document> docs, const std::string &path) {
  WriteFile(path, WriteCorpus(docs));
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string &path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

}  // namespace framekit
