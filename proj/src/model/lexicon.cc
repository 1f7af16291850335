#include "framekit/model/lexicon.h"

namespace framekit {

namespace {

bool IsContinuation(unsigned char c) { return (c & 0xC0) == 0x80; }

// Byte offsets of code point starts.
std::vector<size_t> CodePoints(std::string_view s) {
  std::vector<size_t> starts;
  for (size_t i = 0; i < s.size(); ++i) {
    if (!IsContinuation(static_cast<unsigned char>(s[i]))) starts.push_back(i);
  }
  return starts;
}

bool IsAsciiPunct(unsigned char c) {
  return (c >= 33 && c <= 47) || (c >= 58 && c <= 64) || (c >= 91 && c <= 96) ||
         (c >= 123 && c <= 126);
}

}  // namespace

Vocabulary::Vocabulary() { Add("<unk>"); }

int Vocabulary::Add(std::string_view s) {
  auto it = index_.find(std::string(s));
  if (it != index_.end()) return it->second;
  int id = static_cast<int>(entries_.size());
  entries_.emplace_back(s);
  index_.emplace(std::string(s), id);
  return id;
}

int Vocabulary::Lookup(std::string_view s) const {
  auto it = index_.find(std::string(s));
  return it == index_.end() ? kUnknown : it->second;
}

std::array<int, kNumShapeFeatures> WordShape(std::string_view word) {
  int upper = 0, lower = 0, digits = 0, punct = 0, quotes = 0, hyphens = 0;
  for (unsigned char c : word) {
    if (c >= 'A' && c <= 'Z') ++upper;
    if (c >= 'a' && c <= 'z') ++lower;
    if (c >= '0' && c <= '9') ++digits;
    if (IsAsciiPunct(c)) ++punct;
    if (c == '"' || c == '\'' || c == '`') ++quotes;
    if (c == '-') ++hyphens;
  }
  int n = static_cast<int>(word.size());
  std::array<int, kNumShapeFeatures> shape{};
  shape[0] = hyphens > 0 ? 1 : 0;
  if (upper + lower == 0) {
    shape[1] = 4;
  } else if (upper == 0) {
    shape[1] = 0;
  } else if (lower == 0) {
    shape[1] = 2;
  } else if (word[0] >= 'A' && word[0] <= 'Z' && upper == 1) {
    shape[1] = 1;
  } else {
    shape[1] = 3;
  }
  shape[2] = punct == 0 ? 0 : (punct == n ? 1 : 2);
  shape[3] = quotes > 0 ? 1 : 0;
  shape[4] = digits == 0 ? 0 : (digits == n ? 1 : 2);
  return shape;
}

std::string Affix(std::string_view word, int n, bool suffix) {
  std::vector<size_t> starts = CodePoints(word);
  if (static_cast<int>(starts.size()) < n) return "";
  if (suffix) return std::string(word.substr(starts[starts.size() - n]));
  size_t end = static_cast<int>(starts.size()) == n ? word.size() : starts[n];
  return std::string(word.substr(0, end));
}

Lexicon::Lexicon(int max_affix) : max_affix_(max_affix) {
  prefixes_.Add("<none>");
  suffixes_.Add("<none>");
}

void Lexicon::AddWord(std::string_view word) {
  words_.Add(word);
  for (int n = 1; n <= max_affix_; ++n) {
    std::string p = Affix(word, n, false);
    if (!p.empty()) prefixes_.Add(p);
    std::string s = Affix(word, n, true);
    if (!s.empty()) suffixes_.Add(s);
  }
}

TokenFeatures Lexicon::Features(std::string_view word) const {
  TokenFeatures f;
  f.word = words_.Lookup(word);
  for (int n = 1; n <= max_affix_; ++n) {
    std::string p = Affix(word, n, false);
    f.prefixes.push_back(p.empty() ? kNoAffix : prefixes_.Lookup(p));
    std::string s = Affix(word, n, true);
    f.suffixes.push_back(s.empty() ? kNoAffix : suffixes_.Lookup(s));
  }
  f.shape = WordShape(word);
  return f;
}

std::vector<TokenFeatures> Lexicon::Features(const Document &doc) const {
  std::vector<TokenFeatures> out;
  out.reserve(doc.tokens().size());
  for (const Token &t : doc.tokens()) out.push_back(Features(t.text));
  return out;
}

ActionTable::ActionTable() {
  Add(Action::Shift());
  Add(Action::Stop());
}

int ActionTable::Add(const Action &action) {
  std::string key = ToString(action);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  int id = static_cast<int>(actions_.size());
  actions_.push_back(action);
  index_.emplace(std::move(key), id);
  return id;
}

int ActionTable::Lookup(const Action &action) const {
  auto it = index_.find(ToString(action));
  return it == index_.end() ? -1 : it->second;
}

}  // namespace framekit
