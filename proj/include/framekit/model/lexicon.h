#ifndef FRAMEKIT_MODEL_LEXICON_H_
#define FRAMEKIT_MODEL_LEXICON_H_

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "framekit/action.h"
#include "framekit/document.h"

namespace framekit {

// String-to-id table. Id 0 is the unknown entry; ids are assigned in
// insertion order.
class Vocabulary {
 public:
  static constexpr int kUnknown = 0;

  Vocabulary();
  // Id for `s`, adding it if absent.
  int Add(std::string_view s);
  // Id for `s` or kUnknown.
  int Lookup(std::string_view s) const;
  const std::string &At(int id) const { return entries_.at(id); }
  int size() const { return static_cast<int>(entries_.size()); }
  const std::vector<std::string> &entries() const { return entries_; }

  friend bool operator==(const Vocabulary &a, const Vocabulary &b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<std::string> entries_;
  std::unordered_map<std::string, int> index_;
};

// Word shape features. Each has its own small id space.
enum class ShapeFeature { kHyphen, kCapitalization, kPunctuation, kQuote, kDigit };
inline constexpr int kNumShapeFeatures = 5;
// Table sizes per shape feature.
inline constexpr std::array<int, kNumShapeFeatures> kShapeSizes = {2, 5, 3, 2, 3};

std::array<int, kNumShapeFeatures> WordShape(std::string_view word);

// Prefix or suffix of `n` characters (UTF-8 code points), or empty when the
// word is shorter than n.
std::string Affix(std::string_view word, int n, bool suffix);

// Lexical ids for one token.
struct TokenFeatures {
  int word = 0;
  std::vector<int> prefixes;  // one per affix length 1..max_affix
  std::vector<int> suffixes;
  std::array<int, kNumShapeFeatures> shape{};
};

// Word and affix vocabularies. Affix id 1 is reserved for "word shorter
// than this length".
class Lexicon {
 public:
  static constexpr int kNoAffix = 1;

  Lexicon() : Lexicon(3) {}
  explicit Lexicon(int max_affix);

  void AddWord(std::string_view word);
  TokenFeatures Features(std::string_view word) const;
  std::vector<TokenFeatures> Features(const Document &doc) const;

  int max_affix() const { return max_affix_; }
  const Vocabulary &words() const { return words_; }
  const Vocabulary &prefixes() const { return prefixes_; }
  const Vocabulary &suffixes() const { return suffixes_; }
  Vocabulary &mutable_words() { return words_; }
  Vocabulary &mutable_prefixes() { return prefixes_; }
  Vocabulary &mutable_suffixes() { return suffixes_; }
  void set_max_affix(int n) { max_affix_ = n; }

  friend bool operator==(const Lexicon &, const Lexicon &) = default;

 private:
  int max_affix_ = 3;
  Vocabulary words_;
  Vocabulary prefixes_;
  Vocabulary suffixes_;
};

// Output layer vocabulary: one entry per distinct action.
class ActionTable {
 public:
  ActionTable();  // SHIFT and STOP at ids 0 and 1
  int Add(const Action &action);
  // Id or -1.
  int Lookup(const Action &action) const;
  const Action &At(int id) const { return actions_.at(id); }
  int size() const { return static_cast<int>(actions_.size()); }
  const std::vector<Action> &actions() const { return actions_; }

  friend bool operator==(const ActionTable &a, const ActionTable &b) {
    return a.actions_ == b.actions_;
  }

 private:
  std::vector<Action> actions_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace framekit

#endif  // FRAMEKIT_MODEL_LEXICON_H_
