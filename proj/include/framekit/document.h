#ifndef FRAMEKIT_DOCUMENT_H_
#define FRAMEKIT_DOCUMENT_H_

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "framekit/store.h"

namespace framekit {

struct Token {
  std::string text;
  size_t start = 0;   // byte offset into the document text
  size_t length = 0;  // byte count

  friend bool operator==(const Token &, const Token &) = default;
};

struct Mention {
  int begin = 0;   // first token
  int length = 1;  // token count
  std::vector<Handle> evoked;

  int end() const { return begin + length; }
  friend bool operator==(const Mention &, const Mention &) = default;
};

// Splits on whitespace and separates ASCII punctuation into single-character
// tokens. A hyphen or apostrophe between two word characters and a period or
// comma between two digits stay inside the word.
std::vector<Token> Tokenize(std::string_view text);

// Annotated document: text, tokens, mentions evoking frames, and theme frames
// that no mention evokes. Frames live in the shared store; copies of a
// Document share it.
class Document {
 public:
  explicit Document(std::shared_ptr<Store> store);
  Document(std::shared_ptr<Store> store, std::string text);
  Document(std::shared_ptr<Store> store, std::string text,
           std::vector<Token> tokens);

  const std::string &text() const { return text_; }
  const std::vector<Token> &tokens() const { return tokens_; }
  const std::vector<Mention> &mentions() const { return mentions_; }
  const std::vector<Handle> &themes() const { return themes_; }
  int num_tokens() const { return static_cast<int>(tokens_.size()); }

  Store &store() { return *store_; }
  const Store &store() const { return *store_; }
  const std::shared_ptr<Store> &shared_store() const { return store_; }

  // Inserts keeping mentions sorted by (begin, length descending); a mention
  // with the same span goes after existing ones. Returns its index.
  size_t AddMention(int begin, int length, std::vector<Handle> evoked);
  void AddTheme(Handle frame);

  // Same annotations over another store. The store must be a copy of this
  // document's store (copies keep handles valid).
  Document Rebind(std::shared_ptr<Store> store) const;

  // Frames of the semantic graph: evoked frames in mention order, then
  // themes, then frames reachable from those through frame-valued slots.
  std::vector<Handle> Frames() const;

  // Structural equality; both documents must share the store.
  friend bool operator==(const Document &a, const Document &b);

 private:
  std::shared_ptr<Store> store_;
  std::string text_;
  std::vector<Token> tokens_;
  std::vector<Mention> mentions_;
  std::vector<Handle> themes_;
};

// Builds the document frame (text, token array, mention frames, themes).
Handle DocumentToFrame(Document &doc);

// Reads a document frame. Tokens default to Tokenize(text) when absent and
// mention length defaults to 1.
Document DocumentFromFrame(Handle frame, std::shared_ptr<Store> store);

// A corpus file is a sequence of document frames in frame notation. All
// documents read from one text share a store.
std::vector<Document> ReadCorpus(std::string_view text);
std::vector<Document> ReadCorpusFile(const std::string &path);
// Document frames are built in scratch copies; the input stores are not
// modified.
std::string WriteCorpus(std::span<const Document> docs);
void WriteCorpusFile(std::span<const Document> docs, const std::string &path);

// Synthetic corpus from a small template grammar:
//   AGENT [ADVERB] VERB [DET] PATIENT [in LOCATION] .
// Deterministic for a given seed. All documents share one frozen store.
std::vector<Document> GenerateCorpus(uint64_t seed, int num_docs);

// Whole-file helpers.
std::string ReadFile(const std::string &path);
void WriteFile(const std::string &path, std::string_view content);

}  // namespace framekit

#endif  // FRAMEKIT_DOCUMENT_H_
