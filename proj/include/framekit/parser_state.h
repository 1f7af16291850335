#ifndef FRAMEKIT_PARSER_STATE_H_
#define FRAMEKIT_PARSER_STATE_H_

#include <memory>
#include <string>
#include <vector>

#include "framekit/action.h"
#include "framekit/document.h"

namespace framekit {

// Transition system state: input cursor, attention buffer and the document
// being annotated. The attention buffer holds every frame created so far;
// position 0 is the center of attention.
//
// Copying a state deep-copies the document store, so copies evolve
// independently.
class ParserState {
 public:
  // Bookkeeping for one frame in the attention buffer.
  struct FrameInfo {
    Handle frame;
    int created_step = 0;
    int focused_step = 0;
    int phrase_end = -1;  // last token of the most recent evoking phrase
  };

  // Starts from the tokens of `input` in a fresh store; annotations of the
  // input are not copied.
  explicit ParserState(const Document &input);

  ParserState(const ParserState &other);
  ParserState &operator=(const ParserState &other);
  ParserState(ParserState &&) = default;
  ParserState &operator=(ParserState &&) = default;

  bool IsValid(const Action &action) const;

  // Applies a valid action; throws Error(kInvalidAction) otherwise.
  void Apply(const Action &action);

  int cursor() const { return cursor_; }
  int step() const { return step_; }
  bool done() const { return done_; }
  int num_tokens() const { return doc_.num_tokens(); }
  int AttentionSize() const { return static_cast<int>(attention_.size()); }

  Handle AttentionAt(int index) const;
  const FrameInfo &InfoAt(int index) const;
  // Attention position of a frame, or -1.
  int AttentionIndex(Handle frame) const;

  // Frames in creation order.
  const std::vector<Handle> &created() const { return created_; }

  const Document &document() const { return doc_; }
  Document &document() { return doc_; }
  const Store &store() const { return doc_.store(); }

  // Structural equality (store contents compared by index).
  friend bool operator==(const ParserState &a, const ParserState &b);

 private:
  void Front(int index, bool focus);
  void PushFront(Handle frame, int phrase_end);
  Handle InternSymbol(const std::string &name);
  Value ToValue(const Constant &c);

  Document doc_;
  int cursor_ = 0;
  int step_ = 0;
  bool done_ = false;
  std::vector<FrameInfo> attention_;
  std::vector<Handle> created_;
};

bool IsValid(const ParserState &state, const Action &action);

// Functional form: returns the successor state.
ParserState Apply(ParserState state, const Action &action);

}  // namespace framekit

#endif  // FRAMEKIT_PARSER_STATE_H_
