#ifndef FRAMEKIT_NOTATION_H_
#define FRAMEKIT_NOTATION_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "framekit/store.h"

namespace framekit {

struct Diagnostic {
  size_t offset = 0;
  ErrorCode code = ErrorCode::kSyntax;
  std::string message;
};

struct ParseResult {
  std::vector<Handle> top;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

// Reads frame notation: JSON extended with frame labels (=#n, =name),
// references (#n, name) and the shorthand roles ':' (isa) and '+' (is).
// Top-level items are frames or references to frames. Commas are
// whitespace. Forward references are allowed. On failure the
// store is left untouched and the diagnostics describe the first error.
ParseResult ParseNotation(std::string_view text, Store &store);

// Same as ParseNotation but throws Error on the first diagnostic.
std::vector<Handle> ParseNotationOrThrow(std::string_view text, Store &store);

// Prints the given roots, one per line. Frames reachable more than once get a
// generated =#n label; frames with an id are labelled by that id.
std::string PrintNotation(std::span<const Handle> roots, const Store &store);
std::string PrintNotation(Handle root, const Store &store);

// Continues label numbering from *next_label so that several calls can write
// one file without label clashes.
std::string PrintNotation(std::span<const Handle> roots, const Store &store,
                          int *next_label);

// Escapes a string literal using JSON rules, quotes included.
std::string QuoteString(std::string_view s);

// Reads a JSON string literal at the start of `text`; *consumed receives the
// number of bytes used, closing quote included.
std::string UnquoteString(std::string_view text, size_t *consumed);

// True if the symbol name prints as a bare name that reads back unchanged.
bool IsBareName(std::string_view name);

}  // namespace framekit

#endif  // FRAMEKIT_NOTATION_H_
