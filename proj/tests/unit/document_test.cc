#include "framekit/document.h"

#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "framekit/notation.h"
#include "framekit/oracle.h"
#include "support/generators.h"
#include "support/graph_iso.h"

using namespace framekit;

namespace {

std::string DataPath(const std::string &name) {
  return std::string(FRAMEKIT_TEST_DATA) + "/" + name;
}

std::string Join(const std::vector<Token> &tokens) {
  std::string out;
  for (const Token &t : tokens) {
    if (!out.empty()) out += ' ';
    out += t.text;
  }
  return out;
}

Document WorkedExample() {
  auto docs = ReadCorpusFile(DataPath("john_hit_the_ball.frames"));
  REQUIRE(docs.size() == 1);
  return docs[0];
}

}  // namespace

TEST_CASE("tokenizer offsets for the worked example") {
  auto tokens = Tokenize("John hit the ball");
  REQUIRE(tokens.size() == 4);
  std::vector<size_t> starts{0, 5, 9, 13}, lengths{4, 3, 3, 4};
  for (size_t i = 0; i < 4; ++i) {
    CHECK(tokens[i].start == starts[i]);
    CHECK(tokens[i].length == lengths[i]);
  }
  CHECK(Tokenize("").empty());
  CHECK(Tokenize("   ").empty());
}

TEST_CASE("tokenizer golden cases") {
  std::ifstream in(DataPath("tokenizer_cases.tsv"));
  REQUIRE(in);
  std::string line;
  int cases = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    size_t tab = line.find('\t');
    REQUIRE(tab != std::string::npos);
    std::string text = line.substr(0, tab);
    CHECK_MESSAGE(Join(Tokenize(text)) == line.substr(tab + 1), text);
    ++cases;
  }
  CHECK(cases >= 20);
}

TEST_CASE("token offsets reconstruct the text") {
  framekit::testing::Rng rng(5);
  const std::string alphabet = "ab1 ,.-'\"!?\t\n\xc3\xa9";
  for (int i = 0; i < 2000; ++i) {
    std::string text;
    int n = framekit::testing::Pick(rng, 30);
    for (int k = 0; k < n; ++k) text += alphabet[framekit::testing::Pick(rng, alphabet.size())];
    auto tokens = Tokenize(text);
    size_t last_end = 0;
    for (const Token &t : tokens) {
      CHECK(t.length > 0);
      CHECK(t.start >= last_end);
      CHECK(text.substr(t.start, t.length) == t.text);
      last_end = t.start + t.length;
    }
  }
}

TEST_CASE("document frame of the worked example") {
  Document doc = WorkedExample();
  CHECK(doc.text() == "John hit the ball");
  CHECK(doc.num_tokens() == 4);
  REQUIRE(doc.mentions().size() == 3);
  CHECK(doc.mentions()[1].begin == 1);
  CHECK(doc.mentions()[1].length == 1);

  // Rebuilding the frame in a fresh store reproduces the file's structure.
  std::string printed = WriteCorpus(std::span<const Document>(&doc, 1));
  Store original, rebuilt;
  auto a = ParseNotationOrThrow(ReadFile(DataPath("john_hit_the_ball.frames")), original);
  auto b = ParseNotationOrThrow(printed, rebuilt);
  CHECK(framekit::testing::Isomorphic(framekit::testing::GraphFromStore(original, a),
                                      framekit::testing::GraphFromStore(rebuilt, b)));
}

TEST_CASE("doc_to_frame and doc_from_frame are inverse") {
  auto store = std::make_shared<Store>();
  SUBCASE("empty document") {
    Document d(store, "");
    Handle f = DocumentToFrame(d);
    CHECK(DocumentFromFrame(f, store) == d);
  }
  SUBCASE("one mention evoking two frames") {
    Document d(store, "New York City");
    Handle a = store->NewFrame({{store->isa(), store->Intern("/saft/location")}});
    Handle b = store->NewFrame({{store->isa(), store->Intern("/saft/organization")}});
    d.AddMention(0, 3, {a, b});
    d.AddTheme(store->NewFrame({{store->isa(), store->Intern("/s/theme")}}));
    Handle f = DocumentToFrame(d);
    Handle evokes = store->Intern("/s/phrase/evokes");
    Handle mention = std::get<Handle>(store->GetRole(f, store->Intern("/s/document/mention")));
    int evoke_slots = 0;
    for (const Slot &s : store->Slots(mention)) evoke_slots += s.role == evokes;
    CHECK(evoke_slots == 2);
    CHECK(store->GetRole(mention, store->Intern("/s/phrase/length")) == Value(int64_t{3}));
    CHECK(DocumentFromFrame(f, store) == d);
  }
}

TEST_CASE("mention order and bounds") {
  auto store = std::make_shared<Store>();
  Document d(store, "a b c d");
  Handle f = store->NewFrame();
  d.AddMention(2, 1, {f});
  d.AddMention(0, 1, {f});
  d.AddMention(0, 3, {f});
  CHECK(d.mentions()[0].length == 3);
  CHECK(d.mentions()[1].begin == 0);
  CHECK(d.mentions()[2].begin == 2);
  CHECK_THROWS_AS(d.AddMention(3, 2, {f}), Error);
  CHECK_THROWS_AS(d.AddMention(0, 1, {}), Error);
}

TEST_CASE("schema errors") {
  auto read = [](const std::string &text) {
    auto store = std::make_shared<Store>();
    auto top = ParseNotationOrThrow(text, *store);
    return DocumentFromFrame(top.at(0), store);
  };
  auto code = [&](const std::string &text) {
    try {
      read(text);
    } catch (const Error &e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  CHECK(code("{:/s/other}") == ErrorCode::kSchema);
  CHECK(code("{:/s/document}") == ErrorCode::kSchema);
  CHECK(code("{:/s/document /s/document/text: \"a\" /s/document/tokens: [{}]}") ==
        ErrorCode::kSchema);
  CHECK(code("{:/s/document /s/document/text: \"a\" /s/document/mention: "
             "{/s/phrase/begin: 4 /s/phrase/evokes: {}}}") == ErrorCode::kSchema);
  // Tokens default to the tokenizer.
  Document d = read("{:/s/document /s/document/text: \"x, y\"}");
  CHECK(d.num_tokens() == 3);
}

TEST_CASE("synthetic corpus is deterministic and well formed") {
  CHECK(GenerateCorpus(1, 0).empty());
  auto a = GenerateCorpus(1, 100);
  auto b = GenerateCorpus(1, 100);
  CHECK(WriteCorpus(a) == WriteCorpus(b));
  CHECK(WriteCorpus(a) != WriteCorpus(GenerateCorpus(2, 100)));

  std::set<std::string> entity_types, predicate_types, roles;
  int non_evoked = 0;
  for (const Document &d : a) {
    const Store &s = d.store();
    CHECK(s.frozen());
    std::set<Handle> evoked;
    for (const Mention &m : d.mentions()) {
      for (Handle f : m.evoked) evoked.insert(f);
    }
    for (Handle f : d.Frames()) {
      std::string type = s.SymbolName(std::get<Handle>(s.GetRole(f, s.isa())));
      if (!evoked.count(f)) ++non_evoked;
      if (type.rfind("/saft/", 0) == 0) entity_types.insert(type);
      if (type.rfind("/pb/", 0) == 0) predicate_types.insert(type);
      for (const Slot &slot : s.Slots(f)) {
        if (slot.role != s.isa()) roles.insert(s.SymbolName(slot.role));
      }
    }
  }
  CHECK(entity_types.size() >= 3);
  CHECK(predicate_types.size() >= 10);
  CHECK(roles.count("/pb/arg0"));
  CHECK(roles.count("/pb/arg1"));
  CHECK(roles.count("/pb/arg2"));
  CHECK(roles.count("/s/tense"));
  CHECK(non_evoked >= 5);
}

TEST_CASE("corpus files round-trip") {
  auto docs = GenerateCorpus(3, 50);
  std::string text = WriteCorpus(docs);
  auto back = ReadCorpus(text);
  REQUIRE(back.size() == docs.size());
  CHECK(WriteCorpus(back) == text);
  for (size_t i = 0; i < docs.size(); ++i) {
    CHECK(back[i].text() == docs[i].text());
    CHECK(back[i].tokens() == docs[i].tokens());
    CHECK(framekit::testing::Isomorphic(framekit::testing::GraphFromDocument(docs[i]),
                                        framekit::testing::GraphFromDocument(back[i])));
  }
  CHECK(ReadCorpus("").empty());
}
