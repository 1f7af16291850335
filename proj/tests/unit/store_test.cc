#include "framekit/store.h"

#include "doctest.h"
#include "framekit/error.h"

using namespace framekit;

namespace {

ErrorCode CodeOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("intern is idempotent and distinguishes names") {
  Store s;
  Handle a = s.Intern("/pb/arg0");
  CHECK(a == s.Intern("/pb/arg0"));
  CHECK(a.IsSymbol());
  CHECK(s.Intern("/saft/person") != s.Intern("/saft/location"));
  CHECK(s.SymbolName(a) == "/pb/arg0");
  CHECK(s.FindSymbol("/pb/arg0") == a);
  CHECK_FALSE(s.FindSymbol("missing").has_value());
}

TEST_CASE("built-in roles are pre-interned") {
  Store s;
  CHECK(s.Intern("id") == s.id());
  CHECK(s.Intern("isa") == s.isa());
  CHECK(s.Intern("is") == s.is());
  CHECK(s.id() != s.isa());
}

TEST_CASE("intern errors") {
  Store s;
  CHECK(CodeOf([&] { s.Intern(""); }) == ErrorCode::kEmptyName);
  s.Freeze();
  CHECK(CodeOf([&] { s.Intern("x"); }) == ErrorCode::kFrozenStore);
}

TEST_CASE("new_frame with a type slot") {
  Store s;
  Handle person = s.Intern("/saft/person");
  Handle h = s.NewFrame({{s.isa(), person}});
  CHECK(h.IsFrame());
  CHECK(s.GetRole(h, s.isa()) == Value(person));
  Handle empty = s.NewFrame();
  CHECK(s.Slots(empty).empty());
  CHECK(IsNil(s.GetRole(empty, s.isa())));
}

TEST_CASE("frames may form cycles") {
  Store s;
  Handle next = s.Intern("next");
  Handle a = s.NewFrame();
  Handle b = s.NewFrame({{next, a}});
  s.AddSlot(a, next, b);
  CHECK(s.GetRole(a, next) == Value(b));
  CHECK(s.GetRole(b, next) == Value(a));
}

TEST_CASE("add_slot appends and keeps duplicates in order") {
  Store s;
  Handle hit = s.NewFrame({{s.isa(), s.Intern("/pb/hit-01")}});
  Handle person = s.NewFrame({{s.isa(), s.Intern("/saft/person")}});
  Handle ball = s.NewFrame();
  Handle arg0 = s.Intern("/pb/arg0"), arg1 = s.Intern("/pb/arg1");
  s.AddSlot(hit, arg0, person);
  CHECK(s.GetRole(hit, arg0) == Value(person));
  s.AddSlot(hit, arg1, ball);
  auto slots = s.Slots(hit);
  REQUIRE(slots.size() == 3);
  CHECK(slots[1].role == arg0);
  CHECK(slots[2].role == arg1);
  s.AddSlot(hit, arg1, ball);
  CHECK(s.Slots(hit).size() == 4);
}

TEST_CASE("get_role returns the first match") {
  Store s;
  Handle r = s.Intern("r");
  Handle f = s.NewFrame({{r, int64_t{1}}, {r, int64_t{2}}});
  CHECK(s.GetRole(f, r) == Value(int64_t{1}));
}

TEST_CASE("id slots bind symbols to frames") {
  Store s;
  Handle name = s.Intern("john");
  Handle f = s.NewFrame({{s.id(), name}});
  CHECK(s.BoundFrame(name) == f);
  CHECK(s.LookupFrame("john") == f);
  CHECK(CodeOf([&] { s.NewFrame({{s.id(), name}}); }) == ErrorCode::kDuplicateId);
  Handle g = s.NewFrame();
  CHECK(CodeOf([&] { s.AddSlot(g, s.id(), name); }) == ErrorCode::kDuplicateId);
  // Binding the same frame again is not a conflict.
  s.AddSlot(f, s.id(), name);
}

TEST_CASE("mutation errors") {
  Store s;
  Store other;
  Handle f = s.NewFrame();
  Handle foreign = other.NewFrame();
  CHECK(CodeOf([&] { s.AddSlot(f, s.isa(), foreign); }) == ErrorCode::kForeignHandle);
  CHECK(CodeOf([&] { s.NewFrame({{s.isa(), foreign}}); }) == ErrorCode::kForeignHandle);
  Handle dangling{s.store_id(), 999, HandleKind::kFrame};
  CHECK(CodeOf([&] { s.AddSlot(dangling, s.isa(), int64_t{1}); }) ==
        ErrorCode::kDanglingHandle);
  CHECK(CodeOf([&] { s.GetRole(dangling, s.isa()); }) == ErrorCode::kDanglingHandle);
  CHECK(CodeOf([&] { s.AddSlot(f, Handle{}, int64_t{1}); }) == ErrorCode::kInvalidArgument);
  s.Freeze();
  CHECK(CodeOf([&] { s.NewFrame(); }) == ErrorCode::kFrozenStore);
  CHECK(CodeOf([&] { s.AddSlot(f, s.isa(), int64_t{1}); }) == ErrorCode::kFrozenStore);
  Store copy = s.MutableCopy();
  CHECK_FALSE(copy.frozen());
  copy.AddSlot(f, s.isa(), int64_t{1});
  CHECK(s.Slots(f).empty());
}

TEST_CASE("handles stay valid as the store grows") {
  Store s;
  std::vector<Handle> frames;
  std::vector<Handle> symbols;
  for (int i = 0; i < 2000; ++i) {
    symbols.push_back(s.Intern("sym" + std::to_string(i)));
    frames.push_back(s.NewFrame({{s.isa(), symbols.back()}}));
  }
  for (int i = 0; i < 2000; ++i) {
    CHECK(s.Owns(frames[i]));
    CHECK(s.SymbolName(symbols[i]) == "sym" + std::to_string(i));
    CHECK(s.GetRole(frames[i], s.isa()) == Value(symbols[i]));
  }
  CHECK(s.num_frames() == 2000);
}

TEST_CASE("arrays") {
  Store s;
  Handle f = s.NewFrame();
  Handle a = s.NewArray({int64_t{1}, std::string("x"), f});
  CHECK(a.IsArray());
  REQUIRE(s.Elements(a).size() == 3);
  CHECK(s.Elements(a)[2] == Value(f));
}
