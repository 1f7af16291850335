#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "framekit/document.h"

namespace framekit {

namespace {

struct Entity {
  const char *text;
  const char *type;
};

struct Verb {
  const char *past;
  const char *present;
  const char *predicate;
};

const Entity kAgents[] = {
    {"John", "/saft/person"},          {"Mary", "/saft/person"},
    {"Alice", "/saft/person"},         {"Peter", "/saft/person"},
    {"Susan", "/saft/person"},         {"David", "/saft/person"},
    {"Laura Chen", "/saft/person"},    {"Mark Twain", "/saft/person"},
    {"Google", "/saft/organization"},  {"Acme Corp", "/saft/organization"},
    {"the council", "/saft/organization"}, {"IBM", "/saft/organization"},
};

const Entity kPatients[] = {
    {"ball", "/saft/consumer_good"},  {"book", "/saft/consumer_good"},
    {"car", "/saft/consumer_good"},   {"phone", "/saft/consumer_good"},
    {"apple", "/saft/consumer_good"}, {"table", "/saft/consumer_good"},
    {"laptop", "/saft/consumer_good"}, {"bike", "/saft/consumer_good"},
    {"guitar", "/saft/consumer_good"}, {"camera", "/saft/consumer_good"},
};

const Entity kLocations[] = {
    {"Paris", "/saft/location"},    {"London", "/saft/location"},
    {"Berlin", "/saft/location"},   {"Tokyo", "/saft/location"},
    {"New York", "/saft/location"}, {"Hong Kong", "/saft/location"},
};

const Verb kVerbs[] = {
    {"hit", "hits", "/pb/hit-01"},         {"bought", "buys", "/pb/buy-01"},
    {"sold", "sells", "/pb/sell-01"},      {"saw", "sees", "/pb/see-01"},
    {"took", "takes", "/pb/take-01"},      {"found", "finds", "/pb/find-01"},
    {"made", "makes", "/pb/make-01"},      {"carried", "carries", "/pb/carry-01"},
    {"wanted", "wants", "/pb/want-01"},    {"liked", "likes", "/pb/like-01"},
    {"stole", "steals", "/pb/steal-01"},   {"repaired", "repairs", "/pb/repair-01"},
    {"painted", "paints", "/pb/paint-01"}, {"dropped", "drops", "/pb/drop-01"},
};

const char *const kAdverbs[] = {"quickly", "slowly", "quietly", "proudly"};
const char *const kDeterminers[] = {"the", "a", "this"};

template <typename T, size_t N>
const T &Pick(std::mt19937_64 &rng, const T (&items)[N]) {
  return items[rng() % N];
}

bool Chance(std::mt19937_64 &rng, int percent) {
  return static_cast<int>(rng() % 100) < percent;
}

int CountWords(const std::string &s) {
  int n = 1;
  for (char c : s) n += c == ' ';
  return n;
}

// Index of the first token of the entity's noun phrase: a leading
// determiner inside the entity text is not part of the mention.
int HeadOffset(const std::string &s) {
  return s.rfind("the ", 0) == 0 ? 1 : 0;
}

}  // namespace

std::vector<Document> GenerateCorpus(uint64_t seed, int num_docs) {
  auto store = std::make_shared<Store>();
  std::mt19937_64 rng(seed);
  std::vector<Document> docs;
  if (num_docs <= 0) return docs;
  docs.reserve(num_docs);
  Handle isa = store->isa();
  Handle arg0 = store->Intern("/pb/arg0");
  Handle arg1 = store->Intern("/pb/arg1");
  Handle arg2 = store->Intern("/pb/arg2");
  Handle manner = store->Intern("/pb/argm-mnr");
  Handle tense = store->Intern("/s/tense");
  Handle past = store->Intern("/s/past");
  Handle present = store->Intern("/s/present");

  for (int d = 0; d < num_docs; ++d) {
    const Entity &agent = Pick(rng, kAgents);
    const Verb &verb = Pick(rng, kVerbs);
    bool is_past = Chance(rng, 60);
    const char *adverb = Chance(rng, 10) ? Pick(rng, kAdverbs) : nullptr;
    const Entity &patient =
        Chance(rng, 25) ? Pick(rng, kAgents) : Pick(rng, kPatients);
    bool animate = std::string_view(patient.type) != "/saft/consumer_good";
    const char *det =
        !animate && Chance(rng, 70) ? Pick(rng, kDeterminers) : nullptr;
    const Entity *location = Chance(rng, 30) ? &Pick(rng, kLocations) : nullptr;

    std::string text;
    int pos = 0;
    auto append = [&](const std::string &words) {
      if (!text.empty()) text += ' ';
      text += words;
      int start = pos;
      pos += CountWords(words);
      return start;
    };
    int agent_begin = append(agent.text) + HeadOffset(agent.text);
    int agent_len = CountWords(agent.text) - HeadOffset(agent.text);
    if (adverb != nullptr) append(adverb);
    int verb_begin = append(is_past ? verb.past : verb.present);
    if (det != nullptr) append(det);
    int patient_begin = append(patient.text) + HeadOffset(patient.text);
    int patient_len = CountWords(patient.text) - HeadOffset(patient.text);
    int location_begin = -1, location_len = 0;
    if (location != nullptr) {
      append("in");
      location_begin = append(location->text);
      location_len = CountWords(location->text);
    }
    text += " .";

    Document doc(store, text);
    Handle a = store->NewFrame({{isa, store->Intern(agent.type)}});
    Handle p = store->NewFrame({{isa, store->Intern(patient.type)}});
    Handle v = store->NewFrame({{isa, store->Intern(verb.predicate)},
                                {arg0, a},
                                {arg1, p},
                                {tense, is_past ? past : present}});
    doc.AddMention(agent_begin, agent_len, {a});
    doc.AddMention(verb_begin, 1, {v});
    doc.AddMention(patient_begin, patient_len, {p});
    if (location != nullptr) {
      Handle l = store->NewFrame({{isa, store->Intern(location->type)}});
      store->AddSlot(v, arg2, l);
      doc.AddMention(location_begin, location_len, {l});
    }
    if (adverb != nullptr) {
      Handle m = store->NewFrame(
          {{isa, store->Intern(std::string("/s/manner/") + adverb)}});
      store->AddSlot(v, manner, m);
    }
    docs.push_back(std::move(doc));
  }
  store->Freeze();
  return docs;
}

}  // namespace framekit
