#include "framekit/model/model.h"

#include <cstring>
#include <optional>
#include <fstream>
#include <sstream>

#include "framekit/notation.h"
#include "framekit/oracle.h"
#include "parallel.h"

namespace framekit {

namespace {

constexpr char kMagic[] = "framekit-checkpoint";
constexpr int kFormatVersion = 1;

[[noreturn]] void Corrupt(const std::string &what) {
  throw Error(ErrorCode::kSyntax, "checkpoint: " + what);
}

bool RoleBearing(ActionKind kind) {
  return kind == ActionKind::kConnect || kind == ActionKind::kEmbed ||
         kind == ActionKind::kElaborate;
}

void WriteVocabulary(std::string &out, const char *name, const Vocabulary &v) {
  out += "vocab ";
  out += name;
  out += ' ' + std::to_string(v.size()) + '\n';
  for (const std::string &e : v.entries()) out += QuoteString(e) + '\n';
}

// Sequential reader over checkpoint bytes.
class Cursor {
 public:
  explicit Cursor(const std::string &bytes) : bytes_(bytes) {}

  std::string Line() {
    size_t end = bytes_.find('\n', pos_);
    if (end == std::string::npos) Corrupt("truncated");
    std::string line = bytes_.substr(pos_, end - pos_);
    pos_ = end + 1;
    return line;
  }

  std::string Bytes(size_t n) {
    if (bytes_.size() - pos_ < n) Corrupt("truncated data");
    std::string out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  bool AtEnd() const { return pos_ == bytes_.size(); }

 private:
  const std::string &bytes_;
  size_t pos_ = 0;
};

std::vector<std::string> Fields(const std::string &line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string f;
  while (in >> f) out.push_back(f);
  return out;
}

long long ToInt(const std::string &s) {
  try {
    size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size() || v < 0) Corrupt("bad count '" + s + "'");
    return v;
  } catch (const std::logic_error &) {
    Corrupt("bad count '" + s + "'");
  }
}

void ReadVocabulary(Cursor &in, const char *name, Vocabulary *v) {
  auto f = Fields(in.Line());
  if (f.size() != 3 || f[0] != "vocab" || f[1] != name) {
    Corrupt(std::string("expected vocab ") + name);
  }
  long long n = ToInt(f[2]);
  *v = Vocabulary();
  for (long long i = 0; i < n; ++i) {
    std::string line = in.Line();
    size_t used = 0;
    std::string entry;
    try {
      entry = UnquoteString(line, &used);
    } catch (const Error &) {
      Corrupt(std::string("bad ") + name + " entry");
    }
    if (used != line.size()) Corrupt(std::string("bad ") + name + " entry");
    if (v->Add(entry) != i) Corrupt(std::string("duplicate ") + name + " entry");
  }
}

}  // namespace

Document GreedyParse(const Document &input, ActionScorer &scorer,
                     int max_actions_per_token, std::vector<Action> *taken) {
  ParserState state(input);
  scorer.Start(state);
  const std::vector<Action> &actions = scorer.actions();
  std::vector<double> scores;
  int non_shift = 0;
  while (!state.done()) {
    scores.assign(actions.size(), 0.0);
    scorer.Score(state, &scores);
    bool capped = non_shift >= max_actions_per_token;
    int best = -1;
    for (size_t i = 0; i < actions.size(); ++i) {
      const Action &a = actions[i];
      if (capped && a.kind != ActionKind::kShift && a.kind != ActionKind::kStop) {
        continue;
      }
      if (!state.IsValid(a)) continue;
      if (best < 0 || scores[i] > scores[best]) best = static_cast<int>(i);
    }
    Action chosen;
    if (best >= 0) {
      chosen = actions[best];
    } else {
      chosen = state.cursor() < state.num_tokens() ? Action::Shift() : Action::Stop();
    }
    if (!state.IsValid(chosen)) {
      throw Error(ErrorCode::kInvalidAction, "decoder chose " + ToString(chosen));
    }
    state.Apply(chosen);
    non_shift = chosen.kind == ActionKind::kShift ? 0 : non_shift + 1;
    if (taken != nullptr) taken->push_back(chosen);
  }
  return std::move(state.document());
}

Model Model::Build(std::span<const Document> corpus, const ModelConfig &config,
                   uint64_t seed) {
  config.Validate();
  Model m;
  m.config_ = config;
  m.lexicon_ = Lexicon(config.max_affix);
  for (size_t i = 0; i < corpus.size(); ++i) {
    for (const Token &t : corpus[i].tokens()) m.lexicon_.AddWord(t.text);
    TransitionSequence seq;
    try {
      seq = GenerateOracle(corpus[i]);
    } catch (const Error &e) {
      throw Error(e.code(), "document " + std::to_string(i) + ": " + e.what());
    }
    for (const Action &a : seq.actions) {
      m.actions_.Add(a);
      if (RoleBearing(a.kind)) m.roles_.Add(a.role);
    }
  }
  NetworkDims dims = NetworkDims::From(
      config, m.lexicon_.words().size(), m.lexicon_.prefixes().size(),
      m.lexicon_.suffixes().size(), m.roles_.size(), m.actions_.size());
  m.network_ = Network<float>(dims, config.activation);
  m.network_.Init(seed, static_cast<float>(config.init_scale));
  if (!config.word_vectors.empty()) m.LoadWordVectors(config.word_vectors);
  return m;
}

Example Model::MakeExample(const Document &doc) const {
  Example ex;
  ex.tokens = lexicon_.Features(doc);
  TransitionSequence seq = GenerateOracle(doc);
  FeatureExtractor fx = extractor();
  ParserState state(doc);
  for (const Action &a : seq.actions) {
    int id = actions_.Lookup(a);
    if (id < 0) {
      throw Error(ErrorCode::kUnrepresentable,
                  "action " + ToString(a) + " is not in the action table");
    }
    ex.steps.push_back(fx.Extract(state));
    ex.gold.push_back(id);
    state.Apply(a);
  }
  return ex;
}

NetworkScorer::NetworkScorer(const Model &model)
    : model_(model), extractor_(model.extractor()) {}

const std::vector<Action> &NetworkScorer::actions() const {
  return model_.actions().actions();
}

void NetworkScorer::Start(const ParserState &state) {
  encoding_ = model_.network().Encode(model_.lexicon().Features(state.document()));
  hidden_.clear();
}

void NetworkScorer::Score(const ParserState &state, std::vector<double> *scores) {
  if (state.step() != static_cast<int>(hidden_.size())) {
    throw Error(ErrorCode::kInvalidArgument, "scorer called out of step order");
  }
  model_.network().Step(extractor_.Extract(state), encoding_, hidden_, &cache_);
  hidden_.push_back(cache_.hidden);
  scores->resize(cache_.logits.size());
  for (Eigen::Index i = 0; i < cache_.logits.size(); ++i) {
    (*scores)[i] = cache_.logits(i);
  }
}

Document Model::Parse(const Document &input, std::vector<Action> *taken) const {
  NetworkScorer scorer(*this);
  return GreedyParse(input, scorer, config_.max_actions_per_token, taken);
}

Document Model::ParseText(const std::string &text) const {
  return Parse(Document(std::make_shared<Store>(), text));
}

std::vector<Document> Model::ParseCorpus(std::span<const Document> inputs,
                                         int jobs) const {
  std::vector<std::optional<Document>> out(inputs.size());
  ParallelFor(inputs.size(), jobs, [&](size_t i) { out[i].emplace(Parse(inputs[i])); });
  std::vector<Document> docs;
  docs.reserve(out.size());
  for (auto &d : out) docs.push_back(std::move(*d));
  return docs;
}

std::string Model::Serialize() const {
  std::string out;
  out += std::string(kMagic) + ' ' + std::to_string(kFormatVersion) + '\n';
  std::string json = config_.ToJson();
  out += "config " + std::to_string(json.size()) + '\n' + json + '\n';
  out += "max_affix " + std::to_string(lexicon_.max_affix()) + '\n';
  WriteVocabulary(out, "words", lexicon_.words());
  WriteVocabulary(out, "prefixes", lexicon_.prefixes());
  WriteVocabulary(out, "suffixes", lexicon_.suffixes());
  WriteVocabulary(out, "roles", roles_);
  out += "actions " + std::to_string(actions_.size()) + '\n';
  for (const Action &a : actions_.actions()) out += ToString(a) + '\n';
  int count = 0;
  network_.params().ForEach([&](const std::string &, const Mat<float> &) { ++count; });
  out += "tensors " + std::to_string(count) + '\n';
  network_.params().ForEach([&](const std::string &name, const Mat<float> &m) {
    size_t bytes = static_cast<size_t>(m.size()) * sizeof(float);
    out += "tensor " + name + ' ' + std::to_string(m.rows()) + ' ' +
           std::to_string(m.cols()) + " f32 " + std::to_string(bytes) + '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        float v = m(i, j);
        char raw[sizeof(float)];
        std::memcpy(raw, &v, sizeof(float));
        out.append(raw, sizeof(float));
      }
    }
    out += '\n';
  });
  out += "end\n";
  return out;
}

Model Model::Deserialize(const std::string &bytes) {
  Cursor in(bytes);
  auto header = Fields(in.Line());
  if (header.size() != 2 || header[0] != kMagic) Corrupt("not a checkpoint");
  if (header[1] != std::to_string(kFormatVersion)) {
    Corrupt("unsupported version " + header[1]);
  }
  Model m;
  auto f = Fields(in.Line());
  if (f.size() != 2 || f[0] != "config") Corrupt("expected config");
  m.config_ = ModelConfig::FromJson(in.Bytes(ToInt(f[1])));
  if (!in.Line().empty()) Corrupt("bad config terminator");
  f = Fields(in.Line());
  if (f.size() != 2 || f[0] != "max_affix") Corrupt("expected max_affix");
  m.lexicon_ = Lexicon(static_cast<int>(ToInt(f[1])));
  ReadVocabulary(in, "words", &m.lexicon_.mutable_words());
  ReadVocabulary(in, "prefixes", &m.lexicon_.mutable_prefixes());
  ReadVocabulary(in, "suffixes", &m.lexicon_.mutable_suffixes());
  ReadVocabulary(in, "roles", &m.roles_);
  f = Fields(in.Line());
  if (f.size() != 2 || f[0] != "actions") Corrupt("expected actions");
  long long n = ToInt(f[1]);
  m.actions_ = ActionTable();
  for (long long i = 0; i < n; ++i) {
    if (m.actions_.Add(ParseAction(in.Line())) != i) Corrupt("duplicate action");
  }
  NetworkDims dims = NetworkDims::From(
      m.config_, m.lexicon_.words().size(), m.lexicon_.prefixes().size(),
      m.lexicon_.suffixes().size(), m.roles_.size(), m.actions_.size());
  m.network_ = Network<float>(dims, m.config_.activation);
  f = Fields(in.Line());
  if (f.size() != 2 || f[0] != "tensors") Corrupt("expected tensors");
  long long num_tensors = ToInt(f[1]);
  long long seen = 0;
  m.network_.params().ForEach([&](const std::string &name, Mat<float> &t) {
    auto h = Fields(in.Line());
    if (h.size() != 6 || h[0] != "tensor" || h[1] != name) {
      Corrupt("expected tensor " + name);
    }
    if (ToInt(h[2]) != t.rows() || ToInt(h[3]) != t.cols()) {
      throw Error(ErrorCode::kShapeMismatch, "checkpoint: tensor " + name +
                                                 " has shape " + h[2] + "x" + h[3]);
    }
    if (h[4] != "f32") Corrupt("unsupported element type " + h[4]);
    size_t bytes = static_cast<size_t>(t.size()) * sizeof(float);
    if (static_cast<size_t>(ToInt(h[5])) != bytes) Corrupt("bad byte count");
    std::string raw = in.Bytes(bytes);
    size_t k = 0;
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      for (Eigen::Index j = 0; j < t.cols(); ++j) {
        std::memcpy(&t(i, j), raw.data() + k, sizeof(float));
        k += sizeof(float);
      }
    }
    if (!in.Line().empty()) Corrupt("bad tensor terminator");
    ++seen;
  });
  if (seen != num_tensors) Corrupt("tensor count mismatch");
  if (in.Line() != "end" || !in.AtEnd()) Corrupt("trailing data");
  return m;
}

void Model::Save(const std::string &path) const { WriteFile(path, Serialize()); }

Model Model::Load(const std::string &path) { return Deserialize(ReadFile(path)); }

int Model::LoadWordVectors(const std::string &path) {
  std::istringstream in(ReadFile(path));
  std::string line;
  int found = 0;
  bool first = true;
  Mat<float> &table = network_.params().word;
  while (std::getline(in, line)) {
    auto f = Fields(line);
    if (f.empty()) continue;
    if (first && f.size() == 2) {
      first = false;
      continue;
    }
    first = false;
    if (static_cast<int>(f.size()) != config_.word_dim + 1) {
      throw Error(ErrorCode::kShapeMismatch,
                  "word vector for '" + f[0] + "' has " +
                      std::to_string(f.size() - 1) + " values, expected " +
                      std::to_string(config_.word_dim));
    }
    int id = lexicon_.words().Lookup(f[0]);
    if (id == Vocabulary::kUnknown) continue;
    for (int i = 0; i < config_.word_dim; ++i) {
      try {
        table(i, id) = std::stof(f[i + 1]);
      } catch (const std::logic_error &) {
        throw Error(ErrorCode::kSyntax, "bad number in word vector for " + f[0]);
      }
    }
    ++found;
  }
  return found;
}

bool operator==(const Model &a, const Model &b) {
  return a.config_.ToJson() == b.config_.ToJson() && a.lexicon_ == b.lexicon_ &&
         a.roles_ == b.roles_ && a.actions_ == b.actions_ &&
         a.network_.dims() == b.network_.dims() &&
         a.network_.params() == b.network_.params();
}

}  // namespace framekit
