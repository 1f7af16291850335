#ifndef FRAMEKIT_MODEL_MODEL_H_
#define FRAMEKIT_MODEL_MODEL_H_

#include <span>
#include <string>
#include <vector>

#include "framekit/document.h"
#include "framekit/model/config.h"
#include "framekit/model/features.h"
#include "framekit/model/lexicon.h"
#include "framekit/model/network.h"
#include "framekit/parser_state.h"

namespace framekit {

// Chooses among a fixed list of actions by score. Start is called once per
// document, then Score once per transition step in order.
class ActionScorer {
 public:
  virtual ~ActionScorer() = default;
  virtual const std::vector<Action> &actions() const = 0;
  virtual void Start(const ParserState &state) = 0;
  virtual void Score(const ParserState &state, std::vector<double> *scores) = 0;
};

// Greedy decoding: applies the highest-scoring valid action (lowest index on
// ties) until STOP. After `max_actions_per_token` non-SHIFT actions at one
// cursor position only SHIFT and STOP are considered. Returns the annotated
// document in a fresh store; `taken` receives the applied actions.
Document GreedyParse(const Document &input, ActionScorer &scorer,
                     int max_actions_per_token, std::vector<Action> *taken = nullptr);

// Trained parser: configuration, vocabularies and parameters.
class Model {
 public:
  Model() = default;

  // Vocabularies from a training corpus (words, affixes, roles, oracle
  // actions) and randomly initialized parameters. Throws
  // Error(kUnrepresentable) naming the document index.
  static Model Build(std::span<const Document> corpus, const ModelConfig &config,
                     uint64_t seed);

  const ModelConfig &config() const { return config_; }
  const Lexicon &lexicon() const { return lexicon_; }
  const Vocabulary &roles() const { return roles_; }
  const ActionTable &actions() const { return actions_; }
  const Network<float> &network() const { return network_; }
  Network<float> &network() { return network_; }
  FeatureExtractor extractor() const {
    return FeatureExtractor(config_.k_attention, config_.k_history, &roles_);
  }

  // Teacher-forced example from the document's oracle sequence. Actions
  // missing from the table throw Error(kUnrepresentable).
  Example MakeExample(const Document &doc) const;

  // Parses the tokens of `input`; annotations of the input are ignored.
  Document Parse(const Document &input, std::vector<Action> *taken = nullptr) const;
  Document ParseText(const std::string &text) const;
  // Output order equals input order for any `jobs`.
  std::vector<Document> ParseCorpus(std::span<const Document> inputs,
                                    int jobs = 1) const;

  // Single-file checkpoint; load(save(m)) is bit-identical to m.
  std::string Serialize() const;
  static Model Deserialize(const std::string &bytes);
  void Save(const std::string &path) const;
  static Model Load(const std::string &path);

  // Loads "word v1 ... vd" lines into the word table; returns the number of
  // vocabulary words found. A "count dim" header line is skipped.
  int LoadWordVectors(const std::string &path);

  friend bool operator==(const Model &a, const Model &b);

 private:
  ModelConfig config_;
  Lexicon lexicon_;
  Vocabulary roles_;
  ActionTable actions_;
  Network<float> network_;
};

// Scores actions with a model's network.
class NetworkScorer : public ActionScorer {
 public:
  explicit NetworkScorer(const Model &model);
  const std::vector<Action> &actions() const override;
  void Start(const ParserState &state) override;
  void Score(const ParserState &state, std::vector<double> *scores) override;

 private:
  const Model &model_;
  FeatureExtractor extractor_;
  Encoding<float> encoding_;
  std::vector<Vec<float>> hidden_;
  StepCache<float> cache_;
};

}  // namespace framekit

#endif  // FRAMEKIT_MODEL_MODEL_H_
