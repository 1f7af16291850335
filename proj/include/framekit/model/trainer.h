#ifndef FRAMEKIT_MODEL_TRAINER_H_
#define FRAMEKIT_MODEL_TRAINER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "framekit/evaluator.h"
#include "framekit/model/model.h"

namespace framekit {

struct TrainOptions {
  int steps = 1000;  // optimizer updates
  int checkpoint_every = 100;
  uint64_t seed = 1;
  int jobs = 1;  // threads for dev parsing
};

struct CheckpointReport {
  int step = 0;
  double loss = 0;  // mean per-action loss since the previous checkpoint
  bool has_dev = false;
  EvalReport dev;
  double slot_f1 = 0;  // percent; 0 without a dev corpus
};

// Adam with global-norm clipping over teacher-forced oracle sequences.
class Trainer {
 public:
  Trainer(Model model, std::span<const Document> corpus, uint64_t seed);

  // One update on the next batch; returns its mean per-action loss. Throws
  // Error(kNonFiniteLoss) if the loss or gradient is not finite.
  double TrainStep();

  int step() const { return step_; }
  const Model &model() const { return model_; }
  // Model with the moving average applied, or the raw model when the
  // average is disabled.
  Model EvaluationModel() const;
  double TeacherForcedAccuracy(std::span<const Document> docs) const;

 private:
  void NextBatch(std::vector<size_t> *batch);

  Model model_;
  std::vector<Example> examples_;
  std::mt19937_64 rng_;
  std::vector<size_t> order_;
  size_t next_ = 0;
  int step_ = 0;
  Parameters<float> grad_, m_, v_;
  std::optional<Parameters<float>> ema_;
};

struct TrainResult {
  Model final_model;
  Model best_model;
  int best_step = 0;
  std::vector<CheckpointReport> checkpoints;
};

using CheckpointCallback =
    std::function<void(const CheckpointReport &, const Model &)>;

// Builds a model from `train` and runs `options.steps` updates, reporting a
// checkpoint every `checkpoint_every` steps and after the last one. The best
// checkpoint has the highest dev Slot F1 (earliest on ties), or the lowest
// loss without a dev corpus.
TrainResult Train(std::span<const Document> train, std::span<const Document> dev,
                  const ModelConfig &config, const TrainOptions &options,
                  const CheckpointCallback &callback = {});

}  // namespace framekit

#endif  // FRAMEKIT_MODEL_TRAINER_H_
