#include "framekit/model/trainer.h"

#include <cmath>

namespace framekit {

namespace {

// Parameters visited in lockstep.
template <typename Fn>
void Zip(Parameters<float> &a, Parameters<float> &b, Fn fn) {
  std::vector<Mat<float> *> bs;
  b.ForEach([&](const std::string &, Mat<float> &m) { bs.push_back(&m); });
  size_t i = 0;
  a.ForEach([&](const std::string &, Mat<float> &m) { fn(m, *bs[i++]); });
}

}  // namespace

Trainer::Trainer(Model model, std::span<const Document> corpus, uint64_t seed)
    : model_(std::move(model)), rng_(seed) {
  examples_.reserve(corpus.size());
  for (size_t i = 0; i < corpus.size(); ++i) {
    try {
      examples_.push_back(model_.MakeExample(corpus[i]));
    } catch (const Error &e) {
      throw Error(e.code(), "document " + std::to_string(i) + ": " + e.what());
    }
  }
  if (examples_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "training corpus is empty");
  }
  const NetworkDims &dims = model_.network().dims();
  grad_ = Parameters<float>(dims);
  m_ = Parameters<float>(dims);
  v_ = Parameters<float>(dims);
  if (model_.config().ema_decay > 0) ema_ = model_.network().params();
  order_.resize(examples_.size());
  for (size_t i = 0; i < order_.size(); ++i) order_[i] = i;
  next_ = order_.size();
}

void Trainer::NextBatch(std::vector<size_t> *batch) {
  batch->clear();
  int size = model_.config().batch_size;
  while (static_cast<int>(batch->size()) < size) {
    if (next_ == order_.size()) {
      // Fisher-Yates with raw engine output, independent of library
      // distribution implementations.
      for (size_t i = order_.size(); i > 1; --i) {
        std::swap(order_[i - 1], order_[rng_() % i]);
      }
      next_ = 0;
    }
    batch->push_back(order_[next_++]);
  }
}

double Trainer::TrainStep() {
  const ModelConfig &cfg = model_.config();
  std::vector<size_t> batch;
  NextBatch(&batch);
  size_t actions = 0;
  for (size_t i : batch) actions += examples_[i].steps.size();
  grad_.SetZero();
  const Network<float> &net = model_.network();
  float weight = 1.0f / static_cast<float>(std::max<size_t>(actions, 1));
  double loss = 0;
  for (size_t i : batch) loss += net.ForwardBackward(examples_[i], weight, &grad_);
  double norm = std::sqrt(static_cast<double>(grad_.SquaredNorm()));
  if (!std::isfinite(loss) || !std::isfinite(norm)) {
    throw Error(ErrorCode::kNonFiniteLoss,
                "non-finite loss at step " + std::to_string(step_ + 1));
  }
  if (cfg.gradient_clip_norm > 0 && norm > cfg.gradient_clip_norm) {
    grad_.Scale(static_cast<float>(cfg.gradient_clip_norm / norm));
  }

  ++step_;
  const float lr = static_cast<float>(cfg.learning_rate);
  const float b1 = static_cast<float>(cfg.adam_beta1);
  const float b2 = static_cast<float>(cfg.adam_beta2);
  const float eps = static_cast<float>(cfg.adam_epsilon);
  const float c1 = 1.0f - static_cast<float>(std::pow(cfg.adam_beta1, step_));
  const float c2 = 1.0f - static_cast<float>(std::pow(cfg.adam_beta2, step_));
  std::vector<Mat<float> *> params, grads, ms, vs;
  model_.network().params().ForEach(
      [&](const std::string &, Mat<float> &m) { params.push_back(&m); });
  grad_.ForEach([&](const std::string &, Mat<float> &m) { grads.push_back(&m); });
  m_.ForEach([&](const std::string &, Mat<float> &m) { ms.push_back(&m); });
  v_.ForEach([&](const std::string &, Mat<float> &m) { vs.push_back(&m); });
  for (size_t t = 0; t < params.size(); ++t) {
    auto g = grads[t]->array();
    auto m = ms[t]->array();
    auto v = vs[t]->array();
    m = b1 * m + (1.0f - b1) * g;
    v = b2 * v + (1.0f - b2) * g.square();
    params[t]->array() -= lr * (m / c1) / ((v / c2).sqrt() + eps);
  }
  if (ema_) {
    float decay = static_cast<float>(cfg.ema_decay);
    Zip(*ema_, model_.network().params(), [&](Mat<float> &avg, Mat<float> &p) {
      avg = decay * avg + (1.0f - decay) * p;
    });
  }
  return loss;
}

Model Trainer::EvaluationModel() const {
  Model m = model_;
  if (ema_) m.network().params() = *ema_;
  return m;
}

double Trainer::TeacherForcedAccuracy(std::span<const Document> docs) const {
  int64_t correct = 0, total = 0;
  const Network<float> &net = model_.network();
  for (const Document &doc : docs) {
    Example ex = model_.MakeExample(doc);
    Encoding<float> enc = net.Encode(ex.tokens);
    std::vector<Vec<float>> hidden;
    StepCache<float> cache;
    for (size_t i = 0; i < ex.steps.size(); ++i) {
      net.Step(ex.steps[i], enc, hidden, &cache);
      hidden.push_back(cache.hidden);
      Eigen::Index best = 0;
      cache.logits.maxCoeff(&best);
      correct += best == ex.gold[i];
      ++total;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

TrainResult Train(std::span<const Document> train, std::span<const Document> dev,
                  const ModelConfig &config, const TrainOptions &options,
                  const CheckpointCallback &callback) {
  if (options.steps < 0) throw Error(ErrorCode::kInvalidArgument, "steps must be >= 0");
  if (options.checkpoint_every < 1) {
    throw Error(ErrorCode::kInvalidArgument, "checkpoint interval must be >= 1");
  }
  Trainer trainer(Model::Build(train, config, options.seed), train, options.seed);
  TrainResult result;
  bool have_best = false;
  double best_score = 0;
  double loss_sum = 0;
  int loss_count = 0;
  auto checkpoint = [&]() {
    CheckpointReport report;
    report.step = trainer.step();
    report.loss = loss_count == 0 ? 0.0 : loss_sum / loss_count;
    Model eval = trainer.EvaluationModel();
    if (!dev.empty()) {
      report.has_dev = true;
      std::vector<Document> parsed = eval.ParseCorpus(dev, options.jobs);
      report.dev = EvaluateCorpus(dev, parsed, options.jobs);
      report.slot_f1 = 100.0 * report.dev[Metric::kSlot].F1();
    }
    double score = report.has_dev ? report.slot_f1 : -report.loss;
    if (!have_best || score > best_score) {
      have_best = true;
      best_score = score;
      result.best_step = report.step;
      result.best_model = eval;
    }
    if (callback) callback(report, eval);
    result.checkpoints.push_back(report);
    loss_sum = 0;
    loss_count = 0;
  };
  for (int s = 0; s < options.steps; ++s) {
    loss_sum += trainer.TrainStep();
    ++loss_count;
    if (trainer.step() % options.checkpoint_every == 0) checkpoint();
  }
  if (result.checkpoints.empty() || result.checkpoints.back().step != trainer.step()) {
    checkpoint();
  }
  result.final_model = trainer.EvaluationModel();
  return result;
}

}  // namespace framekit
