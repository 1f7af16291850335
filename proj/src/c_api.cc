#include "framekit/framekit.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "framekit/document.h"
#include "framekit/error.h"
#include "framekit/evaluator.h"
#include "framekit/model/grad_check.h"
#include "framekit/model/model.h"
#include "framekit/model/trainer.h"
#include "framekit/oracle.h"

struct fk_corpus {
  std::vector<framekit::Document> docs;
};

struct fk_config {
  framekit::ModelConfig config;
};

struct fk_model {
  framekit::Model owned;
  // Borrowed models (checkpoint callbacks) point elsewhere.
  const framekit::Model *borrowed = nullptr;

  const framekit::Model &get() const { return borrowed ? *borrowed : owned; }
};

struct fk_report {
  framekit::EvalReport report;
};

namespace {

thread_local std::string last_error;

fk_status Fail(fk_status status, const std::string &message) {
  last_error = message;
  return status;
}

fk_status FromCode(framekit::ErrorCode code) {
  return static_cast<fk_status>(static_cast<int>(code));
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
fk_status Guard(Fn &&fn) {
  try {
    fn();
    last_error.clear();
    return FK_OK;
  } catch (const framekit::Error &e) {
    return Fail(FromCode(e.code()), e.what());
  } catch (const std::bad_alloc &) {
    return Fail(FK_ERR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return Fail(FK_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(FK_ERR_INTERNAL, "unknown error");
  }
}

void Require(bool ok, const char *what) {
  if (!ok) {
    throw framekit::Error(framekit::ErrorCode::kInvalidArgument,
                          std::string(what) + " must not be null");
  }
}

char *Dup(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

fk_corpus *NewCorpus(std::vector<framekit::Document> docs) {
  auto *c = new fk_corpus;
  c->docs = std::move(docs);
  return c;
}

}  // namespace

extern "C" {

const char *fk_version(void) { return "0.1.0"; }

const char *fk_status_name(fk_status status) {
  switch (status) {
    case FK_OK:
      return "ok";
    case FK_ERR_INTERNAL:
      return "internal";
    default:
      break;
  }
  int code = static_cast<int>(status);
  if (code >= 1 && code <= static_cast<int>(framekit::ErrorCode::kIo)) {
    return framekit::ErrorCodeName(static_cast<framekit::ErrorCode>(code));
  }
  return "unknown";
}

const char *fk_last_error(void) { return last_error.c_str(); }

void fk_string_free(char *s) { std::free(s); }

fk_status fk_corpus_generate(uint64_t seed, int num_docs, fk_corpus **out) {
  return Guard([&] {
    Require(out != nullptr, "out");
    if (num_docs < 0) {
      throw framekit::Error(framekit::ErrorCode::kInvalidArgument,
                            "document count must be >= 0");
    }
    *out = NewCorpus(framekit::GenerateCorpus(seed, num_docs));
  });
}

fk_status fk_corpus_read(const char *path, fk_corpus **out) {
  return Guard([&] {
    Require(path != nullptr, "path");
    Require(out != nullptr, "out");
    *out = NewCorpus(framekit::ReadCorpusFile(path));
  });
}

fk_status fk_corpus_parse(const char *text, size_t length, fk_corpus **out) {
  return Guard([&] {
    Require(text != nullptr || length == 0, "text");
    Require(out != nullptr, "out");
    *out = NewCorpus(framekit::ReadCorpus(std::string_view(text, length)));
  });
}

fk_status fk_corpus_from_lines(const char *text, size_t length, fk_corpus **out) {
  return Guard([&] {
    Require(text != nullptr || length == 0, "text");
    Require(out != nullptr, "out");
    auto store = std::make_shared<framekit::Store>();
    std::vector<framekit::Document> docs;
    std::string_view rest(text, length);
    while (!rest.empty()) {
      size_t nl = rest.find('\n');
      std::string_view line = rest.substr(0, nl);
      rest = nl == std::string_view::npos ? std::string_view() : rest.substr(nl + 1);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
      docs.emplace_back(store, std::string(line));
    }
    *out = NewCorpus(std::move(docs));
  });
}

fk_status fk_corpus_write(const fk_corpus *corpus, const char *path) {
  return Guard([&] {
    Require(corpus != nullptr, "corpus");
    Require(path != nullptr, "path");
    framekit::WriteCorpusFile(corpus->docs, path);
  });
}

fk_status fk_corpus_to_string(const fk_corpus *corpus, char **out) {
  return Guard([&] {
    Require(corpus != nullptr, "corpus");
    Require(out != nullptr, "out");
    *out = Dup(framekit::WriteCorpus(corpus->docs));
  });
}

size_t fk_corpus_size(const fk_corpus *corpus) {
  return corpus == nullptr ? 0 : corpus->docs.size();
}

fk_status fk_corpus_slice(const fk_corpus *corpus, size_t begin, size_t end,
                          fk_corpus **out) {
  return Guard([&] {
    Require(corpus != nullptr, "corpus");
    Require(out != nullptr, "out");
    if (begin > end || end > corpus->docs.size()) {
      throw framekit::Error(framekit::ErrorCode::kIndexOutOfRange,
                            "slice [" + std::to_string(begin) + ", " +
                                std::to_string(end) + ") of " +
                                std::to_string(corpus->docs.size()) + " documents");
    }
    *out = NewCorpus(std::vector<framekit::Document>(corpus->docs.begin() + begin,
                                                     corpus->docs.begin() + end));
  });
}

void fk_corpus_free(fk_corpus *corpus) { delete corpus; }

fk_status fk_oracle(const fk_corpus *corpus, char **sequences, char **stats) {
  return Guard([&] {
    Require(corpus != nullptr, "corpus");
    std::string seq;
    for (size_t i = 0; i < corpus->docs.size(); ++i) {
      framekit::TransitionSequence s;
      try {
        s = framekit::GenerateOracle(corpus->docs[i]);
      } catch (const framekit::Error &e) {
        throw framekit::Error(e.code(), "document " + std::to_string(i) + ": " + e.what());
      }
      if (i > 0) seq += '\n';
      seq += framekit::FormatSequence(s);
    }
    std::string table;
    if (stats != nullptr) {
      table = framekit::FormatActionStats(framekit::ComputeActionStats(corpus->docs));
    }
    std::unique_ptr<char, decltype(&std::free)> seq_out(
        sequences != nullptr ? Dup(seq) : nullptr, &std::free);
    if (stats != nullptr) *stats = Dup(table);
    if (sequences != nullptr) *sequences = seq_out.release();
  });
}

fk_status fk_roundtrip_failures(const fk_corpus *corpus, size_t *failures) {
  return Guard([&] {
    Require(corpus != nullptr, "corpus");
    Require(failures != nullptr, "failures");
    size_t n = 0;
    for (const framekit::Document &doc : corpus->docs) {
      if (!framekit::RoundTripCheck(doc)) ++n;
    }
    *failures = n;
  });
}

fk_status fk_config_new(fk_config **out) {
  return Guard([&] {
    Require(out != nullptr, "out");
    *out = new fk_config;
  });
}

fk_status fk_config_set(fk_config *config, const char *key, const char *value) {
  return Guard([&] {
    Require(config != nullptr, "config");
    Require(key != nullptr, "key");
    Require(value != nullptr, "value");
    framekit::ModelConfig copy = config->config;
    copy.Set(key, value);
    copy.Validate();
    config->config = copy;
  });
}

fk_status fk_config_to_json(const fk_config *config, char **out) {
  return Guard([&] {
    Require(config != nullptr, "config");
    Require(out != nullptr, "out");
    *out = Dup(config->config.ToJson());
  });
}

void fk_config_free(fk_config *config) { delete config; }

void fk_train_options_init(fk_train_options *options) {
  if (options == nullptr) return;
  framekit::TrainOptions defaults;
  options->steps = defaults.steps;
  options->checkpoint_every = defaults.checkpoint_every;
  options->seed = defaults.seed;
  options->jobs = defaults.jobs;
}

fk_status fk_train(const fk_corpus *train, const fk_corpus *dev, const fk_config *config,
                   const fk_train_options *options, fk_checkpoint_fn callback,
                   void *user_data, fk_model **final_model, fk_model **best_model,
                   int *best_step) {
  return Guard([&] {
    Require(train != nullptr, "train");
    Require(config != nullptr, "config");
    Require(options != nullptr, "options");
    Require(final_model != nullptr, "final_model");
    framekit::TrainOptions opts;
    opts.steps = options->steps;
    opts.checkpoint_every = options->checkpoint_every;
    opts.seed = options->seed;
    opts.jobs = options->jobs;
    framekit::CheckpointCallback cb;
    if (callback != nullptr) {
      cb = [&](const framekit::CheckpointReport &report, const framekit::Model &model) {
        fk_checkpoint_info info;
        info.step = report.step;
        info.loss = report.loss;
        info.has_dev = report.has_dev ? 1 : 0;
        info.slot_f1 = report.slot_f1;
        info.span_f1 =
            report.has_dev ? 100.0 * report.dev[framekit::Metric::kSpan].F1() : 0.0;
        // The handle borrows the model for the duration of the call.
        fk_model handle;
        handle.borrowed = &model;
        callback(&info, &handle, user_data);
      };
    }
    std::span<const framekit::Document> dev_docs;
    if (dev != nullptr) dev_docs = dev->docs;
    framekit::TrainResult result =
        framekit::Train(train->docs, dev_docs, config->config, opts, cb);
    auto final_handle = std::make_unique<fk_model>();
    final_handle->owned = std::move(result.final_model);
    if (best_model != nullptr) {
      auto best = std::make_unique<fk_model>();
      best->owned = std::move(result.best_model);
      *best_model = best.release();
    }
    if (best_step != nullptr) *best_step = result.best_step;
    *final_model = final_handle.release();
  });
}

fk_status fk_model_save(const fk_model *model, const char *path) {
  return Guard([&] {
    Require(model != nullptr, "model");
    Require(path != nullptr, "path");
    model->get().Save(path);
  });
}

fk_status fk_model_load(const char *path, fk_model **out) {
  return Guard([&] {
    Require(path != nullptr, "path");
    Require(out != nullptr, "out");
    auto m = std::make_unique<fk_model>();
    m->owned = framekit::Model::Load(path);
    *out = m.release();
  });
}

int fk_model_num_actions(const fk_model *model) {
  return model == nullptr ? 0 : static_cast<int>(model->get().actions().size());
}

void fk_model_free(fk_model *model) { delete model; }

fk_status fk_parse(const fk_model *model, const fk_corpus *input, int jobs,
                   fk_corpus **out) {
  return Guard([&] {
    Require(model != nullptr, "model");
    Require(input != nullptr, "input");
    Require(out != nullptr, "out");
    *out = NewCorpus(model->get().ParseCorpus(input->docs, jobs));
  });
}

fk_status fk_parse_text(const fk_model *model, const char *text, fk_corpus **out) {
  return Guard([&] {
    Require(model != nullptr, "model");
    Require(text != nullptr, "text");
    Require(out != nullptr, "out");
    std::vector<framekit::Document> docs;
    docs.push_back(model->get().ParseText(text));
    *out = NewCorpus(std::move(docs));
  });
}

fk_status fk_evaluate(const fk_corpus *gold, const fk_corpus *pred, int jobs,
                      fk_report **out) {
  return Guard([&] {
    Require(gold != nullptr, "gold");
    Require(pred != nullptr, "pred");
    Require(out != nullptr, "out");
    *out = new fk_report{framekit::EvaluateCorpus(gold->docs, pred->docs, jobs)};
  });
}

fk_status fk_report_get(const fk_report *report, fk_metric metric,
                        fk_metric_counts *out) {
  return Guard([&] {
    Require(report != nullptr, "report");
    Require(out != nullptr, "out");
    int m = static_cast<int>(metric);
    if (m < 0 || m >= framekit::kNumMetrics) {
      throw framekit::Error(framekit::ErrorCode::kInvalidArgument,
                            "unknown metric " + std::to_string(m));
    }
    const framekit::MetricCounts &c = report->report.counts[m];
    out->matched_pred = c.matched_pred;
    out->total_pred = c.total_pred;
    out->matched_gold = c.matched_gold;
    out->total_gold = c.total_gold;
    out->precision = c.Precision();
    out->recall = c.Recall();
    out->f1 = c.F1();
  });
}

fk_status fk_report_table(const fk_report *report, char **out) {
  return Guard([&] {
    Require(report != nullptr, "report");
    Require(out != nullptr, "out");
    *out = Dup(framekit::FormatReport(report->report));
  });
}

fk_status fk_report_metrics(const fk_report *report, char **out) {
  return Guard([&] {
    Require(report != nullptr, "report");
    Require(out != nullptr, "out");
    *out = Dup(framekit::FormatMetrics(report->report));
  });
}

void fk_report_free(fk_report *report) { delete report; }

fk_status fk_grad_check(const fk_corpus *corpus, size_t doc_index,
                        const fk_config *config, uint64_t seed,
                        fk_grad_check_result *out) {
  return Guard([&] {
    Require(corpus != nullptr, "corpus");
    Require(config != nullptr, "config");
    Require(out != nullptr, "out");
    if (doc_index >= corpus->docs.size()) {
      throw framekit::Error(framekit::ErrorCode::kIndexOutOfRange,
                            "document " + std::to_string(doc_index) + " of " +
                                std::to_string(corpus->docs.size()));
    }
    framekit::GradCheckResult r =
        framekit::GradCheck(corpus->docs[doc_index], config->config, seed);
    out->max_relative_error = r.max_relative_error;
    out->values_checked = r.values_checked;
    out->loss = r.loss;
    out->gradient_norm = r.gradient_norm;
  });
}

}  // extern "C"
