#include "framekit/model/config.h"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>

#include "framekit/error.h"
#include "json.hpp"

namespace framekit {

namespace {

using nlohmann::json;

[[noreturn]] void Bad(const std::string &what) {
  throw Error(ErrorCode::kInvalidArgument, what);
}

int ParseInt(const std::string &key, const std::string &text) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    Bad("bad integer for " + key + ": '" + text + "'");
  }
  return v;
}

double ParseDouble(const std::string &key, const std::string &text) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    Bad("bad number for " + key + ": '" + text + "'");
  }
  return v;
}

Activation ParseActivation(const std::string &text) {
  if (text == "relu") return Activation::kRelu;
  if (text == "tanh") return Activation::kTanh;
  if (text == "identity") return Activation::kIdentity;
  Bad("unknown activation '" + text + "'");
}

struct Field {
  std::function<void(ModelConfig &, const std::string &)> set;
  std::function<json(const ModelConfig &)> get;
};

#define INT_FIELD(name)                                                     \
  {                                                                         \
    #name, Field {                                                          \
      [](ModelConfig &c, const std::string &v) { c.name = ParseInt(#name, v); }, \
          [](const ModelConfig &c) { return json(c.name); }                 \
    }                                                                       \
  }
#define DOUBLE_FIELD(name)                                                  \
  {                                                                         \
    #name, Field {                                                          \
      [](ModelConfig &c, const std::string &v) {                            \
        c.name = ParseDouble(#name, v);                                     \
      },                                                                    \
          [](const ModelConfig &c) { return json(c.name); }                 \
    }                                                                       \
  }

const std::map<std::string, Field> &Fields() {
  static const std::map<std::string, Field> fields = {
      INT_FIELD(word_dim),
      INT_FIELD(affix_dim),
      INT_FIELD(shape_dim),
      INT_FIELD(max_affix),
      {"word_vectors",
       Field{[](ModelConfig &c, const std::string &v) { c.word_vectors = v; },
             [](const ModelConfig &c) { return json(c.word_vectors); }}},
      INT_FIELD(lstm_dim),
      INT_FIELD(hidden_dim),
      INT_FIELD(link_dim),
      INT_FIELD(role_dim),
      INT_FIELD(k_attention),
      INT_FIELD(k_history),
      {"activation",
       Field{[](ModelConfig &c, const std::string &v) {
               c.activation = ParseActivation(v);
             },
             [](const ModelConfig &c) { return json(ActivationName(c.activation)); }}},
      DOUBLE_FIELD(learning_rate),
      DOUBLE_FIELD(adam_beta1),
      DOUBLE_FIELD(adam_beta2),
      DOUBLE_FIELD(adam_epsilon),
      DOUBLE_FIELD(gradient_clip_norm),
      INT_FIELD(batch_size),
      DOUBLE_FIELD(ema_decay),
      DOUBLE_FIELD(init_scale),
      INT_FIELD(max_actions_per_token),
  };
  return fields;
}

#undef INT_FIELD
#undef DOUBLE_FIELD

}  // namespace

const char *ActivationName(Activation a) {
  switch (a) {
    case Activation::kRelu: return "relu";
    case Activation::kTanh: return "tanh";
    case Activation::kIdentity: return "identity";
  }
  return "?";
}

void ModelConfig::Validate() const {
  auto positive = [](int v, const char *name) {
    if (v < 1) Bad(std::string(name) + " must be >= 1");
  };
  positive(word_dim, "word_dim");
  positive(affix_dim, "affix_dim");
  positive(shape_dim, "shape_dim");
  positive(max_affix, "max_affix");
  positive(lstm_dim, "lstm_dim");
  positive(hidden_dim, "hidden_dim");
  positive(link_dim, "link_dim");
  positive(role_dim, "role_dim");
  positive(k_attention, "k_attention");
  positive(k_history, "k_history");
  positive(batch_size, "batch_size");
  positive(max_actions_per_token, "max_actions_per_token");
  if (!(learning_rate > 0) || !std::isfinite(learning_rate)) {
    Bad("learning_rate must be positive");
  }
  if (!(adam_beta1 >= 0 && adam_beta1 < 1)) Bad("adam_beta1 must be in [0, 1)");
  if (!(adam_beta2 >= 0 && adam_beta2 < 1)) Bad("adam_beta2 must be in [0, 1)");
  if (!(adam_epsilon > 0)) Bad("adam_epsilon must be positive");
  if (!(gradient_clip_norm >= 0)) Bad("gradient_clip_norm must be >= 0");
  if (!(ema_decay >= 0 && ema_decay < 1)) Bad("ema_decay must be in [0, 1)");
  if (!(init_scale >= 0) || !std::isfinite(init_scale)) {
    Bad("init_scale must be >= 0");
  }
}

void ModelConfig::Set(const std::string &key, const std::string &value) {
  auto it = Fields().find(key);
  if (it == Fields().end()) Bad("unknown config key '" + key + "'");
  it->second.set(*this, value);
}

void ModelConfig::Apply(const std::vector<std::string> &assignments) {
  for (const std::string &a : assignments) {
    size_t eq = a.find('=');
    if (eq == std::string::npos) Bad("expected key=value, got '" + a + "'");
    Set(a.substr(0, eq), a.substr(eq + 1));
  }
}

std::string ModelConfig::ToJson() const {
  json j = json::object();
  for (const auto &[key, field] : Fields()) j[key] = field.get(*this);
  return j.dump(2);
}

ModelConfig ModelConfig::FromJson(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kSyntax, std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kSyntax, "config: expected object");
  ModelConfig config;
  for (const auto &[key, value] : j.items()) {
    std::string text_value;
    if (value.is_string()) {
      text_value = value.get<std::string>();
    } else if (value.is_number()) {
      text_value = value.dump();
    } else {
      Bad("config: bad value for " + key);
    }
    config.Set(key, text_value);
  }
  config.Validate();
  return config;
}

std::vector<std::string> ModelConfig::Keys() {
  std::vector<std::string> keys;
  for (const auto &[key, field] : Fields()) keys.push_back(key);
  return keys;
}

}  // namespace framekit
