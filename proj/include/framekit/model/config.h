#ifndef FRAMEKIT_MODEL_CONFIG_H_
#define FRAMEKIT_MODEL_CONFIG_H_

#include <string>
#include <vector>

namespace framekit {

enum class Activation { kRelu, kTanh, kIdentity };

const char *ActivationName(Activation a);

struct ModelConfig {
  // Lexical features.
  int word_dim = 32;
  int affix_dim = 16;
  int shape_dim = 4;
  int max_affix = 3;
  std::string word_vectors;  // optional "word v1 ... vd" text file

  // Encoder and decoder.
  int lstm_dim = 256;
  int hidden_dim = 128;
  int link_dim = 32;
  int role_dim = 16;
  int k_attention = 5;
  int k_history = 5;
  Activation activation = Activation::kRelu;

  // Optimizer.
  double learning_rate = 0.0005;
  double adam_beta1 = 0.01;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-5;
  double gradient_clip_norm = 1.0;
  int batch_size = 8;
  double ema_decay = 0.0;  // 0 disables the moving average
  double init_scale = 1.0;

  // Decoding.
  int max_actions_per_token = 32;

  // Throws Error(kInvalidArgument) on out-of-range values.
  void Validate() const;

  // Sets one field from text. Throws Error(kInvalidArgument) for unknown
  // keys or unparsable values.
  void Set(const std::string &key, const std::string &value);
  // Applies "key=value" strings in order.
  void Apply(const std::vector<std::string> &assignments);

  std::string ToJson() const;
  static ModelConfig FromJson(const std::string &json);

  static std::vector<std::string> Keys();
};

}  // namespace framekit

#endif  // FRAMEKIT_MODEL_CONFIG_H_
