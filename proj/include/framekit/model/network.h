#ifndef FRAMEKIT_MODEL_NETWORK_H_
#define FRAMEKIT_MODEL_NETWORK_H_

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "framekit/model/config.h"
#include "framekit/model/features.h"
#include "framekit/model/lexicon.h"

namespace framekit {

template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

// Linked feature channels of the decoder input, in input order.
enum LinkChannel {
  kLinkCursorFw,
  kLinkCursorBw,
  kLinkAttentionFw,
  kLinkAttentionBw,
  kLinkCreate,
  kLinkFocus,
  kLinkHistory,
};
inline constexpr int kNumLinkChannels = 7;

const char *LinkChannelName(int channel);

// Sizes that fix every tensor shape.
struct NetworkDims {
  int words = 1;
  int prefixes = 2;
  int suffixes = 2;
  int roles = 1;
  int actions = 2;

  int word_dim = 32;
  int affix_dim = 16;
  int shape_dim = 4;
  int max_affix = 3;
  int lstm_dim = 256;
  int hidden_dim = 128;
  int link_dim = 32;
  int role_dim = 16;
  int k_attention = 5;
  int k_history = 5;

  static NetworkDims From(const ModelConfig &config, int words, int prefixes,
                          int suffixes, int roles, int actions);

  int LstmInput() const;
  int LinkCount(int channel) const;
  int LinkSourceDim(int channel) const;
  int RoleTableSize(int table) const;
  int DecoderInput() const;

  friend bool operator==(const NetworkDims &, const NetworkDims &) = default;
};

// All trainable tensors. Embedding tables store one column per id.
template <typename T>
struct Parameters {
  Mat<T> word;
  Mat<T> prefix;
  Mat<T> suffix;
  std::array<Mat<T>, kNumShapeFeatures> shape;
  Mat<T> fw_wx, fw_wh, fw_b;
  Mat<T> bw_wx, bw_wh, bw_b;
  std::array<Mat<T>, kNumLinkChannels> link_proj;
  std::array<Mat<T>, kNumLinkChannels> link_absent;
  std::array<Mat<T>, kNumRoleTables> role;
  Mat<T> w1, b1, w2, b2;

  Parameters() = default;
  explicit Parameters(const NetworkDims &dims);  // all zeros

  // Calls fn(name, tensor) for every tensor in a fixed order.
  void ForEach(const std::function<void(const std::string &, Mat<T> &)> &fn);
  void ForEach(
      const std::function<void(const std::string &, const Mat<T> &)> &fn) const;

  void SetZero();
  int64_t NumValues() const;
  T SquaredNorm() const;
  void Scale(T factor);

  template <typename U>
  Parameters<U> Cast() const {
    Parameters<U> out;
    auto cast = [](const Mat<T> &m) { return Mat<U>(m.template cast<U>()); };
    out.word = cast(word);
    out.prefix = cast(prefix);
    out.suffix = cast(suffix);
    for (size_t i = 0; i < shape.size(); ++i) out.shape[i] = cast(shape[i]);
    out.fw_wx = cast(fw_wx);
    out.fw_wh = cast(fw_wh);
    out.fw_b = cast(fw_b);
    out.bw_wx = cast(bw_wx);
    out.bw_wh = cast(bw_wh);
    out.bw_b = cast(bw_b);
    for (int i = 0; i < kNumLinkChannels; ++i) {
      out.link_proj[i] = cast(link_proj[i]);
      out.link_absent[i] = cast(link_absent[i]);
    }
    for (int i = 0; i < kNumRoleTables; ++i) out.role[i] = cast(role[i]);
    out.w1 = cast(w1);
    out.b1 = cast(b1);
    out.w2 = cast(w2);
    out.b2 = cast(b2);
    return out;
  }

  bool operator==(const Parameters &other) const;
};

// Encoder activations and the cache needed for backpropagation.
template <typename T>
struct Encoding {
  Mat<T> x;           // lstm input, one column per token
  Mat<T> fw_h, fw_c, fw_gates;
  Mat<T> bw_h, bw_c, bw_gates;
  int size() const { return static_cast<int>(x.cols()); }
};

// One decoder step.
template <typename T>
struct StepCache {
  StepFeatures features;
  Vec<T> input;
  Vec<T> pre;
  Vec<T> hidden;
  Vec<T> logits;
};

// Teacher-forced training example.
struct Example {
  std::vector<TokenFeatures> tokens;
  std::vector<StepFeatures> steps;
  std::vector<int> gold;  // action id per step
};

template <typename T>
class Network {
 public:
  Network() = default;
  Network(const NetworkDims &dims, Activation activation);

  const NetworkDims &dims() const { return dims_; }
  Activation activation() const { return activation_; }
  Parameters<T> &params() { return params_; }
  const Parameters<T> &params() const { return params_; }

  // Random initialization; the output layer starts at zero so that the
  // initial policy is uniform over actions. `scale` multiplies the ranges;
  // with `random_output` the output layer is randomized too.
  void Init(uint64_t seed, T scale = T(1), bool random_output = false);

  Encoding<T> Encode(const std::vector<TokenFeatures> &tokens) const;

  // Computes one decoder step. `hidden` holds the activations of earlier
  // steps of the same sequence.
  void Step(const StepFeatures &features, const Encoding<T> &encoding,
            const std::vector<Vec<T>> &hidden, StepCache<T> *cache) const;

  // Sum over steps of cross-entropy times `weight`. When `grad` is given,
  // adds the gradient of that quantity to it.
  T ForwardBackward(const Example &example, T weight, Parameters<T> *grad) const;

  // Mean per-step cross-entropy.
  T Loss(const Example &example) const;

 private:
  void EmbedTokens(const std::vector<TokenFeatures> &tokens, Mat<T> *x) const;
  void RunLstm(const Mat<T> &x, bool backward, Mat<T> *h, Mat<T> *c,
               Mat<T> *gates) const;
  void LstmBackward(const Encoding<T> &enc, bool backward, const Mat<T> &dh,
                    Parameters<T> *grad, Mat<T> *dx) const;
  int LinkOffset(int channel) const;
  int RoleOffset(int table) const;

  NetworkDims dims_;
  Activation activation_ = Activation::kRelu;
  Parameters<T> params_;
};

extern template struct Parameters<float>;
extern template struct Parameters<double>;
extern template class Network<float>;
extern template class Network<double>;

// Numerically stable softmax.
template <typename T>
Vec<T> Softmax(const Vec<T> &logits);

}  // namespace framekit

#endif  // FRAMEKIT_MODEL_NETWORK_H_
