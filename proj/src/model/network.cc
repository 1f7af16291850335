#include "framekit/model/network.h"

#include <cmath>
#include <random>

#include "framekit/error.h"

namespace framekit {

namespace {

// Where a linked feature reads its activation from.
enum class Source { kAbsent, kForward, kBackward, kHidden };

struct LinkRef {
  Source source = Source::kAbsent;
  int index = 0;
};

LinkRef Resolve(int channel, int j, const StepFeatures &f) {
  auto ref = [](Source s, int index) {
    return index < 0 ? LinkRef{} : LinkRef{s, index};
  };
  switch (channel) {
    case kLinkCursorFw: return ref(Source::kForward, f.cursor);
    case kLinkCursorBw: return ref(Source::kBackward, f.cursor);
    case kLinkAttentionFw: return ref(Source::kForward, f.attention_token[j]);
    case kLinkAttentionBw: return ref(Source::kBackward, f.attention_token[j]);
    case kLinkCreate: return ref(Source::kHidden, f.create_step[j]);
    case kLinkFocus: return ref(Source::kHidden, f.focus_step[j]);
    case kLinkHistory: return ref(Source::kHidden, f.history_step[j]);
  }
  return LinkRef{};
}

template <typename T>
T Sigmoid(T x) {
  return T(1) / (T(1) + std::exp(-x));
}

double Uniform(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

template <typename T>
void Fill(Mat<T> &m, std::mt19937_64 &rng, double range) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      m(i, j) = static_cast<T>((2.0 * Uniform(rng) - 1.0) * range);
    }
  }
}

double Glorot(const Mat<double>::Index rows, const Mat<double>::Index cols) {
  return std::sqrt(6.0 / static_cast<double>(rows + cols));
}

}  // namespace

const char *LinkChannelName(int channel) {
  switch (channel) {
    case kLinkCursorFw: return "cursor_fw";
    case kLinkCursorBw: return "cursor_bw";
    case kLinkAttentionFw: return "attention_fw";
    case kLinkAttentionBw: return "attention_bw";
    case kLinkCreate: return "create";
    case kLinkFocus: return "focus";
    case kLinkHistory: return "history";
  }
  return "?";
}

NetworkDims NetworkDims::From(const ModelConfig &config, int words, int prefixes,
                              int suffixes, int roles, int actions) {
  NetworkDims d;
  d.words = words;
  d.prefixes = prefixes;
  d.suffixes = suffixes;
  d.roles = roles;
  d.actions = actions;
  d.word_dim = config.word_dim;
  d.affix_dim = config.affix_dim;
  d.shape_dim = config.shape_dim;
  d.max_affix = config.max_affix;
  d.lstm_dim = config.lstm_dim;
  d.hidden_dim = config.hidden_dim;
  d.link_dim = config.link_dim;
  d.role_dim = config.role_dim;
  d.k_attention = config.k_attention;
  d.k_history = config.k_history;
  return d;
}

int NetworkDims::LstmInput() const {
  return word_dim + 2 * max_affix * affix_dim + kNumShapeFeatures * shape_dim;
}

int NetworkDims::LinkCount(int channel) const {
  switch (channel) {
    case kLinkCursorFw:
    case kLinkCursorBw: return 1;
    case kLinkHistory: return k_history;
    default: return k_attention;
  }
}

int NetworkDims::LinkSourceDim(int channel) const {
  switch (channel) {
    case kLinkCreate:
    case kLinkFocus:
    case kLinkHistory: return hidden_dim;
    default: return lstm_dim;
  }
}

int NetworkDims::RoleTableSize(int table) const {
  int k = k_attention, r = roles;
  switch (table) {
    case kRoleSRT: return 1 + k * r * k;
    case kRoleSR: return 1 + k * r;
    case kRoleRT: return 1 + r * k;
    case kRoleST: return 1 + k * k;
  }
  return 1;
}

int NetworkDims::DecoderInput() const {
  int n = 0;
  for (int ch = 0; ch < kNumLinkChannels; ++ch) n += LinkCount(ch) * link_dim;
  return n + kNumRoleTables * role_dim;
}

template <typename T>
Parameters<T>::Parameters(const NetworkDims &d) {
  word = Mat<T>::Zero(d.word_dim, d.words);
  prefix = Mat<T>::Zero(d.affix_dim, d.prefixes);
  suffix = Mat<T>::Zero(d.affix_dim, d.suffixes);
  for (int k = 0; k < kNumShapeFeatures; ++k) {
    shape[k] = Mat<T>::Zero(d.shape_dim, kShapeSizes[k]);
  }
  int h4 = 4 * d.lstm_dim;
  fw_wx = Mat<T>::Zero(h4, d.LstmInput());
  fw_wh = Mat<T>::Zero(h4, d.lstm_dim);
  fw_b = Mat<T>::Zero(h4, 1);
  bw_wx = Mat<T>::Zero(h4, d.LstmInput());
  bw_wh = Mat<T>::Zero(h4, d.lstm_dim);
  bw_b = Mat<T>::Zero(h4, 1);
  for (int ch = 0; ch < kNumLinkChannels; ++ch) {
    link_proj[ch] = Mat<T>::Zero(d.link_dim, d.LinkSourceDim(ch));
    link_absent[ch] = Mat<T>::Zero(d.link_dim, 1);
  }
  for (int t = 0; t < kNumRoleTables; ++t) {
    role[t] = Mat<T>::Zero(d.role_dim, d.RoleTableSize(t));
  }
  w1 = Mat<T>::Zero(d.hidden_dim, d.DecoderInput());
  b1 = Mat<T>::Zero(d.hidden_dim, 1);
  w2 = Mat<T>::Zero(d.actions, d.hidden_dim);
  b2 = Mat<T>::Zero(d.actions, 1);
}

template <typename T>
void Parameters<T>::ForEach(
    const std::function<void(const std::string &, Mat<T> &)> &fn) {
  static const char *kRoleNames[kNumRoleTables] = {"srt", "sr", "rt", "st"};
  fn("embed/word", word);
  fn("embed/prefix", prefix);
  fn("embed/suffix", suffix);
  for (int k = 0; k < kNumShapeFeatures; ++k) {
    fn("embed/shape" + std::to_string(k), shape[k]);
  }
  fn("lstm_fw/wx", fw_wx);
  fn("lstm_fw/wh", fw_wh);
  fn("lstm_fw/b", fw_b);
  fn("lstm_bw/wx", bw_wx);
  fn("lstm_bw/wh", bw_wh);
  fn("lstm_bw/b", bw_b);
  for (int ch = 0; ch < kNumLinkChannels; ++ch) {
    std::string base = std::string("link/") + LinkChannelName(ch);
    fn(base + "/proj", link_proj[ch]);
    fn(base + "/absent", link_absent[ch]);
  }
  for (int t = 0; t < kNumRoleTables; ++t) {
    fn(std::string("role/") + kRoleNames[t], role[t]);
  }
  fn("ff/w1", w1);
  fn("ff/b1", b1);
  fn("ff/w2", w2);
  fn("ff/b2", b2);
}

template <typename T>
void Parameters<T>::ForEach(
    const std::function<void(const std::string &, const Mat<T> &)> &fn) const {
  const_cast<Parameters<T> *>(this)->ForEach(
      [&](const std::string &name, Mat<T> &m) { fn(name, m); });
}

template <typename T>
void Parameters<T>::SetZero() {
  ForEach([](const std::string &, Mat<T> &m) { m.setZero(); });
}

template <typename T>
int64_t Parameters<T>::NumValues() const {
  int64_t n = 0;
  ForEach([&](const std::string &, const Mat<T> &m) { n += m.size(); });
  return n;
}

template <typename T>
T Parameters<T>::SquaredNorm() const {
  T sum = 0;
  ForEach([&](const std::string &, const Mat<T> &m) { sum += m.squaredNorm(); });
  return sum;
}

template <typename T>
void Parameters<T>::Scale(T factor) {
  ForEach([&](const std::string &, Mat<T> &m) { m *= factor; });
}

template <typename T>
bool Parameters<T>::operator==(const Parameters &other) const {
  std::vector<const Mat<T> *> a, b;
  ForEach([&](const std::string &, const Mat<T> &m) { a.push_back(&m); });
  other.ForEach([&](const std::string &, const Mat<T> &m) { b.push_back(&m); });
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i]->rows() != b[i]->rows() || a[i]->cols() != b[i]->cols()) return false;
    if (*a[i] != *b[i]) return false;
  }
  return true;
}

template <typename T>
Vec<T> Softmax(const Vec<T> &logits) {
  if (logits.size() == 0) return logits;
  T max = logits.maxCoeff();
  Vec<T> e = (logits.array() - max).exp().matrix();
  return e / e.sum();
}

template <typename T>
Network<T>::Network(const NetworkDims &dims, Activation activation)
    : dims_(dims), activation_(activation), params_(dims) {}

template <typename T>
void Network<T>::Init(uint64_t seed, T scale, bool random_output) {
  std::mt19937_64 rng(seed);
  double s = static_cast<double>(scale);
  params_.ForEach([&](const std::string &name, Mat<T> &m) {
    bool embedding = name.rfind("embed/", 0) == 0 || name.rfind("role/", 0) == 0 ||
                     name.find("/absent") != std::string::npos;
    bool bias = name == "lstm_fw/b" || name == "lstm_bw/b" || name == "ff/b1" ||
                name == "ff/b2";
    bool output = name == "ff/w2" || name == "ff/b2";
    if (output && !random_output) {
      m.setZero();
    } else if (bias) {
      if (random_output) {
        Fill(m, rng, 0.1 * s);
      } else {
        m.setZero();
      }
    } else if (embedding) {
      Fill(m, rng, s / std::sqrt(static_cast<double>(m.rows())));
    } else {
      Fill(m, rng, s * Glorot(m.rows(), m.cols()));
    }
  });
  if (!random_output) {
    // Forget gate bias.
    params_.fw_b.block(dims_.lstm_dim, 0, dims_.lstm_dim, 1).setConstant(T(1));
    params_.bw_b.block(dims_.lstm_dim, 0, dims_.lstm_dim, 1).setConstant(T(1));
  }
}

template <typename T>
void Network<T>::EmbedTokens(const std::vector<TokenFeatures> &tokens,
                             Mat<T> *x) const {
  const NetworkDims &d = dims_;
  x->resize(d.LstmInput(), static_cast<Eigen::Index>(tokens.size()));
  auto check = [](int id, Eigen::Index size) {
    if (id < 0 || id >= size) {
      throw Error(ErrorCode::kShapeMismatch, "feature id out of range");
    }
  };
  for (size_t t = 0; t < tokens.size(); ++t) {
    const TokenFeatures &f = tokens[t];
    if (static_cast<int>(f.prefixes.size()) != d.max_affix ||
        static_cast<int>(f.suffixes.size()) != d.max_affix) {
      throw Error(ErrorCode::kShapeMismatch, "affix count differs from config");
    }
    auto col = x->col(static_cast<Eigen::Index>(t));
    int off = 0;
    check(f.word, params_.word.cols());
    col.segment(off, d.word_dim) = params_.word.col(f.word);
    off += d.word_dim;
    for (int a = 0; a < d.max_affix; ++a) {
      check(f.prefixes[a], params_.prefix.cols());
      col.segment(off, d.affix_dim) = params_.prefix.col(f.prefixes[a]);
      off += d.affix_dim;
    }
    for (int a = 0; a < d.max_affix; ++a) {
      check(f.suffixes[a], params_.suffix.cols());
      col.segment(off, d.affix_dim) = params_.suffix.col(f.suffixes[a]);
      off += d.affix_dim;
    }
    for (int k = 0; k < kNumShapeFeatures; ++k) {
      check(f.shape[k], params_.shape[k].cols());
      col.segment(off, d.shape_dim) = params_.shape[k].col(f.shape[k]);
      off += d.shape_dim;
    }
  }
}

template <typename T>
void Network<T>::RunLstm(const Mat<T> &x, bool backward, Mat<T> *h, Mat<T> *c,
                         Mat<T> *gates) const {
  const int H = dims_.lstm_dim;
  const Eigen::Index n = x.cols();
  const Mat<T> &wx = backward ? params_.bw_wx : params_.fw_wx;
  const Mat<T> &wh = backward ? params_.bw_wh : params_.fw_wh;
  const Mat<T> &b = backward ? params_.bw_b : params_.fw_b;
  h->resize(H, n);
  c->resize(H, n);
  gates->resize(4 * H, n);
  // Input projections for all tokens at once.
  Mat<T> zx = wx * x;
  Vec<T> h_prev = Vec<T>::Zero(H), c_prev = Vec<T>::Zero(H);
  Vec<T> z(4 * H);
  for (Eigen::Index s = 0; s < n; ++s) {
    Eigen::Index t = backward ? n - 1 - s : s;
    z.noalias() = zx.col(t) + b.col(0);
    z.noalias() += wh * h_prev;
    auto g = gates->col(t);
    for (int i = 0; i < H; ++i) {
      g(i) = Sigmoid(z(i));
      g(H + i) = Sigmoid(z(H + i));
      g(2 * H + i) = std::tanh(z(2 * H + i));
      g(3 * H + i) = Sigmoid(z(3 * H + i));
      T cv = g(H + i) * c_prev(i) + g(i) * g(2 * H + i);
      (*c)(i, t) = cv;
      (*h)(i, t) = g(3 * H + i) * std::tanh(cv);
    }
    h_prev = h->col(t);
    c_prev = c->col(t);
  }
}

template <typename T>
Encoding<T> Network<T>::Encode(const std::vector<TokenFeatures> &tokens) const {
  Encoding<T> enc;
  EmbedTokens(tokens, &enc.x);
  RunLstm(enc.x, false, &enc.fw_h, &enc.fw_c, &enc.fw_gates);
  RunLstm(enc.x, true, &enc.bw_h, &enc.bw_c, &enc.bw_gates);
  return enc;
}

template <typename T>
int Network<T>::LinkOffset(int channel) const {
  int off = 0;
  for (int ch = 0; ch < channel; ++ch) off += dims_.LinkCount(ch) * dims_.link_dim;
  return off;
}

template <typename T>
int Network<T>::RoleOffset(int table) const {
  return LinkOffset(kNumLinkChannels) + table * dims_.role_dim;
}

template <typename T>
void Network<T>::Step(const StepFeatures &f, const Encoding<T> &enc,
                      const std::vector<Vec<T>> &hidden, StepCache<T> *cache) const {
  const NetworkDims &d = dims_;
  const int L = d.link_dim;
  if (static_cast<int>(f.attention_token.size()) != d.k_attention ||
      static_cast<int>(f.create_step.size()) != d.k_attention ||
      static_cast<int>(f.focus_step.size()) != d.k_attention ||
      static_cast<int>(f.history_step.size()) != d.k_history) {
    throw Error(ErrorCode::kShapeMismatch, "feature count differs from config");
  }
  cache->features = f;
  Vec<T> &in = cache->input;
  in.resize(d.DecoderInput());
  for (int ch = 0; ch < kNumLinkChannels; ++ch) {
    int base = LinkOffset(ch);
    for (int j = 0; j < d.LinkCount(ch); ++j) {
      auto seg = in.segment(base + j * L, L);
      LinkRef ref = Resolve(ch, j, f);
      switch (ref.source) {
        case Source::kAbsent:
          seg = params_.link_absent[ch].col(0);
          break;
        case Source::kForward:
          if (ref.index >= enc.size()) {
            throw Error(ErrorCode::kShapeMismatch, "token index out of range");
          }
          seg.noalias() = params_.link_proj[ch] * enc.fw_h.col(ref.index);
          break;
        case Source::kBackward:
          if (ref.index >= enc.size()) {
            throw Error(ErrorCode::kShapeMismatch, "token index out of range");
          }
          seg.noalias() = params_.link_proj[ch] * enc.bw_h.col(ref.index);
          break;
        case Source::kHidden:
          if (ref.index >= static_cast<int>(hidden.size())) {
            throw Error(ErrorCode::kShapeMismatch, "step index out of range");
          }
          seg.noalias() = params_.link_proj[ch] * hidden[ref.index];
          break;
      }
    }
  }
  for (int t = 0; t < kNumRoleTables; ++t) {
    auto seg = in.segment(RoleOffset(t), d.role_dim);
    const Mat<T> &table = params_.role[t];
    if (f.roles[t].empty()) {
      seg = table.col(0);
      continue;
    }
    seg.setZero();
    for (int id : f.roles[t]) {
      if (id < 0 || id >= table.cols()) {
        throw Error(ErrorCode::kShapeMismatch, "role feature id out of range");
      }
      seg += table.col(id);
    }
  }
  cache->pre.noalias() = params_.w1 * in;
  cache->pre += params_.b1.col(0);
  cache->hidden.resize(d.hidden_dim);
  for (int i = 0; i < d.hidden_dim; ++i) {
    T p = cache->pre(i);
    switch (activation_) {
      case Activation::kRelu: cache->hidden(i) = p > T(0) ? p : T(0); break;
      case Activation::kTanh: cache->hidden(i) = std::tanh(p); break;
      case Activation::kIdentity: cache->hidden(i) = p; break;
    }
  }
  cache->logits.noalias() = params_.w2 * cache->hidden;
  cache->logits += params_.b2.col(0);
}

template <typename T>
void Network<T>::LstmBackward(const Encoding<T> &enc, bool backward,
                              const Mat<T> &dh_ext, Parameters<T> *grad,
                              Mat<T> *dx) const {
  const int H = dims_.lstm_dim;
  const Eigen::Index n = enc.x.cols();
  const Mat<T> &wx = backward ? params_.bw_wx : params_.fw_wx;
  const Mat<T> &wh = backward ? params_.bw_wh : params_.fw_wh;
  Mat<T> &gwx = backward ? grad->bw_wx : grad->fw_wx;
  Mat<T> &gwh = backward ? grad->bw_wh : grad->fw_wh;
  Mat<T> &gb = backward ? grad->bw_b : grad->fw_b;
  const Mat<T> &hs = backward ? enc.bw_h : enc.fw_h;
  const Mat<T> &cs = backward ? enc.bw_c : enc.fw_c;
  const Mat<T> &gates = backward ? enc.bw_gates : enc.fw_gates;

  Mat<T> dz_all(4 * H, n);
  Vec<T> dh_next = Vec<T>::Zero(H), dc_next = Vec<T>::Zero(H);
  Vec<T> dz(4 * H);
  // Reverse of the forward processing order.
  for (Eigen::Index s = n - 1; s >= 0; --s) {
    Eigen::Index t = backward ? n - 1 - s : s;
    Eigen::Index prev = backward ? t + 1 : t - 1;
    bool has_prev = s > 0;
    auto g = gates.col(t);
    for (int i = 0; i < H; ++i) {
      T ig = g(i), fg = g(H + i), gg = g(2 * H + i), og = g(3 * H + i);
      T tc = std::tanh(cs(i, t));
      T dh = dh_ext(i, t) + dh_next(i);
      T d_o = dh * tc;
      T dc = dh * og * (T(1) - tc * tc) + dc_next(i);
      T cprev = has_prev ? cs(i, prev) : T(0);
      dz(i) = dc * gg * ig * (T(1) - ig);
      dz(H + i) = dc * cprev * fg * (T(1) - fg);
      dz(2 * H + i) = dc * ig * (T(1) - gg * gg);
      dz(3 * H + i) = d_o * og * (T(1) - og);
      dc_next(i) = dc * fg;
    }
    dz_all.col(t) = dz;
    if (has_prev) gwh.noalias() += dz * hs.col(prev).transpose();
    dh_next.noalias() = wh.transpose() * dz;
  }
  gwx.noalias() += dz_all * enc.x.transpose();
  gb.col(0) += dz_all.rowwise().sum();
  dx->noalias() += wx.transpose() * dz_all;
}

template <typename T>
T Network<T>::ForwardBackward(const Example &ex, T weight,
                              Parameters<T> *grad) const {
  const NetworkDims &d = dims_;
  const int L = d.link_dim;
  if (ex.steps.size() != ex.gold.size()) {
    throw Error(ErrorCode::kShapeMismatch, "steps and gold actions differ");
  }
  Encoding<T> enc = Encode(ex.tokens);
  const size_t S = ex.steps.size();
  std::vector<StepCache<T>> caches(S);
  std::vector<Vec<T>> hidden;
  hidden.reserve(S);
  std::vector<Vec<T>> probs(S);
  T loss = 0;
  for (size_t i = 0; i < S; ++i) {
    Step(ex.steps[i], enc, hidden, &caches[i]);
    hidden.push_back(caches[i].hidden);
    int gold = ex.gold[i];
    if (gold < 0 || gold >= d.actions) {
      throw Error(ErrorCode::kShapeMismatch, "gold action id out of range");
    }
    const Vec<T> &z = caches[i].logits;
    T max = z.maxCoeff();
    T lse = max + std::log((z.array() - max).exp().sum());
    loss += lse - z(gold);
    if (grad != nullptr) probs[i] = (z.array() - lse).exp().matrix();
  }
  if (grad == nullptr) return weight * loss;

  std::vector<Vec<T>> dhidden(S, Vec<T>::Zero(d.hidden_dim));
  Mat<T> dfw = Mat<T>::Zero(d.lstm_dim, enc.size());
  Mat<T> dbw = Mat<T>::Zero(d.lstm_dim, enc.size());
  Vec<T> dlogits, dh, dpre, din;
  for (size_t ii = S; ii-- > 0;) {
    const StepCache<T> &c = caches[ii];
    dlogits = weight * probs[ii];
    dlogits(ex.gold[ii]) -= weight;
    grad->w2.noalias() += dlogits * c.hidden.transpose();
    grad->b2.col(0) += dlogits;
    dh.noalias() = params_.w2.transpose() * dlogits;
    dh += dhidden[ii];
    dpre.resize(d.hidden_dim);
    for (int i = 0; i < d.hidden_dim; ++i) {
      switch (activation_) {
        case Activation::kRelu: dpre(i) = c.pre(i) > T(0) ? dh(i) : T(0); break;
        case Activation::kTanh:
          dpre(i) = dh(i) * (T(1) - c.hidden(i) * c.hidden(i));
          break;
        case Activation::kIdentity: dpre(i) = dh(i); break;
      }
    }
    grad->w1.noalias() += dpre * c.input.transpose();
    grad->b1.col(0) += dpre;
    din.noalias() = params_.w1.transpose() * dpre;

    const StepFeatures &f = c.features;
    for (int ch = 0; ch < kNumLinkChannels; ++ch) {
      int base = LinkOffset(ch);
      for (int j = 0; j < d.LinkCount(ch); ++j) {
        auto dl = din.segment(base + j * L, L);
        LinkRef ref = Resolve(ch, j, f);
        const Mat<T> &proj = params_.link_proj[ch];
        Mat<T> &gproj = grad->link_proj[ch];
        switch (ref.source) {
          case Source::kAbsent:
            grad->link_absent[ch].col(0) += dl;
            break;
          case Source::kForward:
            gproj.noalias() += dl * enc.fw_h.col(ref.index).transpose();
            dfw.col(ref.index).noalias() += proj.transpose() * dl;
            break;
          case Source::kBackward:
            gproj.noalias() += dl * enc.bw_h.col(ref.index).transpose();
            dbw.col(ref.index).noalias() += proj.transpose() * dl;
            break;
          case Source::kHidden:
            gproj.noalias() += dl * hidden[ref.index].transpose();
            dhidden[ref.index].noalias() += proj.transpose() * dl;
            break;
        }
      }
    }
    for (int t = 0; t < kNumRoleTables; ++t) {
      auto seg = din.segment(RoleOffset(t), d.role_dim);
      if (f.roles[t].empty()) {
        grad->role[t].col(0) += seg;
      } else {
        for (int id : f.roles[t]) grad->role[t].col(id) += seg;
      }
    }
  }

  if (enc.size() > 0) {
    Mat<T> dx = Mat<T>::Zero(d.LstmInput(), enc.size());
    LstmBackward(enc, false, dfw, grad, &dx);
    LstmBackward(enc, true, dbw, grad, &dx);
    for (size_t t = 0; t < ex.tokens.size(); ++t) {
      const TokenFeatures &tf = ex.tokens[t];
      auto col = dx.col(static_cast<Eigen::Index>(t));
      int off = 0;
      grad->word.col(tf.word) += col.segment(off, d.word_dim);
      off += d.word_dim;
      for (int a = 0; a < d.max_affix; ++a) {
        grad->prefix.col(tf.prefixes[a]) += col.segment(off, d.affix_dim);
        off += d.affix_dim;
      }
      for (int a = 0; a < d.max_affix; ++a) {
        grad->suffix.col(tf.suffixes[a]) += col.segment(off, d.affix_dim);
        off += d.affix_dim;
      }
      for (int k = 0; k < kNumShapeFeatures; ++k) {
        grad->shape[k].col(tf.shape[k]) += col.segment(off, d.shape_dim);
        off += d.shape_dim;
      }
    }
  }
  return weight * loss;
}

template <typename T>
T Network<T>::Loss(const Example &example) const {
  if (example.steps.empty()) return T(0);
  return ForwardBackward(example, T(1) / static_cast<T>(example.steps.size()),
                         nullptr);
}

template struct Parameters<float>;
template struct Parameters<double>;
template class Network<float>;
template class Network<double>;
template Vec<float> Softmax(const Vec<float> &);
template Vec<double> Softmax(const Vec<double> &);

}  // namespace framekit
