#include "framekit/model/grad_check.h"

#include <algorithm>
#include <cmath>

#include "framekit/error.h"
#include "framekit/model/model.h"

namespace framekit {

double RelativeError(double analytic, double numeric, double floor) {
  double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

GradCheckResult CheckGradient(const std::function<double(const std::vector<double> &)> &f,
                              std::vector<double> x, const std::vector<double> &analytic,
                              const GradCheckOptions &options) {
  if (analytic.size() != x.size()) {
    throw Error(ErrorCode::kShapeMismatch, "gradient and point differ in size");
  }
  GradCheckResult result;
  result.loss = f(x);
  for (size_t i = 0; i < x.size(); ++i) {
    result.gradient_norm += analytic[i] * analytic[i];
    double saved = x[i];
    x[i] = saved + options.step;
    double plus = f(x);
    x[i] = saved - options.step;
    double minus = f(x);
    x[i] = saved;
    double rel = RelativeError(analytic[i], (plus - minus) / (2 * options.step), options.floor);
    ++result.values_checked;
    if (result.worst_index < 0 || rel > result.max_relative_error) {
      result.max_relative_error = rel;
      result.worst_index = static_cast<int64_t>(i);
    }
  }
  result.gradient_norm = std::sqrt(result.gradient_norm);
  return result;
}

GradCheckResult GradCheck(Network<double> &network, const Example &example,
                          const GradCheckOptions &options) {
  GradCheckResult result;
  const double weight =
      example.steps.empty() ? 0.0 : 1.0 / static_cast<double>(example.steps.size());
  Parameters<double> grad(network.dims());
  result.loss = network.ForwardBackward(example, weight, &grad);
  result.gradient_norm = std::sqrt(grad.SquaredNorm());

  std::vector<std::pair<std::string, Mat<double> *>> params, grads;
  network.params().ForEach(
      [&](const std::string &name, Mat<double> &m) { params.emplace_back(name, &m); });
  grad.ForEach(
      [&](const std::string &name, Mat<double> &m) { grads.emplace_back(name, &m); });

  const double h = options.step;
  for (size_t t = 0; t < params.size(); ++t) {
    Mat<double> &p = *params[t].second;
    const Mat<double> &g = *grads[t].second;
    Eigen::Index n = p.size();
    Eigen::Index stride = 1;
    if (options.max_values_per_tensor > 0 && n > options.max_values_per_tensor) {
      stride = (n + options.max_values_per_tensor - 1) / options.max_values_per_tensor;
    }
    for (Eigen::Index i = 0; i < n; i += stride) {
      double saved = p.data()[i];
      p.data()[i] = saved + h;
      double plus = network.ForwardBackward(example, weight, nullptr);
      p.data()[i] = saved - h;
      double minus = network.ForwardBackward(example, weight, nullptr);
      p.data()[i] = saved;
      double numeric = (plus - minus) / (2 * h);
      double analytic = g.data()[i];
      double rel = RelativeError(analytic, numeric, options.floor);
      ++result.values_checked;
      if (result.worst_index < 0 || rel > result.max_relative_error) {
        result.max_relative_error = rel;
        result.worst_tensor = params[t].first;
        result.worst_index = i;
      }
    }
  }
  return result;
}

GradCheckResult GradCheck(const Document &doc, const ModelConfig &config,
                          uint64_t seed, const GradCheckOptions &options) {
  Model model = Model::Build(std::span<const Document>(&doc, 1), config, seed);
  Example example = model.MakeExample(doc);
  Network<double> network(model.network().dims(), config.activation);
  network.Init(seed, config.init_scale, true);
  return GradCheck(network, example, options);
}

}  // namespace framekit
