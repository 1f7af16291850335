#ifndef FRAMEKIT_MODEL_GRAD_CHECK_H_
#define FRAMEKIT_MODEL_GRAD_CHECK_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "framekit/document.h"
#include "framekit/model/config.h"
#include "framekit/model/network.h"

namespace framekit {

struct GradCheckOptions {
  double step = 1e-5;  // central difference h
  // Denominator floor of the relative error |a - n| / max(|a|, |n|, floor).
  double floor = 1e-6;
  int max_values_per_tensor = 0;  // 0 checks every value
};

struct GradCheckResult {
  double max_relative_error = 0;
  std::string worst_tensor;
  int64_t worst_index = -1;
  int64_t values_checked = 0;
  double loss = 0;
  double gradient_norm = 0;
};

// |analytic - numeric| / max(|analytic|, |numeric|, floor).
double RelativeError(double analytic, double numeric, double floor);

// Central-difference check of `analytic`, the gradient of `f` at `x`.
GradCheckResult CheckGradient(const std::function<double(const std::vector<double> &)> &f,
                              std::vector<double> x, const std::vector<double> &analytic,
                              const GradCheckOptions &options = {});

// Compares analytic gradients of the mean per-action loss of `doc` against
// central differences, in double precision, with every tensor (output layer
// included) randomly initialized from `seed`.
GradCheckResult GradCheck(const Document &doc, const ModelConfig &config,
                          uint64_t seed, const GradCheckOptions &options = {});

// Same check on an existing network and example.
GradCheckResult GradCheck(Network<double> &network, const Example &example,
                          const GradCheckOptions &options = {});

}  // namespace framekit

#endif  // FRAMEKIT_MODEL_GRAD_CHECK_H_
