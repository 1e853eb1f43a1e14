// Copyright 2026 The ZigZag Workbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Central finite-difference oracle for the analytic gradients in zz::nn.

#ifndef ZZ_TESTS_GRAD_CHECK_H_
#define ZZ_TESTS_GRAD_CHECK_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "zz/common.h"
#include "zz/nn.h"

namespace zz::testing {

struct GradCheckResult {
  size_t checked = 0;
  size_t passed = 0;
  size_t excluded = 0;
  double worst = 0.0;
  std::string worst_name;

  double PassRate() const { return checked ? static_cast<double>(passed) / checked : 1.0; }
};

using Objective = std::function<double(const Model&, Gradients*)>;
// Signs of p1 - p2 over the discrepancy terms; a change marks a kink.
using KinkProbe = std::function<std::vector<int>(const Model&)>;

inline double RelativeError(double analytic, double numeric) {
  const double scale = std::max(std::fabs(analytic), std::fabs(numeric));
  if (scale < 1e-9) return 0.0;
  return std::fabs(analytic - numeric) / scale;
}

// Checks every entry of the parameter sets named in `which` ("F", "C1", "C2").
inline GradCheckResult CheckGradients(const Model& model, const Objective& objective,
                                      const std::vector<std::string>& which,
                                      double tolerance = 1e-4, double h = 1e-4,
                                      const KinkProbe& kinks = nullptr) {
  Gradients grads = ZeroGradients(model);
  objective(model, &grads);
  GradCheckResult result;
  for (const auto& set_name : which) {
    ParamSet Model::*member = set_name == "F" ? &Model::f : set_name == "C1" ? &Model::c1 : &Model::c2;
    const ParamSet& analytic = set_name == "F" ? grads.f : set_name == "C1" ? grads.c1 : grads.c2;
    for (size_t t = 0; t < (model.*member).tensors.size(); ++t) {
      const Tensor& tensor = (model.*member).tensors[t];
      for (size_t k = 0; k < tensor.data.size(); ++k) {
        Model plus = model;
        Model minus = model;
        (plus.*member).tensors[t].data[k] += h;
        (minus.*member).tensors[t].data[k] -= h;
        if (kinks && kinks(plus) != kinks(minus)) {
          ++result.excluded;
          continue;
        }
        const double numeric = (objective(plus, nullptr) - objective(minus, nullptr)) / (2 * h);
        const double err = RelativeError(analytic.tensors[t].data[k], numeric);
        ++result.checked;
        if (err <= tolerance) ++result.passed;
        if (err > result.worst) {
          result.worst = err;
          result.worst_name = set_name + "." + tensor.name + "[" + std::to_string(k) + "]";
        }
      }
    }
  }
  return result;
}

inline std::vector<EncodedExample> RandomExamples(Rng& rng, int vocab, int length, size_t n) {
  std::vector<EncodedExample> out(n);
  for (size_t i = 0; i < n; ++i) {
    auto& e = out[i];
    e.fragment_id = "r" + std::to_string(i);
    e.label = static_cast<int>(rng.Below(2));
    const int used = static_cast<int>(rng.Range(1, length));
    e.ids.assign(static_cast<size_t>(length), kPadId);
    for (int k = 0; k < used; ++k) e.ids[static_cast<size_t>(k)] = static_cast<int>(rng.Range(1, vocab - 1));
  }
  return out;
}

inline Batch Pointers(const std::vector<EncodedExample>& examples) {
  Batch out;
  for (const auto& e : examples) out.push_back(&e);
  return out;
}

inline KinkProbe DiscKinks(const Batch& batch) {
  return [batch](const Model& m) {
    std::vector<int> signs;
    for (const EncodedExample* e : batch) {
      const double p1 = ForwardProb(m.config, m.f, m.c1, e->ids);
      const double p2 = ForwardProb(m.config, m.f, m.c2, e->ids);
      signs.push_back((p1 > p2) - (p1 < p2));
    }
    return signs;
  };
}

}  // namespace zz::testing

#endif  // ZZ_TESTS_GRAD_CHECK_H_
