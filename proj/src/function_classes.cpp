// Copyright 2026 The cmdplab Authors.
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

#include "cmdplab/function_classes.hpp"

namespace cmdplab {

Vector project_weights(const Vector& v, const WeightClassBox& box) {
  return v.cwiseMax(0.0).cwiseMin(box.upper_bound);
}

Vector argmin_linear_q(const Vector& coefficients, const QClassBox& box) {
  Vector q(coefficients.size());
  for (Index k = 0; k < coefficients.size(); ++k)
    q[k] = coefficients[k] < 0.0 ? box.upper_bound : 0.0;
  return q;
}

Vector argmin_linear_q(const Vector& coefficients, double gamma) {
  return argmin_linear_q(coefficients, QClassBox::for_gamma(gamma));
}

}  // namespace cmdplab
