// Copyright 2026 The CMSA-BIP Authors
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

#include "cmsa/controller.hpp"

#include <cmath>

#include "cmsa/error.hpp"

namespace cmsa {

SteppedValue::SteppedValue(Interval range) : range_(range) {
  if (!std::isfinite(range.lower) || !std::isfinite(range.upper) ||
      range.lower > range.upper) {
    throw UsageError("stepped value needs finite bounds with lower <= upper");
  }
}

double SteppedValue::value() const {
  if (k_ == kSteps) return range_.upper;
  return range_.lower + k_ * (range_.upper - range_.lower) / kSteps;
}

void SteppedValue::advance() {
  // lower + 6 * step > upper whenever the range is non-empty; an empty range
  // stays at lower either way.
  k_ = k_ == kSteps ? 0 : k_ + 1;
}

AdaptiveController::AdaptiveController(Interval d_rate, Interval t_sub)
    : d_rate_(d_rate), t_sub_(t_sub) {}

void AdaptiveController::step(bool improved) {
  if (improved) {
    d_rate_.reset();
    t_sub_.reset();
  } else {
    d_rate_.advance();
    t_sub_.advance();
  }
}

}  // namespace cmsa
