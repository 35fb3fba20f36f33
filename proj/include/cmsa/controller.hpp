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

#ifndef CMSA_CONTROLLER_HPP_
#define CMSA_CONTROLLER_HPP_

namespace cmsa {

struct Interval {
  double lower;
  double upper;
};

// Value that climbs from `lower` to `upper` in five equal steps and wraps back
// to `lower` once it would exceed `upper`.
//
// The value is kept as lower + k * (upper - lower) / 5 with an integer step
// count k, so the top of the range is hit exactly and round-off cannot cause
// an early wrap.
class SteppedValue {
 public:
  static constexpr int kSteps = 5;

  explicit SteppedValue(Interval range);

  double value() const;
  double step() const { return (range_.upper - range_.lower) / kSteps; }
  void reset() { k_ = 0; }
  void advance();

 private:
  Interval range_;
  int k_ = 0;
};

// Drives the determinism rate and the sub-solver time limit: both go back to
// their lower bounds after an improving iteration and step upwards otherwise.
class AdaptiveController {
 public:
  AdaptiveController(Interval d_rate, Interval t_sub);

  double d_rate() const { return d_rate_.value(); }
  double t_sub() const { return t_sub_.value(); }

  void step(bool improved);

 private:
  SteppedValue d_rate_;
  SteppedValue t_sub_;
};

}  // namespace cmsa

#endif  // CMSA_CONTROLLER_HPP_
