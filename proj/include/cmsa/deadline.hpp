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

#ifndef CMSA_DEADLINE_HPP_
#define CMSA_DEADLINE_HPP_

#include <algorithm>
#include <chrono>

namespace cmsa {

// Wall-clock budget.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  static Deadline after(double seconds) {
    return Deadline(Clock::now() +
                    std::chrono::duration_cast<Clock::duration>(
                        std::chrono::duration<double>(std::max(0.0, seconds))));
  }

  bool expired() const { return Clock::now() >= end_; }

  double remaining_seconds() const {
    return std::max(0.0,
                    std::chrono::duration<double>(end_ - Clock::now()).count());
  }

  // The earlier of this deadline and `seconds` from now.
  Deadline tightened(double seconds) const {
    Deadline other = after(seconds);
    return other.end_ < end_ ? other : *this;
  }

 private:
  explicit Deadline(Clock::time_point end) : end_(end) {}

  Clock::time_point end_;
};

}  // namespace cmsa

#endif  // CMSA_DEADLINE_HPP_
