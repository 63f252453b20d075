// Copyright 2026 The mgram Authors.
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

#ifndef MGRAM_FST_WEIGHT_H_
#define MGRAM_FST_WEIGHT_H_

#include <cmath>
#include <limits>

namespace mgram {

// Tropical semiring: Plus = min, Times = +, One = 0, Zero = +inf. Values
// are negative natural-log probabilities.
class TropicalWeight {
 public:
  constexpr TropicalWeight() : value_(0.0) {}
  constexpr explicit TropicalWeight(double value) : value_(value) {}

  static constexpr TropicalWeight Zero() {
    return TropicalWeight(std::numeric_limits<double>::infinity());
  }
  static constexpr TropicalWeight One() { return TropicalWeight(0.0); }

  constexpr double Value() const { return value_; }
  bool IsZero() const { return value_ == std::numeric_limits<double>::infinity(); }
  bool IsMember() const { return !std::isnan(value_) && value_ != -std::numeric_limits<double>::infinity(); }

  friend constexpr TropicalWeight Plus(TropicalWeight a, TropicalWeight b) {
    return a.value_ <= b.value_ ? a : b;
  }
  friend constexpr TropicalWeight Times(TropicalWeight a, TropicalWeight b) {
    return TropicalWeight(a.value_ + b.value_);
  }
  // Left residual: Divide(Times(a, b), a) == b for non-zero a.
  friend constexpr TropicalWeight Divide(TropicalWeight a, TropicalWeight b) {
    return TropicalWeight(a.value_ - b.value_);
  }

  friend constexpr bool operator==(TropicalWeight a, TropicalWeight b) {
    return a.value_ == b.value_;
  }
  friend constexpr bool operator<(TropicalWeight a, TropicalWeight b) {
    return a.value_ < b.value_;
  }

 private:
  double value_;
};

inline bool ApproxEqual(TropicalWeight a, TropicalWeight b, double delta) {
  if (a.IsZero() || b.IsZero()) return a.IsZero() && b.IsZero();
  return std::abs(a.Value() - b.Value()) <= delta;
}

}  // namespace mgram

#endif  // MGRAM_FST_WEIGHT_H_
