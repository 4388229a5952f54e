/*
 * Copyright 2026 The DQI Workbench Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DQI_STATS_HPP_
#define DQI_STATS_HPP_

#include <Eigen/Core>
#include <cmath>
#include <vector>

namespace dqi {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Sample standard deviation with the n-1 denominator (two-pass). Zero when
// fewer than two values are present.
template <typename Derived>
typename Derived::Scalar sample_stddev(const Eigen::DenseBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = x.size();
  if (n < 2) return Scalar(0);
  const Scalar mean = x.derived().mean();
  const Scalar ss = (x.derived().array() - mean).square().sum();
  return std::sqrt(ss / Scalar(n - 1));
}

template <typename Scalar>
Scalar sample_stddev(const std::vector<Scalar>& values) {
  return sample_stddev(
      Eigen::Map<const Vector<Scalar>>(values.data(),
                                       static_cast<Eigen::Index>(values.size())));
}

template <typename Scalar>
constexpr int sign(Scalar v) {
  return (Scalar(0) < v) - (v < Scalar(0));
}

/// sign((v - lo)(hi - v)): +1 strictly inside, 0 on a bound, -1 outside.
template <typename Scalar>
constexpr int band_sign(Scalar v, Scalar lo, Scalar hi) {
  return sign((v - lo) * (hi - v));
}

}  // namespace dqi

#endif  // DQI_STATS_HPP_
