//
// Copyright 2026 The symnorm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef SYMNORM_MEDIAN_HPP_
#define SYMNORM_MEDIAN_HPP_

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

namespace symnorm {

// Median that always returns an element of the sample. For even lengths the
// lower middle element is taken, never an average, so perturbing every input
// by at most C moves the result by at most C.
template <typename T>
T median(std::span<const T> values) {
  if (values.empty()) throw std::invalid_argument("median of empty sample");
  std::vector<T> buf(values.begin(), values.end());
  const auto mid = buf.begin() + static_cast<std::ptrdiff_t>((buf.size() - 1) / 2);
  std::nth_element(buf.begin(), mid, buf.end());
  return *mid;
}

template <typename T>
T median(const std::vector<T>& values) {
  return median(std::span<const T>(values));
}

}  // namespace symnorm

#endif  // SYMNORM_MEDIAN_HPP_
