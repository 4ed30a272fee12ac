// Copyright 2026 The imfl Authors
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

#ifndef IMFL_INTEGRATE_HPP_
#define IMFL_INTEGRATE_HPP_

#include <array>
#include <cstddef>

namespace imfl {

// Classic 4-stage Runge-Kutta update for x' = rhs(t, x).
template <std::size_t N, class Rhs>
std::array<double, N> rk4(double t, const std::array<double, N>& x, double dt,
                          Rhs&& rhs) {
  using V = std::array<double, N>;
  const auto shifted = [&x](double a, const V& k) {
    V r;
    for (std::size_t i = 0; i < N; ++i) r[i] = x[i] + a * k[i];
    return r;
  };
  const V k1 = rhs(t, x);
  const V k2 = rhs(t + dt / 2.0, shifted(dt / 2.0, k1));
  const V k3 = rhs(t + dt / 2.0, shifted(dt / 2.0, k2));
  const V k4 = rhs(t + dt, shifted(dt, k3));
  V out;
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

}  // namespace imfl

#endif  // IMFL_INTEGRATE_HPP_
