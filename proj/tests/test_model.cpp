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

#include <doctest.h>

#include <cmath>
#include <random>

#include "imfl/model.hpp"

using namespace imfl;

namespace {

double draw(std::mt19937& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng()) * 0x1p-32);
}

}  // namespace

TEST_CASE("derive_q matches hand arithmetic for the default nozzle") {
  Plant plant{PlantParams{}};
  // pi * 0.2^4 / (8 * 1 * 8 * 60)
  CHECK(plant.q() == doctest::Approx(1.3090e-6).epsilon(1e-4));
}

TEST_CASE("quartic radius dependence: doubling R multiplies Q by 16") {
  PlantParams p;
  const double q1 = derive_q(p);
  p.R *= 2.0;
  const double q2 = derive_q(p);
  CHECK(q2 == 16.0 * q1);  // exact: scaling by powers of two
}

TEST_CASE("parameter validation rejects non-positive values") {
  PlantParams p;
  p.R = 0.0;
  CHECK_THROWS_AS(Plant{p}, ValidationError);
  p = PlantParams{};
  p.R = -1.0;
  CHECK_THROWS_WITH_AS(Plant{p}, "plant.R: R > 0", ValidationError);
  p = PlantParams{};
  p.mu = 0.0;
  CHECK_THROWS_AS(Plant{p}, ValidationError);
  p = PlantParams{};
  p.u_limit = -5.0;
  CHECK_THROWS_AS(Plant{p}, ValidationError);
}

TEST_CASE("cached Q is bit-identical to a fresh derive_q") {
  PlantParams p;
  p.R = 0.37;
  p.mu = 41.5;
  Plant plant{p};
  CHECK(plant.q() == derive_q(p));
}

TEST_CASE("f vanishes at pressure-balanced rest states") {
  Plant plant;
  std::mt19937 rng(42);
  for (int i = 0; i < 20; ++i) {
    const double press = draw(rng, 0.0, 1000.0);
    State x{draw(rng, 0.1, 20.0), 0.0, 0.0, press, press};
    const Vec5 f = f_of(x, plant);
    for (double c : f) CHECK(c == 0.0);
  }
}

TEST_CASE("f at x = (1, 1, 0, p, p)") {
  Plant plant;
  const auto& p = plant.params();
  for (double press : {0.0, 123.0, 987.5}) {
    const Vec5 f = f_of(State{1.0, 1.0, 0.0, press, press}, plant);
    CHECK(f[0] == 1.0);
    CHECK(f[1] == 0.0);
    CHECK(f[2] == -p.w0 * p.w0);
    CHECK(f[3] == -p.beta_s);
    CHECK(f[4] == 0.0);
  }
}

TEST_CASE("f and rhs reject the screw-position singularity") {
  Plant plant;
  CHECK_THROWS_AS(f_of(State{0.0, 1.0, 0.0, 0.0, 0.0}, plant),
                  SingularityError);
  CHECK_THROWS_AS(f_of(State{-2.0, 0.0, 0.0, 0.0, 0.0}, plant),
                  SingularityError);
  CHECK_THROWS_AS(rhs(State{0.0, 1.0, 0.0, 0.0, 0.0}, Input{0.0}, plant),
                  SingularityError);
}

TEST_CASE("g is constant with the drive entry only") {
  Plant plant;
  const Vec5 g = g_of(plant);
  CHECK(g[2] == doctest::Approx(413922.6).epsilon(1e-12));
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 0.0);
  CHECK(g[3] == 0.0);
  CHECK(g[4] == 0.0);
}

TEST_CASE("rhs is affine in the input") {
  Plant plant;
  const Vec5 g = g_of(plant);
  std::mt19937 rng(7);
  for (int i = 0; i < 50; ++i) {
    State x{draw(rng, 0.1, 20.0), draw(rng, -10.0, 10.0), draw(rng, -10.0, 10.0),
            draw(rng, 0.0, 1000.0), draw(rng, 0.0, 1000.0)};
    const double a = draw(rng, -20.0, 20.0);
    const double b = draw(rng, -20.0, 20.0);
    const Vec5 ra = rhs(x, Input{a}, plant);
    const Vec5 rb = rhs(x, Input{b}, plant);
    for (std::size_t j = 0; j < 5; ++j) {
      const double want = (a - b) * g[j];
      const double scale = std::abs(ra[j]) + std::abs(rb[j]) + 1.0;
      CHECK(std::abs((ra[j] - rb[j]) - want) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("rhs with zero input is f; equilibria stay put") {
  Plant plant;
  const State x{3.0, 1.5, -0.5, 600.0, 200.0};
  const Vec5 f = f_of(x, plant);
  const Vec5 r = rhs(x, Input{0.0}, plant);
  for (std::size_t j = 0; j < 5; ++j) CHECK(r[j] == f[j]);

  const State eq{5.0, 0.0, 0.0, 400.0, 400.0};
  for (double c : rhs(eq, Input{0.0}, plant)) CHECK(c == 0.0);
}

TEST_CASE("melt flows from screw to cavity under positive differential") {
  Plant plant;
  const Vec5 f = f_of(State{4.0, 0.0, 0.0, 700.0, 300.0}, plant);
  CHECK(f[3] < 0.0);
  CHECK(f[4] > 0.0);
}

TEST_CASE("non-finite input voltage is rejected") {
  Plant plant;
  const State x{1.0, 0.0, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(rhs(x, Input{std::nan("")}, plant), ValidationError);
}
