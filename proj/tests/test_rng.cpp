// Copyright 2026 The diatom authors.
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

#include <doctest.h>

#include <set>

#include "diatom/rng.hpp"

using namespace diatom;

TEST_CASE("derived engines are deterministic and tag-sensitive") {
  auto a1 = rng::derive_engine(42, "stage", 7);
  auto a2 = rng::derive_engine(42, "stage", 7);
  auto b = rng::derive_engine(42, "stage", 8);
  auto c = rng::derive_engine(42, "other", 7);
  CHECK(a1() == a2());
  CHECK(a1() != b());
  CHECK(a1() != c());
}

TEST_CASE("uniform01 stays in [0,1)") {
  auto eng = rng::make_engine(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng::uniform01(eng);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("uniform_below covers the range and rejects n=0") {
  auto eng = rng::make_engine(2);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = rng::uniform_below(eng, 7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
  CHECK_THROWS_AS(rng::uniform_below(eng, 0), std::invalid_argument);
}

TEST_CASE("gamma draws are positive; mean tracks the shape") {
  auto eng = rng::make_engine(3);
  for (double shape : {0.3, 1.0, 4.5}) {
    double total = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      const double g = rng::gamma(eng, shape);
      REQUIRE(g > 0.0);
      total += g;
    }
    CHECK(total / n == doctest::Approx(shape).epsilon(0.05));
  }
  CHECK_THROWS_AS(rng::gamma(eng, 0.0), std::invalid_argument);
}

TEST_CASE("dirichlet draws live on the simplex; zero alphas give exact zeros") {
  auto eng = rng::make_engine(4);
  Vector alpha(4);
  alpha << 0.5, 2.0, 0.0, 1.0;
  for (int i = 0; i < 200; ++i) {
    const Vector d = rng::dirichlet(eng, alpha);
    CHECK(d.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d[2] == 0.0);
    CHECK(d.minCoeff() >= 0.0);
  }
  Vector all_zero = Vector::Zero(3);
  CHECK_THROWS_AS(rng::dirichlet(eng, all_zero), std::invalid_argument);
}

TEST_CASE("discrete respects weights") {
  auto eng = rng::make_engine(5);
  Vector w(3);
  w << 0.0, 3.0, 1.0;
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < 40000; ++i) ++counts[rng::discrete(eng, w)];
  CHECK(counts[0] == 0);
  CHECK(static_cast<double>(counts[1]) / 40000 == doctest::Approx(0.75).epsilon(0.03));
  Vector bad = Vector::Zero(2);
  CHECK_THROWS_AS(rng::discrete(eng, bad), std::runtime_error);
}

TEST_CASE("shuffle is a seeded permutation") {
  std::vector<int> items{1, 2, 3, 4, 5, 6};
  auto eng1 = rng::make_engine(9);
  auto eng2 = rng::make_engine(9);
  auto a = items;
  auto b = items;
  rng::shuffle(eng1, a);
  rng::shuffle(eng2, b);
  CHECK(a == b);
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == items);
}
