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

#include "diatom/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace diatom::rng {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fold(std::uint64_t seed, std::uint64_t value) {
  std::uint64_t state = seed ^ (value * 0xff51afd7ed558ccdULL);
  return splitmix64(state);
}

std::uint64_t hash_bytes(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Engine make_engine(std::uint64_t seed) { return Engine(seed); }

Engine derive_engine(std::uint64_t seed, std::string_view tag) {
  return Engine(fold(seed, hash_bytes(tag)));
}

Engine derive_engine(std::uint64_t seed, std::string_view tag, std::uint64_t n) {
  return Engine(fold(fold(seed, hash_bytes(tag)), n));
}

double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_below(Engine& eng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below: n must be positive");
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t r;
  do {
    r = eng();
  } while (r >= limit);
  return r % n;
}

double normal(Engine& eng) {
  double u1;
  do {
    u1 = uniform01(eng);
  } while (u1 <= 0.0);
  const double u2 = uniform01(eng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double gamma(Engine& eng, double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be > 0");
  if (shape < 1.0) {
    // Boost the shape above 1, then correct with a power of a uniform.
    const double g = gamma(eng, shape + 1.0);
    double u;
    do {
      u = uniform01(eng);
    } while (u <= 0.0);
    return g * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal(eng);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform01(eng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

Vector dirichlet(Engine& eng, const Vector& alpha) {
  Vector out = Vector::Zero(alpha.size());
  double total = 0.0;
  for (Index i = 0; i < alpha.size(); ++i) {
    if (alpha[i] < 0.0) throw std::invalid_argument("dirichlet: negative alpha");
    if (alpha[i] > 0.0) {
      out[i] = gamma(eng, alpha[i]);
      total += out[i];
    }
  }
  if (total <= 0.0) throw std::invalid_argument("dirichlet: all-zero alpha");
  out /= total;
  return out;
}

Index discrete(Engine& eng, const Vector& weights) {
  const double total = weights.sum();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw std::runtime_error("discrete: weights must have positive finite sum");
  }
  const double u = uniform01(eng) * total;
  double cum = 0.0;
  for (Index i = 0; i < weights.size(); ++i) {
    cum += weights[i];
    if (u < cum) return i;
  }
  return weights.size() - 1;
}

}  // namespace diatom::rng
