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

#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "diatom/types.hpp"

// Seeded randomness for the whole project. The mt19937_64 engine output is
// fully specified by the C++ standard; the draw functions below avoid the
// std::*_distribution classes, whose output is implementation-defined, so
// every sampled artifact is reproducible bit for bit across toolchains.
namespace diatom::rng {

using Engine = std::mt19937_64;

// One splitmix64 output step. Used for seed folding, not as a main engine.
std::uint64_t splitmix64(std::uint64_t& state);

// Folds a value into a seed; repeated folds derive independent substreams,
// e.g. fold(fold(seed, year)) or fold(seed, hash_bytes(doc_id)).
std::uint64_t fold(std::uint64_t seed, std::uint64_t value);

// FNV-1a over raw bytes.
std::uint64_t hash_bytes(std::string_view bytes);

Engine make_engine(std::uint64_t seed);

// Engine for a substream identified by a string (document id, module tag).
Engine derive_engine(std::uint64_t seed, std::string_view tag);
Engine derive_engine(std::uint64_t seed, std::string_view tag, std::uint64_t n);

// Uniform in [0, 1) with 53 random mantissa bits.
double uniform01(Engine& eng);

// Uniform integer in [0, n), unbiased (rejection sampling). n must be > 0.
std::uint64_t uniform_below(Engine& eng, std::uint64_t n);

// Standard normal via Box-Muller.
double normal(Engine& eng);

// Gamma(shape, 1) via Marsaglia-Tsang, any shape > 0.
double gamma(Engine& eng, double shape);

// Dirichlet draw; components with alpha == 0 come out exactly 0.
Vector dirichlet(Engine& eng, const Vector& alpha);

// Index draw proportional to non-negative weights (need not be normalized).
Index discrete(Engine& eng, const Vector& weights);

// In-place Fisher-Yates shuffle.
template <typename T>
void shuffle(Engine& eng, std::vector<T>& items) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform_below(eng, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace diatom::rng
