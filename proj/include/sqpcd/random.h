// Copyright 2026 The sqpcd Authors
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

#ifndef SQPCD_RANDOM_H_
#define SQPCD_RANDOM_H_

#include <cstdint>
#include <random>

#include "sqpcd/rotation.h"

namespace sqpcd {

// Every randomized routine takes an explicit engine so parallel callers own
// independent streams.
using Rng = std::mt19937_64;

// Engine for stream `stream` of a run seeded with `seed`.
Rng MakeRng(std::uint64_t seed, std::uint64_t stream = 0);

Vec3 StandardNormal3(Rng& rng);
Vec3 UniformUnitVector(Rng& rng);
// Haar-uniform rotation.
Mat3 UniformRotation(Rng& rng);
double Uniform(Rng& rng, double lo, double hi);

}  // namespace sqpcd

#endif  // SQPCD_RANDOM_H_
