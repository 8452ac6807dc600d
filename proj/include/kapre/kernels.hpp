/*
 * Copyright 2026 The kapre Authors.
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

#ifndef KAPRE_KERNELS_HPP_
#define KAPRE_KERNELS_HPP_

// Data-parallel group kernels. Each kernel has a serial reference used by the
// tests and an OpenMP version used by the library; both must return
// identical results.

#include <cstdint>
#include <span>
#include <vector>

#include "kapre/pairing.hpp"

namespace kapre::kernels {

enum class Exec { kSerial, kParallel };

/// out[i] = base^(x^exponents[i]). The exponent powers are formed serially by
/// iterated multiplication mod p; the group exponentiations are independent.
std::vector<SourceElement> power_ladder_serial(
    const SourceElement& base, const Scalar& x,
    std::span<const std::uint32_t> exponents);
std::vector<SourceElement> power_ladder_parallel(
    const SourceElement& base, const Scalar& x,
    std::span<const std::uint32_t> exponents);

inline std::vector<SourceElement> power_ladder(
    Exec exec, const SourceElement& base, const Scalar& x,
    std::span<const std::uint32_t> exponents) {
  return exec == Exec::kSerial ? power_ladder_serial(base, x, exponents)
                               : power_ladder_parallel(base, x, exponents);
}

/// Product of the pointed-to elements, one group operation at a time.
SourceElement product_serial(std::span<const SourceElement* const> factors);
/// Same product via batched affine addition (Montgomery batch inversion);
/// the two halves are accumulated in parallel sections.
SourceElement product_batched(std::span<const SourceElement* const> factors);

/// Threads available to the parallel kernels (1 without OpenMP).
int max_threads();

}  // namespace kapre::kernels

#endif  // KAPRE_KERNELS_HPP_
