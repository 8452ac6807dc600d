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

#include "kapre/kernels.hpp"

#include <algorithm>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kapre::kernels {
namespace {

// x^e for every requested e, by iterated multiplication.
std::vector<Scalar> exponent_powers(const Scalar& x,
                                    std::span<const std::uint32_t> exponents) {
  std::uint32_t top = 0;
  for (std::uint32_t e : exponents) top = std::max(top, e);
  std::vector<Scalar> ladder(static_cast<std::size_t>(top) + 1);
  ladder[0] = Scalar::from_u64(1);
  for (std::uint32_t e = 1; e <= top; ++e) ladder[e] = ladder[e - 1] * x;

  std::vector<Scalar> out;
  out.reserve(exponents.size());
  for (std::uint32_t e : exponents) out.push_back(ladder[e]);
  return out;
}

}  // namespace

std::vector<SourceElement> power_ladder_serial(
    const SourceElement& base, const Scalar& x,
    std::span<const std::uint32_t> exponents) {
  const std::vector<Scalar> powers = exponent_powers(x, exponents);
  std::vector<SourceElement> out;
  out.reserve(powers.size());
  for (const Scalar& s : powers) out.push_back(base.pow(s));
  return out;
}

std::vector<SourceElement> power_ladder_parallel(
    const SourceElement& base, const Scalar& x,
    std::span<const std::uint32_t> exponents) {
  const std::vector<Scalar> powers = exponent_powers(x, exponents);
  std::vector<SourceElement> out(powers.size());
  const long count = static_cast<long>(powers.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) {
    out[i] = base.pow(powers[i]);
  }
  return out;
}

SourceElement product_serial(std::span<const SourceElement* const> factors) {
  SourceElement acc;
  for (const SourceElement* f : factors) acc *= *f;
  return acc;
}

SourceElement product_batched(std::span<const SourceElement* const> factors) {
  if (factors.empty()) return SourceElement::identity();

  std::vector<const blst_p1_affine*> firsts;
  std::vector<const blst_p2_affine*> seconds;
  firsts.reserve(factors.size());
  seconds.reserve(factors.size());
  for (const SourceElement* f : factors) {
    firsts.push_back(&f->first());
    seconds.push_back(&f->second());
  }

  blst_p1 sum1;
  blst_p2 sum2;
#pragma omp parallel sections
  {
#pragma omp section
    blst_p1s_add(&sum1, firsts.data(), firsts.size());
#pragma omp section
    blst_p2s_add(&sum2, seconds.data(), seconds.size());
  }
  return SourceElement::from_halves(sum1, sum2);
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace kapre::kernels
