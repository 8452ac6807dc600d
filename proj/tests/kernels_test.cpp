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

#include <gtest/gtest.h>

#include "kapre/kernels.hpp"
#include "support/oracle.hpp"

namespace kapre::kernels {
namespace {

TEST(Kernels, PowerLadderSerialAndParallelAgree) {
  SeededRandom rng(3, "kernels");
  const SourceElement base = SourceElement::from_exponent(Scalar::random_nonzero(rng));
  const Scalar x = Scalar::random_nonzero(rng);
  for (std::uint32_t n : {0u, 1u, 7u, 33u}) {
    std::vector<std::uint32_t> exps;
    for (std::uint32_t k = 1; k <= 2 * n; ++k) {
      if (k != n + 1) exps.push_back(k);
    }
    EXPECT_EQ(power_ladder_serial(base, x, exps), power_ladder_parallel(base, x, exps));
  }
}

TEST(Kernels, PowerLadderMatchesDirectExponents) {
  SeededRandom rng(4, "kernels");
  const SourceElement base = SourceElement::base();
  const Scalar x = Scalar::random_nonzero(rng);
  const std::vector<std::uint32_t> exps = {1, 2, 5, 9, 3, 40};
  const auto out = power_ladder(Exec::kParallel, base, x, exps);
  ASSERT_EQ(out.size(), exps.size());
  for (std::size_t i = 0; i < exps.size(); ++i) {
    EXPECT_EQ(out[i], base.pow(testing::ModP::pow(x, exps[i]))) << "exponent " << exps[i];
  }
}

TEST(Kernels, BatchedProductMatchesSerial) {
  SeededRandom rng(5, "kernels");
  std::vector<SourceElement> pool;
  for (int i = 0; i < 256; ++i) pool.push_back(SourceElement::from_exponent(Scalar::random(rng)));
  for (std::size_t count : {0u, 1u, 2u, 17u, 256u}) {
    std::vector<const SourceElement*> f;
    for (std::size_t i = 0; i < count; ++i) f.push_back(&pool[i]);
    EXPECT_EQ(product_batched(f), product_serial(f)) << count << " factors";
  }
}

TEST(Kernels, BatchedProductHandlesDoublingAndCancellation) {
  SeededRandom rng(6, "kernels");
  const SourceElement a = SourceElement::from_exponent(Scalar::random_nonzero(rng));
  const SourceElement inv = a.inverse();
  const SourceElement id;
  std::vector<const SourceElement*> twice = {&a, &a};
  EXPECT_EQ(product_batched(twice), a * a);
  std::vector<const SourceElement*> cancel = {&a, &inv};
  EXPECT_TRUE(product_batched(cancel).is_identity());
  std::vector<const SourceElement*> with_id = {&id, &a, &id};
  EXPECT_EQ(product_batched(with_id), a);
}

TEST(Kernels, ReportsAtLeastOneThread) { EXPECT_GE(max_threads(), 1); }

}  // namespace
}  // namespace kapre::kernels
