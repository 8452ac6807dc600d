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

#include "kapre/errors.hpp"
#include "support/tamper.hpp"

namespace kapre::testing {
namespace {

constexpr std::uint32_t kMutationsPerPart = 20;

class TamperTest : public ::testing::TestWithParam<std::size_t> {
 protected:
  static void SetUpTestSuite() {
    scenario_ = new Scenario(make_scenario(8, TypeSet{2, 4, 5, 7}, 31));
  }
  static void TearDownTestSuite() { delete scenario_; }

  static inline Scenario* scenario_ = nullptr;
};

class Level2Tamper : public TamperTest {};
class Level1Tamper : public TamperTest {};

TEST_P(Level2Tamper, RejectedAtDocumentedStage) {
  const std::size_t part = GetParam();
  const Scenario& s = *scenario_;
  SeededRandom rng(100 + part, "tamper-l2");
  const Stage expected = documented_stage_level2(part);
  for (std::uint32_t i = 0; i < kMutationsPerPart; ++i) {
    Bytes m(s.par.message_len);
    rng.fill(m);
    Level2Ciphertext c = enc2(s.par, s.owner.pk, m, 5, rng);
    ASSERT_EQ(first_rejection_level2(s, c, rng), Stage::kAccepted);
    mutate_level2(c, part, i, rng);
    EXPECT_EQ(stage_name(first_rejection_level2(s, c, rng)), stage_name(expected))
        << kLevel2Parts[part] << " mutation " << i;
  }
}

TEST_P(Level1Tamper, RejectedAtDocumentedStage) {
  const std::size_t part = GetParam();
  const Scenario& s = *scenario_;
  SeededRandom rng(200 + part, "tamper-l1");
  const Stage expected = documented_stage_level1(part);
  for (std::uint32_t i = 0; i < kMutationsPerPart; ++i) {
    Bytes m(s.par.message_len);
    rng.fill(m);
    // Alternate between direct level-1 ciphertexts and re-encrypted ones.
    Level1Ciphertext c = i % 2 == 0
                             ? enc1(s.par, s.delegatee.pk, m, rng)
                             : reenc(s.par, s.owner.pk, s.rk, enc2(s.par, s.owner.pk, m, 4, rng), rng);
    ASSERT_EQ(first_rejection_level1(s, c), Stage::kAccepted);
    mutate_level1(c, part, i, rng);
    EXPECT_EQ(stage_name(first_rejection_level1(s, c)), stage_name(expected))
        << kLevel1Parts[part] << " mutation " << i;
  }
}

std::string part_name_l2(const ::testing::TestParamInfo<std::size_t>& info) {
  return std::string(kLevel2Parts[info.param]);
}

std::string part_name_l1(const ::testing::TestParamInfo<std::size_t>& info) {
  std::string name(kLevel1Parts[info.param]);
  if (name.back() == '\'') name.back() = 'p';
  return name;
}

INSTANTIATE_TEST_SUITE_P(Parts, Level2Tamper, ::testing::Range<std::size_t>(0, 10), part_name_l2);
INSTANTIATE_TEST_SUITE_P(Parts, Level1Tamper, ::testing::Range<std::size_t>(0, 7), part_name_l1);

TEST(TamperStages, C7PassesLevel2ChecksAndFailsAfterReencryption) {
  const Scenario s = make_scenario(4, TypeSet{1, 2}, 32);
  SeededRandom rng(7, "c7");
  Bytes m(s.par.message_len, 0x33);
  Level2Ciphertext c = enc2(s.par, s.owner.pk, m, 2, rng);
  mutate_level2(c, 7, 0, rng);
  EXPECT_TRUE(verify2(s.par, s.owner.pk, c, rng));
  EXPECT_EQ(dec2(s.par, s.owner.sk, s.owner.pk, c, rng), m);
  const Level1Ciphertext c1 = reenc(s.par, s.owner.pk, s.rk, c, rng);
  EXPECT_FALSE(verify1(s.par, c1));
}

TEST(TamperStages, TagComponentsPassVerification) {
  const Scenario s = make_scenario(4, TypeSet{1, 2}, 33);
  SeededRandom rng(8, "c8c9");
  for (std::size_t part : {8u, 9u}) {
    Level2Ciphertext c = enc2(s.par, s.owner.pk, Bytes(s.par.message_len, 1), 1, rng);
    mutate_level2(c, part, 1, rng);
    EXPECT_TRUE(verify2(s.par, s.owner.pk, c, rng));
    try {
      dec2(s.par, s.owner.sk, s.owner.pk, c, rng);
      ADD_FAILURE() << "dec2 accepted a mutated tag component";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kTagMismatch);
    }
  }
}

}  // namespace
}  // namespace kapre::testing
