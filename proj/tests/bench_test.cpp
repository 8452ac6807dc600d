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

#include <sstream>

#include "kapre/bench.hpp"
#include "kapre/codec.hpp"
#include "kapre/errors.hpp"

namespace kapre::bench {
namespace {

TEST(Bench, CsvHeaderIsExact) {
  std::ostringstream out;
  emit_csv(BenchReport{}, out);
  EXPECT_EQ(out.str(), "operation,n,set_size,mean_ns,std_ns,iters,bytes,seed\n");
}

TEST(Bench, SweepProducesOneRowPerCombination) {
  SweepConfig cfg;
  cfg.n_values = {2, 3};
  cfg.set_fractions = {0.5, 1.0};
  cfg.iterations = kMinIterations;
  cfg.seed = 99;
  const BenchReport report = run_sweep(cfg);
  ASSERT_EQ(report.rows.size(), operation_names().size() * 2 * 2);
  ASSERT_EQ(report.median_of_means_ns.size(), report.rows.size());

  std::size_t i = 0;
  for (const std::string& op : operation_names()) {
    for (std::uint32_t n : cfg.n_values) {
      for (double f : cfg.set_fractions) {
        const BenchRow& r = report.rows[i++];
        EXPECT_EQ(r.operation, op);
        EXPECT_EQ(r.n, n);
        EXPECT_EQ(r.set_size, set_size_for(n, f));
        EXPECT_EQ(r.iters, kMinIterations);
        EXPECT_EQ(r.seed, 99u);
        EXPECT_GT(r.mean_ns, 0);
        if (op == "rekeygen") EXPECT_EQ(r.bytes, 2 * SourceElement::kBytes);
        if (op == "rekeygen_baseline") EXPECT_EQ(r.bytes, r.set_size * 2 * SourceElement::kBytes);
        if (op == "dec2" || op == "dec1") EXPECT_EQ(r.bytes, cfg.message_len);
      }
    }
  }

  std::stringstream csv;
  emit_csv(report, csv);
  EXPECT_EQ(parse_csv(csv), report.rows);
}

TEST(Bench, SweepValidatesConfig) {
  SweepConfig cfg;
  cfg.n_values = {2};
  cfg.iterations = kMinIterations - 1;
  EXPECT_THROW(run_sweep(cfg), Error);
  cfg.iterations = kMinIterations;
  cfg.set_fractions = {0.0};
  EXPECT_THROW(run_sweep(cfg), Error);
  cfg.set_fractions = {1.0};
  cfg.operations = {"nope"};
  EXPECT_THROW(run_sweep(cfg), Error);
}

TEST(Bench, SetSizes) {
  EXPECT_EQ(set_size_for(16, 0.25), 4u);
  EXPECT_EQ(set_size_for(256, 1.0), 256u);
  EXPECT_EQ(set_size_for(2, 0.01), 1u);
}

TEST(Bench, BaselineKeyGrowsLinearly) {
  SeededRandom rng(5, "baseline");
  const Params par = setup(PairingContext::bls12_381(), 32, rng);
  const KeyPair a = keygen(par, 64, rng), b = keygen(par, 64, rng);
  std::set<std::uint32_t> all;
  for (std::uint32_t v = 1; v <= 64; ++v) all.insert(v);
  const auto keys = baseline_rekeygen(TypeSet(all), a.sk, a.pk, b.pk);
  ASSERT_EQ(keys.size(), 64u);
  std::size_t measured = 0;
  for (const auto& [r1, r2] : keys) measured += r1.encode().size() + r2.encode().size();
  EXPECT_EQ(measured, 64 * 2 * SourceElement::kBytes);
  EXPECT_EQ(baseline_rekey_bytes(64), measured);
}

TEST(Bench, MedianOfMeans) {
  EXPECT_DOUBLE_EQ(median_of_means({1, 1, 2, 2, 9, 9, 3, 3, 4, 4}), 3.0);
  EXPECT_DOUBLE_EQ(median_of_means({5}), 5.0);
  EXPECT_DOUBLE_EQ(median_of_means({1, 2, 3, 100}, 4), 2.5);
  EXPECT_DOUBLE_EQ(median_of_means({}), 0.0);
}

TEST(Bench, LinearFitRecoversLine) {
  const LinearFit f = fit_linear({16, 64, 256}, {100 + 3 * 16, 100 + 3 * 64, 100 + 3 * 256});
  EXPECT_NEAR(f.a, 100, 1e-9);
  EXPECT_NEAR(f.b, 3, 1e-12);
  EXPECT_THROW(fit_linear({1}, {1}), Error);
  EXPECT_THROW(fit_linear({2, 2}, {1, 3}), Error);
}

TEST(Bench, ParseRejectsBadCsv) {
  std::istringstream no_header("keygen,1,1,1,1,30,1,1\n");
  EXPECT_THROW(parse_csv(no_header), Error);
  std::istringstream short_row(std::string(kCsvHeader) + "\nkeygen,1,1\n");
  EXPECT_THROW(parse_csv(short_row), Error);
  std::istringstream bad_number(std::string(kCsvHeader) + "\nkeygen,x,1,1,1,30,1,1\n");
  EXPECT_THROW(parse_csv(bad_number), Error);
}

// rekeygen costs a + b n with the constant term dominating up to n = 256.
TEST(Bench, RekeygenCostIsDominatedByConstantTerm) {
  SweepConfig cfg;
  cfg.n_values = {16, 64, 256};
  cfg.set_fractions = {1.0};
  cfg.iterations = 50;
  cfg.operations = {"rekeygen"};
  const BenchReport report = run_sweep(cfg);
  std::vector<double> x, y;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    x.push_back(report.rows[i].n);
    y.push_back(report.median_of_means_ns[i]);
  }
  const LinearFit fit = fit_linear(x, y);
  EXPECT_LT(fit.b * 256, fit.a) << "a=" << fit.a << " b=" << fit.b;
}

}  // namespace
}  // namespace kapre::bench
