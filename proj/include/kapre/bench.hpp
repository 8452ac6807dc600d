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

#ifndef KAPRE_BENCH_HPP_
#define KAPRE_BENCH_HPP_

// Wall-clock sweep over the scheme's algorithms, plus a per-condition
// baseline whose re-key holds one (r1, r2)-style pair per type in S.
//
// Rows are produced for every operation x n x set fraction, in that nesting
// order, each timed over `iterations` runs after 5 discarded warm-up runs.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "kapre/scheme.hpp"

namespace kapre::bench {

inline constexpr std::uint32_t kMinIterations = 30;
inline constexpr std::uint32_t kWarmupIterations = 5;
inline constexpr char kCsvHeader[] = "operation,n,set_size,mean_ns,std_ns,iters,bytes,seed";

struct BenchRow {
  std::string operation;
  std::uint32_t n = 0;
  std::uint32_t set_size = 0;
  double mean_ns = 0;
  double std_ns = 0;  // sample standard deviation
  std::uint32_t iters = 0;
  std::uint64_t bytes = 0;  // serialized size of the operation's output
  std::uint64_t seed = 0;

  bool operator==(const BenchRow&) const = default;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<double> median_of_means_ns;  // parallel to rows; not in the CSV
};

struct SweepConfig {
  std::vector<std::uint32_t> n_values = {16, 64, 256};
  std::vector<double> set_fractions = {0.25, 1.0};
  std::uint32_t iterations = 50;
  std::uint64_t seed = 1;
  std::uint32_t message_len = 32;
  /// Subset of operation_names(); empty means all.
  std::vector<std::string> operations;
};

/// keygen, rekeygen, rekeygen_baseline, enc2, enc1, reenc, dec2, dec1
const std::vector<std::string>& operation_names();

/// |S| for a fraction of n: round(fraction * n), clamped to [1, n].
std::uint32_t set_size_for(std::uint32_t n, double fraction);

/// Throws kInvalidArgument for iterations < kMinIterations, an unknown
/// operation, n == 0 or a fraction outside (0, 1].
BenchReport run_sweep(const SweepConfig& cfg);

/// Per-condition re-key: for each v in S, (pk_j1^{w_v / a_i1}, g_{n+1-v}^{a_i2})
/// with w_v = H("baseline", v). Two exponentiations per condition.
std::vector<std::pair<SourceElement, SourceElement>> baseline_rekeygen(
    const TypeSet& types, const SecretKey& sk_i, const PublicKey& pk_i,
    const PublicKey& pk_j);
std::size_t baseline_rekey_bytes(std::size_t set_size);

/// Median of the means of `groups` contiguous blocks (5 by default).
double median_of_means(const std::vector<double>& samples, std::size_t groups = 5);

/// Least squares y = a + b x.
struct LinearFit {
  double a = 0;
  double b = 0;
};
LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

void emit_csv(const BenchReport& report, std::ostream& out);
void emit_csv(const BenchReport& report, const std::string& path);
/// Inverse of emit_csv on the CSV columns; throws kMalformed on bad input.
std::vector<BenchRow> parse_csv(std::istream& in);

std::string summary(const BenchReport& report);

}  // namespace kapre::bench

#endif  // KAPRE_BENCH_HPP_
