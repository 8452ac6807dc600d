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

#include "kapre/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "kapre/codec.hpp"
#include "kapre/errors.hpp"

namespace kapre::bench {
namespace {

using Clock = std::chrono::steady_clock;

struct Fixture {
  Params par;
  KeyPair a, b;
  TypeSet types;
  std::uint32_t rho = 0;
  ReKey rk;
  Level2Ciphertext c2;
  Level1Ciphertext c1;
  Bytes message;
};

TypeSet random_set(std::uint32_t n, std::uint32_t size, std::uint64_t seed) {
  std::vector<std::uint32_t> all(n);
  std::iota(all.begin(), all.end(), 1u);
  std::mt19937_64 gen(seed);
  std::shuffle(all.begin(), all.end(), gen);
  return TypeSet(std::set<std::uint32_t>(all.begin(), all.begin() + size));
}

struct Timing {
  std::vector<double> samples;
  std::uint64_t bytes = 0;
};

// Runs warm-up then `iters` timed calls; `op` returns the output size.
Timing time_op(std::uint32_t iters, const std::function<std::uint64_t()>& op) {
  Timing t;
  for (std::uint32_t i = 0; i < kWarmupIterations; ++i) t.bytes = op();
  t.samples.reserve(iters);
  for (std::uint32_t i = 0; i < iters; ++i) {
    const auto start = Clock::now();
    t.bytes = op();
    const auto stop = Clock::now();
    t.samples.push_back(std::chrono::duration<double, std::nano>(stop - start).count());
  }
  return t;
}

void stats(const std::vector<double>& s, double& mean, double& sd) {
  mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
  double acc = 0;
  for (double x : s) acc += (x - mean) * (x - mean);
  sd = s.size() > 1 ? std::sqrt(acc / static_cast<double>(s.size() - 1)) : 0.0;
}

std::function<std::uint64_t()> make_op(const std::string& name, Fixture& f,
                                       RandomSource& rng) {
  const Params& par = f.par;
  if (name == "keygen") {
    return [&par, &f, &rng] {
      KeyPair kp = keygen(par, f.a.pk.n, rng, kernels::Exec::kSerial);
      return std::uint64_t{codec::component_bytes(kp.pk)};
    };
  }
  if (name == "rekeygen") {
    return [&par, &f] {
      ReKey rk = rekeygen(par, f.types, f.a.sk, f.a.pk, f.b.pk);
      return std::uint64_t{codec::rekey_token(rk).size()};
    };
  }
  if (name == "rekeygen_baseline") {
    return [&f] {
      auto keys = baseline_rekeygen(f.types, f.a.sk, f.a.pk, f.b.pk);
      return std::uint64_t{baseline_rekey_bytes(keys.size())};
    };
  }
  if (name == "enc2") {
    return [&par, &f, &rng] {
      Level2Ciphertext c = enc2(par, f.a.pk, f.message, f.rho, rng);
      return std::uint64_t{codec::component_bytes(c)};
    };
  }
  if (name == "enc1") {
    return [&par, &f, &rng] {
      Level1Ciphertext c = enc1(par, f.b.pk, f.message, rng);
      return std::uint64_t{codec::component_bytes(c)};
    };
  }
  if (name == "reenc") {
    return [&par, &f, &rng] {
      Level1Ciphertext c = reenc(par, f.a.pk, f.rk, f.c2, rng);
      return std::uint64_t{codec::component_bytes(c)};
    };
  }
  if (name == "dec2") {
    return [&par, &f, &rng] {
      return std::uint64_t{dec2(par, f.a.sk, f.a.pk, f.c2, rng).size()};
    };
  }
  if (name == "dec1") {
    return [&par, &f] { return std::uint64_t{dec1(par, f.b.sk, f.c1).size()}; };
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown benchmark operation: " + name);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

template <class T>
T parse_number(std::string_view s) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kMalformed, "bad number in CSV: " + std::string(s));
  }
  return v;
}

}  // namespace

const std::vector<std::string>& operation_names() {
  static const std::vector<std::string> kNames = {
      "keygen", "rekeygen", "rekeygen_baseline", "enc2", "enc1", "reenc", "dec2", "dec1"};
  return kNames;
}

std::uint32_t set_size_for(std::uint32_t n, double fraction) {
  const double raw = std::round(fraction * static_cast<double>(n));
  return static_cast<std::uint32_t>(std::clamp(raw, 1.0, static_cast<double>(n)));
}

std::vector<std::pair<SourceElement, SourceElement>> baseline_rekeygen(
    const TypeSet& types, const SecretKey& sk_i, const PublicKey& pk_i,
    const PublicKey& pk_j) {
  const Scalar inv_a1 = sk_i.a1.inverse();
  std::vector<std::pair<SourceElement, SourceElement>> out;
  out.reserve(types.size());
  for (std::uint32_t v : types) {
    const std::uint8_t slot[4] = {static_cast<std::uint8_t>(v >> 24),
                                  static_cast<std::uint8_t>(v >> 16),
                                  static_cast<std::uint8_t>(v >> 8),
                                  static_cast<std::uint8_t>(v)};
    const Scalar w = hash_to_scalar("baseline", slot);
    out.emplace_back(pk_j.pk1.pow(w * inv_a1), pk_i.power(pk_i.n + 1 - v).pow(sk_i.a2));
  }
  return out;
}

std::size_t baseline_rekey_bytes(std::size_t set_size) {
  return set_size * 2 * SourceElement::kBytes;
}

BenchReport run_sweep(const SweepConfig& cfg) {
  if (cfg.iterations < kMinIterations) {
    throw Error(ErrorCode::kInvalidArgument,
                "iterations must be at least " + std::to_string(kMinIterations));
  }
  const std::vector<std::string>& ops =
      cfg.operations.empty() ? operation_names() : cfg.operations;
  for (const std::string& op : ops) {
    if (std::find(operation_names().begin(), operation_names().end(), op) ==
        operation_names().end()) {
      throw Error(ErrorCode::kInvalidArgument, "unknown benchmark operation: " + op);
    }
  }
  for (std::uint32_t n : cfg.n_values) {
    if (n == 0) throw Error(ErrorCode::kInvalidArgument, "n must be positive");
  }
  for (double f : cfg.set_fractions) {
    if (!(f > 0.0 && f <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "set fraction must lie in (0, 1]");
    }
  }

  SeededRandom setup_rng(cfg.seed, "bench:setup");
  const Params par = setup(PairingContext::bls12_381(), cfg.message_len, setup_rng);

  // Fixtures are built per (n, fraction) and reused across operations, so the
  // row order operation x n x fraction needs them all alive at once.
  std::vector<std::vector<Fixture>> fixtures(cfg.n_values.size());
  std::vector<std::vector<SeededRandom>> rngs(cfg.n_values.size());
  for (std::size_t i = 0; i < cfg.n_values.size(); ++i) {
    const std::uint32_t n = cfg.n_values[i];
    SeededRandom key_rng(cfg.seed, "bench:keys:" + std::to_string(n));
    const KeyPair a = keygen(par, n, key_rng);
    const KeyPair b = keygen(par, n, key_rng);
    for (std::size_t j = 0; j < cfg.set_fractions.size(); ++j) {
      const std::string label = "bench:" + std::to_string(n) + ":" + std::to_string(j);
      SeededRandom rng(cfg.seed, label);
      Fixture f{par, a, b, {}, 0, {}, {}, {}, Bytes(cfg.message_len)};
      rng.fill(f.message);
      const std::uint32_t s = set_size_for(n, cfg.set_fractions[j]);
      f.types = random_set(n, s, cfg.seed ^ (std::uint64_t{n} << 32) ^ j);
      f.rho = *f.types.begin();
      f.rk = rekeygen(par, f.types, a.sk, a.pk, b.pk);
      f.c2 = enc2(par, a.pk, f.message, f.rho, rng);
      f.c1 = reenc(par, a.pk, f.rk, f.c2, rng);
      fixtures[i].push_back(std::move(f));
      rngs[i].emplace_back(cfg.seed, label + ":ops");
    }
  }

  BenchReport report;
  for (const std::string& op : ops) {
    for (std::size_t i = 0; i < cfg.n_values.size(); ++i) {
      for (std::size_t j = 0; j < cfg.set_fractions.size(); ++j) {
        Fixture& f = fixtures[i][j];
        const Timing t = time_op(cfg.iterations, make_op(op, f, rngs[i][j]));
        BenchRow row;
        row.operation = op;
        row.n = cfg.n_values[i];
        row.set_size = static_cast<std::uint32_t>(f.types.size());
        stats(t.samples, row.mean_ns, row.std_ns);
        row.iters = cfg.iterations;
        row.bytes = t.bytes;
        row.seed = cfg.seed;
        report.rows.push_back(std::move(row));
        report.median_of_means_ns.push_back(median_of_means(t.samples));
      }
    }
  }
  return report;
}

double median_of_means(const std::vector<double>& samples, std::size_t groups) {
  if (samples.empty()) return 0.0;
  groups = std::clamp<std::size_t>(groups, 1, samples.size());
  std::vector<double> means;
  means.reserve(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t lo = g * samples.size() / groups;
    const std::size_t hi = (g + 1) * samples.size() / groups;
    means.push_back(std::accumulate(samples.begin() + lo, samples.begin() + hi, 0.0) /
                    static_cast<double>(hi - lo));
  }
  std::sort(means.begin(), means.end());
  const std::size_t mid = means.size() / 2;
  return means.size() % 2 ? means[mid] : 0.5 * (means[mid - 1] + means[mid]);
}

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "linear fit needs two or more points");
  }
  const double count = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / count;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / count;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw Error(ErrorCode::kInvalidArgument, "linear fit needs distinct x");
  LinearFit fit;
  fit.b = sxy / sxx;
  fit.a = my - fit.b * mx;
  return fit;
}

void emit_csv(const BenchReport& report, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const BenchRow& r : report.rows) {
    out << r.operation << ',' << r.n << ',' << r.set_size << ',' << format_double(r.mean_ns)
        << ',' << format_double(r.std_ns) << ',' << r.iters << ',' << r.bytes << ','
        << r.seed << '\n';
  }
}

void emit_csv(const BenchReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open for writing: " + path);
  emit_csv(report, out);
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

std::vector<BenchRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw Error(ErrorCode::kMalformed, "missing or unexpected CSV header");
  }
  std::vector<BenchRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest = line;
    for (;;) {
      const std::size_t comma = rest.find(',');
      cells.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cells.size() != 8) throw Error(ErrorCode::kMalformed, "CSV row needs 8 columns");
    BenchRow r;
    r.operation = std::string(cells[0]);
    r.n = parse_number<std::uint32_t>(cells[1]);
    r.set_size = parse_number<std::uint32_t>(cells[2]);
    r.mean_ns = parse_number<double>(cells[3]);
    r.std_ns = parse_number<double>(cells[4]);
    r.iters = parse_number<std::uint32_t>(cells[5]);
    r.bytes = parse_number<std::uint64_t>(cells[6]);
    r.seed = parse_number<std::uint64_t>(cells[7]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string summary(const BenchReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-18s %6s %6s %12s %12s %12s %6s %10s\n", "operation",
                "n", "|S|", "mean_ms", "std_ms", "mom_ms", "iters", "bytes");
  out << line;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const BenchRow& r = report.rows[i];
    const double mom = i < report.median_of_means_ns.size() ? report.median_of_means_ns[i] : 0;
    std::snprintf(line, sizeof(line), "%-18s %6u %6u %12.4f %12.4f %12.4f %6u %10llu\n",
                  r.operation.c_str(), r.n, r.set_size, r.mean_ns / 1e6, r.std_ns / 1e6,
                  mom / 1e6, r.iters, static_cast<unsigned long long>(r.bytes));
    out << line;
  }
  return out.str();
}

}  // namespace kapre::bench
