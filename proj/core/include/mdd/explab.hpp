#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdd/common.hpp"
#include "mdd/digitset.hpp"

namespace mdd {

// Full parameter record of one experiment; serialized as flat key=value
// lines next to each CSV so a run can be reproduced exactly.
struct RunManifest {
  std::string tool_version;
  std::string timestamp;  // RFC 3339, UTC
  int64_t g = 0;
  int64_t b = 0;
  int64_t X = 0;
  int64_t H = 0;
  double eta = 0.0;
  int64_t P = 0;
  int64_t Q = 0;
  int64_t seed = 0;
  std::string command;

  std::string serialize() const;
  static RunManifest parse(const std::string& text);
  bool operator==(const RunManifest&) const = default;
};

std::string utc_timestamp_rfc3339();

struct DiscrepancyRow {
  int64_t q = 0;
  double max_residue_deviation = 0.0;
  double weighted = 0.0;  // q * max_residue_deviation
};

struct DiscrepancyReport {
  std::vector<DiscrepancyRow> rows;
  int64_t set_size = 0;
  double total = 0.0;  // sum over included q of the (optionally weighted) deviation
  double ratio = 0.0;  // total / set_size
  bool weighted = false;
};

// Residue counts of the digit-set members of (0, X] for every q <= q_max in
// one enumeration pass; deviation per q is max_a |count_a - set_size/q|.
// coprime_filter keeps only q with gcd(q, g(g-1)) = 1 in rows and summary.
DiscrepancyReport progression_discrepancy(const DigitSet& ds, int64_t X,
                                          int64_t q_max, bool coprime_filter,
                                          bool weighted);

struct DoubleSumReport {
  double signed_sum = 0.0;    // sum_n sum_{q<P} c_q(n)/q
  double absolute_sum = 0.0;  // sum_n sum_{q<P} |c_q(n)|/q
  double reference = 0.0;     // set_size * log X * log P
  int64_t set_size = 0;
};

DoubleSumReport ramanujan_double_sums(const DigitSet& ds, int64_t X, int64_t H,
                                      int64_t P);

struct DivisorRatioReport {
  int64_t set_size = 0;
  int64_t divisor_sum = 0;  // sum of d2 over the members of (X, X+H]
  int64_t d2_gg1 = 0;       // d2(g(g-1))
  double r1 = 0.0;          // divisor_sum / (d2_gg1 * set_size * log^3 X)
  double r2 = 0.0;          // divisor_sum / (set_size * log X)
};

DivisorRatioReport divisor_sum_ratios(const DigitSet& ds, int64_t X, int64_t H);

struct HyperbolaReport {
  int64_t set_size = 0;
  int64_t sieve_sum = 0;      // interval sieve + membership
  int64_t hyperbola_sum = 0;  // 2 sum_m #{multiples} - #{squares}
  int64_t difference = 0;     // must be exactly 0
};

// Both sides count the divisor pairs of the members of (X, 2X] exactly.
HyperbolaReport hyperbola_crosscheck(const DigitSet& ds, int64_t X);

struct RunConfig {
  std::string subcommand;
  int64_t g = 10;
  int64_t b = 7;
  int64_t m = -1;  // X = g^m when set
  int64_t X = -1;
  int64_t H = -1;
  bool auto_h = false;
  double eta = 0.02;
  std::string out_dir = "out";
  std::string cache_dir;  // MDD_CACHE environment variable overrides
  int64_t seed = 1;
  int threads = 1;

  // subcommand-specific knobs
  int64_t q = 1;
  int64_t q_max = 20;
  int64_t k = 3;
  int64_t k_max = -1;
  int64_t nodes = -1;
  int64_t grid = 10'000;
  int64_t samples = 1000;
  std::string form = "sine-kernel";  // or "beta"
  bool coprime = true;
  bool weighted = false;
};

// Dispatches one subcommand, writes <out>/<subcommand>.csv plus a matching
// .manifest, and returns the process exit code: 0 success, 2 usage/config,
// 3 numeric guard.
int run_experiment(const RunConfig& cfg);

}  // namespace mdd
