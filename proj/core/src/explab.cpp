#include "mdd/explab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "mdd/circle.hpp"
#include "mdd/expsum.hpp"
#include "mdd/ntheory.hpp"
#include "mdd/voronoi.hpp"

namespace fs = std::filesystem;

namespace mdd {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Deterministic CSV: comma separators, header row, doubles at 12 significant
// digits, LF line endings.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : width_(header.size()) {
    append_row(header);
  }
  void row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw domain_error("csv row width mismatch");
    append_row(cells);
  }
  const std::string& text() const { return text_; }

 private:
  void append_row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += cells[i];
    }
    text_ += '\n';
  }
  std::string text_;
  size_t width_;
};

std::string cell(int64_t v) { return std::to_string(v); }
std::string cell(double v) { return fmt_double(v); }

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw domain_error("cannot open for writing: " + path.string());
  out.write(text.data(), (std::streamsize)text.size());
  if (!out) throw domain_error("write failed: " + path.string());
}

// d2 table over [lo, hi], going through the binary cache when a directory
// is configured.
SieveTable divisor_table(const std::string& cache_dir, int64_t lo, int64_t hi) {
  if (cache_dir.empty()) return sieve_divisor_count(lo, hi);
  fs::create_directories(cache_dir);
  const fs::path path = fs::path(cache_dir) / ("d2_" + std::to_string(lo) +
                                               "_" + std::to_string(hi) +
                                               ".sieve");
  if (fs::exists(path)) {
    try {
      SieveTable t = load_sieve(path.string());
      if (t.kind == SieveKind::DivisorCount && t.covers(lo, hi)) return t;
    } catch (const domain_error&) {
      // stale or foreign file: fall through and rebuild
    }
  }
  SieveTable t = sieve_divisor_count(lo, hi);
  save_sieve(t, path.string());
  return t;
}

int64_t d2_point(int64_t n) {
  int64_t count = 0;
  for (int64_t d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    count += (d * d == n) ? 1 : 2;
  }
  return count;
}

}  // namespace

std::string utc_timestamp_rfc3339() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string RunManifest::serialize() const {
  std::ostringstream out;
  out << "tool_version=" << tool_version << '\n'
      << "timestamp=" << timestamp << '\n'
      << "g=" << g << '\n'
      << "b=" << b << '\n'
      << "X=" << X << '\n'
      << "H=" << H << '\n';
  char eta_buf[64];
  std::snprintf(eta_buf, sizeof(eta_buf), "%.17g", eta);
  out << "eta=" << eta_buf << '\n'
      << "P=" << P << '\n'
      << "Q=" << Q << '\n'
      << "seed=" << seed << '\n'
      << "command=" << command << '\n';
  return out.str();
}

RunManifest RunManifest::parse(const std::string& text) {
  RunManifest m;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw domain_error("manifest line without '=': " + line);
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 1);
    if (key == "tool_version") m.tool_version = val;
    else if (key == "timestamp") m.timestamp = val;
    else if (key == "g") m.g = std::stoll(val);
    else if (key == "b") m.b = std::stoll(val);
    else if (key == "X") m.X = std::stoll(val);
    else if (key == "H") m.H = std::stoll(val);
    else if (key == "eta") m.eta = std::stod(val);
    else if (key == "P") m.P = std::stoll(val);
    else if (key == "Q") m.Q = std::stoll(val);
    else if (key == "seed") m.seed = std::stoll(val);
    else if (key == "command") m.command = val;
    else throw domain_error("manifest key unknown: " + key);
  }
  return m;
}

DiscrepancyReport progression_discrepancy(const DigitSet& ds, int64_t X,
                                          int64_t q_max, bool coprime_filter,
                                          bool weighted) {
  if (q_max < 1) throw domain_error("progression_discrepancy: q_max >= 1");
  if (X < 1) throw domain_error("progression_discrepancy: X >= 1");

  // counts for q = 1..q_max packed into one flat array; block q starts at
  // offset[q] = 1 + 2 + ... + (q-1) and holds q residue counters
  std::vector<int64_t> offset((size_t)q_max + 1, 0);
  for (int64_t q = 1; q <= q_max; ++q)
    offset[(size_t)q] = offset[(size_t)q - 1] + (q - 1);
  std::vector<int64_t> counts((size_t)(offset[(size_t)q_max] + q_max), 0);

  int64_t set_size = 0;
  ds.for_each(0, X, [&](int64_t n) {
    ++set_size;
    for (int64_t q = 1; q <= q_max; ++q)
      ++counts[(size_t)(offset[(size_t)q] + (n % q))];
  });

  DiscrepancyReport rep;
  rep.set_size = set_size;
  rep.weighted = weighted;
  const int64_t modulus_filter = checked_mul(ds.base(), ds.base() - 1);
  KahanSum<double> total;
  for (int64_t q = 1; q <= q_max; ++q) {
    if (coprime_filter && std::gcd(q, modulus_filter) != 1) continue;
    const double share = (double)set_size / (double)q;
    double dev = 0.0;
    for (int64_t r = 0; r < q; ++r) {
      const double c = (double)counts[(size_t)(offset[(size_t)q] + r)];
      dev = std::max(dev, std::fabs(c - share));
    }
    DiscrepancyRow row{q, dev, (double)q * dev};
    rep.rows.push_back(row);
    total.add(weighted ? row.weighted : row.max_residue_deviation);
  }
  rep.total = total.value();
  rep.ratio = rep.total / (double)set_size;
  return rep;
}

DoubleSumReport ramanujan_double_sums(const DigitSet& ds, int64_t X, int64_t H,
                                      int64_t P) {
  if (P < 1) throw domain_error("ramanujan_double_sums: P must be >= 1");
  const std::vector<int64_t> members = ds.enumerate(X, checked_add(X, H));
  if (members.empty())
    throw domain_error("ramanujan_double_sums: empty digit set interval");

  KahanSum<double> signed_sum, absolute_sum;
  for (int64_t q = 1; q < P; ++q) {
    std::vector<int64_t> cq((size_t)q);
    for (int64_t r = 0; r < q; ++r) cq[(size_t)r] = ramanujan_sum(q, r);
    for (int64_t n : members) {
      const auto c = (double)cq[(size_t)(n % q)];
      signed_sum.add(c / (double)q);
      absolute_sum.add(std::fabs(c) / (double)q);
    }
  }
  DoubleSumReport rep;
  rep.set_size = (int64_t)members.size();
  rep.signed_sum = signed_sum.value();
  rep.absolute_sum = absolute_sum.value();
  rep.reference = P >= 2 ? (double)rep.set_size * std::log((double)X) *
                               std::log((double)P)
                         : 0.0;
  return rep;
}

DivisorRatioReport divisor_sum_ratios(const DigitSet& ds, int64_t X, int64_t H) {
  if (X < 1 || H < 1) throw domain_error("divisor_sum_ratios: bad interval");
  const SieveTable d2 = sieve_divisor_count(X + 1, checked_add(X, H));
  DivisorRatioReport rep;
  int64_t sum = 0;
  ds.for_each(X, X + H, [&](int64_t n) {
    ++rep.set_size;
    sum = checked_add(sum, d2.values[(size_t)(n - d2.lo)]);
  });
  if (rep.set_size == 0)
    throw domain_error("divisor_sum_ratios: empty digit set interval");
  rep.divisor_sum = sum;
  rep.d2_gg1 = d2_point(checked_mul(ds.base(), ds.base() - 1));
  const double lx = std::log((double)X);
  rep.r1 = (double)sum /
           ((double)rep.d2_gg1 * (double)rep.set_size * lx * lx * lx);
  rep.r2 = (double)sum / ((double)rep.set_size * lx);
  return rep;
}

HyperbolaReport hyperbola_crosscheck(const DigitSet& ds, int64_t X) {
  if (X < 1) throw domain_error("hyperbola_crosscheck: X must be >= 1");
  const int64_t hi = checked_mul(2, X);
  const SieveTable d2 = sieve_divisor_count(X + 1, hi);

  HyperbolaReport rep;
  int64_t sieve_sum = 0;
  ds.for_each(X, hi, [&](int64_t n) {
    ++rep.set_size;
    sieve_sum = checked_add(sieve_sum, d2.values[(size_t)(n - d2.lo)]);
  });
  rep.sieve_sum = sieve_sum;

  // d2(n) = 2 #{m | n : m*m <= n} - [n square], summed over the members:
  // count multiples of each m <= sqrt(2X) that lie in (X, 2X] above m^2.
  int64_t pair_count = 0;
  for (int64_t m = 1; m * m <= hi; ++m) {
    const int64_t start = std::max(X + 1, m * m);
    int64_t n = ((start + m - 1) / m) * m;
    for (; n <= hi; n += m) {
      if (ds.contains(n)) ++pair_count;
    }
  }
  int64_t squares = 0;
  for (int64_t s = 1; s * s <= hi; ++s) {
    if (s * s > X && ds.contains(s * s)) ++squares;
  }
  rep.hyperbola_sum = 2 * pair_count - squares;
  rep.difference = rep.sieve_sum - rep.hyperbola_sum;
  return rep;
}

namespace {

// Canonical flag string: together with the fixed fields this pins the run
// completely, so a manifest can be replayed verbatim.
std::string canonical_command(const RunConfig& cfg, int64_t X, int64_t H) {
  std::ostringstream c;
  c << cfg.subcommand << " --g " << cfg.g << " --b " << cfg.b;
  if (cfg.subcommand != "l1") c << " --X " << X;
  if (H > 0) c << " --H " << H;
  char eta_buf[64];
  std::snprintf(eta_buf, sizeof(eta_buf), "%.17g", cfg.eta);
  c << " --eta " << eta_buf << " --seed " << cfg.seed << " --threads "
    << cfg.threads;
  if (cfg.subcommand == "moment") c << " --q " << cfg.q;
  if (cfg.subcommand == "voronoi-check" || cfg.subcommand == "discrepancy")
    c << " --qmax " << cfg.q_max;
  if (cfg.subcommand == "discrepancy")
    c << (cfg.coprime ? " --coprime" : " --no-coprime")
      << (cfg.weighted ? " --weighted" : "");
  if (cfg.subcommand == "l1") {
    c << " --k " << cfg.k;
    if (cfg.k_max >= cfg.k) c << " --kmax " << cfg.k_max;
    if (cfg.nodes >= 1) c << " --nodes " << cfg.nodes;
  }
  if (cfg.subcommand == "arcs") c << " --samples " << cfg.samples;
  if (cfg.subcommand == "minor-scan") c << " --grid " << cfg.grid;
  if (cfg.subcommand == "main-term") c << " --form " << cfg.form;
  return c.str();
}

RunManifest base_manifest(const RunConfig& cfg, int64_t X, int64_t H,
                          int64_t P, int64_t Q) {
  RunManifest m;
  m.tool_version = kToolVersion;
  m.timestamp = utc_timestamp_rfc3339();
  m.g = cfg.g;
  m.b = cfg.b;
  m.X = X;
  m.H = H;
  m.eta = cfg.eta;
  m.P = P;
  m.Q = Q;
  m.seed = cfg.seed;
  m.command = canonical_command(cfg, X, H);
  return m;
}

int64_t resolve_x(const RunConfig& cfg) {
  if (cfg.m >= 0) return checked_pow(cfg.g, cfg.m);
  if (cfg.X >= 1) return cfg.X;
  throw domain_error("specify --X or --m");
}

int64_t resolve_h(const RunConfig& cfg, const DigitSet& ds, int64_t X) {
  if (cfg.auto_h) return choose_interval(ds, X).spec.H;
  if (cfg.H >= 1) return cfg.H;
  throw domain_error("specify --H or --auto-H");
}

Csv run_divisor_sum(const RunConfig& cfg, const DigitSet& ds, int64_t X,
                    int64_t H) {
  const SieveTable d2 = divisor_table(cfg.cache_dir, X + 1, checked_add(X, H));
  int64_t set_size = 0, sum = 0;
  ds.for_each(X, X + H, [&](int64_t n) {
    ++set_size;
    sum = checked_add(sum, d2.values[(size_t)(n - d2.lo)]);
  });
  Csv csv({"g", "b", "X", "H", "set_size", "divisor_sum"});
  csv.row({cell(cfg.g), cell(cfg.b), cell(X), cell(H), cell(set_size),
           cell(sum)});
  return csv;
}

Csv run_main_term(const RunConfig& cfg, const DigitSet& ds, int64_t X,
                  int64_t H, const ArcParams& params) {
  const MainTermForm form = cfg.form == "beta" ? MainTermForm::BetaQuadrature
                                               : MainTermForm::SineKernel;
  const MainTermResult mt = major_arc_main_term(ds, X, H, params, form);
  const SieveTable d2 = divisor_table(cfg.cache_dir, X + 1, checked_add(X, H));
  int64_t direct = 0;
  ds.for_each(X, X + H, [&](int64_t n) {
    direct = checked_add(direct, d2.values[(size_t)(n - d2.lo)]);
  });
  const double lx = std::log((double)X);
  const double scale = (double)mt.set_size * std::pow(lx, 2.5);
  const double abs_error = std::fabs(mt.value - (double)direct);
  Csv csv({"g", "b", "X", "H", "P", "Q", "form", "main_term", "imag_residue",
           "direct_sum", "abs_error", "error_scale", "error_ratio"});
  csv.row({cell(cfg.g), cell(cfg.b), cell(X), cell(H), cell(params.P),
           cell(params.Q), cfg.form, cell(mt.value), cell(mt.imag_residue),
           cell(direct), cell(abs_error), cell(scale),
           cell(scale > 0 ? abs_error / scale : 0.0)});
  return csv;
}

Csv run_arcs(const RunConfig& cfg, const ArcParams& params) {
  std::mt19937_64 rng((uint64_t)cfg.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Csv csv({"index", "alpha", "class", "a", "q", "radius"});
  for (int64_t i = 0; i < cfg.samples; ++i) {
    const double alpha = uni(rng);
    const Classification c = classify(params, alpha);
    csv.row({cell(i), cell(alpha), c.major ? "major" : "minor",
             cell(c.major ? c.arc.a : 0), cell(c.major ? c.arc.q : 0),
             cell(c.major ? c.arc.radius : 0.0)});
  }
  return csv;
}

Csv run_voronoi_check(const RunConfig& cfg, int64_t X, int64_t H) {
  const SieveTable d2 = divisor_table(cfg.cache_dir, X, checked_add(X, H));
  std::vector<std::pair<int64_t, int64_t>> cells;  // (q, a)
  for (int64_t q = 1; q <= cfg.q_max; ++q) {
    if (q == 1) {
      cells.emplace_back(1, 0);
      continue;
    }
    for (int64_t a = 1; a < q; ++a)
      if (std::gcd(a, q) == 1) cells.emplace_back(q, a);
  }

  struct Row {
    int64_t q, a;
    double raw, bound, ratio;
  };
  std::vector<Row> rows(cells.size());
  const double lx = std::log((double)X);
  for_chunks((int64_t)cells.size(), 16, cfg.threads,
             [&](int64_t, int64_t begin, int64_t end) {
               for (int64_t i = begin; i < end; ++i) {
                 const auto [q, a] = cells[(size_t)i];
                 const cplx s = divisor_exp_sum((double)a / (double)q, X, H, d2);
                 const double raw =
                     std::abs(s - cplx(boundary_main_term(q, X, H), 0.0));
                 const double bound =
                     std::sqrt((double)q) * (double)H / std::sqrt((double)X) *
                         lx * lx +
                     (double)q * std::pow((double)X, 0.05);
                 rows[(size_t)i] = {q, a, raw, bound, raw / bound};
               }
             });

  Csv csv({"q", "a", "raw_error", "bound", "ratio"});
  for (const Row& r : rows)
    csv.row({cell(r.q), cell(r.a), cell(r.raw), cell(r.bound), cell(r.ratio)});
  return csv;
}

Csv run_moment(const RunConfig& cfg, int64_t X) {
  const SieveTable d2 = divisor_table(cfg.cache_dir, 1, std::max<int64_t>(X - 1, 1));
  const double emp = error_second_moment(cfg.q == 1 ? 0 : 1, cfg.q, X, d2);
  const double pred = error_second_moment_prediction(cfg.q, X);
  Csv csv({"X", "empirical", "predicted", "ratio"});
  csv.row({cell(X), cell(emp), cell(pred), cell(emp / pred)});
  return csv;
}

Csv run_discrepancy(const RunConfig& cfg, const DigitSet& ds, int64_t X) {
  const DiscrepancyReport rep =
      progression_discrepancy(ds, X, cfg.q_max, cfg.coprime, cfg.weighted);
  Csv csv({"q", "max_residue_deviation", "weighted"});
  for (const DiscrepancyRow& r : rep.rows)
    csv.row({cell(r.q), cell(r.max_residue_deviation), cell(r.weighted)});
  std::fprintf(stdout, "set_size=%lld total=%s ratio=%s\n",
               (long long)rep.set_size, fmt_double(rep.total).c_str(),
               fmt_double(rep.ratio).c_str());
  return csv;
}

Csv run_l1(const RunConfig& cfg, const DigitSet& ds) {
  const int64_t k_hi = cfg.k_max >= cfg.k ? cfg.k_max : cfg.k;
  Csv csv({"g", "b", "k", "nodes", "integral", "set_size", "lambda",
           "reference", "ratio"});
  for (int64_t k = cfg.k; k <= k_hi; ++k) {
    const int64_t nodes =
        cfg.nodes >= 1 ? cfg.nodes : checked_mul(64, checked_pow(cfg.g, k));
    const L1Report rep = l1_norm_estimate(ds, k, nodes, cfg.threads);
    csv.row({cell(cfg.g), cell(cfg.b), cell(k), cell(rep.nodes),
             cell(rep.integral), cell(rep.set_size), cell(rep.decay_exponent),
             cell(rep.reference), cell(rep.ratio)});
  }
  return csv;
}

Csv run_double_sum(const RunConfig& cfg, const DigitSet& ds, int64_t X,
                   int64_t H, const ArcParams& params) {
  const DoubleSumReport rep = ramanujan_double_sums(ds, X, H, params.P);
  Csv csv({"g", "b", "X", "H", "P", "set_size", "signed_sum", "absolute_sum",
           "reference"});
  csv.row({cell(cfg.g), cell(cfg.b), cell(X), cell(H), cell(params.P),
           cell(rep.set_size), cell(rep.signed_sum), cell(rep.absolute_sum),
           cell(rep.reference)});
  return csv;
}

Csv run_hyperbola(const RunConfig& cfg, const DigitSet& ds, int64_t X) {
  const HyperbolaReport rep = hyperbola_crosscheck(ds, X);
  Csv csv({"g", "b", "X", "set_size", "sieve_sum", "hyperbola_sum",
           "difference"});
  csv.row({cell(cfg.g), cell(cfg.b), cell(X), cell(rep.set_size),
           cell(rep.sieve_sum), cell(rep.hyperbola_sum),
           cell(rep.difference)});
  return csv;
}

Csv run_minor_scan(const RunConfig& cfg, int64_t X, int64_t H,
                   const ArcParams& params) {
  const SieveTable d2 = divisor_table(cfg.cache_dir, X, checked_add(X, H));
  const MinorScanReport rep =
      minor_arc_scan(X, H, params, cfg.grid, d2, cfg.threads);
  Csv csv({"X", "H", "eta", "P", "Q", "grid_nodes", "minor_count", "max_abs",
           "argmax_alpha", "ratio", "all_major"});
  csv.row({cell(X), cell(H), cell(cfg.eta), cell(params.P), cell(params.Q),
           cell(rep.grid_nodes), cell(rep.minor_count), cell(rep.max_abs),
           cell(rep.peak.alpha), cell(rep.ratio),
           cell((int64_t)(rep.all_major ? 1 : 0))});
  return csv;
}

}  // namespace

int run_experiment(const RunConfig& cfg) {
  try {
    const DigitSet ds(cfg.g, cfg.b);
    const bool needs_x = cfg.subcommand != "l1";
    const int64_t X = needs_x ? resolve_x(cfg) : 0;
    const bool needs_h = cfg.subcommand == "divisor-sum" ||
                         cfg.subcommand == "main-term" ||
                         cfg.subcommand == "voronoi-check" ||
                         cfg.subcommand == "double-sum" ||
                         cfg.subcommand == "minor-scan";
    const int64_t H = needs_h ? resolve_h(cfg, ds, X) : 0;

    const bool needs_arcs = cfg.subcommand == "main-term" ||
                            cfg.subcommand == "arcs" ||
                            cfg.subcommand == "double-sum" ||
                            cfg.subcommand == "minor-scan";
    ArcParams params;
    if (needs_arcs) params = ArcParams::from_eta(X, cfg.eta);

    Csv csv = [&] {
      if (cfg.subcommand == "divisor-sum") return run_divisor_sum(cfg, ds, X, H);
      if (cfg.subcommand == "main-term") return run_main_term(cfg, ds, X, H, params);
      if (cfg.subcommand == "arcs") return run_arcs(cfg, params);
      if (cfg.subcommand == "voronoi-check") return run_voronoi_check(cfg, X, H);
      if (cfg.subcommand == "moment") return run_moment(cfg, X);
      if (cfg.subcommand == "discrepancy") return run_discrepancy(cfg, ds, X);
      if (cfg.subcommand == "l1") return run_l1(cfg, ds);
      if (cfg.subcommand == "double-sum") return run_double_sum(cfg, ds, X, H, params);
      if (cfg.subcommand == "hyperbola") return run_hyperbola(cfg, ds, X);
      if (cfg.subcommand == "minor-scan") return run_minor_scan(cfg, X, H, params);
      throw domain_error("unknown subcommand: " + cfg.subcommand);
    }();

    RunManifest manifest = base_manifest(cfg, X, H, params.P, params.Q);
    fs::create_directories(cfg.out_dir);
    const fs::path base = fs::path(cfg.out_dir) / cfg.subcommand;
    write_file(base.string() + ".csv", csv.text());
    write_file(base.string() + ".manifest", manifest.serialize());
    return 0;
  } catch (const numeric_guard_error& e) {
    std::fprintf(stderr, "numeric guard: %s\n", e.what());
    return 3;
  } catch (const domain_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
}

}  // namespace mdd
