#include "mdd/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "mdd/explab.hpp"

namespace mdd {

namespace {

// Flat key=value config file, '#' comments. Values seed the defaults; any
// flag given on the command line still wins because parsing happens after.
void apply_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw domain_error("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const size_t last = line.find_last_not_of(" \t");
    line = line.substr(first, last - first + 1);
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw domain_error("config line without '=': " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto geti = [&](const char* key, int64_t& out) {
    if (auto it = kv.find(key); it != kv.end()) out = std::stoll(it->second);
  };
  auto getd = [&](const char* key, double& out) {
    if (auto it = kv.find(key); it != kv.end()) out = std::stod(it->second);
  };
  auto gets = [&](const char* key, std::string& out) {
    if (auto it = kv.find(key); it != kv.end()) out = it->second;
  };
  auto getb = [&](const char* key, bool& out) {
    if (auto it = kv.find(key); it != kv.end())
      out = it->second == "1" || it->second == "true";
  };
  geti("g", cfg.g);
  geti("b", cfg.b);
  geti("m", cfg.m);
  geti("X", cfg.X);
  geti("H", cfg.H);
  getb("auto_H", cfg.auto_h);
  getd("eta", cfg.eta);
  gets("out", cfg.out_dir);
  gets("cache", cfg.cache_dir);
  geti("seed", cfg.seed);
  if (auto it = kv.find("threads"); it != kv.end())
    cfg.threads = (int)std::stoll(it->second);
  geti("q", cfg.q);
  geti("qmax", cfg.q_max);
  geti("k", cfg.k);
  geti("kmax", cfg.k_max);
  geti("nodes", cfg.nodes);
  geti("grid", cfg.grid);
  geti("samples", cfg.samples);
  gets("form", cfg.form);
  getb("coprime", cfg.coprime);
  getb("weighted", cfg.weighted);
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  static std::string config_path_sink;  // consumed by the pre-parse scan
  sub->add_option("--config", config_path_sink,
                  "flat key=value config file ('#' comments)");
  sub->add_option("--g", cfg.g, "digit base g (>= 3)");
  sub->add_option("--b", cfg.b, "excluded digit b in {2,...,g-1}");
  sub->add_option("--X", cfg.X, "interval start X");
  sub->add_option("--m", cfg.m, "set X = g^m");
  sub->add_option("--H", cfg.H, "interval length H");
  sub->add_flag("--auto-H", cfg.auto_h, "derive H from the size target");
  sub->add_option("--eta", cfg.eta, "arc exponent eta (default 0.02)");
  sub->add_option("--out", cfg.out_dir, "output directory");
  sub->add_option("--seed", cfg.seed, "seed for randomized sweeps");
  sub->add_option("--threads", cfg.threads, "worker threads");
  sub->add_option("--cache", cfg.cache_dir,
                  "sieve cache directory (MDD_CACHE overrides)");
}

}  // namespace

int run_cli(int argc, char** argv) {
  RunConfig cfg;

  // config file first, so later flags override its values
  try {
    for (int i = 1; i + 1 < argc; ++i)
      if (std::string(argv[i]) == "--config")
        apply_config_file(argv[i + 1], cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }

  CLI::App app{"desk-scale diagnostics for divisor sums over missing-digit "
               "integers"};
  app.require_subcommand(1);
  std::string config_sink;
  app.add_option("--config", config_sink,
                 "flat key=value config file ('#' comments)");

  struct SubSpec {
    const char* name;
    const char* help;
  };
  const SubSpec specs[] = {
      {"divisor-sum", "sum of d2 over the digit-set members of (X, X+H]"},
      {"main-term", "major-arc main term vs the direct divisor sum"},
      {"arcs", "classify random frequencies into major/minor arcs"},
      {"voronoi-check", "boundary-formula error sweep over rationals a/q"},
      {"moment", "second moment of the twisted error term vs prediction"},
      {"discrepancy", "digit-set residue discrepancies per modulus"},
      {"l1", "L1 norm of the digit-set exponential sum vs decay reference"},
      {"double-sum", "Ramanujan-weighted double sums over the digit set"},
      {"hyperbola", "divisor-pair count cross-check on (X, 2X]"},
      {"minor-scan", "sup of |S2| over minor-classified grid frequencies"},
  };
  for (const SubSpec& s : specs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, cfg);
    if (std::string(s.name) == "moment")
      sub->add_option("--q", cfg.q, "modulus q");
    if (std::string(s.name) == "voronoi-check" ||
        std::string(s.name) == "discrepancy")
      sub->add_option("--qmax", cfg.q_max, "largest modulus in the sweep");
    if (std::string(s.name) == "discrepancy") {
      sub->add_flag("--coprime,!--no-coprime", cfg.coprime,
                    "restrict to q coprime to g(g-1)");
      sub->add_flag("--weighted", cfg.weighted, "weight deviations by q");
    }
    if (std::string(s.name) == "l1") {
      sub->add_option("--k", cfg.k, "block exponent k (H = g^k)");
      sub->add_option("--kmax", cfg.k_max, "sweep k..kmax");
      sub->add_option("--nodes", cfg.nodes, "trapezoid nodes (>= 32 g^k)");
    }
    if (std::string(s.name) == "arcs")
      sub->add_option("--samples", cfg.samples, "number of random frequencies");
    if (std::string(s.name) == "minor-scan")
      sub->add_option("--grid", cfg.grid, "grid nodes (>= 1e4)");
    if (std::string(s.name) == "main-term")
      sub->add_option("--form", cfg.form, "sine-kernel (default) or beta");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (const char* env = std::getenv("MDD_CACHE"); env && *env)
    cfg.cache_dir = env;

  try {
    return run_experiment(cfg);
  } catch (const numeric_guard_error& e) {
    std::fprintf(stderr, "numeric guard: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

}  // namespace mdd
