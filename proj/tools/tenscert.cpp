// Command-line front end: certify generic identifiability of tensor spaces,
// certify specific decompositions, sweep shape families, and reproduce the
// rank-comparison tables.

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <tenscert/decomposition_json.hpp>
#include <tenscert/generic.hpp>
#include <tenscert/shape.hpp>
#include <tenscert/specific.hpp>
#include <tenscert/sweep.hpp>

namespace {

constexpr int kExitProved = 0;
constexpr int kExitInconclusive = 2;
constexpr int kExitNotIdentifiable = 3;
constexpr int kExitUsage = 64;
constexpr int kExitParse = 65;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("TENSCERT_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw tenscert::ParseError("TENSCERT_SEED is not an integer");
    }
  }
  return 0;
}

// Domanov--De Lathauwer reference ranks for m x n x n spaces, m in 2..33 and
// n in 4..9, shipped as static literature data for the comparison table.
std::optional<int> dd_reference(int m, int n) {
  static const int table[32][6] = {
      {4, 5, 6, 7, 8, 9},     {4, 5, 6, 7, 8, 9},     {5, 6, 7, 8, 9, 10},
      {5, 6, 7, 8, 10, 11},   {6, 7, 8, 9, 10, 11},   {7, 8, 9, 9, 11, 12},
      {8, 9, 9, 10, 11, 12},  {9, 9, 10, 11, 12, 13}, {9, 10, 11, 12, 13, 14},
      {9, 11, 12, 13, 14, 15},{9, 12, 13, 14, 15, 15},{9, 13, 14, 14, 15, 16},
      {9, 14, 14, 15, 16, 17},{9, 14, 15, 16, 17, 18},{9, 14, 16, 17, 18, 19},
      {9, 14, 17, 18, 19, 20},{9, 14, 18, 19, 20, 20},{9, 14, 19, 20, 20, 21},
      {9, 14, 20, 20, 21, 22},{9, 14, 21, 21, 22, 23},{9, 14, 21, 22, 23, 24},
      {9, 14, 21, 23, 24, 25},{9, 14, 21, 24, 25, 26},{9, 14, 21, 25, 26, 26},
      {9, 14, 21, 26, 27, 27},{9, 14, 21, 27, 27, 28},{9, 14, 21, 28, 28, 29},
      {9, 14, 21, 29, 29, 30},{9, 14, 21, 30, 30, 31},{9, 14, 21, 30, 31, 32},
      {9, 14, 21, 30, 32, 33},{9, 14, 21, 30, 33, 34},
  };
  if (m < 2 || m > 33 || n < 4 || n > 9) return std::nullopt;
  return table[m - 2][n - 4];
}

int verdict_exit_code(const tenscert::Verdict& v) {
  using tenscert::GenericOutcome;
  switch (v.outcome) {
    case GenericOutcome::Proved:
    case GenericOutcome::ProvedWeaklyDefectivePath:
      return kExitProved;
    case GenericOutcome::Inconclusive:
      return kExitInconclusive;
    case GenericOutcome::DefectiveSuspected:
    case GenericOutcome::KnownException:
      return kExitNotIdentifiable;
  }
  return kExitInconclusive;
}

nlohmann::json verdict_to_json(const tenscert::Shape& shape, long long r,
                               const tenscert::Verdict& v) {
  nlohmann::json j;
  j["shape"] = shape.dims();
  j["r"] = r;
  j["verdict"] = to_string(v.outcome);
  j["exception"] = v.exception ? nlohmann::json(to_string(v.exception->kind))
                               : nlohmann::json(nullptr);
  j["prime"] = v.prime;
  j["seed"] = v.seed;
  j["attempts"] = v.attempts;
  j["elapsed_ms"] = v.elapsed_ms;
  j["ell"] = v.ell;
  j["target"] = v.target;
  j["hessian_rank"] = v.hessian_rank;
  j["path"] = v.path == tenscert::HessianPath::WeaklyDefective ? "s7a" : "s7b";
  if (!v.reason.empty()) j["reason"] = v.reason;
  return j;
}

int cmd_generic(const std::string& shape_str, std::optional<long long> rank,
                const tenscert::GenericConfig& config, bool json) {
  const tenscert::Shape shape = tenscert::parse_shape(shape_str);
  const auto q = tenscert::derive(shape);
  const long long r = rank.value_or(q.rbar);
  const auto v = tenscert::check_generic(shape, r, config);
  if (json) {
    std::cout << verdict_to_json(shape, r, v).dump(2) << "\n";
  } else {
    std::cout << "shape " << shape.to_string() << "  Pi=" << q.pi << " Sigma=" << q.sigma
              << " rbar=" << q.rbar << (q.perfect ? " (perfect)" : "") << "\n";
    std::cout << "rank " << r << ": " << to_string(v.outcome);
    if (v.exception) std::cout << " (" << to_string(v.exception->kind) << ")";
    std::cout << "\n";
    if (v.proved()) {
      std::cout << "  ell = " << v.ell << ", hessian rank " << v.hessian_rank << " = target "
                << v.target << (v.path == tenscert::HessianPath::WeaklyDefective
                                    ? " (weakly-defective path)"
                                    : "")
                << "\n";
    } else if (!v.reason.empty()) {
      std::cout << "  " << v.reason << "\n";
    }
    std::cout << "  attempts " << v.attempts << ", prime " << v.prime << ", "
              << v.elapsed_ms << " ms\n";
  }
  return verdict_exit_code(v);
}

nlohmann::json specific_to_json(const tenscert::SpecificVerdict& v) {
  nlohmann::json j;
  j["verdict"] = to_string(v.outcome);
  if (v.failed_stage) j["stage"] = to_string(*v.failed_stage);
  if (v.failed_point >= 0) j["point"] = v.failed_point + 1;
  if (!v.reason.empty()) j["reason"] = v.reason;
  nlohmann::json rep;
  rep["factor_ranks"] = v.report.factor_ranks;
  rep["core_shape"] = v.report.core_dims;
  if (v.report.smoothness) {
    const auto& c = *v.report.smoothness;
    rep["smoothness"] = {
        {"p", c.p},
        {"rotations", c.rotations},
        {"flattening_ranks", c.flattening_ranks},
        {"kernel_dims", c.kernel_dims},
        {"cokernel_dims", c.cokernel_dims},
        {"image_dim", c.image_dim},
        {"ell", c.target_ell},
        {"passed", c.passed},
    };
  }
  rep["tangent_rows"] = v.report.tangent_rows;
  rep["tangent_cols"] = v.report.tangent_cols;
  rep["ell"] = v.report.ell;
  rep["kernel_rows"] = v.report.kernel_rows;
  rep["sigma"] = v.report.sigma;
  rep["hessian_ranks"] = v.report.hessian_ranks;
  j["report"] = std::move(rep);
  return j;
}

int cmd_specific(const std::string& input, const tenscert::SpecificConfig& config,
                 bool with_kruskal, bool json) {
  const tenscert::Decomposition dec = tenscert::load_decomposition(input);
  const auto v = tenscert::check_specific(dec, config);

  std::optional<tenscert::KruskalResult> kruskal;
  if (with_kruskal && dec.dims.size() == 3 && dec.rank <= 14)
    kruskal = tenscert::kruskal_specific(dec);

  if (json) {
    auto j = specific_to_json(v);
    if (kruskal) {
      j["kruskal"] = {{"kranks", kruskal->kranks},
                      {"certified", kruskal->certified},
                      {"twice_bound", kruskal->twice_bound}};
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "decomposition: shape ";
    for (std::size_t i = 0; i < dec.dims.size(); ++i)
      std::cout << (i ? "," : "") << dec.dims[i];
    std::cout << " rank " << dec.rank << "\n";
    std::cout << "core shape: ";
    for (std::size_t i = 0; i < v.report.core_dims.size(); ++i)
      std::cout << (i ? "," : "") << v.report.core_dims[i];
    std::cout << "\n";
    if (v.report.smoothness) {
      const auto& c = *v.report.smoothness;
      std::cout << "smoothness: p=" << c.p << " rotations=" << c.rotations.size()
                << " flattening rank";
      for (auto rk : c.flattening_ranks) std::cout << " " << rk;
      std::cout << ", kernel dims";
      for (auto kd : c.kernel_dims) std::cout << " " << kd;
      std::cout << ", image dim " << c.image_dim << " (ell " << c.target_ell << ") "
                << (c.passed ? "passed" : "FAILED") << "\n";
    }
    if (v.report.kernel_rows >= 0)
      std::cout << "tangent: " << v.report.tangent_rows << "x" << v.report.tangent_cols
                << ", hyperplanes " << v.report.kernel_rows << " (ell " << v.report.ell
                << ")\n";
    if (!v.report.hessian_ranks.empty()) {
      std::cout << "hessian ranks (target Sigma = " << v.report.sigma << "):";
      for (auto rk : v.report.hessian_ranks) std::cout << " " << rk;
      std::cout << "\n";
    }
    if (kruskal) {
      std::cout << "kruskal comparator: k-ranks (" << kruskal->kranks[0] << ","
                << kruskal->kranks[1] << "," << kruskal->kranks[2] << "), bound "
                << kruskal->twice_bound << "/2 -> "
                << (kruskal->certified ? "certified" : "not certified") << "\n";
    }
    std::cout << "verdict: " << to_string(v.outcome);
    if (v.failed_stage) std::cout << " at stage " << to_string(*v.failed_stage);
    if (v.failed_point >= 0) std::cout << " (point " << v.failed_point + 1 << ")";
    std::cout << "\n";
    if (!v.reason.empty()) std::cout << "  " << v.reason << "\n";
  }
  return v.unique() ? kExitProved : kExitInconclusive;
}

int cmd_sweep(const tenscert::SweepConfig& config, bool json) {
  const auto summary = tenscert::run_sweep(config);
  if (json) {
    nlohmann::json j;
    j["total"] = summary.total;
    j["resumed"] = summary.resumed;
    j["verdicts"] = summary.verdict_counts;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "swept " << summary.total << " shapes (" << summary.resumed
              << " resumed)\n";
    for (const auto& [verdict, count] : summary.verdict_counts)
      std::cout << "  " << verdict << ": " << count << "\n";
  }
  return 0;
}

struct Range {
  int lo = 0, hi = 0;
};

Range parse_range(const std::string& text) {
  const auto pos = text.find("..");
  try {
    if (pos == std::string::npos) {
      const int v = std::stoi(text);
      return {v, v};
    }
    Range r{std::stoi(text.substr(0, pos)), std::stoi(text.substr(pos + 2))};
    if (r.lo > r.hi) throw std::invalid_argument(text);
    return r;
  } catch (const std::exception&) {
    throw tenscert::ParseError("cannot parse range '" + text + "', expected a..b");
  }
}

struct TableCell {
  int m, n;
  long long max_proved;
  long long rbar;
  bool perfect;
  long long kruskal;
  std::optional<int> dd;
};

// Largest r the criterion proves, searching downward from rbar; the first
// success certifies all smaller ranks as well.
TableCell table_cell(int m, int n, const tenscert::GenericConfig& base_config) {
  const tenscert::Shape shape({m, n, n});
  const auto q = tenscert::derive(shape);
  TableCell cell{m, n, 0, q.rbar, q.perfect, tenscert::kruskal_generic_bound(shape),
                 dd_reference(m, n)};
  for (long long r = q.rbar; r >= 1; --r) {
    tenscert::GenericConfig config = base_config;
    config.seed = tenscert::mix_seed(base_config.seed,
                                     tenscert::mix_seed(static_cast<std::uint64_t>(m),
                                                        static_cast<std::uint64_t>(n)));
    const auto v = tenscert::check_generic(shape, r, config);
    if (v.proved()) {
      cell.max_proved = r;
      break;
    }
  }
  return cell;
}

int cmd_table(const Range& rows, const Range& cols, const tenscert::GenericConfig& config,
              int jobs, bool json) {
  std::vector<std::pair<int, int>> cells;
  for (int m = rows.lo; m <= rows.hi; ++m)
    for (int n = cols.lo; n <= cols.hi; ++n) cells.emplace_back(m, n);

  std::vector<TableCell> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      results[i] = table_cell(cells[i].first, cells[i].second, config);
    }
  };
  const int n_jobs = std::max(1, jobs);
  if (n_jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  if (json) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& c : results) {
      nlohmann::json e{{"m", c.m},       {"n", c.n},           {"max_proved", c.max_proved},
                       {"rbar", c.rbar}, {"perfect", c.perfect}, {"kruskal", c.kruskal}};
      e["dd_reference"] = c.dd ? nlohmann::json(*c.dd) : nlohmann::json(nullptr);
      j.push_back(std::move(e));
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "m x n x n spaces: proved = largest r certified here, "
                 "kruskal = generic Kruskal bound, dd = Domanov-De Lathauwer (reference)\n";
    std::cout << "  m   n  proved  kruskal  dd\n";
    for (const auto& c : results) {
      std::printf("%3d %3d  %5lld%s  %7lld  %s\n", c.m, c.n, c.max_proved,
                  c.perfect ? "*" : " ", c.kruskal,
                  c.dd ? std::to_string(*c.dd).c_str() : "-");
    }
    bool any_perfect = false;
    for (const auto& c : results) any_perfect |= c.perfect;
    if (any_perfect)
      std::cout << "(* perfect shape: the criterion is limited to rbar there)\n";
  }
  return 0;
}

int cmd_expected_rank(const std::string& shape_str, bool json) {
  const tenscert::Shape shape = tenscert::parse_shape(shape_str);
  const auto q = tenscert::derive(shape);
  const auto exception = tenscert::exception_lookup(shape, q.rbar);
  if (json) {
    nlohmann::json j{{"shape", shape.dims()}, {"pi", q.pi},       {"sigma", q.sigma},
                     {"rbar", q.rbar},        {"perfect", q.perfect},
                     {"ell_at_rbar", q.ell(q.rbar)}};
    j["exception_at_rbar"] =
        exception ? nlohmann::json(to_string(exception->kind)) : nlohmann::json(nullptr);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "shape " << shape.to_string() << "\n"
              << "  Pi      = " << q.pi << "\n"
              << "  Sigma   = " << q.sigma << "\n"
              << "  rbar    = " << q.rbar << (q.perfect ? "  (perfect shape)" : "") << "\n"
              << "  ell(rbar) = " << q.ell(q.rbar) << "\n";
    if (exception)
      std::cout << "  note: (" << shape.to_string() << ", " << q.rbar
                << ") is a known " << to_string(exception->kind) << " case\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact identifiability certificates for tensor rank decompositions"};
  app.require_subcommand(1);

  std::string shape_str;
  long long rank_arg = -1;
  std::uint32_t prime = 127;
  int retries = 3;
  bool all_points = false;
  std::int64_t seed_arg = -1;
  bool json = false;

  auto* generic = app.add_subcommand("generic", "certify generic r-identifiability of a shape");
  generic->add_option("--shape", shape_str, "comma-separated mode sizes, e.g. 5,5,5")->required();
  generic->add_option("--rank", rank_arg, "rank to certify (default: rbar)");
  generic->add_option("--prime", prime, "prime field modulus (default 127)");
  generic->add_option("--retries", retries, "attempts before escalating (default 3)");
  generic->add_flag("--all-points", all_points, "check the Hessian at every point");
  generic->add_option("--seed", seed_arg, "random seed (default: TENSCERT_SEED or 0)");
  generic->add_flag("--json", json, "machine-readable output");

  std::string input_path;
  bool exact = false;
  std::uint32_t specific_prime = 0;
  int wedge_p = 0;
  int rotations = 1;
  bool skip_smoothness = false;
  bool no_kruskal = false;
  auto* specific = app.add_subcommand("specific", "certify uniqueness of a given decomposition");
  specific->add_option("--input", input_path, "decomposition JSON file")->required();
  specific->add_flag("--exact", exact, "exact rational arithmetic (default)");
  specific->add_option("--prime", specific_prime, "modular prescreen over GF(q) instead");
  specific->add_option("--p", wedge_p, "wedge degree (default floor(n3/2) on the core)");
  specific->add_option("--rotations", rotations, "initial contraction count, 1..3 (default 1)");
  specific->add_flag("--skip-smoothness", skip_smoothness,
                     "assume the point is nonsingular instead of certifying it");
  specific->add_flag("--no-kruskal", no_kruskal, "omit the Kruskal comparator");
  specific->add_flag("--json", json, "machine-readable output");

  long long max_pi = 100;
  int max_order = 16;
  int jobs = 1;
  std::string out_path;
  bool resume = false;
  auto* sweep = app.add_subcommand("sweep", "run the generic check at rbar over all shapes with Pi <= bound");
  sweep->add_option("--max-pi", max_pi, "bound on the product of mode sizes")->required();
  sweep->add_option("--max-order", max_order, "bound on the number of modes (default 16)");
  sweep->add_option("--jobs", jobs, "worker threads (default 1)");
  sweep->add_option("--out", out_path, "JSONL output path");
  sweep->add_flag("--resume", resume, "skip shapes already present in the output file");
  sweep->add_option("--prime", prime, "prime field modulus (default 127)");
  sweep->add_option("--retries", retries, "attempts before escalating (default 3)");
  sweep->add_option("--seed", seed_arg, "global seed (default: TENSCERT_SEED or 0)");
  sweep->add_flag("--json", json, "machine-readable summary");

  std::string rows_str = "2..9", cols_str = "4..9";
  auto* table = app.add_subcommand("table", "largest certified rank for m x n x n spaces");
  table->add_option("--rows", rows_str, "m range a..b (default 2..9)");
  table->add_option("--cols", cols_str, "n range a..b (default 4..9)");
  table->add_option("--prime", prime, "prime field modulus (default 127)");
  table->add_option("--retries", retries, "attempts before escalating (default 3)");
  table->add_option("--seed", seed_arg, "seed (default: TENSCERT_SEED or 0)");
  table->add_option("--jobs", jobs, "worker threads (default 1)");
  table->add_flag("--json", json, "machine-readable output");

  auto* expected = app.add_subcommand("expected-rank", "derived quantities of a shape");
  expected->add_option("--shape", shape_str, "comma-separated mode sizes")->required();
  expected->add_flag("--json", json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const std::uint64_t seed =
        seed_arg >= 0 ? static_cast<std::uint64_t>(seed_arg) : default_seed();
    tenscert::GenericConfig gconfig;
    gconfig.prime = prime;
    gconfig.retries = retries;
    gconfig.all_points = all_points;
    gconfig.seed = seed;

    if (generic->parsed()) {
      return cmd_generic(shape_str,
                         rank_arg >= 0 ? std::optional<long long>(rank_arg) : std::nullopt,
                         gconfig, json);
    }
    if (specific->parsed()) {
      tenscert::SpecificConfig config;
      config.p = wedge_p;
      config.rotations = rotations;
      config.skip_smoothness = skip_smoothness;
      if (specific_prime != 0) {
        if (exact) throw tenscert::NotApplicable("--exact and --prime are mutually exclusive");
        config.exact = false;
        config.prime = specific_prime;
      }
      return cmd_specific(input_path, config, !no_kruskal, json);
    }
    if (sweep->parsed()) {
      tenscert::SweepConfig config;
      config.max_pi = max_pi;
      config.max_order = max_order;
      config.jobs = jobs;
      config.out_path = out_path;
      config.resume = resume;
      config.generic = gconfig;
      return cmd_sweep(config, json);
    }
    if (table->parsed()) {
      return cmd_table(parse_range(rows_str), parse_range(cols_str), gconfig, jobs, json);
    }
    if (expected->parsed()) {
      return cmd_expected_rank(shape_str, json);
    }
  } catch (const tenscert::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const tenscert::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const tenscert::InvalidRank& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const tenscert::InvalidShape& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const tenscert::NotApplicable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
