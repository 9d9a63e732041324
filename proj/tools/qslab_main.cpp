#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "qslab/analysis.hpp"
#include "qslab/cantor.hpp"
#include "qslab/config.hpp"
#include "qslab/dimension.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace qslab;

namespace {

std::string pr(const Rational& q) {
  std::ostringstream os;
  os << rat_str(q) << " = " << std::setprecision(9) << to_double(q);
  return os.str();
}

ordered_json rj(const Rational& q) { return rational_json(q); }

IndexSet make_index_set(const Config& c, const Derived& d) {
  return c.derived_index ? IndexSet::derived_mode(c.params, d)
                         : IndexSet::custom(c.custom_members, c.params.alpha);
}

Rational series_constant(const Config& c, const Derived& d) {
  return c.carleson_C ? *c.carleson_C : d.c_inf;
}

std::string cache_file(const Config& c, const std::string& out_dir) {
  const char* env = std::getenv("QSLAB_CACHE_DIR");
  fs::path dir = env && *env ? fs::path(env)
                             : (out_dir.empty() ? fs::path(".qslab-cache")
                                                : fs::path(out_dir) / "cache");
  fs::create_directories(dir);
  return (dir / (hash_hex(config_hash(c)) + ".series")).string();
}

CarlesonSeries make_series(const Config& c, const Derived& d, const IndexSet& J, bool use_cache,
                           const std::string& out_dir) {
  Ladder lad = Ladder::from_params(c.params);
  Rational C = series_constant(c, d);
  if (use_cache) {
    std::string path = cache_file(c, out_dir);
    if (auto s = CarlesonSeries::try_load(path, config_hash(c), lad, C, J, c.budgets.leaf))
      return std::move(*s);
    CarlesonSeries s(lad, J, C, c.budgets.leaf);
    s.save(path, config_hash(c));
    return s;
  }
  return CarlesonSeries(lad, J, C, c.budgets.leaf);
}

RunManifest manifest(const std::string& cmd, const std::string& cfg_path, const Config& c) {
  return RunManifest{cmd, cfg_path, hash_hex(config_hash(c)), c.seed};
}

void emit(const std::string& out_dir, const std::string& name, ordered_json j) {
  if (out_dir.empty()) return;
  write_json((fs::path(out_dir) / name).string(), j);
  std::cout << "wrote " << (fs::path(out_dir) / name).string() << "\n";
}

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::optional<uint64_t> seed, samples, chains, leaf;
  bool cache = false;

  void attach(CLI::App* sub) {
    sub->add_option("--config", config_path, "run description (JSON)")->required();
    sub->add_option("--out", out_dir, "directory for JSON reports");
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--samples", samples, "override budgets.samples");
    sub->add_option("--chains", chains, "override budgets.chains");
    sub->add_option("--leaf-budget", leaf, "override budgets.leaf");
    sub->add_flag("--cache", cache, "reuse the series cache (QSLAB_CACHE_DIR)");
  }

  Config load() const {
    Config c = load_config(config_path);
    if (seed) c.seed = *seed;
    if (samples) c.budgets.samples = *samples;
    if (chains) c.budgets.chains = *chains;
    if (leaf) c.budgets.leaf = *leaf;
    return c;
  }
};

int cmd_validate(const CommonOpts& opt) {
  Config c = opt.load();
  Derived d = derive(c.params);
  auto rows = validate(c.params, d);
  std::cout << "derived constants\n"
            << "  D      = " << pr(d.D) << "\n  tau    = " << pr(d.tau) << "\n  C_inf  = "
            << pr(d.c_inf) << "\n  d'     = " << d.d_prime << "\n";
  std::cout << "scales\n";
  for (uint32_t n = 0; n <= c.params.depth; ++n) {
    const auto& l = d.levels[n];
    std::cout << "  n=" << n << "  e=" << c.params.exponents[n] << "  m=" << l.m.get_str()
              << "  r=" << rat_str(l.r) << "  gap=" << rat_str(l.gap) << "\n";
  }
  bool hard = false;
  for (const auto& r : rows) {
    const char* sev = r.severity == CheckRow::error ? "ERROR"
                      : r.severity == CheckRow::warn ? "WARN "
                                                     : "INFO ";
    std::cout << (r.passed ? "  ok   " : "  FAIL ") << sev << " " << r.name << ": " << r.detail
              << "\n";
    if (!r.passed && r.severity == CheckRow::error) hard = true;
  }
  ordered_json j;
  j["manifest"] = manifest_json(manifest("validate", opt.config_path, c));
  j["config"] = config_json(c);
  j["constants"] = {{"D", rj(d.D)}, {"tau", rj(d.tau)}, {"c_inf", rj(d.c_inf)},
                    {"d_prime", d.d_prime}};
  ordered_json scales = ordered_json::array();
  for (uint32_t n = 0; n <= c.params.depth; ++n)
    scales.push_back({{"n", n},
                      {"e", c.params.exponents[n]},
                      {"m", d.levels[n].m.get_str()},
                      {"r", rj(d.levels[n].r)},
                      {"gap", rj(d.levels[n].gap)}});
  j["scales"] = scales;
  ordered_json checks = ordered_json::array();
  for (const auto& r : rows)
    checks.push_back({{"name", r.name},
                      {"severity", r.severity == CheckRow::error  ? "error"
                                   : r.severity == CheckRow::warn ? "warn"
                                                                  : "info"},
                      {"passed", r.passed},
                      {"detail", r.detail}});
  j["checks"] = checks;
  emit(opt.out_dir, "validate.json", j);
  if (hard) throw CheckError("hard validation failure");
  return 0;
}

int cmd_build(const CommonOpts& opt) {
  Config c = opt.load();
  Derived d = derive(c.params);
  CantorSystem cantor(c.params, d);
  std::cout << "interval system, depth " << cantor.depth() << "\n";
  ordered_json levels = ordered_json::array();
  for (uint32_t n = 0; n <= cantor.depth(); ++n) {
    BigInt count = cantor.count_at(n);
    std::cout << "  n=" << n << "  intervals=" << count.get_str()
              << "  r=" << rat_str(cantor.level(n).r) << "\n";
    levels.push_back({{"n", n}, {"count", count.get_str()}, {"r", rj(cantor.level(n).r)},
                      {"gap", rj(cantor.level(n).gap)}});
  }
  // walk the extreme branches as a smoke sample
  std::vector<BigInt> leftmost(cantor.depth(), BigInt(0));
  std::vector<BigInt> rightmost;
  for (uint32_t n = 1; n <= cantor.depth(); ++n) rightmost.push_back(cantor.level(n).m - 1);
  Rational lm = cantor.mid_of(leftmost), rm = cantor.mid_of(rightmost);
  std::cout << "  leftmost midpoint  " << pr(lm) << "\n  rightmost midpoint " << pr(rm) << "\n";
  if (lm + rm != 0) throw CheckError("extreme midpoints are not symmetric");

  ordered_json j;
  j["manifest"] = manifest_json(manifest("build", opt.config_path, c));
  j["config"] = config_json(c);
  j["levels"] = levels;
  j["leftmost_mid"] = rj(lm);
  j["rightmost_mid"] = rj(rm);
  emit(opt.out_dir, "build.json", j);
  return 0;
}

int cmd_measure(const CommonOpts& opt, uint32_t scan_level) {
  Config c = opt.load();
  Derived d = derive(c.params);
  IndexSet J = make_index_set(c, d);
  std::cout << "members";
  for (uint32_t m : J.members()) std::cout << " " << m;
  std::cout << "\n";

  DoublingScan ds = doubling_scan(J, scan_level);
  std::cout << (ds.passed ? "ok   " : "FAIL ") << "doubling: max " << pr(ds.max_ratio)
            << " bound " << pr(ds.bound) << " at " << ds.witness << "\n";
  MeasureAxioms ax =
      measure_axioms_check(J, scan_level, c.params.depth_of(c.params.depth),
                           c.budgets.chains, c.seed);
  std::cout << (ax.passed ? "ok   " : "FAIL ") << "measure axioms: " << ax.chain_checks
            << " chains" << (ax.passed ? "" : "; " + ax.witness) << "\n";
  // the scale-window estimates assume the derived member bands
  G0Check g0;
  G1Check g1;
  if (c.derived_index) {
    g0 = g0_check(c.params, J, c.budgets.samples, c.seed);
    std::cout << (g0.passed ? "ok   " : "FAIL ") << "lebesgue window: " << g0.exact_levels
              << " exact levels, " << g0.sampled << " samples\n";
    g1 = g1_check(c.params, d, J, c.budgets.samples, c.seed);
    std::cout << (g1.passed ? "ok   " : "FAIL ") << "density transfer: " << g1.ternary_pairs
              << " ternary pairs, " << g1.interval_pairs << " interval pairs in ["
              << pr(g1.min_ratio) << ", " << pr(g1.max_ratio) << "]\n";
  } else {
    g0.passed = g1.passed = true;
    std::cout << "skip scale-window estimates (custom index set)\n";
  }

  ordered_json j;
  j["manifest"] = manifest_json(manifest("measure", opt.config_path, c));
  j["config"] = config_json(c);
  j["members"] = J.members();
  j["doubling"] = {{"max_ratio", rj(ds.max_ratio)}, {"bound", rj(ds.bound)},
                   {"witness", ds.witness}, {"ones_adjacent_ok", ds.ones_adjacent_ok},
                   {"passed", ds.passed}};
  j["axioms"] = {{"total_ok", ax.total_ok}, {"additive_ok", ax.additive_ok},
                 {"chains", ax.chain_checks}, {"passed", ax.passed}};
  j["lebesgue_window"] = {{"exact_levels", g0.exact_levels}, {"sampled", g0.sampled},
                          {"violations", g0.violations}, {"passed", g0.passed}};
  j["density_transfer"] = {{"ternary_pairs", g1.ternary_pairs},
                           {"interval_pairs", g1.interval_pairs},
                           {"min_ratio", rj(g1.min_ratio)}, {"max_ratio", rj(g1.max_ratio)},
                           {"violations", g1.violations}, {"passed", g1.passed}};
  emit(opt.out_dir, "measure.json", j);
  return ds.passed && ax.passed && g0.passed && g1.passed ? 0 : 1;
}

int cmd_carleson(const CommonOpts& opt) {
  Config c = opt.load();
  Derived d = derive(c.params);
  IndexSet J = make_index_set(c, d);
  Ladder lad = Ladder::from_params(c.params);
  G2Report g2 = verify_g2(lad, J, d, c.budgets.leaf, c.budgets.chains, c.seed);
  std::cout << (g2.exhaustive_pass && g2.chain_pass ? "ok   " : "FAIL ")
            << "carleson ratio: max " << pr(g2.max_ratio) << " bound " << pr(g2.analytic_bound)
            << " at " << g2.witness << "\n";
  CarlesonSeries series = make_series(c, d, J, opt.cache, opt.out_dir);
  SeriesCheck sc = series.verify(J);
  std::cout << (sc.mean_ok ? "ok   " : "FAIL ") << "series cell means\n"
            << (sc.sign_ok ? "ok   " : "FAIL ") << "series signs\n"
            << (sc.budget_ok ? "ok   " : "FAIL ") << "series budget: C = " << pr(series.C())
            << ", " << sc.budget_tight << " leaves tight\n";

  ordered_json j;
  j["manifest"] = manifest_json(manifest("carleson", opt.config_path, c));
  j["config"] = config_json(c);
  j["ratio"] = {{"max", rj(g2.max_ratio)}, {"root", rj(g2.root_ratio)},
                {"bound", rj(g2.analytic_bound)}, {"witness", g2.witness},
                {"chains", g2.chain_count}, {"chain_mean", g2.chain_mean},
                {"chain_max", g2.chain_max},
                {"passed", g2.exhaustive_pass && g2.chain_pass}};
  j["series"] = {{"C", rj(series.C())}, {"leaves", series.leaves()},
                 {"mean_ok", sc.mean_ok}, {"sign_ok", sc.sign_ok},
                 {"budget_ok", sc.budget_ok}, {"budget_tight", sc.budget_tight}};
  emit(opt.out_dir, "carleson.json", j);
  return g2.exhaustive_pass && g2.chain_pass && sc.mean_ok && sc.sign_ok && sc.budget_ok ? 0 : 1;
}

int cmd_embed(const CommonOpts& opt) {
  Config c = opt.load();
  Derived d = derive(c.params);
  IndexSet J = make_index_set(c, d);
  CantorSystem cantor(c.params, d);
  CarlesonSeries series = make_series(c, d, J, opt.cache, opt.out_dir);
  Embedding emb(cantor, J, series);

  LipschitzCheck lip = lipschitz_check(emb, c.budgets.samples, c.seed);
  std::cout << (lip.passed ? "ok   " : "FAIL ") << "horizontal lipschitz: " << lip.pairs
            << " pairs, tightest " << pr(lip.max_ratio) << "\n";
  PairBoundsCheck pb = pair_bounds_check(emb, c.budgets.samples, c.seed);
  std::cout << (pb.passed ? "ok   " : "FAIL ") << "two-sided estimates: " << pb.pairs
            << " pairs, stratum " << pb.lower_stratum << ", observed constant " << pr(pb.c_emp)
            << "\n";
  QSReport qs = sample_weak_qs(emb, c.budgets.samples, c.seed);
  std::cout << (qs.collisions == 0 ? "ok   " : "FAIL ") << "weak quasisymmetry: " << qs.kept
            << " triples, max ratio " << qs.max_ratio << ", " << qs.degenerate
            << " degenerate, " << qs.collisions << " collisions\n";
  std::cout << "  profile (max output ratio per input octave):";
  for (double v : qs.profile) std::cout << " " << v;
  std::cout << "\n";
  if (qs.worst) std::cout << "  worst triple " << qs.worst->text << "\n";

  bool alpha_zero = c.params.alpha == 0;
  IdentityCheck idc;
  if (alpha_zero) {
    idc = identity_check(emb, c.budgets.samples, c.seed);
    std::cout << (idc.passed ? "ok   " : "FAIL ") << "identity collapse: " << idc.points
              << " points\n";
  }

  ordered_json j;
  j["manifest"] = manifest_json(manifest("embed", opt.config_path, c));
  j["config"] = config_json(c);
  j["lipschitz"] = {{"pairs", lip.pairs}, {"violations", lip.violations},
                    {"max_ratio", rj(lip.max_ratio)}, {"passed", lip.passed}};
  j["pair_bounds"] = {{"pairs", pb.pairs},
                      {"vertical_upper_viol", pb.vertical_upper_viol},
                      {"vertical_lower_viol", pb.vertical_lower_viol},
                      {"full_upper_viol", pb.full_upper_viol},
                      {"lower_stratum", pb.lower_stratum},
                      {"lower_active", pb.lower_active},
                      {"lower_viol", pb.lower_viol},
                      {"rho", rj(pb.rho)},
                      {"c_emp", rj(pb.c_emp)},
                      {"passed", pb.passed}};
  ordered_json prof = ordered_json::array();
  for (double v : qs.profile) prof.push_back(v);
  j["weak_qs"] = {{"kept", qs.kept}, {"degenerate", qs.degenerate},
                  {"collisions", qs.collisions}, {"max_ratio", qs.max_ratio},
                  {"max_ratio_sq", rj(qs.max_ratio_sq)}, {"profile", prof},
                  {"worst", qs.worst ? qs.worst->text : ""}};
  if (alpha_zero)
    j["identity"] = {{"points", idc.points}, {"f_identity", idc.f_identity},
                     {"F_identity", idc.F_identity}, {"tails_zero", idc.tails_zero},
                     {"passed", idc.passed}};
  emit(opt.out_dir, "embed.json", j);
  bool ok = lip.passed && pb.passed && qs.collisions == 0 && (!alpha_zero || idc.passed);
  return ok ? 0 : 1;
}

int cmd_verify(const CommonOpts& opt, uint32_t scan_level) {
  Config c = opt.load();
  Derived d = derive(c.params);
  IndexSet J = make_index_set(c, d);
  CantorSystem cantor(c.params, d);
  Ladder lad = Ladder::from_params(c.params);
  CarlesonSeries series = make_series(c, d, J, opt.cache, opt.out_dir);
  Embedding emb(cantor, J, series);

  SuiteInputs in;
  in.params = c.derived_index ? &c.params : nullptr;  // scale windows need derived bands
  in.derived = &d;
  in.index_set = &J;
  in.ladder = &lad;
  in.series = &series;
  in.embedding = &emb;
  in.scan_level = scan_level;
  in.samples = c.budgets.samples;
  in.chains = c.budgets.chains;
  in.leaf_budget = c.budgets.leaf;
  in.seed = c.seed;
  SuiteReport rep = run_suite(in);
  for (const auto& r : rep.rows)
    std::cout << (r.passed ? "ok   " : "FAIL ") << r.name << ": " << r.detail << "\n";
  std::cout << (rep.all_passed() ? "all checks passed" : "CHECKS FAILED") << "\n";

  ordered_json j;
  j["manifest"] = manifest_json(manifest("verify", opt.config_path, c));
  j["config"] = config_json(c);
  ordered_json rows = ordered_json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  j["rows"] = rows;
  j["all_passed"] = rep.all_passed();
  emit(opt.out_dir, "verify.json", j);
  return rep.all_passed() ? 0 : 1;
}

int cmd_dimension(const CommonOpts& opt, const std::string& c_mu_str,
                  const std::string& sigma_str, uint32_t n_lo, uint32_t n_hi,
                  const std::string& q1_str, uint32_t box_scale, uint64_t dist_budget) {
  Config c = opt.load();
  Derived d = derive(c.params);
  IndexSet J = make_index_set(c, d);
  Pipeline pip = derive_pipeline(c.params.dims, c.params.s, c.params.epsilon, c.alpha_bits);
  Rational sigma = sigma_str.empty() ? pip.sigma : parse_rational(sigma_str);
  Rational c_mu = parse_rational(c_mu_str);
  uint32_t M = c.params.cover_M ? c.params.cover_M : pip.M;
  if (n_hi == 0 || n_hi > c.params.depth) n_hi = c.params.depth;

  std::cout << "pipeline: M=" << pip.M << " N=" << pip.N << " sigma=" << rat_str(pip.sigma)
            << " alpha=" << std::setprecision(12) << to_double(pip.alpha) << "\n";

  // lower-tail certificates for the digit statistic at every scale
  ordered_json tails = ordered_json::array();
  bool tails_ok = true;
  for (uint32_t n = 1; n <= c.params.depth; ++n) {
    uint32_t jc = J.count_upto(c.params.depth_of(n));
    if (jc == 0) continue;
    TailBound tb = bad_set_measure(jc, sigma);
    tails_ok = tails_ok && tb.certified;
    std::cout << (tb.certified ? "ok   " : "FAIL ") << "tail n=" << n << " members=" << jc
              << " exact=" << pr(tb.exact) << " chernoff=" << tb.chernoff << "\n";
    tails.push_back({{"n", n}, {"members", jc}, {"threshold", rj(tb.threshold)},
                     {"exact", rj(tb.exact)}, {"cert", rj(tb.cert)},
                     {"chernoff", tb.chernoff}, {"certified", tb.certified}});
  }

  CoveringCertificate cert = covering_certificate(c.params, d, J, n_lo, n_hi, M,
                                                  c.params.epsilon, c_mu);
  std::cout << (cert.decreasing || cert.all_zero ? "ok   " : "FAIL ")
            << "covering: " << cert.verdict << "\n";
  ordered_json rows = ordered_json::array();
  for (const auto& r : cert.rows) {
    std::cout << "  n=" << r.n << " level=" << r.level << " good=" << r.good_count.get_str()
              << " branch=" << r.branch_count.get_str() << " log3(sum)=" << r.log3_sum << "\n";
    rows.push_back({{"n", r.n}, {"level", r.level}, {"members", r.member_count},
                    {"good", r.good_count.get_str()}, {"branch", r.branch_count.get_str()},
                    {"log3_sum", r.log3_sum}});
  }
  if (cert.eps_star_found)
    std::cout << "  smallest workable epsilon (sixteenths): " << rat_str(cert.eps_star) << "\n";

  // product-box premeasure comparison
  Rational q1 = q1_str.empty() ? d.levels[std::min<uint32_t>(1, c.params.depth)].r
                               : parse_rational(q1_str);
  if (box_scale == 0 || box_scale > c.params.depth) box_scale = std::min<uint32_t>(1, c.params.depth);
  AppendixReport ap = product_measure_ratio(c.params, d, q1, box_scale);
  std::cout << (ap.stable && ap.telescoped ? "ok   " : "FAIL ") << "product boxes: ratios in ["
            << pr(ap.min_ratio) << ", " << pr(ap.max_ratio) << "], telescoped "
            << (ap.telescoped ? "yes" : "no") << "\n";
  ordered_json aprows = ordered_json::array();
  for (const auto& r : ap.rows)
    aprows.push_back({{"m", r.m}, {"tiles1", r.tiles1.get_str()}, {"tiles2", r.tiles2.get_str()},
                      {"ratio", rj(r.ratio)}});

  // digit statistic distribution at the leaf grid, cross-checked when small
  uint32_t grid = c.params.depth_of(c.params.depth);
  DensityDistribution dist = density_distribution(grid, J);
  std::string dist_check = "skipped";
  bool dist_ok = true;
  if (big_pow3(grid) <= BigInt(dist_budget)) {
    DensityDistribution ex = density_distribution_exhaustive(grid, J, BigInt(dist_budget));
    dist_ok = dist.buckets.size() == ex.buckets.size();
    for (size_t i = 0; dist_ok && i < dist.buckets.size(); ++i)
      dist_ok = dist.buckets[i].count == ex.buckets[i].count;
    dist_check = dist_ok ? "matched" : "MISMATCH";
  }
  std::cout << (dist_ok ? "ok   " : "FAIL ") << "distribution at level " << grid
            << " (exhaustive cross-check: " << dist_check << ")\n";

  ordered_json j;
  j["manifest"] = manifest_json(manifest("dimension", opt.config_path, c));
  j["config"] = config_json(c);
  j["pipeline"] = {{"M", pip.M}, {"N", pip.N}, {"sigma", rj(pip.sigma)},
                   {"alpha", rj(pip.alpha)}, {"bits", pip.bits}};
  j["tails"] = tails;
  j["covering"] = {{"M", cert.M}, {"epsilon", rj(cert.epsilon)}, {"c_mu", rj(cert.c_mu)},
                   {"exponent_ok", cert.exponent_ok}, {"decreasing", cert.decreasing},
                   {"all_zero", cert.all_zero}, {"verdict", cert.verdict}, {"rows", rows}};
  j["product_boxes"] = {{"n", ap.n}, {"q1", rj(ap.q1_len)}, {"min_ratio", rj(ap.min_ratio)},
                        {"max_ratio", rj(ap.max_ratio)}, {"telescoped", ap.telescoped},
                        {"stable", ap.stable}, {"rows", aprows}};
  j["distribution_cross_check"] = dist_check;
  emit(opt.out_dir, "dimension.json", j);
  bool ok = tails_ok && (cert.decreasing || cert.all_zero) && ap.stable && ap.telescoped &&
            dist_ok;
  return ok ? 0 : 1;
}

int run(int argc, char** argv) {
  CLI::App app{"exact-arithmetic laboratory for a doubling measure on the line and its bi-Lipschitz"
               " product embedding"};
  app.require_subcommand(1);

  CommonOpts v_opt, b_opt, m_opt, c_opt, e_opt, s_opt, d_opt;
  uint32_t m_scan = 6, s_scan = 6;
  std::string c_mu = "3", sigma, q1;
  uint32_t n_lo = 1, n_hi = 0, box_scale = 0;
  uint64_t dist_budget = 10000000;

  v_opt.attach(app.add_subcommand("validate", "derive the scale ladder and run config checks"));
  b_opt.attach(app.add_subcommand("build", "construct the interval system"));
  auto* sm = app.add_subcommand("measure", "doubling measure checks");
  m_opt.attach(sm);
  sm->add_option("--scan-level", m_scan, "exhaustive ternary depth");
  c_opt.attach(app.add_subcommand("carleson", "packing ratios and the bounded series"));
  e_opt.attach(app.add_subcommand("embed", "embedding estimates and quasisymmetry sampling"));
  auto* sv = app.add_subcommand("verify", "full check suite");
  s_opt.attach(sv);
  sv->add_option("--scan-level", s_scan, "exhaustive ternary depth");
  auto* sd = app.add_subcommand("dimension", "tail, covering and product-box certificates");
  d_opt.attach(sd);
  sd->add_option("--c-mu", c_mu, "comparability constant for the covering sums");
  sd->add_option("--sigma", sigma, "tail deviation (default: pipeline value)");
  sd->add_option("--n-lo", n_lo, "first covering scale");
  sd->add_option("--n-hi", n_hi, "last covering scale (0 = depth)");
  sd->add_option("--q1", q1, "first box side (default r_1)");
  sd->add_option("--box-scale", box_scale, "scale of the second box side");
  sd->add_option("--dist-budget", dist_budget, "exhaustive distribution cross-check cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (app.got_subcommand("validate")) return cmd_validate(v_opt);
  if (app.got_subcommand("build")) return cmd_build(b_opt);
  if (app.got_subcommand("measure")) return cmd_measure(m_opt, m_scan);
  if (app.got_subcommand("carleson")) return cmd_carleson(c_opt);
  if (app.got_subcommand("embed")) return cmd_embed(e_opt);
  if (app.got_subcommand("verify")) return cmd_verify(s_opt, s_scan);
  if (app.got_subcommand("dimension"))
    return cmd_dimension(d_opt, c_mu, sigma, n_lo, n_hi, q1, box_scale, dist_budget);
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const CheckError& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
