// semijulia: approximate Julia sets and completely invariant sets of
// two-generator polynomial semigroups, compare generator Julia sets through
// Green's functions, and verify the exact line-dynamics identities.
//
// Exit codes: 0 success, 2 usage or expression parse error, 3 numerical
// non-convergence, 4 I/O failure.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semijulia/image.hpp"
#include "semijulia/report.hpp"
#include "semijulia/semijulia.hpp"

using namespace semijulia;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::vector<std::string> gens;
  std::optional<int> depth, budget, grid, width, height, samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<std::string> out, image, mode;
  std::optional<std::vector<double>> window;
  std::string config_path;
};

struct Resolved {
  std::vector<std::string> gens;
  int depth = 16;
  int budget = 1000000;
  std::uint64_t seed = 42;
  int grid = 2048;
  double tol = 1e-3;
  int width = 512, height = 512;
  int samples = 200000;
  std::optional<Window> window;
  std::string out, image, mode;
};

Json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError(std::string("config file: ") + e.what());
  }
}

// Config file first, flags override.
Resolved resolve(const Options& opt) {
  Resolved r;
  if (!opt.config_path.empty()) {
    const Json cfg = load_config(opt.config_path);
    if (cfg.contains("generators")) {
      r.gens = cfg.at("generators").get<std::vector<std::string>>();
    }
    if (cfg.contains("depth")) r.depth = cfg.at("depth").get<int>();
    if (cfg.contains("budget")) r.budget = cfg.at("budget").get<int>();
    if (cfg.contains("seed")) r.seed = cfg.at("seed").get<std::uint64_t>();
    if (cfg.contains("grid_cells")) r.grid = cfg.at("grid_cells").get<int>();
    if (cfg.contains("tol")) r.tol = cfg.at("tol").get<double>();
    if (cfg.contains("width")) r.width = cfg.at("width").get<int>();
    if (cfg.contains("height")) r.height = cfg.at("height").get<int>();
    if (cfg.contains("samples")) r.samples = cfg.at("samples").get<int>();
    if (cfg.contains("out")) r.out = cfg.at("out").get<std::string>();
    if (cfg.contains("image")) r.image = cfg.at("image").get<std::string>();
    if (cfg.contains("mode")) r.mode = cfg.at("mode").get<std::string>();
    if (cfg.contains("window")) {
      const auto w = cfg.at("window").get<std::vector<double>>();
      if (w.size() != 4) throw UsageError("config window needs 4 numbers");
      r.window = Window{w[0], w[1], w[2], w[3]};
    }
  }
  if (!opt.gens.empty()) r.gens = opt.gens;
  if (opt.depth) r.depth = *opt.depth;
  if (opt.budget) r.budget = *opt.budget;
  if (opt.seed) r.seed = *opt.seed;
  if (opt.grid) r.grid = *opt.grid;
  if (opt.tol) r.tol = *opt.tol;
  if (opt.width) r.width = *opt.width;
  if (opt.height) r.height = *opt.height;
  if (opt.samples) r.samples = *opt.samples;
  if (opt.out) r.out = *opt.out;
  if (opt.image) r.image = *opt.image;
  if (opt.mode) r.mode = *opt.mode;
  if (opt.window) {
    if (opt.window->size() != 4) throw UsageError("--window needs re0,im0,re1,im1");
    r.window = Window{(*opt.window)[0], (*opt.window)[1], (*opt.window)[2],
                      (*opt.window)[3]};
  }
  if (r.depth < 0) throw UsageError("depth must be >= 0");
  if (r.budget < 1) throw UsageError("budget must be positive");
  if (r.grid < 1) throw UsageError("grid cells must be positive");
  if (!(r.tol > 0)) throw UsageError("tol must be positive");
  if (r.width < 1 || r.height < 1) throw UsageError("raster must be non-empty");
  if (r.samples < 2) throw UsageError("samples must be >= 2");
  return r;
}

Json config_json(const Resolved& r) {
  Json j{{"generators", r.gens}, {"depth", r.depth},     {"budget", r.budget},
         {"seed", r.seed},       {"grid_cells", r.grid}, {"tol", r.tol},
         {"width", r.width},     {"height", r.height},   {"samples", r.samples}};
  if (r.window) {
    j["window"] =
        Json::array({r.window->re0, r.window->im0, r.window->re1, r.window->im1});
  }
  if (!r.image.empty()) j["image"] = r.image;
  if (!r.mode.empty()) j["mode"] = r.mode;
  return j;
}

std::vector<Polynomial> parse_generators(const Resolved& r, std::size_t min_count,
                                         std::size_t max_count = 64) {
  if (r.gens.size() < min_count) {
    throw UsageError("need at least " + std::to_string(min_count) +
                     " --gen expressions");
  }
  if (r.gens.size() > max_count) {
    throw UsageError("at most " + std::to_string(max_count) + " generators");
  }
  std::vector<Polynomial> gens;
  gens.reserve(r.gens.size());
  for (const auto& text : r.gens) gens.push_back(parse_poly(text));
  return gens;
}

void emit(const Json& report, const Resolved& r) {
  const std::string text = report.dump(2) + "\n";
  if (r.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(r.out, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write report: " + r.out);
}

class Timer {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Json maybe_render(const Resolved& r, const SetApprox& cloud) {
  if (r.image.empty()) return nullptr;
  const Window win = r.window ? *r.window : auto_window(cloud);
  const Image img = render_cloud(cloud, win, r.width, r.height);
  write_ppm(img, r.image);
  return Json{{"path", r.image},
              {"width", r.width},
              {"height", r.height},
              {"window", Json::array({win.re0, win.im0, win.re1, win.im1})}};
}

int cmd_cloud(const Resolved& r, CloudKind kind) {
  const Timer timer;
  const SemigroupSpec spec(parse_generators(r, 1));
  const SetApprox cloud = kind == CloudKind::SemigroupJulia
                              ? approx_J_semigroup(spec, r.depth, r.budget, r.seed)
                              : approx_E(spec, r.depth, r.budget, r.seed);
  Json results{{"cloud", cloud_stats(cloud)}};
  const Json img = maybe_render(r, cloud);
  if (!img.is_null()) results["image"] = img;
  emit(make_report(to_string(kind), config_json(r), results, timer.ms()), r);
  return 0;
}

int cmd_render(const Resolved& r) {
  const Timer timer;
  if (r.image.empty()) throw UsageError("render requires --image PATH");
  std::string mode = r.mode;
  if (mode.empty()) mode = r.gens.size() >= 2 ? "semigroup-julia" : "single";

  Json results;
  if (mode == "escape") {
    const auto gens = parse_generators(r, 1);
    const Window win = r.window ? *r.window : Window{-2.5, -2.5, 2.5, 2.5};
    write_ppm(render_escape(gens[0], win, r.width, r.height), r.image);
    results = Json{{"image", Json{{"path", r.image},
                                  {"width", r.width},
                                  {"height", r.height},
                                  {"window", Json::array({win.re0, win.im0,
                                                          win.re1, win.im1})}}}};
  } else {
    SetApprox cloud;
    if (mode == "single") {
      const auto gens = parse_generators(r, 1);
      cloud = julia_cloud_single(gens[0], r.depth, r.budget, r.seed);
    } else if (mode == "semigroup-julia") {
      cloud = approx_J_semigroup(SemigroupSpec(parse_generators(r, 1)), r.depth,
                                 r.budget, r.seed);
    } else if (mode == "invariant-set") {
      cloud =
          approx_E(SemigroupSpec(parse_generators(r, 1)), r.depth, r.budget, r.seed);
    } else {
      throw UsageError("unknown render mode: " + mode);
    }
    results = Json{{"cloud", cloud_stats(cloud)}, {"image", maybe_render(r, cloud)}};
  }
  emit(make_report("render", config_json(r), results, timer.ms()), r);
  return 0;
}

int cmd_coverage(const Resolved& r) {
  const Timer timer;
  const SemigroupSpec spec(parse_generators(r, 2));
  const auto curve = coverage_experiment(spec, r.grid, r.depth, r.budget, r.seed);
  Json curve_json = Json::array();
  for (const auto& pt : curve) {
    curve_json.push_back(Json{{"depth", pt.depth},
                              {"fraction", pt.fraction},
                              {"infinite_points", pt.infinite_points}});
  }
  const SphereGrid probe(r.grid);
  Json results{{"curve", curve_json},
               {"final_fraction", curve.back().fraction},
               {"grid_cells", probe.cell_count()},
               {"grid_cells_requested", r.grid}};
  emit(make_report("coverage", config_json(r), results, timer.ms()), r);
  return 0;
}

int cmd_compare(const Resolved& r) {
  const Timer timer;
  const auto gens = parse_generators(r, 2, 2);
  const CompareResult cmp = julia_compare(gens[0], gens[1], r.samples, r.tol, r.seed);
  Json results{{"verdict", to_string(cmp.verdict)},
               {"hausdorff_within_tol", cmp.hausdorff_within_tol},
               {"hausdorff_within_3tol", cmp.hausdorff_within_3tol}};
  if (cmp.witness) {
    results["witness"] = to_json(*cmp.witness);
    results["witness_abs"] = cmp.witness->abs();
    results["witness_green_own"] = cmp.witness_green_own;
    results["witness_green_other"] = cmp.witness_green_other;
  }
  emit(make_report("compare", config_json(r), results, timer.ms()), r);
  return 0;
}

struct LemmaArgs {
  int j = 2, m = 2, n = 1, n_max = 8, samples = 4096;
  std::string c = "-1", rstar_log = "-1", r = "-2", r_prime;
  double radius = 0.5, theta = 0.0, delta = 1.0;
  std::string poly;
  std::vector<double> radii{0.25, 0.5, 0.75};
};

Rational parse_rational(const std::string& text, const char* what) {
  try {
    return Rational(text);
  } catch (const std::exception&) {
    throw UsageError(std::string("not a rational (use p/q or integer): ") + what +
                     " = " + text);
  }
}

int cmd_lemma_commutator(const Resolved& r, const LemmaArgs& a) {
  const Timer timer;
  const LogDynParams params(a.j, a.m, parse_rational(a.c, "--c"),
                            parse_rational(a.rstar_log, "--rstar-log"));
  const Rational at = parse_rational(a.r, "--r");
  const Rational value = commutator_value(params, a.n, at);
  const Rational inverse = commutator_inverse_value(params, a.n, at);
  Json results{{"j", a.j},
               {"m", a.m},
               {"c", to_json(params.c)},
               {"r0", to_json(params.r0())},
               {"n", a.n},
               {"r", to_json(at)},
               {"d_n", to_json(d_n_value(params, a.n))},
               {"commutator", to_json(value)},
               {"reversed_commutator", to_json(inverse)},
               {"word_matches_closed_form", true}};
  emit(make_report("lemma-commutator", config_json(r), results, timer.ms()), r);
  return 0;
}

int cmd_lemma_density(const Resolved& r, const LemmaArgs& a) {
  const Timer timer;
  const LogDynParams params(a.j, a.m, parse_rational(a.c, "--c"),
                            parse_rational(a.rstar_log, "--rstar-log"));
  if (a.r_prime.empty()) throw UsageError("density requires --r-prime");
  const Rational seed_point = parse_rational(a.r_prime, "--r-prime");
  const DensityMarch march = density_march(params, seed_point, a.n_max);
  Json pts = Json::array();
  for (const auto& q : march.points) pts.push_back(to_json(q));
  Json results{{"points", pts},
               {"limit_point", to_json(march.limit_point)},
               {"min_gap", to_json(march.min_gap)},
               {"d_n_max", to_json(d_n_value(params, a.n_max))},
               {"guard_ok", true}};
  emit(make_report("lemma-density", config_json(r), results, timer.ms()), r);
  return 0;
}

int cmd_lemma_circles(const Resolved& r, const LemmaArgs& a) {
  const Timer timer;
  const auto report = circle_lemma_check(a.j, a.radius, a.theta, a.delta, a.samples);
  Json results{{"j", a.j},
               {"radius", a.radius},
               {"theta", a.theta},
               {"delta", a.delta},
               {"samples", a.samples},
               {"n", report.n},
               {"expected_radius", report.expected_radius},
               {"radius_rel_err", report.radius_rel_err},
               {"max_angular_gap", report.max_angular_gap},
               {"gap_bound", report.gap_bound},
               {"onto", report.onto}};
  emit(make_report("lemma-circles", config_json(r), results, timer.ms()), r);
  return 0;
}

int cmd_lemma_monomial(const Resolved& r, const LemmaArgs& a) {
  const Timer timer;
  if (a.poly.empty()) throw UsageError("monomial requires --poly EXPR");
  const Polynomial L = parse_poly(a.poly);
  const auto check = monomial_rigidity_check(L, a.radii, a.samples);
  Json results{{"poly", format_poly(L)}, {"consistent", check.consistent}};
  if (check.consistent) {
    results["a"] = to_json(check.a);
    results["power"] = check.power;
  } else {
    if (check.witness_radius) results["witness_radius"] = *check.witness_radius;
    results["modulus_spread"] = check.modulus_spread;
  }
  emit(make_report("lemma-monomial", config_json(r), results, timer.ms()), r);
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"polynomial semigroup Julia and invariant set toolkit"};
  app.require_subcommand(1);

  Options opt;
  LemmaArgs lemma;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--gen", opt.gens, "generator polynomial expression (repeat)");
    cmd->add_option("--depth", opt.depth, "word-orbit depth");
    cmd->add_option("--budget", opt.budget, "cloud point budget");
    cmd->add_option("--seed", opt.seed, "random stream seed");
    cmd->add_option("--grid", opt.grid, "sphere grid cell count");
    cmd->add_option("--tol", opt.tol, "tolerance");
    cmd->add_option("--samples", opt.samples, "comparator sample count");
    cmd->add_option("--out", opt.out, "write the JSON report here");
    cmd->add_option("--image", opt.image, "write a PPM raster here");
    cmd->add_option("--width", opt.width, "raster width");
    cmd->add_option("--height", opt.height, "raster height");
    cmd->add_option("--window", opt.window, "re0,im0,re1,im1 view rectangle")
        ->delimiter(',');
    cmd->add_option("--config", opt.config_path, "JSON config file (flags override)");
  };

  CLI::App* render =
      app.add_subcommand("render", "rasterize a cloud or escape-time image");
  render->add_option("--mode", opt.mode,
                     "single | semigroup-julia | invariant-set | escape");
  add_common(render);

  CLI::App* sj = app.add_subcommand("semigroup-julia",
                                    "approximate J(G) by backward word orbits");
  add_common(sj);
  CLI::App* inv = app.add_subcommand(
      "invariant-set", "approximate the minimal completely invariant set");
  add_common(inv);
  CLI::App* cov =
      app.add_subcommand("coverage", "sphere-coverage curve of the invariant orbit");
  add_common(cov);
  CLI::App* cmp =
      app.add_subcommand("compare", "decide whether two Julia sets agree");
  add_common(cmp);

  CLI::App* lem = app.add_subcommand("lemma", "exact line-dynamics checks");
  lem->require_subcommand(1);
  CLI::App* lc =
      lem->add_subcommand("commutator", "t^-n s^-n t^n s^n translation identity");
  lc->add_option("--j", lemma.j, "t multiplier (>= 2)");
  lc->add_option("--m", lemma.m, "s multiplier (>= 2)");
  lc->add_option("--c", lemma.c, "s translation, rational < 0");
  lc->add_option("--rstar-log", lemma.rstar_log, "log r*, rational < 0");
  lc->add_option("--n", lemma.n, "word half-length");
  lc->add_option("--r", lemma.r, "evaluation point, rational");
  add_common(lc);
  CLI::App* ld = lem->add_subcommand("density", "density march below log r* - r0");
  ld->add_option("--j", lemma.j, "t multiplier (>= 2)");
  ld->add_option("--m", lemma.m, "s multiplier (>= 2)");
  ld->add_option("--c", lemma.c, "s translation, rational < 0");
  ld->add_option("--rstar-log", lemma.rstar_log, "log r*, rational < 0");
  ld->add_option("--r-prime", lemma.r_prime, "march seed, rational < log r* - r0");
  ld->add_option("--n-max", lemma.n_max, "march depth");
  add_common(ld);
  CLI::App* lcirc = lem->add_subcommand("circles", "arc-to-circle expansion exponent");
  lcirc->add_option("--j", lemma.j, "power map exponent (>= 2)");
  lcirc->add_option("--radius", lemma.radius, "circle radius in (0,1)");
  lcirc->add_option("--theta", lemma.theta, "arc center angle");
  lcirc->add_option("--delta", lemma.delta, "arc angular width in (0, 2pi]");
  lcirc->add_option("--arc-samples", lemma.samples, "sample count on the arc");
  add_common(lcirc);
  CLI::App* lmono =
      lem->add_subcommand("monomial", "circle-preserving maps are monomials");
  lmono->add_option("--poly", lemma.poly, "candidate map with L(0) = 0");
  lmono->add_option("--radii", lemma.radii, "test circle radii")->delimiter(',');
  lmono->add_option("--arc-samples", lemma.samples, "samples per circle");
  add_common(lmono);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const Resolved r = resolve(opt);
  if (render->parsed()) return cmd_render(r);
  if (sj->parsed()) return cmd_cloud(r, CloudKind::SemigroupJulia);
  if (inv->parsed()) return cmd_cloud(r, CloudKind::InvariantE);
  if (cov->parsed()) return cmd_coverage(r);
  if (cmp->parsed()) return cmd_compare(r);
  if (lem->parsed()) {
    if (lc->parsed()) return cmd_lemma_commutator(r, lemma);
    if (ld->parsed()) return cmd_lemma_density(r, lemma);
    if (lcirc->parsed()) return cmd_lemma_circles(r, lemma);
    if (lmono->parsed()) return cmd_lemma_monomial(r, lemma);
  }
  throw UsageError("no subcommand");
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "numerical non-convergence: " << e.what() << " (best residual "
              << e.best_residual << ")\n";
    return 3;
  } catch (const NoRepellingFixedPointError& e) {
    std::cerr << "numerical: " << e.what() << "\n";
    return 3;
  } catch (const GuardViolation& e) {
    std::cerr << "guard violation: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
