// multifrac: simulate Levy / fractional stable paths, estimate their regularity, run the
// acceptance suites.

#include "multifrac/fractional.hpp"
#include "multifrac/levy_measure.hpp"
#include "multifrac/levy_path.hpp"
#include "multifrac/path_io.hpp"
#include "multifrac/regularity.hpp"
#include "multifrac/spectrum.hpp"
#include "multifrac/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#ifndef MULTIFRAC_VERSION
#define MULTIFRAC_VERSION "0.1.0"
#endif

namespace {

using namespace multifrac;
using nlohmann::json;

enum Exit { kOk = 0, kUsage = 1, kNumeric = 2, kAcceptance = 3 };

struct SimulateArgs {
  std::string measure = "stable";
  std::string measure_file;
  double alpha = 1.2;
  double c_plus = 1.0;
  double c_minus = 1.0;
  double drift = 0.0;
  double gaussian = 0.0;
  double eps = 1e-4;
  std::int64_t n = 1 << 16;
  double t0 = 0.0;
  std::uint64_t seed = 0;
  std::string small_jumps = "gaussian";
  double record_floor = 0.0;
  bool large_jumps = false;
  std::string out = "path";
};

struct FractionalArgs {
  std::string kind = "lfsm";
  std::string in;
  double H = 0.8;
  double alpha = 1.5;
  double d = 0.3;
  double h_mean = 0.7;
  double h_amp = 0.2;
  bool direct = false;
  std::int64_t n = 1 << 16;
  double b_min = kDefaultLeftCut;
  std::uint64_t seed = 0;
  std::string out = "fractional";
};

struct AnalyzeArgs {
  std::string in;
  std::string out = "analysis";
  std::vector<double> times{0.5};
  std::vector<double> sprime{-0.75, -0.5, -0.25, 0.0, 0.25};
  double h_lo = 0.0;
  double h_hi = 1.5;
  double width = 0.05;
  bool field = true;
  bool frontier = true;
  bool spectrum = true;
};

struct VerifyArgs {
  std::string suite;
  std::string budget = "full";
  std::uint64_t seed = 20240601;
  int criterion = 0;
  std::string out;
};

std::string config_json(const CLI::App& app) {
  json j;
  for (const CLI::Option* o : app.get_options()) {
    if (o->get_name() == "--help" || o->get_name() == "--config" || o->get_single_name().empty()) continue;
    const auto res = o->results();
    j[o->get_single_name()] = res.size() == 1 ? json(res.front()) : json(res);
  }
  return j.dump();
}

void stamp(SamplePath& p, const CLI::App& app) {
  p.meta.extra["version"] = MULTIFRAC_VERSION;
  p.meta.extra["command"] = app.get_name();
  p.meta.extra["config"] = config_json(app);
}

void save(const SamplePath& p, const std::string& prefix) {
  save_path(p, prefix + ".csv", prefix + ".json");
  std::cerr << "wrote " << prefix << ".csv, " << prefix << ".json\n";
}

std::ofstream open_out(const std::string& file) {
  std::ofstream os(file);
  if (!os) fail(ErrorKind::Precondition, "cannot write " + file);
  return os;
}

int cmd_simulate(const SimulateArgs& a, const CLI::App& app) {
  GeneratingTriplet tri;
  tri.drift_a = a.drift;
  tri.gaussian_Q = a.gaussian;
  if (!a.measure_file.empty()) {
    std::ifstream is(a.measure_file);
    if (!is) fail(ErrorKind::Precondition, "cannot read measure file " + a.measure_file);
    std::stringstream ss;
    ss << is.rdbuf();
    tri.measure = parse_measure(ss.str());
  } else if (a.measure == "stable") {
    tri.measure = StablePower{a.alpha, a.c_plus, a.c_minus};
  } else if (a.measure == "example2") {
    tri.measure = example2_measure(Example2Params{});
  } else if (a.measure == "none") {
    tri.measure = AtomicSymmetric{};
  } else {
    fail(ErrorKind::Precondition, "measure must be stable, example2 or none (or use --measure-file)");
  }
  SynthesisConfig cfg;
  cfg.n = a.n;
  cfg.eps = a.eps;
  cfg.seed = a.seed;
  cfg.t0 = a.t0;
  cfg.record_floor = a.record_floor;
  cfg.include_large_jumps = a.large_jumps;
  if (a.small_jumps == "gaussian")
    cfg.small_jump_mode = SmallJumpMode::GaussianApprox;
  else if (a.small_jumps == "compensate")
    cfg.small_jump_mode = SmallJumpMode::CompensateOnly;
  else
    fail(ErrorKind::Precondition, "small-jumps must be gaussian or compensate");
  SamplePath p = simulate_levy(tri, cfg);
  p.meta.extra["measure"] = format_measure(tri.measure);
  stamp(p, app);
  save(p, a.out);
  return kOk;
}

int cmd_fractional(const FractionalArgs& a, const CLI::App& app) {
  SamplePath out;
  if (a.direct) {
    require(a.kind == "lfsm", "--direct applies to lfsm only");
    SynthesisConfig cfg;
    cfg.n = a.n;
    cfg.seed = a.seed;
    out = lfsm_direct(KernelSpec{a.H, a.alpha, 1.0, 0.0}, cfg, a.b_min);
  } else {
    SamplePath driver;
    if (a.in.empty()) {
      // no driver given: the stable motion that couples with --direct for the same seed
      driver = stable_levy_path(a.alpha, 0.0, a.n, a.b_min, a.seed);
    } else {
      const std::string sidecar = a.in.size() > 4 ? a.in.substr(0, a.in.size() - 4) + ".json" : "";
      driver = load_path(a.in, std::ifstream(sidecar).good() ? sidecar : "");
    }
    if (a.kind == "lfsm") {
      out = lfsm_from_levy(driver, a.H, a.alpha);
    } else if (a.kind == "flp") {
      out = flp_from_levy(driver, a.d);
    } else if (a.kind == "lmsm") {
      const double mean = a.h_mean, amp = a.h_amp;
      const HurstFunction h = HurstFunction::from_function(
          [=](double t) { return mean + amp * std::sin(2.0 * std::numbers::pi * t); }, driver.n, 1.0,
          2.0 * std::numbers::pi * std::abs(amp));
      out = lmsm_from_levy(driver, a.alpha, h);
    } else {
      fail(ErrorKind::Precondition, "kind must be lfsm, lmsm or flp");
    }
  }
  stamp(out, app);
  save(out, a.out);
  return kOk;
}

int cmd_analyze(const AnalyzeArgs& a, const CLI::App& app) {
  const std::string sidecar = a.in.size() > 4 ? a.in.substr(0, a.in.size() - 4) + ".json" : "";
  const SamplePath p = load_path(a.in, std::ifstream(sidecar).good() ? sidecar : "").unit_window();
  const json cfg = json::parse(config_json(app));
  if (a.field || a.spectrum) {
    const ExponentField f = exponent_field(p);
    if (a.field) {
      auto os = open_out(a.out + "_field.csv");
      os << std::setprecision(17) << "scale,t,h\n";
      for (std::size_t s = 0; s < f.h.size(); ++s) {
        const int j = f.j_lo + static_cast<int>(s);
        const double w = std::ldexp(1.0, -j);
        for (std::size_t k = 0; k < f.h[s].size(); ++k) os << j << ',' << (k + 0.5) * w << ',' << f.h[s][k] << '\n';
      }
    }
    if (a.spectrum) {
      const SpectrumEstimate s = coarse_spectrum(f, a.h_lo, a.h_hi, a.width);
      open_out(a.out + "_spectrum.csv") << s.to_csv();
      auto js = json::parse(s.to_json());
      js["config"] = cfg;
      js["version"] = MULTIFRAC_VERSION;
      open_out(a.out + "_spectrum.json") << js.dump(2) << '\n';
    }
  }
  if (a.frontier) {
    json arr = json::array();
    for (double t : a.times) arr.push_back(json::parse(frontier_estimate(p, t, a.sprime, default_window(p.n)).to_json()));
    json js = {{"frontiers", arr}, {"config", cfg}, {"version", MULTIFRAC_VERSION}};
    open_out(a.out + "_frontier.json") << js.dump(2) << '\n';
  }
  std::cerr << "wrote " << a.out << "_*\n";
  return kOk;
}

int cmd_verify(const VerifyArgs& a) {
  const Budget b = parse_budget(a.budget);
  SuiteReport rep;
  if (a.criterion > 0) {
    rep.suite = "criterion " + std::to_string(a.criterion);
    rep.budget = b;
    rep.seed = a.seed;
    rep.results.push_back(run_criterion(a.criterion, b, a.seed));
  } else {
    rep = run_suite(a.suite, b, a.seed);
  }
  for (const auto& r : rep.results)
    std::cerr << (r.gated ? (r.passed ? "PASS " : "FAIL ") : "INFO ") << r.id << " " << r.name << ": " << r.detail
              << " [" << std::fixed << std::setprecision(1) << r.seconds << " s]\n";
  const std::string js = rep.to_json().dump(2);
  if (a.out.empty())
    std::cout << js << '\n';
  else
    open_out(a.out) << js << '\n';
  return rep.passed() ? kOk : kAcceptance;
}

int exit_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::Precondition:
    case ErrorKind::Parse:
      return kUsage;
    default:
      return kNumeric;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Levy and fractional stable path synthesis and regularity analysis"};
  app.set_version_flag("--version", MULTIFRAC_VERSION);
  app.set_config("--config", "", "TOML/INI config file; a [simulate] section etc. per command, flags win");
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: MULTIFRAC_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);

  SimulateArgs sa;
  CLI::App* sim = app.add_subcommand("simulate", "Levy-Ito synthesis of a path on [t0,1]");
  sim->add_option("--measure", sa.measure, "stable | example2 | none")->capture_default_str();
  sim->add_option("--measure-file", sa.measure_file, "key=value measure description (kind=stable|atomic|tabulated)");
  sim->add_option("--alpha", sa.alpha, "stable index")->capture_default_str();
  sim->add_option("--c-plus", sa.c_plus)->capture_default_str();
  sim->add_option("--c-minus", sa.c_minus)->capture_default_str();
  sim->add_option("--drift", sa.drift)->capture_default_str();
  sim->add_option("--gaussian", sa.gaussian, "Brownian variance Q")->capture_default_str();
  sim->add_option("--eps", sa.eps, "small-jump truncation radius")->capture_default_str();
  sim->add_option("--n", sa.n, "grid points per unit time (power of two)")->capture_default_str();
  sim->add_option("--t0", sa.t0, "left end of the window (integer <= 0)")->capture_default_str();
  sim->add_option("--seed", sa.seed, "random seed")->required();
  sim->add_option("--small-jumps", sa.small_jumps, "gaussian | compensate")->capture_default_str();
  sim->add_option("--record-floor", sa.record_floor, "smallest jump listed in the JSON")->capture_default_str();
  sim->add_flag("--large-jumps", sa.large_jumps, "include jumps larger than 1");
  sim->add_option("--out", sa.out, "output prefix (.csv + .json)")->capture_default_str();

  FractionalArgs fa;
  CLI::App* frac = app.add_subcommand("fractional", "LFSM / LMSM / FLP from a driving path");
  frac->add_option("--kind", fa.kind, "lfsm | lmsm | flp")->capture_default_str();
  frac->add_option("--in", fa.in, "driver CSV (window [b,1]); default: stable motion from --seed");
  frac->add_option("--H", fa.H)->capture_default_str();
  frac->add_option("--alpha", fa.alpha)->capture_default_str();
  frac->add_option("--d", fa.d, "FLP order")->capture_default_str();
  frac->add_option("--h-mean", fa.h_mean, "LMSM: H(t) = mean + amp sin(2 pi t)")->capture_default_str();
  frac->add_option("--h-amp", fa.h_amp)->capture_default_str();
  frac->add_flag("--direct", fa.direct, "LFSM by direct Riemann sum of the moving-average integral");
  frac->add_option("--n", fa.n)->capture_default_str();
  frac->add_option("--b-min", fa.b_min, "left cut of the driver window")->capture_default_str();
  frac->add_option("--seed", fa.seed);
  frac->add_option("--out", fa.out)->capture_default_str();
  frac->callback([&] {
    if (fa.in.empty() && frac->count("--seed") == 0)
      throw CLI::ValidationError("--seed", "required when no --in driver is given");
  });

  AnalyzeArgs aa;
  CLI::App* ana = app.add_subcommand("analyze", "exponent field, frontiers and coarse spectrum of a path");
  ana->add_option("--in", aa.in, "path CSV")->required()->check(CLI::ExistingFile);
  ana->add_option("--out", aa.out, "output prefix")->capture_default_str();
  ana->add_option("--t", aa.times, "times for frontier estimates")->capture_default_str();
  ana->add_option("--sprime", aa.sprime, "s' grid, increasing in [-1.5,0.5]")->capture_default_str();
  ana->add_option("--h-lo", aa.h_lo)->capture_default_str();
  ana->add_option("--h-hi", aa.h_hi)->capture_default_str();
  ana->add_option("--bin-width", aa.width)->capture_default_str();
  ana->add_flag("!--no-field", aa.field);
  ana->add_flag("!--no-frontier", aa.frontier);
  ana->add_flag("!--no-spectrum", aa.spectrum);

  VerifyArgs va;
  CLI::App* ver = app.add_subcommand("verify", "run acceptance suites; exit 3 when a gated criterion fails");
  ver->add_option("suite", va.suite, "levy | brownian | lfsm | lmsm | flp | analytic | all")
      ->check(CLI::IsMember(suite_names()));
  ver->add_option("--budget", va.budget, "quick | full")->check(CLI::IsMember({"quick", "full"}))->capture_default_str();
  ver->add_option("--seed", va.seed)->capture_default_str();
  ver->add_option("--criterion", va.criterion, "run a single criterion 1..10")->check(CLI::Range(1, 10));
  ver->add_option("--out", va.out, "write the JSON report here instead of stdout");
  ver->callback([&] {
    if (va.suite.empty() && va.criterion == 0) throw CLI::RequiredError("suite");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (threads > 0) setenv("MULTIFRAC_THREADS", std::to_string(threads).c_str(), 1);

  try {
    if (sim->parsed()) return cmd_simulate(sa, *sim);
    if (frac->parsed()) return cmd_fractional(fa, *frac);
    if (ana->parsed()) return cmd_analyze(aa, *ana);
    return cmd_verify(va);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  }
}
