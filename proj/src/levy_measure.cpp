#include "multifrac/levy_measure.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

namespace multifrac {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

// int_a^b x^p dx for 0 < a < b <= inf (caller guarantees convergence).
double power_integral(double p, double a, double b) {
  if (std::abs(p + 1.0) < 1e-14) return std::log(b / a);
  const double hi = std::isinf(b) ? 0.0 : std::pow(b, p + 1.0);
  return (hi - std::pow(a, p + 1.0)) / (p + 1.0);
}

// ---- power law --------------------------------------------------------------

Extended stable_moment(const StablePower& m, double k, double a, double b, bool signed_moment) {
  // int_{a<|x|<=b} |x|^k sign(x)^[signed] pi(dx) = w * int_a^b x^{k-1-alpha} dx
  const double w = signed_moment ? (m.c_plus - m.c_minus) : (m.c_plus + m.c_minus);
  if (w == 0.0) return Extended::finite(0.0);
  const double p = k - 1.0 - m.alpha;
  if (std::isinf(b) && p >= -1.0) return Extended::infinity();
  if (a == 0.0) {
    if (p <= -1.0) return Extended::infinity();
    const double hi = std::isinf(b) ? 0.0 : std::pow(b, p + 1.0);
    return Extended::finite(w * hi / (p + 1.0));
  }
  return Extended::finite(w * power_integral(p, a, b));
}

// ---- tabulated tail -----------------------------------------------------------

double tab_tail(const TabulatedTail& t, double x) {
  const auto& r = t.radius;
  const auto& T = t.tail;
  if (x >= r.back()) return r.back() >= 1.0 || x >= 1.0 ? 0.0 : T.back();
  if (x <= r.front()) {
    if (r.size() < 2 || T[1] <= 0.0) return T.front();
    const double s = std::log(T[1] / T[0]) / std::log(r[1] / r[0]);
    return T[0] * std::pow(x / r[0], s);
  }
  const auto it = std::upper_bound(r.begin(), r.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - r.begin()) - 1;
  if (T[i + 1] <= 0.0 || T[i] <= 0.0) {
    const double w = (x - r[i]) / (r[i + 1] - r[i]);
    return (1.0 - w) * T[i] + w * T[i + 1];
  }
  const double s = std::log(T[i + 1] / T[i]) / std::log(r[i + 1] / r[i]);
  return T[i] * std::pow(x / r[i], s);
}

double first_segment_slope(const TabulatedTail& t) {
  if (t.radius.size() < 2 || t.tail[1] <= 0.0) return 0.0;
  return std::log(t.tail[1] / t.tail[0]) / std::log(t.radius[1] / t.radius[0]);
}

// int_lo^hi x^{k-1} T(x) dx by 16-point Gauss-Legendre in log x between breakpoints.
double tab_weighted_tail_integral(const TabulatedTail& t, double k, double lo, double hi) {
  static constexpr std::array<double, 8> nodes = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                                                  0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                                                  0.9445750230732326, 0.9894009349916499};
  static constexpr std::array<double, 8> weights = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                                    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                                    0.0622535239386479, 0.0271524594117541};
  std::vector<double> cuts{lo};
  for (double r : t.radius)
    if (r > lo && r < hi) cuts.push_back(r);
  cuts.push_back(hi);
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double la = std::log(cuts[s]);
    const double lb = std::log(cuts[s + 1]);
    const double mid = 0.5 * (la + lb);
    const double half = 0.5 * (lb - la);
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      for (double sign : {-1.0, 1.0}) {
        const double x = std::exp(mid + sign * half * nodes[q]);
        total += weights[q] * half * std::pow(x, k) * tab_tail(t, x);  // dx = x dlog x
      }
    }
  }
  return total;
}

// int_{a<|x|<=b} |x|^k pi(dx) for the tabulated variant, k >= 0.
Extended tab_moment(const TabulatedTail& t, double k, double a, double b) {
  b = std::min(b, 1.0);
  if (a >= b) return Extended::finite(0.0);
  if (k == 0.0) {
    if (a == 0.0 && first_segment_slope(t) < 0.0) return Extended::infinity();
    return Extended::finite(tab_tail(t, a) - tab_tail(t, b));
  }
  double total = 0.0;
  double lo = a;
  if (a < t.radius.front()) {
    // Power-law extension below the first sample: T(x) = T0 (x/r0)^s.
    const double s = first_segment_slope(t);
    const double r0 = t.radius.front();
    const double T0 = t.tail.front();
    const double top = std::min(b, r0);
    if (a == 0.0) {
      if (k + s <= 0.0) return Extended::infinity();
      total += -std::pow(top, k) * tab_tail(t, top) + k * T0 * std::pow(r0, -s) * std::pow(top, k + s) / (k + s);
    } else {
      total += std::pow(a, k) * tab_tail(t, a) - std::pow(top, k) * tab_tail(t, top) +
               k * T0 * std::pow(r0, -s) * power_integral(k + s - 1.0, a, top);
    }
    lo = top;
  }
  if (lo < b) {
    total += std::pow(lo, k) * tab_tail(t, lo) - std::pow(b, k) * tab_tail(t, b) +
             k * tab_weighted_tail_integral(t, k, lo, b);
  }
  return Extended::finite(total);
}

// ---- atoms --------------------------------------------------------------------

double atomic_moment(const AtomicSymmetric& m, double k, double a, double b) {
  double total = 0.0;
  for (const Atom& at : m.atoms)
    if (at.size > a && at.size <= b) total += 2.0 * at.mass * std::pow(at.size, k);
  return total;
}

void check_radii(double a, double b) {
  require(a >= 0.0 && b > a, "radii must satisfy 0 <= a < b");
}

std::string trim(const std::string& s) {
  std::size_t lo = 0;
  std::size_t hi = s.size();
  while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) ++lo;
  while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) --hi;
  return s.substr(lo, hi - lo);
}

std::vector<double> parse_list(const std::string& v, char sep) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      fail(ErrorKind::Parse, "not a number: '" + item + "'");
    }
  }
  return out;
}

double parse_number(const std::map<std::string, std::string>& kv, const std::string& key, double fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  const auto v = parse_list(it->second, ';');
  if (v.size() != 1) fail(ErrorKind::Parse, "key '" + key + "' expects a single number");
  return v.front();
}

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ";" : "") << v[i];
  return os.str();
}

}  // namespace

void validate(const LevyMeasureSpec& measure) {
  std::visit(overloaded{
                 [](const StablePower& m) {
                   require(m.alpha > 0.0 && m.alpha < 2.0, "stable measure: alpha must lie in (0,2)");
                   require(m.c_plus >= 0.0 && m.c_minus >= 0.0, "stable measure: scales must be nonnegative");
                   require(m.c_plus + m.c_minus > 0.0, "stable measure: c_plus + c_minus must be positive");
                 },
                 [](const AtomicSymmetric& m) {
                   for (std::size_t i = 0; i < m.atoms.size(); ++i) {
                     require(m.atoms[i].size > 0.0 && std::isfinite(m.atoms[i].size), "atomic measure: sizes must be positive");
                     require(m.atoms[i].mass > 0.0 && std::isfinite(m.atoms[i].mass), "atomic measure: masses must be positive");
                     if (i > 0) require(m.atoms[i].size < m.atoms[i - 1].size, "atomic measure: sizes must be strictly decreasing");
                   }
                 },
                 [](const TabulatedTail& m) {
                   require(m.radius.size() >= 2 && m.radius.size() == m.tail.size(),
                           "tabulated tail: need matching radius/tail lists with at least two samples");
                   require(m.positive_fraction >= 0.0 && m.positive_fraction <= 1.0,
                           "tabulated tail: positive_fraction must lie in [0,1]");
                   for (std::size_t i = 0; i < m.radius.size(); ++i) {
                     require(m.radius[i] > 0.0 && m.radius[i] <= 1.0, "tabulated tail: radii must lie in (0,1]");
                     require(m.tail[i] >= 0.0 && std::isfinite(m.tail[i]), "tabulated tail: values must be finite and >= 0");
                     if (i > 0) {
                       require(m.radius[i] > m.radius[i - 1], "tabulated tail: radii must be increasing");
                       require(m.tail[i] <= m.tail[i - 1], "tabulated tail: tail must be nonincreasing");
                     }
                   }
                   require(m.tail.front() > 0.0, "tabulated tail: tail must be positive at the smallest radius");
                   const double s = first_segment_slope(m);
                   require(s > -2.0, "tabulated tail: extrapolated tail violates int (1 ^ x^2) pi(dx) < inf");
                 },
             },
             measure);
}

void validate(const GeneratingTriplet& triplet) {
  require(triplet.gaussian_Q >= 0.0, "gaussian_Q must be nonnegative");
  require(std::isfinite(triplet.drift_a), "drift must be finite");
  validate(triplet.measure);
}

Extended tail_mass(const LevyMeasureSpec& measure, double a, double b) {
  check_radii(a, b);
  return std::visit(overloaded{
                        [&](const StablePower& m) { return stable_moment(m, 0.0, a, b, false); },
                        [&](const AtomicSymmetric& m) { return Extended::finite(atomic_moment(m, 0.0, a, b)); },
                        [&](const TabulatedTail& m) { return tab_moment(m, 0.0, a, b); },
                    },
                    measure);
}

Extended compensator_drift(const LevyMeasureSpec& measure, double a, double b) {
  check_radii(a, b);
  return std::visit(overloaded{
                        [&](const StablePower& m) { return stable_moment(m, 1.0, a, b, true); },
                        [&](const AtomicSymmetric&) { return Extended::finite(0.0); },
                        [&](const TabulatedTail& m) {
                          const double skew = 2.0 * m.positive_fraction - 1.0;
                          if (skew == 0.0) return Extended::finite(0.0);
                          const Extended mom = tab_moment(m, 1.0, a, b);
                          return mom.infinite ? mom : Extended::finite(skew * mom.value);
                        },
                    },
                    measure);
}

double second_moment(const LevyMeasureSpec& measure, double a, double b) {
  check_radii(a, b);
  require(b <= 1.0 || std::holds_alternative<AtomicSymmetric>(measure), "second moment is only defined up to radius 1");
  return std::visit(overloaded{
                        [&](const StablePower& m) { return stable_moment(m, 2.0, a, b, false).get(); },
                        [&](const AtomicSymmetric& m) { return atomic_moment(m, 2.0, a, b); },
                        [&](const TabulatedTail& m) { return tab_moment(m, 2.0, a, b).get(); },
                    },
                    measure);
}

double small_jump_variance(const LevyMeasureSpec& measure, double eps) {
  require(eps > 0.0, "small_jump_variance: eps must be positive");
  if (std::holds_alternative<AtomicSymmetric>(measure)) return second_moment(measure, 0.0, eps);
  // Beyond radius 1 the tabulated and Y-restricted measures carry no small jumps anyway.
  const double top = std::min(eps, 1.0);
  double v = second_moment(measure, 0.0, top);
  if (eps > 1.0)
    if (const auto* s = std::get_if<StablePower>(&measure)) v += stable_moment(*s, 2.0, 1.0, eps, false).get();
  return v;
}

double estimate_blumenthal_getoor(const LevyMeasureSpec& measure, const BetaEstimatorConfig& cfg) {
  std::vector<double> xs;
  std::vector<double> ys;
  if (const auto* at = std::get_if<AtomicSymmetric>(&measure)) {
    // Tail is a step function: sample it at the atoms themselves.
    double cumulative = 0.0;
    for (const Atom& a : at->atoms) {
      if (a.size > 1.0) continue;
      cumulative += 2.0 * a.mass;
      xs.push_back(std::log2(1.0 / a.size));
      ys.push_back(std::log2(cumulative));
    }
  } else {
    require(cfg.j_min < cfg.j_max, "beta estimator: empty scale range");
    for (int j = cfg.j_min; j <= cfg.j_max; ++j) {
      const Extended t = tail_mass(measure, std::ldexp(1.0, -j), 1.0);
      if (t.infinite || !(t.value > 0.0)) continue;
      xs.push_back(j);
      ys.push_back(std::log2(t.value));
    }
  }
  if (xs.size() < 4) fail(ErrorKind::Estimation, "blumenthal_getoor: fewer than 4 usable scales");
  const LineFit f = fit_line(Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(xs.size())),
                             Eigen::Map<const Vector>(ys.data(), static_cast<Eigen::Index>(ys.size())));
  return std::clamp(f.slope, 0.0, 2.0);
}

double blumenthal_getoor(const LevyMeasureSpec& measure, const BetaEstimatorConfig& cfg) {
  validate(measure);
  if (const auto* s = std::get_if<StablePower>(&measure)) return s->alpha;
  if (const auto* a = std::get_if<AtomicSymmetric>(&measure); a && a->atoms.size() <= 1) return 0.0;
  return estimate_blumenthal_getoor(measure, cfg);
}

std::vector<double> example2_scales(const Example2Params& p) {
  require(p.beta > 0.0 && p.beta < 1.0, "example2: need 0 < beta < 1");
  require(p.beta < p.alpha_ex, "example2: need beta < alpha");
  require(p.alpha_ex < p.delta_ex, "example2: need alpha < delta");
  require(p.delta_ex < p.gamma_ex, "example2: need delta < gamma");
  require(p.gamma_ex < 2.0 * p.beta, "example2: need gamma < 2 beta");
  const double denom = 2.0 * p.beta - 2.0 * p.gamma_ex + p.alpha_ex;
  require(denom > 0.0, "example2: need 2 beta - 2 gamma + alpha > 0");
  require(p.j0 >= 1.0, "example2: need j0 >= 1");
  require(p.n_max >= 0, "example2: need n_max >= 0");
  std::vector<double> j{p.j0};
  for (int n = 0; n < p.n_max; ++n) j.push_back((j.back() * p.delta_ex + 1.0) / denom);
  return j;
}

AtomicSymmetric example2_measure(const Example2Params& p) {
  AtomicSymmetric m;
  for (double j : example2_scales(p)) m.atoms.push_back({std::exp2(-j), std::exp2(j * p.beta)});
  validate(m);
  return m;
}

StablePower one_sided(const StablePower& m) {
  StablePower out = m;
  out.c_minus = 0.0;
  return out;
}

bool is_symmetric(const LevyMeasureSpec& measure) {
  return std::visit(overloaded{
                        [](const StablePower& m) { return m.c_plus == m.c_minus; },
                        [](const AtomicSymmetric&) { return true; },
                        [](const TabulatedTail& m) { return m.positive_fraction == 0.5; },
                    },
                    measure);
}

std::string describe(const LevyMeasureSpec& measure) { return format_measure(measure); }

LevyMeasureSpec parse_measure(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), '\n', ',');
  std::stringstream ss(normalized);
  std::string entry;
  while (std::getline(ss, entry, ',')) {
    if (const auto hash = entry.find('#'); hash != std::string::npos) entry.resize(hash);
    entry = trim(entry);
    if (entry.empty()) continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos) fail(ErrorKind::Parse, "expected key=value, got '" + entry + "'");
    kv[trim(entry.substr(0, eq))] = trim(entry.substr(eq + 1));
  }
  const auto kind = kv.find("kind");
  if (kind == kv.end()) fail(ErrorKind::Parse, "measure config needs a 'kind' key");

  LevyMeasureSpec out;
  if (kind->second == "stable") {
    StablePower m;
    m.alpha = parse_number(kv, "alpha", m.alpha);
    m.c_plus = parse_number(kv, "c_plus", m.c_plus);
    m.c_minus = parse_number(kv, "c_minus", m.c_minus);
    out = m;
  } else if (kind->second == "atomic") {
    AtomicSymmetric m;
    std::stringstream as(kv["atoms"]);
    std::string pair;
    while (std::getline(as, pair, ';')) {
      pair = trim(pair);
      if (pair.empty()) continue;
      const auto v = parse_list(pair, ':');
      if (v.size() != 2) fail(ErrorKind::Parse, "atom must be size:mass, got '" + pair + "'");
      m.atoms.push_back({v[0], v[1]});
    }
    out = m;
  } else if (kind->second == "tabulated") {
    TabulatedTail m;
    m.radius = parse_list(kv["radius"], ';');
    m.tail = parse_list(kv["tail"], ';');
    m.positive_fraction = parse_number(kv, "positive_fraction", 0.5);
    out = m;
  } else {
    fail(ErrorKind::Parse, "unknown measure kind '" + kind->second + "'");
  }
  try {
    validate(out);
  } catch (const Error& e) {
    fail(ErrorKind::Parse, e.what());
  }
  return out;
}

std::string format_measure(const LevyMeasureSpec& measure) {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const StablePower& m) {
                   os << "kind=stable, alpha=" << m.alpha << ", c_plus=" << m.c_plus << ", c_minus=" << m.c_minus;
                 },
                 [&](const AtomicSymmetric& m) {
                   os << "kind=atomic, atoms=";
                   for (std::size_t i = 0; i < m.atoms.size(); ++i)
                     os << (i ? ";" : "") << m.atoms[i].size << ":" << m.atoms[i].mass;
                 },
                 [&](const TabulatedTail& m) {
                   os << "kind=tabulated, radius=" << join(m.radius) << ", tail=" << join(m.tail)
                      << ", positive_fraction=" << m.positive_fraction;
                 },
             },
             measure);
  return os.str();
}

}  // namespace multifrac
