#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "morrey/curves.hpp"
#include "morrey/error.hpp"
#include "morrey/morrey_norm.hpp"
#include "morrey/numerics.hpp"
#include "morrey/operators.hpp"
#include "morrey/weights.hpp"

namespace morrey {

/// A test function f(s, z, length): s is the arc coordinate from the start of
/// the interval or curve, z the position in the plane.
struct FamilyMember {
  std::string name;
  std::function<cplx(double, cplx, double)> fn;
  bool divergent_probe = false;
  bool extremal = false;
};

inline SampledFunction sample_member(const FamilyMember& m, const Grid1D& g) {
  SampledFunction f;
  for (double x : g.nodes) f.values.push_back(m.fn(x - g.a, cplx(x, 0.0), g.length()));
  return f;
}

inline SampledFunction sample_member(const FamilyMember& m, const DiscretizedCurve& c) {
  SampledFunction f;
  for (std::size_t k = 0; k < c.size(); ++k) f.values.push_back(m.fn(c.arc_nodes[k], c.points[k], c.total_length));
  return f;
}

struct TestFamily {
  std::vector<FamilyMember> members;
  std::uint64_t seed = 0;

  static constexpr std::uint64_t default_seed = 20240611;

  static FamilyMember power(double gamma) {
    return {"power(" + format_number(gamma) + ")", [gamma](double s, cplx, double) { return cplx(std::pow(s, gamma)); }};
  }

  /// x^((lambda-1)/p) on [0, l]; its norm diverges only when lambda = 0.
  static FamilyMember extremal(double p, double lambda) {
    const double g = (lambda - 1) / p;
    return {"extremal", [g](double s, cplx, double) { return cplx(std::pow(s, g)); }, lambda == 0.0, true};
  }

  /// |x - x0|^((lambda-1)/p) around an interior point of an interval.
  static FamilyMember extremal_at(double p, double lambda, double x0) {
    const double g = (lambda - 1) / p;
    return {"extremal@" + format_number(x0), [g, x0](double, cplx z, double) { return cplx(std::pow(std::abs(z.real() - x0), g)); },
            lambda == 0.0, true};
  }

  /// Smooth bump supported in the middle half.
  static FamilyMember bump() {
    return {"bump", [](double s, cplx, double len) {
              const double u = (s - 0.5 * len) / (0.25 * len);
              return cplx(std::abs(u) < 1 ? std::exp(1 - 1 / (1 - u * u)) : 0.0);
            }};
  }

  /// 16 pieces with values uniform in [0.1, 1.1).
  static FamilyMember random_piecewise(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.1, 1.1);
    std::vector<double> v(16);
    for (double& x : v) x = u(rng);
    return {"random_piecewise(" + std::to_string(seed) + ")", [v](double s, cplx, double len) {
              const auto i = std::min<std::size_t>(15, static_cast<std::size_t>(16 * s / len));
              return cplx(v[i]);
            }};
  }

  static FamilyMember harmonic(int k) {
    return {"harmonic(" + std::to_string(k) + ")", [k](double, cplx z, double) { return std::pow(z, k); }};
  }

  /// Indicator of the first half in arc length.
  static FamilyMember jump() {
    return {"jump", [](double s, cplx, double len) { return cplx(s < 0.5 * len ? 1.0 : 0.0); }};
  }

  static FamilyMember divergent(double p, double lambda) {
    const double g = (lambda - 1) / p - 0.1;
    return {"divergent_probe", [g](double s, cplx, double) { return cplx(std::pow(s, g)); }, true};
  }

  /// Extremal power, a power just above it, constant, x^(1/2), bump and a
  /// random step function.
  static TestFamily standard(double p, double lambda, std::uint64_t seed = default_seed) {
    TestFamily f;
    f.seed = seed;
    f.members = {extremal(p, lambda), power((lambda - 1) / p + 0.05), power(0.0), power(0.5), bump(),
                 random_piecewise(seed)};
    return f;
  }

  /// Standard family plus an extremal member at each interior point.
  static TestFamily for_nodes(double p, double lambda, const std::vector<double>& nodes,
                              std::uint64_t seed = default_seed) {
    TestFamily f = standard(p, lambda, seed);
    for (double x0 : nodes)
      if (x0 > 0) f.members.push_back(extremal_at(p, lambda, x0));
    return f;
  }

  static TestFamily circle_harmonics(int n) {
    TestFamily f;
    for (int k = -n; k <= n; ++k) f.members.push_back(harmonic(k));
    return f;
  }

  /// Jump, bump and random step functions.
  static TestFamily jumps(std::uint64_t seed = default_seed) {
    TestFamily f;
    f.seed = seed;
    f.members = {jump(), bump(), random_piecewise(seed)};
    return f;
  }

  /// Every member multiplied by sin^2(pi s / l), so it vanishes at both ends.
  static TestFamily vanishing_ends(const TestFamily& base) {
    TestFamily f = base;
    for (FamilyMember& m : f.members) {
      m.name += "*sin2";
      m.fn = [g = m.fn](double s, cplx z, double len) {
        const double w = std::sin(std::numbers::pi * s / len);
        return g(s, z, len) * (w * w);
      };
    }
    return f;
  }

  static std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
  }
};

enum class Boundedness { bounded, unbounded, inconclusive };

inline std::string to_string(Boundedness b) {
  switch (b) {
    case Boundedness::bounded: return "bounded";
    case Boundedness::unbounded: return "unbounded";
    case Boundedness::inconclusive: return "inconclusive";
  }
  return "?";
}

/// One experiment: per refinement level the worst ratio over the family.
/// `scales` holds 1/(smallest cell) per level. `growth` is the fit that
/// decided the verdict; growth_kind says whether it was taken against the
/// scale ("power") or against its logarithm ("log").
struct ExperimentReport {
  std::string name;
  std::map<std::string, double> params;
  std::vector<std::pair<int, double>> per_level;
  std::vector<double> scales;
  GrowthFit growth;
  std::string growth_kind = "power";
  Boundedness verdict = Boundedness::inconclusive;
  double constant_estimate = 0.0;
  std::optional<double> paper_bound;
  std::optional<Boundedness> prediction;
  bool paper_undetermined = false;
  std::string note;

  std::vector<double> ratios() const {
    std::vector<double> r;
    for (const auto& [level, ratio] : per_level) r.push_back(ratio);
    return r;
  }

  double max_ratio() const {
    double m = 0;
    for (const auto& [level, ratio] : per_level) m = std::max(m, ratio);
    return m;
  }

  /// true when the theory decides and the verdict agrees with it
  bool matches_prediction() const { return prediction && *prediction == verdict; }
};

namespace detail {

inline constexpr double flat_exponent = 0.02;
inline constexpr double fit_residual = 0.1;

/// Power fit of ratio against scale over the deepest four levels and a log
/// fit against ln(scale) over the deepest three. Power growth beyond 0.02,
/// or log-fit growth beyond 0.5, is unbounded; a flat power fit with log-fit
/// exponent at most 0.2 is bounded.
inline void classify(ExperimentReport& r) {
  const std::vector<double> ratios = r.ratios();
  const std::size_t n = ratios.size();
  require(n >= 3 && r.scales.size() == n, ErrorCode::invalid_params, "need at least three levels");
  for (double x : ratios)
    if (!std::isfinite(x)) {
      r.verdict = Boundedness::unbounded;
      r.growth = {std::numeric_limits<double>::infinity(), 0.0, 0.0};
      r.note = r.note.empty() ? "non-finite ratio" : r.note;
      return;
    }
  const std::size_t pw = std::min<std::size_t>(4, n);
  const GrowthFit power = fit_growth(std::span(r.scales).last(pw), std::span(ratios).last(pw));
  std::vector<double> logs;
  for (std::size_t i = n - 3; i < n; ++i) logs.push_back(std::log(r.scales[i]));
  const GrowthFit logfit = fit_growth(logs, std::span(ratios).last(3));
  r.growth = power;
  r.growth_kind = "power";
  if (power.exponent > flat_exponent && power.residual < fit_residual) {
    r.verdict = Boundedness::unbounded;
  } else if (logfit.exponent > 0.5 && logfit.residual < fit_residual) {
    r.verdict = Boundedness::unbounded;
    r.growth = logfit;
    r.growth_kind = "log";
  } else if (std::abs(power.exponent) <= flat_exponent && logfit.exponent <= 0.2) {
    r.verdict = Boundedness::bounded;
  } else {
    r.verdict = Boundedness::inconclusive;
  }
}

/// Depths 512 / 2^(levels-1), ..., 256, 512 octaves of grading toward the
/// singular points; 256 uniform cells elsewhere. Interior points cannot be
/// resolved that finely in double precision, so with any interior point the
/// depths grow linearly up to 40 octaves instead.
inline std::vector<Grid1D> probe_grids(double length, const std::vector<double>& points, int levels) {
  require(levels >= 4 && levels <= 10, ErrorCode::invalid_params, "levels must lie in [4, 10]");
  const bool interior = std::any_of(points.begin(), points.end(), [&](double x) { return x > 0 && x < length; });
  std::vector<Grid1D> grids;
  for (int l = 0; l < levels; ++l) {
    const int depth = interior ? 40 * (l + 1) / levels : 512 >> (levels - 1 - l);
    grids.push_back(make_graded_grid(0.0, length, 256, points, std::max(depth, 1), 8));
  }
  return grids;
}

inline double inverse_min_width(const Grid1D& g) { return 1.0 / g.min_width(); }

inline Boundedness power_window(double alpha, double p, double lambda) {
  return alpha > (lambda - 1) / p && alpha < lambda / p + 1 - 1 / p ? Boundedness::bounded : Boundedness::unbounded;
}

}  // namespace detail

/// Hardy operator ratios ||H f|| / ||f|| over the family on graded grids of
/// [0, 1]. The power case carries the closed-form bound.
inline ExperimentReport probe_hardy(double p, double lambda, const HardyParams& hp, const TestFamily& family,
                                    int levels) {
  MorreyParams mp{p, lambda};
  mp.validate();
  hp.validate();
  require(!family.members.empty(), ErrorCode::invalid_params, "empty test family");
  const bool lower = hp.direction == HardyDirection::lower;
  ExperimentReport r;
  r.name = std::string(lower ? "hardy_lower" : "hardy_upper") + (hp.beta ? "_power" : "_weighted");
  r.params = {{"p", p}, {"lambda", lambda}, {"levels", levels}};
  const double lo = (lambda - 1) / p, hi = lambda / p + 1 - 1 / p;
  if (hp.beta) {
    r.params["beta"] = *hp.beta;
    r.paper_bound = hardy_power_bound(p, lambda, *hp.beta, hp.direction);
    const bool ok = lower ? *hp.beta < hi : *hp.beta > lo;
    r.prediction = ok ? Boundedness::bounded : Boundedness::unbounded;
  } else {
    const IndexEstimate e = estimate_indices(*hp.weight);
    r.params["m"] = e.m_lower;
    r.params["M"] = e.M_upper;
    if (lower ? e.M_upper < hi : e.m_lower > lo)
      r.prediction = Boundedness::bounded;
    else if (lower ? e.m_lower > hi : e.M_upper < lo)
      r.prediction = Boundedness::unbounded;
    else
      r.paper_undetermined = true;
  }
  if (family.seed) r.params["seed"] = static_cast<double>(family.seed);
  double extremal_best = 0;
  const auto grids = detail::probe_grids(1.0, {0.0}, levels);
  for (int l = 0; l < levels; ++l) {
    const Grid1D& g = grids[static_cast<std::size_t>(l)];
    double worst = 0;
    for (const FamilyMember& m : family.members) {
      const SampledFunction f = sample_member(m, g);
      double ratio;
      try {
        ratio = morrey_norm(g, hardy_apply(g, hp, f), mp) / morrey_norm(g, f, mp);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::non_integrable_input) throw;
        ratio = std::numeric_limits<double>::infinity();
        r.note = "1/phi not integrable at the origin";
      }
      worst = std::max(worst, ratio);
      if (m.extremal) extremal_best = std::max(extremal_best, ratio);
    }
    r.per_level.emplace_back(l, worst);
    r.scales.push_back(detail::inverse_min_width(g));
  }
  r.params["extremal_ratio"] = extremal_best;
  detail::classify(r);
  r.constant_estimate = r.max_ratio();
  return r;
}

/// Ratios ||rho H(f/rho)|| / ||f|| on [0, 1] for a weight with nodes on the
/// interval. A discrete L1 norm of f/rho growing across levels marks f/rho
/// as non-integrable and the operator as unbounded.
inline ExperimentReport probe_weighted_singular(double p, double lambda, const NodeWeight& rho,
                                                const TestFamily& family, int levels) {
  MorreyParams mp{p, lambda};
  mp.validate();
  require(p > 1, ErrorCode::invalid_params, "need p > 1");
  require(!rho.specs.empty(), ErrorCode::invalid_params, "weight needs at least one node");
  std::vector<double> points;
  for (const cplx& t : rho.nodes) {
    require(t.imag() == 0 && t.real() >= 0 && t.real() <= 1, ErrorCode::invalid_params,
            "weight nodes must lie in [0, 1]");
    points.push_back(t.real());
  }
  ExperimentReport r;
  r.name = "weighted_singular";
  r.params = {{"p", p}, {"lambda", lambda}, {"levels", levels}};
  if (family.seed) r.params["seed"] = static_cast<double>(family.seed);
  bool decided = true, all_power = true, any_out = false, all_in = true;
  for (std::size_t i = 0; i < rho.specs.size(); ++i) {
    const WeightSpec& w = rho.specs[i];
    const std::string tag = rho.specs.size() == 1 ? "" : std::to_string(i);
    r.params["x" + tag] = points[i];
    if (w.kind == WeightKind::power) {
      r.params["alpha" + tag] = w.alpha;
      const bool in = detail::power_window(w.alpha, p, lambda) == Boundedness::bounded;
      all_in = all_in && in;
      any_out = any_out || !in;
      continue;
    }
    all_power = false;
    const AdmissibleResult a = check_admissible(w, p, lambda);
    r.params["m" + tag] = a.indices.m_lower;
    r.params["M" + tag] = a.indices.M_upper;
    const double lo = (lambda - 1) / p, hi = lambda / p + 1 - 1 / p;
    if (a.verdict) continue;
    all_in = false;
    if (a.indices.m_lower > hi || a.indices.M_upper < lo)
      any_out = true;
    else
      decided = false;
  }
  if (any_out)
    r.prediction = Boundedness::unbounded;
  else if (all_in)
    r.prediction = Boundedness::bounded;
  if (!any_out && !decided) r.paper_undetermined = true;
  (void)all_power;

  const auto grids = detail::probe_grids(1.0, points, levels);
  std::vector<std::vector<double>> l1(family.members.size());
  for (int l = 0; l < levels; ++l) {
    const Grid1D& g = grids[static_cast<std::size_t>(l)];
    double worst = 0;
    for (std::size_t i = 0; i < family.members.size(); ++i) {
      const SampledFunction f = sample_member(family.members[i], g);
      double mass = 0;
      for (std::size_t k = 0; k < g.n; ++k) mass += std::abs(f.values[k]) / rho(g.nodes[k]) * g.weights[k];
      l1[i].push_back(mass);
      const SampledFunction out = edges_to_nodes(weighted_singular_apply(g, rho, f), g.n, false);
      worst = std::max(worst, morrey_norm(g, out, mp) / morrey_norm(g, f, mp));
    }
    r.per_level.emplace_back(l, worst);
    r.scales.push_back(detail::inverse_min_width(g));
  }
  detail::classify(r);
  for (std::size_t i = 0; i < family.members.size(); ++i) {
    const std::size_t pw = std::min<std::size_t>(4, l1[i].size());
    const GrowthFit fit = fit_growth(std::span(r.scales).last(pw), std::span(l1[i]).last(pw));
    if (fit.exponent > detail::flat_exponent && fit.residual < detail::fit_residual) {
      r.note = "f/rho not integrable near a weight node (member " + family.members[i].name + ")";
      if (r.verdict != Boundedness::unbounded) {
        r.verdict = Boundedness::unbounded;
        r.growth = fit;
        r.growth_kind = "power";
      }
      break;
    }
  }
  r.constant_estimate = r.max_ratio();
  return r;
}

inline ExperimentReport probe_weighted_singular(double p, double lambda, const WeightSpec& w, double x0,
                                                const TestFamily& family, int levels) {
  return probe_weighted_singular(p, lambda, NodeWeight::single(w, x0), family, levels);
}

/// One singular-operator probe per power exponent, weight x^alpha at 0.
inline std::vector<ExperimentReport> threshold_sweep(double p, double lambda, const std::vector<double>& alphas,
                                                     int levels, std::uint64_t seed = TestFamily::default_seed) {
  std::vector<ExperimentReport> out;
  for (double a : alphas) {
    ExperimentReport r =
        probe_weighted_singular(p, lambda, WeightSpec::power(a), 0.0, TestFamily::standard(p, lambda, seed), levels);
    char buf[64];
    std::snprintf(buf, sizeof buf, "threshold_sweep(alpha=%+.4f)", a);
    r.name = buf;
    out.push_back(std::move(r));
  }
  return out;
}

/// Curve and the refinement ladder n0, 2 n0, ... used by the curve experiments.
struct CurveLadder {
  CurveKind kind = CurveKind::circle;
  CurveParams params;
  long long n0 = 256;
  int levels = 3;

  std::vector<DiscretizedCurve> build() const {
    require(levels >= 2, ErrorCode::invalid_params, "need at least two refinement levels");
    std::vector<DiscretizedCurve> out;
    for (int l = 0; l < levels; ++l) out.push_back(generate_curve(kind, params, n0 << l));
    return out;
  }
};

namespace detail {

/// Two-level ladders use the growth of the last doubling; longer ones the
/// regular fits with n as scale. A doubling growth below 10% is bounded.
inline void classify_curve(ExperimentReport& r) {
  const std::vector<double> ratios = r.ratios();
  if (ratios.size() >= 3) {
    classify(r);
  } else {
    r.growth = {std::log2(ratios[1] / ratios[0]), std::log(ratios[0]), 0.0};
    r.growth_kind = "power";
    r.verdict = Boundedness::inconclusive;
  }
  const double last = ratios[ratios.size() - 1] / ratios[ratios.size() - 2] - 1;
  r.params["last_doubling_growth"] = last;
  if (ratios.size() < 3 || r.verdict == Boundedness::inconclusive) {
    if (std::isfinite(last) && last < 0.1)
      r.verdict = Boundedness::bounded;
    else if (r.growth.exponent > flat_exponent && r.growth.residual < fit_residual)
      r.verdict = Boundedness::unbounded;
  }
}

inline void require_vanishing_ends(const DiscretizedCurve& c, const SampledFunction& f, const std::string& name) {
  if (c.closed) return;
  double peak = 0;
  for (const cplx& v : f.values) peak = std::max(peak, std::abs(v));
  require(std::abs(f.values.front()) <= 1e-3 * peak && std::abs(f.values.back()) <= 1e-3 * peak,
          ErrorCode::precondition, "member " + name + " must vanish near the ends of an open curve");
}

}  // namespace detail

/// ||M f|| / ||M# f|| over the family, plus the weighted inequality
/// int (Mf)^p w <= C int |f|^p Mw for w = M g, g the next member.
inline ExperimentReport verify_fefferman_stein(const CurveLadder& ladder, double p, double lambda,
                                               const TestFamily& family) {
  MorreyParams mp{p, lambda};
  mp.validate();
  require(p > 1, ErrorCode::invalid_params, "need p > 1");
  require(!family.members.empty(), ErrorCode::invalid_params, "empty test family");
  ExperimentReport r;
  r.name = "fefferman_stein(" + to_string(ladder.kind) + ")";
  r.params = {{"p", p}, {"lambda", lambda}, {"n0", static_cast<double>(ladder.n0)}, {"levels", ladder.levels}};
  if (family.seed) r.params["seed"] = static_cast<double>(family.seed);
  double weighted = 0, indicator = 0;
  std::vector<std::string> excluded;
  int l = 0;
  for (const DiscretizedCurve& c : ladder.build()) {
    const auto radii = maximal_radii(c);
    std::vector<SampledFunction> mf, fs;
    double worst = 0;
    for (const FamilyMember& m : family.members) {
      const SampledFunction f = sample_member(m, c);
      detail::require_vanishing_ends(c, f, m.name);
      fs.push_back(f);
      mf.push_back(maximal_apply(c, f, radii));
      const double num = morrey_norm(c, mf.back(), mp);
      const double den = morrey_norm(c, sharp_maximal_apply(c, f, radii), mp);
      if (den <= 1e-12 * num) {
        if (l == 0) excluded.push_back(m.name);
        continue;
      }
      worst = std::max(worst, num / den);
    }
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const SampledFunction& w = mf[(i + 1) % fs.size()];
      const SampledFunction mw = maximal_apply(c, w, radii);
      double lhs = 0, rhs = 0;
      for (std::size_t k = 0; k < c.size(); ++k) {
        lhs += std::pow(mf[i].values[k].real(), p) * w.values[k].real() * c.weights[k];
        rhs += std::pow(std::abs(fs[i].values[k]), p) * mw.values[k].real() * c.weights[k];
      }
      if (rhs > 0) weighted = std::max(weighted, lhs / rhs);
    }
    // f = w = indicator of the first quarter
    SampledFunction chi;
    for (std::size_t k = 0; k < c.size(); ++k) chi.values.emplace_back(c.arc_nodes[k] < 0.25 * c.total_length ? 1.0 : 0.0);
    const SampledFunction mchi = maximal_apply(c, chi, radii);
    double lhs = 0, rhs = 0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      lhs += std::pow(mchi.values[k].real(), p) * chi.values[k].real() * c.weights[k];
      rhs += chi.values[k].real() * mchi.values[k].real() * c.weights[k];
    }
    indicator = std::max(indicator, lhs / rhs);
    r.per_level.emplace_back(l++, worst);
    r.scales.push_back(static_cast<double>(c.size()));
  }
  require(r.ratios().front() > 0, ErrorCode::degenerate_input, "every member has zero mean oscillation");
  r.params["weighted_constant"] = weighted;
  r.params["indicator_ratio"] = indicator;
  if (!excluded.empty()) {
    r.note = "excluded (zero mean oscillation):";
    for (const auto& e : excluded) r.note += " " + e;
  }
  detail::classify_curve(r);
  r.constant_estimate = r.max_ratio();
  r.prediction = Boundedness::bounded;
  return r;
}

/// max over nodes and family of M#(|S f|^s)(t) / (M f(t))^s.
inline ExperimentReport verify_alvarez_perez(const CurveLadder& ladder, double s, const TestFamily& family) {
  require(s > 0 && s < 1, ErrorCode::invalid_params, "need 0 < s < 1");
  require(!family.members.empty(), ErrorCode::invalid_params, "empty test family");
  ExperimentReport r;
  r.name = "alvarez_perez(" + to_string(ladder.kind) + ")";
  r.params = {{"s", s}, {"n0", static_cast<double>(ladder.n0)}, {"levels", ladder.levels}};
  if (family.seed) r.params["seed"] = static_cast<double>(family.seed);
  int l = 0;
  for (const DiscretizedCurve& c : ladder.build()) {
    const auto radii = maximal_radii(c);
    double worst = 0;
    for (const FamilyMember& m : family.members) {
      const SampledFunction f = sample_member(m, c);
      SampledFunction g = cauchy_at_nodes(c, f);
      for (cplx& v : g.values) v = std::pow(std::abs(v), s);
      const SampledFunction sharp = sharp_maximal_apply(c, g, radii);
      const SampledFunction mf = maximal_apply(c, f, radii);
      for (std::size_t k = 0; k < c.size(); ++k)
        if (mf.values[k].real() > 0) worst = std::max(worst, sharp.values[k].real() / std::pow(mf.values[k].real(), s));
    }
    r.per_level.emplace_back(l++, worst);
    r.scales.push_back(static_cast<double>(c.size()));
  }
  detail::classify_curve(r);
  r.constant_estimate = r.max_ratio();
  // the estimate is claimed for s < 1 only; near 1 the outcome is reported without a prediction
  if (s <= 0.75) r.prediction = Boundedness::bounded;
  return r;
}

/// ||M f|| / ||f|| and ||S f|| / ||f|| on a curve; the level ratio is the
/// larger of the two.
inline ExperimentReport verify_morrey_boundedness_maximal(const CurveLadder& ladder, double p, double lambda,
                                                          const TestFamily& family) {
  require(p > 1, ErrorCode::precondition, "the maximal and singular operators need p > 1");
  MorreyParams mp{p, lambda};
  mp.validate();
  require(!family.members.empty(), ErrorCode::invalid_params, "empty test family");
  ExperimentReport r;
  r.name = "maximal_singular(" + to_string(ladder.kind) + ")";
  r.params = {{"p", p}, {"lambda", lambda}, {"n0", static_cast<double>(ladder.n0)}, {"levels", ladder.levels}};
  if (family.seed) r.params["seed"] = static_cast<double>(family.seed);
  int l = 0;
  double m_const = 0, s_const = 0;
  for (const DiscretizedCurve& c : ladder.build()) {
    const auto radii = maximal_radii(c);
    double wm = 0, ws = 0;
    for (const FamilyMember& m : family.members) {
      const SampledFunction f = sample_member(m, c);
      const double nf = morrey_norm(c, f, mp);
      wm = std::max(wm, morrey_norm(c, maximal_apply(c, f, radii), mp) / nf);
      ws = std::max(ws, morrey_norm(c, cauchy_at_nodes(c, f), mp) / nf);
    }
    m_const = wm;
    s_const = ws;
    r.per_level.emplace_back(l++, std::max(wm, ws));
    r.scales.push_back(static_cast<double>(c.size()));
  }
  r.params["M_constant"] = m_const;
  r.params["S_constant"] = s_const;
  detail::classify_curve(r);
  r.constant_estimate = r.max_ratio();
  r.prediction = Boundedness::bounded;
  return r;
}

}  // namespace morrey
