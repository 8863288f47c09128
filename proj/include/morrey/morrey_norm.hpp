#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "morrey/curves.hpp"
#include "morrey/error.hpp"
#include "morrey/numerics.hpp"
#include "morrey/parallel.hpp"
#include "morrey/weights.hpp"

namespace morrey {

/// radii_levels < 0 selects dyadic radii down to the first one not above the
/// smallest cell width. Radii below half the width of the center's own cell
/// are skipped: on graded grids such balls see a single sample and the sup
/// would degenerate into a pointwise value.
/// subsample == 0 uses every node as a center, otherwise that many evenly
/// spaced nodes.
struct MorreyParams {
  double p = 2.0;
  double lambda = 0.0;
  int radii_levels = -1;
  std::size_t subsample = 0;

  void validate() const {
    require(p >= 1 && std::isfinite(p), ErrorCode::invalid_params, "need 1 <= p < infinity");
    require(lambda >= 0 && lambda < 1, ErrorCode::invalid_params, "need 0 <= lambda < 1");
  }
};

enum class BallVariant { euclid_ball, arc_ball };

/// Value of the sup together with the (center, radius) where it is attained.
struct MorreyNormResult {
  double value = 0.0;
  std::size_t center = 0;
  double radius = 0.0;
};

namespace detail {

inline std::vector<double> dyadic_radii(double length, double min_width, int levels) {
  if (levels < 0) levels = std::max(0, static_cast<int>(std::ceil(std::log2(length / min_width) - 1e-9)));
  std::vector<double> radii(static_cast<std::size_t>(levels) + 1);
  for (std::size_t j = 0; j < radii.size(); ++j) radii[j] = std::ldexp(length, -static_cast<int>(j));
  return radii;
}

/// Nodes at distance exactly r lie outside the open ball; the shrink keeps
/// that decision independent of rounding in the distance computation.
inline double strict_reach(double r) { return r * (1 - 1e-12); }

inline std::vector<std::size_t> center_set(std::size_t n, std::size_t subsample) {
  std::vector<std::size_t> c;
  if (subsample == 0 || subsample >= n) {
    c.resize(n);
    std::iota(c.begin(), c.end(), std::size_t{0});
  } else {
    for (std::size_t i = 0; i < subsample; ++i) c.push_back((2 * i + 1) * n / (2 * subsample));
  }
  return c;
}

inline MorreyNormResult best_of(const std::vector<MorreyNormResult>& parts, double p) {
  MorreyNormResult best;
  best.value = -1;
  for (const auto& r : parts)
    if (r.value > best.value) best = r;
  best.value = std::pow(std::max(best.value, 0.0), 1.0 / p);
  return best;
}

}  // namespace detail

/// sup over centers and dyadic radii of (r^-lambda * sum_{|x_k - x_c| < r} |f_k|^p w_k)^(1/p).
inline MorreyNormResult morrey_norm_detail(const Grid1D& g, std::span<const cplx> f, const MorreyParams& mp) {
  mp.validate();
  require_aligned(g.n, f.size());
  std::vector<double> prefix(g.n + 1, 0.0);
  for (std::size_t k = 0; k < g.n; ++k) prefix[k + 1] = prefix[k] + std::pow(std::abs(f[k]), mp.p) * g.weights[k];
  const auto radii = detail::dyadic_radii(g.length(), g.min_width(), mp.radii_levels);
  const auto centers = detail::center_set(g.n, mp.subsample);
  std::vector<MorreyNormResult> parts(centers.size());
  parallel_for(centers.size(), [&](std::size_t i) {
    const double xc = g.nodes[centers[i]];
    MorreyNormResult best{-1, centers[i], 0};
    for (double r : radii) {
      if (r < 0.5 * g.weights[centers[i]]) break;
      const double reach = detail::strict_reach(r);
      const auto lo = std::upper_bound(g.nodes.begin(), g.nodes.end(), xc - reach) - g.nodes.begin();
      const auto hi = std::lower_bound(g.nodes.begin(), g.nodes.end(), xc + reach) - g.nodes.begin();
      const double v = std::pow(r, -mp.lambda) * (prefix[static_cast<std::size_t>(hi)] - prefix[static_cast<std::size_t>(lo)]);
      if (v > best.value) best = {v, centers[i], r};
    }
    parts[i] = best;
  });
  return detail::best_of(parts, mp.p);
}

inline double morrey_norm(const Grid1D& g, std::span<const cplx> f, const MorreyParams& mp) {
  return morrey_norm_detail(g, f, mp).value;
}

inline double morrey_norm(const Grid1D& g, const SampledFunction& f, const MorreyParams& mp) {
  return morrey_norm(g, f.view(), mp);
}

inline double morrey_norm(const Grid1D& g, const SampledFunction& f, const MorreyParams& mp, BallVariant variant) {
  require(variant == BallVariant::euclid_ball, ErrorCode::unsupported_variant,
          "arc balls need a curve; on an interval use euclid_ball");
  return morrey_norm(g, f, mp);
}

/// Curve version; balls are Gamma(t, r) (euclid_ball) or Gamma_*(t, r) (arc_ball).
inline MorreyNormResult morrey_norm_detail(const DiscretizedCurve& c, std::span<const cplx> f, const MorreyParams& mp,
                                           BallVariant variant = BallVariant::euclid_ball) {
  mp.validate();
  require_aligned(c.size(), f.size());
  const std::size_t n = c.size();
  std::vector<double> mass(n);
  for (std::size_t k = 0; k < n; ++k) mass[k] = std::pow(std::abs(f[k]), mp.p) * c.weights[k];
  const double min_width = *std::min_element(c.weights.begin(), c.weights.end());
  const auto radii = detail::dyadic_radii(c.total_length, min_width, mp.radii_levels);
  const auto centers = detail::center_set(n, mp.subsample);
  std::vector<MorreyNormResult> parts(centers.size());
  parallel_for(centers.size(), [&](std::size_t i) {
    const std::size_t t = centers[i];
    std::vector<std::pair<double, double>> dm(n);
    for (std::size_t k = 0; k < n; ++k)
      dm[k] = {variant == BallVariant::euclid_ball ? std::abs(c.points[k] - c.points[t]) : c.arc_distance(k, t), mass[k]};
    std::sort(dm.begin(), dm.end());
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + dm[k].second;
    MorreyNormResult best{-1, t, 0};
    for (double r : radii) {
      if (r < 0.5 * c.weights[t]) break;
      const auto cnt = std::lower_bound(dm.begin(), dm.end(), std::pair<double, double>{detail::strict_reach(r), -1.0}) - dm.begin();
      const double v = std::pow(r, -mp.lambda) * prefix[static_cast<std::size_t>(cnt)];
      if (v > best.value) best = {v, t, r};
    }
    parts[i] = best;
  });
  return detail::best_of(parts, mp.p);
}

inline double morrey_norm(const DiscretizedCurve& c, std::span<const cplx> f, const MorreyParams& mp,
                          BallVariant variant = BallVariant::euclid_ball) {
  return morrey_norm_detail(c, f, mp, variant).value;
}

inline double morrey_norm(const DiscretizedCurve& c, const SampledFunction& f, const MorreyParams& mp,
                          BallVariant variant = BallVariant::euclid_ball) {
  return morrey_norm(c, f.view(), mp, variant);
}

/// Pointwise product rho * f at the nodes.
inline SampledFunction weigh(std::span<const cplx> points, const SampledFunction& f, const NodeWeight& rho) {
  require_aligned(points.size(), f.size());
  SampledFunction out;
  out.values.reserve(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) out.values.push_back(rho(points[k]) * f.values[k]);
  return out;
}

inline double weighted_morrey_norm(const Grid1D& g, const SampledFunction& f, const NodeWeight& rho,
                                   const MorreyParams& mp) {
  std::vector<cplx> pts(g.nodes.begin(), g.nodes.end());
  return morrey_norm(g, weigh(pts, f, rho), mp);
}

inline double weighted_morrey_norm(const DiscretizedCurve& c, const SampledFunction& f, const NodeWeight& rho,
                                   const MorreyParams& mp, BallVariant variant = BallVariant::euclid_ball) {
  return morrey_norm(c, weigh(c.points, f, rho), mp, variant);
}

enum class Verdict { yes, no, inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct MembershipVerdict {
  Verdict member = Verdict::inconclusive;
  std::vector<double> norm_estimates;
  std::vector<double> min_radii;
  GrowthFit growth;
};

/// Norms of the same function sampled on n0, 2 n0, 4 n0, ... cells of [a, b],
/// fitted against the smallest radius. A negative exponent (norm grows as the
/// radius shrinks) below -0.02 with residual < 0.1 means "no".
inline MembershipVerdict diagnose_membership(const std::function<SampledFunction(const Grid1D&)>& generator,
                                             double a, double b, long long n0, const MorreyParams& mp, int levels) {
  require(levels >= 4, ErrorCode::invalid_params, "need at least 4 refinement levels");
  MembershipVerdict v;
  for (int l = 0; l < levels; ++l) {
    const Grid1D g = make_grid(a, b, n0 << l);
    MorreyParams level_mp = mp;
    if (mp.radii_levels >= 0) level_mp.radii_levels = mp.radii_levels + l;
    const auto radii = detail::dyadic_radii(g.length(), g.min_width(), level_mp.radii_levels);
    v.norm_estimates.push_back(morrey_norm(g, generator(g), level_mp));
    v.min_radii.push_back(radii.back());
  }
  v.growth = fit_growth(v.min_radii, v.norm_estimates);
  if (v.growth.residual >= 0.1)
    v.member = Verdict::inconclusive;
  else
    v.member = v.growth.exponent < -0.02 ? Verdict::no : Verdict::yes;
  return v;
}

inline MembershipVerdict diagnose_membership(const std::function<cplx(double)>& fn, double a, double b, long long n0,
                                             const MorreyParams& mp, int levels) {
  return diagnose_membership([&](const Grid1D& g) { return sample(g, fn); }, a, b, n0, mp, levels);
}

}  // namespace morrey
