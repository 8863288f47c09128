#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "morrey/curves.hpp"
#include "morrey/error.hpp"
#include "morrey/numerics.hpp"
#include "morrey/parallel.hpp"
#include "morrey/weights.hpp"

namespace morrey {

enum class HardyDirection { lower, upper };

/// Power case H_beta / upper H_beta, or weighted H_phi / upper H_phi.
struct HardyParams {
  std::optional<double> beta;
  std::optional<WeightSpec> weight;
  HardyDirection direction = HardyDirection::lower;

  static HardyParams power(double beta, HardyDirection d) { return {beta, std::nullopt, d}; }
  static HardyParams weighted(const WeightSpec& w, HardyDirection d) { return {std::nullopt, w, d}; }

  void validate() const {
    require(beta.has_value() != weight.has_value(), ErrorCode::invalid_params,
            "set exactly one of beta and weight");
  }

  WeightSpec phi(double length) const {
    validate();
    return weight ? *weight : WeightSpec::power(*beta, length);
  }
};

namespace detail {

/// int_a^b t^c dt for 0 <= a <= b.
inline double power_integral(double c, double a, double b) {
  if (b <= a) return 0.0;
  if (a == 0 && c <= -1) return std::numeric_limits<double>::infinity();
  if (std::abs(c + 1) < 1e-14) return std::log(b / a);
  return (std::pow(b, c + 1) - std::pow(a, c + 1)) / (c + 1);
}

/// int_a^b g for positive g; an interval touching 0 is split into 60 halving
/// panels plus a power-law tail fitted from the last two panels.
template <class G>
double positive_integral(G&& g, double a, double b) {
  if (b <= a) return 0.0;
  if (a > 0) {
    double sum = 0, lo = a;
    while (lo < b) {
      const double hi = std::min(b, 2 * lo);
      sum += gauss_legendre(g, lo, hi);
      lo = hi;
    }
    return sum;
  }
  double sum = 0, hi = b;
  for (int i = 0; i < 60; ++i) {
    sum += gauss_legendre(g, 0.5 * hi, hi);
    hi *= 0.5;
  }
  const double c = std::log2(g(2 * hi) / g(hi));
  if (!(c > -1)) return std::numeric_limits<double>::infinity();
  return sum + g(hi) * hi / (c + 1);
}

/// Cell integrals of t^c / phi(t)^e style integrands: exact for power
/// weights, quadrature otherwise.
inline double weight_integral(const WeightSpec& phi, double extra_power, double a, double b) {
  if (phi.kind == WeightKind::power) return power_integral(extra_power - phi.alpha, a, b);
  return positive_integral([&](double t) { return std::pow(t, extra_power) / phi.eval(t); }, a, b);
}

}  // namespace detail

/// Product integration with f constant on each cell:
///   lower  H f(x_j) = phi(x_j)/x_j * int_0^{x_j} f/phi
///   upper  H f(x_j) = phi(x_j)   * int_{x_j}^b f/(t phi)
inline SampledFunction hardy_apply(const Grid1D& g, const HardyParams& hp, const SampledFunction& f) {
  require(g.a == 0.0, ErrorCode::invalid_range, "Hardy operators act on grids over [0, l]");
  require_aligned(g.n, f.size());
  const WeightSpec phi = hp.phi(g.b);
  const bool lower = hp.direction == HardyDirection::lower;
  const double extra = lower ? 0.0 : -1.0;
  std::vector<double> cell(g.n), half(g.n);
  parallel_for(g.n, [&](std::size_t k) {
    cell[k] = detail::weight_integral(phi, extra, g.edges[k], g.edges[k + 1]);
    half[k] = lower ? detail::weight_integral(phi, extra, g.edges[k], g.nodes[k])
                    : detail::weight_integral(phi, extra, g.nodes[k], g.edges[k + 1]);
  });
  require(!lower || (std::isfinite(half[0]) && std::isfinite(cell[0])), ErrorCode::non_integrable_input,
          "1/phi is not integrable at the origin");
  SampledFunction out;
  out.values.assign(g.n, 0.0);
  if (lower) {
    cplx run = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) {
      out.values[j] = phi.eval(g.nodes[j]) / g.nodes[j] * (run + f.values[j] * half[j]);
      run += f.values[j] * cell[j];
    }
  } else {
    cplx run = 0.0;
    for (std::size_t j = g.n; j-- > 0;) {
      out.values[j] = phi.eval(g.nodes[j]) * (run + f.values[j] * half[j]);
      run += f.values[j] * cell[j];
    }
  }
  return out;
}

/// Norm bounds for the power Hardy operators in L^{p,lambda}:
///   lower 1/(lambda/p + 1/p' - beta), upper 1/(beta + (1-lambda)/p).
inline std::optional<double> hardy_power_bound(double p, double lambda, double beta, HardyDirection d) {
  const double denom = d == HardyDirection::lower ? lambda / p + 1 - 1 / p - beta : beta + (1 - lambda) / p;
  if (denom <= 0) return std::nullopt;
  return 1 / denom;
}

namespace detail {

/// f at y from node samples: linear between nodes, linear extrapolation in the
/// end half-cells, zero at and beyond b.
inline cplx interpolate(const Grid1D& g, const SampledFunction& f, double y) {
  if (y >= g.b || y < g.a) return 0.0;
  if (g.n == 1) return f.values[0];
  std::size_t i = static_cast<std::size_t>(std::upper_bound(g.nodes.begin(), g.nodes.end(), y) - g.nodes.begin());
  i = std::clamp<std::size_t>(i, 1, g.n - 1);
  const double t = (y - g.nodes[i - 1]) / (g.nodes[i] - g.nodes[i - 1]);
  return f.values[i - 1] + t * (f.values[i] - f.values[i - 1]);
}

}  // namespace detail

/// A f(x_j) = sum_k a(t_k) f(x_j t_k) w_k, kernel sampled on `kernel_grid` over [0, T].
inline SampledFunction homogeneous_apply(const Grid1D& kernel_grid, const SampledFunction& a, const Grid1D& g,
                                         const SampledFunction& f) {
  require_aligned(kernel_grid.n, a.size());
  require_aligned(g.n, f.size());
  SampledFunction out;
  out.values.assign(g.n, 0.0);
  parallel_for(g.n, [&](std::size_t j) {
    cplx sum = 0.0;
    for (std::size_t k = 0; k < kernel_grid.n; ++k)
      sum += a.values[k] * detail::interpolate(g, f, g.nodes[j] * kernel_grid.nodes[k]) * kernel_grid.weights[k];
    out.values[j] = sum;
  });
  return out;
}

/// C = int t^((lambda-1)/p) |a(t)| dt with |a| constant per kernel cell.
inline double homogeneous_bound_constant(const Grid1D& kernel_grid, const SampledFunction& a, double p, double lambda) {
  require_aligned(kernel_grid.n, a.size());
  double c = 0;
  for (std::size_t k = 0; k < kernel_grid.n; ++k)
    c += std::abs(a.values[k]) *
         detail::power_integral((lambda - 1) / p, kernel_grid.edges[k], kernel_grid.edges[k + 1]);
  return c;
}

/// Operator output at cell edges (staggered against the midpoint data).
struct EdgeValues {
  std::vector<std::size_t> edges;
  std::vector<cplx> points;
  std::vector<cplx> values;

  std::size_t size() const { return values.size(); }
};

namespace detail {

inline cplx hilbert_sum(const Grid1D& g, std::span<const cplx> f, double x) {
  cplx sum = 0.0;
  for (std::size_t k = 0; k < g.n; ++k) sum += f[k] * g.weights[k] / (g.nodes[k] - x);
  return sum / std::numbers::pi;
}

}  // namespace detail

/// (1/pi) p.v. int_a^b f(t) dt / (t - x) at a single point strictly inside.
inline cplx hilbert_at(const Grid1D& g, const SampledFunction& f, double x) {
  require_aligned(g.n, f.size());
  require(x > g.a && x < g.b, ErrorCode::evaluation_at_endpoint, "evaluation point must lie strictly inside");
  return detail::hilbert_sum(g, f.view(), x);
}

/// Finite Hilbert transform at the interior edges.
inline EdgeValues hilbert_apply(const Grid1D& g, const SampledFunction& f) {
  require_aligned(g.n, f.size());
  EdgeValues out;
  for (std::size_t e = 1; e < g.n; ++e) {
    out.edges.push_back(e);
    out.points.emplace_back(g.edges[e], 0.0);
  }
  out.values.resize(out.edges.size());
  parallel_for(out.edges.size(), [&](std::size_t i) {
    out.values[i] = detail::hilbert_sum(g, f.view(), out.points[i].real());
  });
  return out;
}

/// Richardson step (4 H_{2n} - H_n)/3 on the interior edges of the n-cell grid.
template <class Fn>
EdgeValues hilbert_richardson(Fn&& fn, double a, double b, long long n) {
  const Grid1D coarse = make_grid(a, b, n), fine = make_grid(a, b, 2 * n);
  const EdgeValues hc = hilbert_apply(coarse, sample(coarse, fn));
  const EdgeValues hf = hilbert_apply(fine, sample(fine, fn));
  EdgeValues out = hc;
  for (std::size_t i = 0; i < hc.size(); ++i) out.values[i] = (4.0 * hf.values[2 * i + 1] - hc.values[i]) / 3.0;
  return out;
}

/// rho H (f/rho) at interior edges that are not weight nodes.
inline EdgeValues weighted_singular_apply(const Grid1D& g, const NodeWeight& rho, const SampledFunction& f) {
  require_aligned(g.n, f.size());
  std::vector<cplx> scaled(g.n);
  for (std::size_t k = 0; k < g.n; ++k) scaled[k] = f.values[k] / rho(g.nodes[k]);
  EdgeValues out;
  for (std::size_t e = 1; e < g.n; ++e) {
    const cplx x(g.edges[e], 0.0);
    if (std::any_of(rho.nodes.begin(), rho.nodes.end(), [&](const cplx& t) { return t == x; })) continue;
    out.edges.push_back(e);
    out.points.push_back(x);
  }
  out.values.resize(out.edges.size());
  parallel_for(out.edges.size(), [&](std::size_t i) {
    const double x = out.points[i].real();
    out.values[i] = rho(x) * detail::hilbert_sum(g, scaled, x);
  });
  return out;
}

inline EdgeValues weighted_singular_apply(const Grid1D& g, const WeightSpec& w, double x0, const SampledFunction& f) {
  return weighted_singular_apply(g, NodeWeight::single(w, x0), f);
}

/// K f = rho H (f/rho) - H f on the same edges.
inline EdgeValues difference_operator(const Grid1D& g, const NodeWeight& rho, const SampledFunction& f) {
  EdgeValues out = weighted_singular_apply(g, rho, f);
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] -= detail::hilbert_sum(g, f.view(), out.points[i].real());
  return out;
}

/// (1/pi) sum_k f_k dtau_k / (tau_k - t_e), dtau_k the chord across cell k,
/// at every edge of a closed curve and at the interior edges of an open one.
inline EdgeValues cauchy_apply(const DiscretizedCurve& c, const SampledFunction& f) {
  require_aligned(c.size(), f.size());
  const std::size_t n = c.size();
  std::vector<cplx> dtau(n);
  for (std::size_t k = 0; k < n; ++k) {
    dtau[k] = c.edge_points[k + 1] - c.edge_points[k];
    require(std::abs(dtau[k]) > 0 && std::abs(c.points[k] - c.edge_points[k]) > 0, ErrorCode::degenerate_curve,
            "consecutive curve points coincide");
  }
  EdgeValues out;
  for (std::size_t e = c.closed ? 0 : 1; e < n; ++e) {
    out.edges.push_back(e);
    out.points.push_back(c.edge_points[e]);
  }
  out.values.resize(out.edges.size());
  parallel_for(out.edges.size(), [&](std::size_t i) {
    const cplx t = out.points[i];
    cplx sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) sum += f.values[k] * dtau[k] / (c.points[k] - t);
    out.values[i] = sum / std::numbers::pi;
  });
  return out;
}

/// rho S (f/rho) on a curve, skipping edges that coincide with weight nodes.
inline EdgeValues weighted_cauchy_apply(const DiscretizedCurve& c, const NodeWeight& rho, const SampledFunction& f) {
  require_aligned(c.size(), f.size());
  SampledFunction scaled;
  for (std::size_t k = 0; k < c.size(); ++k) scaled.values.push_back(f.values[k] / rho(c.points[k]));
  EdgeValues s = cauchy_apply(c, scaled);
  EdgeValues out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::any_of(rho.nodes.begin(), rho.nodes.end(), [&](const cplx& t) { return t == s.points[i]; })) continue;
    out.edges.push_back(s.edges[i]);
    out.points.push_back(s.points[i]);
    out.values.push_back(rho(s.points[i]) * s.values[i]);
  }
  return out;
}

/// Edge values carried to the nodes: mean of the two adjacent edges, or the
/// one available edge at the ends of an open curve.
inline SampledFunction edges_to_nodes(const EdgeValues& ev, std::size_t n, bool closed) {
  std::vector<cplx> at(n + 1, 0.0);
  std::vector<bool> has(n + 1, false);
  for (std::size_t i = 0; i < ev.size(); ++i) {
    at[ev.edges[i]] = ev.values[i];
    has[ev.edges[i]] = true;
  }
  if (closed) {
    at[n] = at[0];
    has[n] = has[0];
  }
  SampledFunction out;
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (has[k] && has[k + 1])
      out.values[k] = 0.5 * (at[k] + at[k + 1]);
    else if (has[k] || has[k + 1])
      out.values[k] = has[k] ? at[k] : at[k + 1];
    else
      fail(ErrorCode::degenerate_curve, "node without an adjacent evaluation edge");
  }
  return out;
}

inline SampledFunction cauchy_at_nodes(const DiscretizedCurve& c, const SampledFunction& f) {
  return edges_to_nodes(cauchy_apply(c, f), c.size(), c.closed);
}

/// Log-spaced radii from the smallest cell to just above the diameter.
inline std::vector<double> maximal_radii(const DiscretizedCurve& c, std::size_t count = 16) {
  require(count >= 12, ErrorCode::invalid_params, "need at least 12 radii");
  const double lo = *std::min_element(c.weights.begin(), c.weights.end());
  return log_spaced(lo, c.diameter() * (1 + 1e-9), count);
}

namespace detail {

/// For each node: neighbors sorted by distance, and for each radius the number
/// of nodes strictly inside.
template <class Body>
void for_each_ball(const DiscretizedCurve& c, const std::vector<double>& radii, Body&& body) {
  require(!radii.empty(), ErrorCode::empty_radii, "no radii given");
  const std::size_t n = c.size();
  parallel_for(n, [&](std::size_t j) {
    std::vector<std::pair<double, std::size_t>> order(n);
    for (std::size_t k = 0; k < n; ++k) order[k] = {std::abs(c.points[k] - c.points[j]), k};
    std::sort(order.begin(), order.end());
    std::vector<std::size_t> counts;
    for (double r : radii) {
      const auto cnt = std::lower_bound(order.begin(), order.end(), std::pair<double, std::size_t>{r, 0}) - order.begin();
      counts.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(cnt)));
    }
    body(j, order, counts);
  });
}

}  // namespace detail

/// M f(t_j) = max_r (1/mu(ball)) sum_{ball} |f_k| w_k.
inline SampledFunction maximal_apply(const DiscretizedCurve& c, const SampledFunction& f,
                                     const std::vector<double>& radii) {
  require_aligned(c.size(), f.size());
  SampledFunction out;
  out.values.assign(c.size(), 0.0);
  detail::for_each_ball(c, radii, [&](std::size_t j, const auto& order, const auto& counts) {
    double best = 0, mass = 0, mu = 0;
    std::size_t taken = 0;
    for (std::size_t cnt : counts) {
      for (; taken < cnt; ++taken) {
        const std::size_t k = order[taken].second;
        mass += std::abs(f.values[k]) * c.weights[k];
        mu += c.weights[k];
      }
      best = std::max(best, mass / mu);
    }
    out.values[j] = best;
  });
  return out;
}

/// M# f(t_j) = max_r (1/mu(ball)) sum_{ball} |f_k - f_ball| w_k.
inline SampledFunction sharp_maximal_apply(const DiscretizedCurve& c, const SampledFunction& f,
                                           const std::vector<double>& radii) {
  require_aligned(c.size(), f.size());
  SampledFunction out;
  out.values.assign(c.size(), 0.0);
  detail::for_each_ball(c, radii, [&](std::size_t j, const auto& order, const auto& counts) {
    double best = 0;
    for (std::size_t cnt : counts) {
      cplx mean = 0.0;
      double mu = 0;
      for (std::size_t i = 0; i < cnt; ++i) {
        const std::size_t k = order[i].second;
        mean += f.values[k] * c.weights[k];
        mu += c.weights[k];
      }
      mean /= mu;
      double osc = 0;
      for (std::size_t i = 0; i < cnt; ++i) {
        const std::size_t k = order[i].second;
        osc += std::abs(f.values[k] - mean) * c.weights[k];
      }
      best = std::max(best, osc / mu);
    }
    out.values[j] = best;
  });
  return out;
}

struct KernelBoundReport {
  double min_constant = 0.0;
  double refined_constant = 0.0;
  std::pair<double, double> worst_pair{0.0, 0.0};
  bool stable = false;
};

/// Sup of |K(x,t)| over the class bound, K(x,t) = (phi(x)/phi(t) - 1)/(pi (t - x)):
///   V++: C phi(x)/(x phi(t)) for t < x, C/t for t > x
///   V-+: C/x for t < x, C phi(x)/(t phi(t)) for t > x
inline KernelBoundReport kernel_domination_report(const WeightSpec& w, VClass cls, long long samples = 2000) {
  require(cls == VClass::pp || cls == VClass::mp, ErrorCode::invalid_params, "kernel bounds exist for V++ and V-+");
  require(check_v_class(w, cls, samples).verdict, ErrorCode::class_mismatch,
          "weight is not in " + to_string(cls));
  auto kernel = [&](double x, double t) {
    return std::abs(w.eval(x) / w.eval(t) - 1) / (std::numbers::pi * std::abs(t - x));
  };
  auto bound = [&](double x, double t) {
    if (cls == VClass::pp) return t < x ? w.eval(x) / (x * w.eval(t)) : 1 / t;
    return t < x ? 1 / x : w.eval(x) / (t * w.eval(t));
  };
  // both orders of each sampled pair (hi, lo)
  auto q = [&](double hi, double lo) {
    return std::max(kernel(hi, lo) / bound(hi, lo), kernel(lo, hi) / bound(lo, hi));
  };
  auto diag = [&](double x) {
    const auto d = w.log_derivative(x);
    return d ? std::abs(*d) / std::numbers::pi : std::nan("");
  };
  const PairMax coarse = pair_supremum(w.length, samples, q, diag);
  const PairMax fine = pair_supremum(w.length, 2 * samples, q, diag);
  KernelBoundReport r;
  r.min_constant = coarse.value;
  r.refined_constant = fine.value;
  r.worst_pair = {coarse.x, coarse.y};
  r.stable = stable_pair(coarse.value, fine.value);
  return r;
}

}  // namespace morrey
