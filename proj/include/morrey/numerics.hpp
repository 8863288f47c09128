#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "morrey/error.hpp"

namespace morrey {

using cplx = std::complex<double>;

/// Midpoint grid on [a, b]: cell k is [edges[k], edges[k+1]], its node is the
/// cell midpoint and its weight the cell width. Uniform grids come from
/// make_grid; make_graded_grid clusters cells geometrically around chosen
/// points. Nodes never coincide with edges, which is what the staggered
/// principal-value quadrature relies on.
struct Grid1D {
  double a = 0.0;
  double b = 1.0;
  std::size_t n = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> edges;

  std::size_t size() const { return n; }
  double length() const { return b - a; }
  double min_width() const { return *std::min_element(weights.begin(), weights.end()); }
  bool uniform() const {
    const auto [lo, hi] = std::minmax_element(weights.begin(), weights.end());
    return *hi - *lo <= 1e-12 * (b - a);
  }
};

inline Grid1D grid_from_edges(std::vector<double> edges) {
  require(edges.size() >= 2, ErrorCode::invalid_count, "a grid needs at least one cell");
  Grid1D g;
  g.a = edges.front();
  g.b = edges.back();
  g.n = edges.size() - 1;
  g.nodes.resize(g.n);
  g.weights.resize(g.n);
  for (std::size_t k = 0; k < g.n; ++k) {
    require(edges[k + 1] > edges[k], ErrorCode::invalid_range, "grid edges must increase strictly");
    g.nodes[k] = 0.5 * (edges[k] + edges[k + 1]);
    g.weights[k] = edges[k + 1] - edges[k];
  }
  g.edges = std::move(edges);
  return g;
}

inline Grid1D make_grid(double a, double b, long long n) {
  require(b > a, ErrorCode::invalid_range, "need b > a");
  require(n >= 1, ErrorCode::invalid_count, "need n >= 1");
  const auto cells = static_cast<std::size_t>(n);
  const double h = (b - a) / static_cast<double>(cells);
  Grid1D g;
  g.a = a;
  g.b = b;
  g.n = cells;
  g.nodes.resize(cells);
  g.weights.assign(cells, h);
  g.edges.resize(cells + 1);
  for (std::size_t k = 0; k < cells; ++k) g.nodes[k] = a + (static_cast<double>(k) + 0.5) * h;
  for (std::size_t k = 0; k <= cells; ++k) g.edges[k] = a + static_cast<double>(k) * h;
  g.edges.back() = b;
  return g;
}

/// Grid that is uniform with width (b-a)/n_uniform away from `singular_points`
/// and geometric (cells_per_octave cells per halving of the distance) inside,
/// down to a smallest cell of (b-a)*2^-depth_octaves next to each point. Each
/// singular point is a cell edge.
inline Grid1D make_graded_grid(double a, double b, long long n_uniform,
                               std::span<const double> singular_points, int depth_octaves,
                               int cells_per_octave = 8) {
  require(b > a, ErrorCode::invalid_range, "need b > a");
  require(n_uniform >= 1, ErrorCode::invalid_count, "need n_uniform >= 1");
  require(depth_octaves >= 1 && cells_per_octave >= 1, ErrorCode::invalid_count,
          "grading depth and density must be positive");
  const double len = b - a;
  const double h = len / static_cast<double>(n_uniform);
  const double ratio = std::exp2(1.0 / cells_per_octave);
  std::vector<double> pts{a, b};
  for (double s : singular_points) {
    require(s >= a && s <= b, ErrorCode::invalid_range, "singular point outside the grid");
    pts.push_back(s);
    for (int side : {-1, 1}) {
      double d = len * std::exp2(-static_cast<double>(depth_octaves));
      while (true) {
        const double x = s + side * d;
        if (x <= a || x >= b) break;
        pts.push_back(x);
        if (d * (ratio - 1.0) >= h) break;
        d *= ratio;
      }
    }
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> edges;
  edges.push_back(pts.front());
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double lo = edges.back();
    const double hi = pts[i];
    if (hi <= lo) continue;
    const auto pieces = static_cast<long long>(std::ceil((hi - lo) / h - 1e-9));
    for (long long j = 1; j < pieces; ++j) edges.push_back(lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(pieces));
    edges.push_back(hi);
  }
  return grid_from_edges(std::move(edges));
}

/// Samples aligned one-per-node with a grid or curve.
struct SampledFunction {
  std::vector<cplx> values;

  std::size_t size() const { return values.size(); }
  std::span<const cplx> view() const { return values; }
};

template <class Fn>
SampledFunction sample(const Grid1D& g, Fn&& fn) {
  SampledFunction f;
  f.values.reserve(g.n);
  for (double x : g.nodes) f.values.emplace_back(fn(x));
  return f;
}

inline void require_aligned(std::size_t nodes, std::size_t values) {
  require(nodes == values, ErrorCode::misaligned_function,
          "function has " + std::to_string(values) + " samples for " + std::to_string(nodes) + " nodes");
}

inline cplx integrate(const Grid1D& g, std::span<const cplx> f) {
  require_aligned(g.n, f.size());
  cplx sum = 0.0;
  for (std::size_t k = 0; k < g.n; ++k) sum += f[k] * g.weights[k];
  return sum;
}

inline cplx integrate(const Grid1D& g, const SampledFunction& f) { return integrate(g, f.view()); }

/// Least-squares fit of log y = exponent * log x + log_constant.
struct GrowthFit {
  double exponent = 0.0;
  double log_constant = 0.0;
  double residual = 0.0;  // RMS of the log-log residuals
};

inline GrowthFit fit_growth(std::span<const double> xs, std::span<const double> ys) {
  require(xs.size() == ys.size(), ErrorCode::degenerate_input, "xs and ys differ in length");
  require(xs.size() >= 3, ErrorCode::degenerate_input, "need at least 3 points");
  const auto m = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  std::vector<double> lx(xs.size()), ly(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    require(xs[i] > 0 && ys[i] > 0 && std::isfinite(xs[i]) && std::isfinite(ys[i]),
            ErrorCode::degenerate_input, "entries must be positive and finite");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  require(sxx > 1e-24, ErrorCode::degenerate_input, "xs must be distinct");
  GrowthFit fit;
  fit.exponent = sxy / sxx;
  fit.log_constant = my - fit.exponent * mx;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ly[i] - (fit.exponent * lx[i] + fit.log_constant);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

/// 16-point Gauss-Legendre rule on [-1, 1].
inline const std::array<std::pair<double, double>, 16>& gauss_legendre16() {
  static const std::array<std::pair<double, double>, 16> rule = [] {
    std::array<std::pair<double, double>, 16> r{};
    constexpr int n = 16;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r[static_cast<std::size_t>(i)] = {x, 2.0 / ((1 - x * x) * dp * dp)};
    }
    return r;
  }();
  return rule;
}

template <class Fn>
double gauss_legendre(Fn&& fn, double lo, double hi) {
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double sum = 0;
  for (const auto& [x, w] : gauss_legendre16()) sum += w * fn(mid + half * x);
  return sum * half;
}

}  // namespace morrey
