#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "morrey/error.hpp"
#include "morrey/numerics.hpp"
#include "morrey/parallel.hpp"

namespace morrey {

/// Arc-length discretization of a plane curve. Cell k spans the arc interval
/// [edge_arcs[k], edge_arcs[k+1]]; its node is the arc midpoint. For closed
/// curves edge_points.back() == edge_points.front().
struct DiscretizedCurve {
  std::vector<cplx> points;
  std::vector<double> arc_nodes;
  std::vector<double> weights;
  std::vector<cplx> edge_points;
  std::vector<double> edge_arcs;
  double total_length = 0.0;
  bool closed = false;

  std::size_t size() const { return points.size(); }

  double arc_distance(std::size_t i, std::size_t j) const {
    const double d = std::abs(arc_nodes[i] - arc_nodes[j]);
    return closed ? std::min(d, total_length - d) : d;
  }

  double diameter() const {
    double best = 0;
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j) best = std::max(best, std::abs(points[i] - points[j]));
    return best;
  }

  double max_width() const { return *std::max_element(weights.begin(), weights.end()); }
};

enum class CurveKind { segment, circle, lipschitz_graph, log_spiral_arc, cusp };

inline std::optional<CurveKind> parse_curve_kind(const std::string& name) {
  static const std::map<std::string, CurveKind> kinds{{"segment", CurveKind::segment},
                                                      {"circle", CurveKind::circle},
                                                      {"lipschitz_graph", CurveKind::lipschitz_graph},
                                                      {"log_spiral_arc", CurveKind::log_spiral_arc},
                                                      {"cusp", CurveKind::cusp}};
  const auto it = kinds.find(name);
  if (it == kinds.end()) return std::nullopt;
  return it->second;
}

inline std::string to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::segment: return "segment";
    case CurveKind::circle: return "circle";
    case CurveKind::lipschitz_graph: return "lipschitz_graph";
    case CurveKind::log_spiral_arc: return "log_spiral_arc";
    case CurveKind::cusp: return "cusp";
  }
  return "unknown";
}

using CurveParams = std::map<std::string, double>;

namespace detail {

inline double param_or(const CurveParams& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

/// Parametric curve z(u), u in [u0, u1], with speed |z'(u)| and optional
/// interior kinks where the speed is not smooth.
struct Parametric {
  std::function<cplx(double)> z;
  std::function<double(double)> speed;
  double u0 = 0, u1 = 1;
  std::vector<double> kinks;
};

/// Cumulative arc length on a panel partition, inverted by bisection plus
/// Newton inside the bracketing panel.
class ArcLengthMap {
 public:
  ArcLengthMap(const Parametric& c, std::size_t panels) : c_(c) {
    std::vector<double> breaks{c.u0, c.u1};
    breaks.insert(breaks.end(), c.kinks.begin(), c.kinks.end());
    std::sort(breaks.begin(), breaks.end());
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
      const std::size_t m = std::max<std::size_t>(8, panels / (breaks.size() - 1));
      for (std::size_t i = 0; i < m; ++i)
        u_.push_back(breaks[b] + (breaks[b + 1] - breaks[b]) * static_cast<double>(i) / static_cast<double>(m));
    }
    u_.push_back(c.u1);
    s_.assign(u_.size(), 0.0);
    for (std::size_t i = 1; i < u_.size(); ++i) s_[i] = s_[i - 1] + gauss_legendre(c.speed, u_[i - 1], u_[i]);
  }

  double length() const { return s_.back(); }

  double param_at(double s) const {
    if (s <= 0) return u_.front();
    if (s >= length()) return u_.back();
    const auto it = std::upper_bound(s_.begin(), s_.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - s_.begin()) - 1;
    double lo = u_[i], hi = u_[i + 1];
    double u = lo + (hi - lo) * (s - s_[i]) / (s_[i + 1] - s_[i]);
    for (int iter = 0; iter < 60; ++iter) {
      const double f = s_[i] + gauss_legendre(c_.speed, u_[i], u) - s;
      if (f > 0) hi = u; else lo = u;
      const double v = c_.speed(u);
      double next = v > 0 ? u - f / v : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - u) < 1e-15 * (1 + std::abs(u))) { u = next; break; }
      u = next;
    }
    return u;
  }

 private:
  const Parametric& c_;
  std::vector<double> u_, s_;
};

inline DiscretizedCurve discretize(const Parametric& c, std::size_t n, bool closed) {
  const ArcLengthMap map(c, std::max<std::size_t>(2048, 16 * n));
  const double len = map.length();
  DiscretizedCurve out;
  out.total_length = len;
  out.closed = closed;
  out.points.resize(n);
  out.arc_nodes.resize(n);
  out.weights.assign(n, len / static_cast<double>(n));
  out.edge_points.resize(n + 1);
  out.edge_arcs.resize(n + 1);
  for (std::size_t k = 0; k < n; ++k) {
    out.arc_nodes[k] = (static_cast<double>(k) + 0.5) * len / static_cast<double>(n);
    out.points[k] = c.z(map.param_at(out.arc_nodes[k]));
  }
  for (std::size_t k = 0; k <= n; ++k) {
    out.edge_arcs[k] = static_cast<double>(k) * len / static_cast<double>(n);
    out.edge_points[k] = c.z(map.param_at(out.edge_arcs[k]));
  }
  if (closed) out.edge_points[n] = out.edge_points[0];
  return out;
}

}  // namespace detail

/// Families: segment{length}, circle{radius}, lipschitz_graph{amplitude,
/// frequency, width}, log_spiral_arc{growth, angle, radius}, cusp{a, length}.
/// The cusp joins the branches y = +x^a and y = -x^a at the origin, so chords
/// across the cusp scale like the a-th power of the arc separation.
inline DiscretizedCurve generate_curve(CurveKind kind, const CurveParams& params, long long n) {
  using detail::param_or;
  require(n >= 8, ErrorCode::invalid_params, "need n >= 8");
  const auto cells = static_cast<std::size_t>(n);
  switch (kind) {
    case CurveKind::segment: {
      const double len = param_or(params, "length", 1.0);
      require(len > 0, ErrorCode::invalid_params, "segment length must be positive");
      const Grid1D g = make_grid(0.0, len, n);
      DiscretizedCurve c;
      c.total_length = len;
      c.arc_nodes = g.nodes;
      c.weights = g.weights;
      c.edge_arcs = g.edges;
      for (double x : g.nodes) c.points.emplace_back(x, 0.0);
      for (double x : g.edges) c.edge_points.emplace_back(x, 0.0);
      return c;
    }
    case CurveKind::circle: {
      const double radius = param_or(params, "radius", 1.0);
      require(radius > 0, ErrorCode::invalid_params, "circle radius must be positive");
      const double len = 2 * std::numbers::pi * radius;
      DiscretizedCurve c;
      c.total_length = len;
      c.closed = true;
      c.weights.assign(cells, len / static_cast<double>(cells));
      for (std::size_t k = 0; k < cells; ++k) {
        const double s = (static_cast<double>(k) + 0.5) * len / static_cast<double>(cells);
        c.arc_nodes.push_back(s);
        c.points.push_back(std::polar(radius, s / radius));
      }
      for (std::size_t k = 0; k <= cells; ++k) {
        const double s = static_cast<double>(k) * len / static_cast<double>(cells);
        c.edge_arcs.push_back(s);
        c.edge_points.push_back(k == cells ? c.edge_points.front() : std::polar(radius, s / radius));
      }
      return c;
    }
    case CurveKind::lipschitz_graph: {
      const double amp = param_or(params, "amplitude", 0.1);
      const double freq = param_or(params, "frequency", 2.0);
      const double width = param_or(params, "width", 1.0);
      require(width > 0 && freq >= 0 && std::isfinite(amp), ErrorCode::invalid_params,
              "lipschitz_graph needs width > 0, frequency >= 0");
      const double w = 2 * std::numbers::pi * freq;
      detail::Parametric p{[=](double u) { return cplx(u, amp * std::sin(w * u)); },
                           [=](double u) { return std::hypot(1.0, amp * w * std::cos(w * u)); },
                           0.0, width, {}};
      return detail::discretize(p, cells, false);
    }
    case CurveKind::log_spiral_arc: {
      const double growth = param_or(params, "growth", 0.2);
      const double angle = param_or(params, "angle", 3 * std::numbers::pi);
      const double radius = param_or(params, "radius", 1.0);
      require(angle > 0 && radius > 0, ErrorCode::invalid_params, "log_spiral_arc needs angle > 0, radius > 0");
      const cplx rate(growth, 1.0);
      detail::Parametric p{[=](double u) { return radius * std::exp(rate * u); },
                           [=](double u) { return radius * std::abs(rate) * std::exp(growth * u); },
                           0.0, angle, {}};
      return detail::discretize(p, cells, false);
    }
    case CurveKind::cusp: {
      const double a = param_or(params, "a", 2.0);
      const double len = param_or(params, "length", 1.0);
      require(a >= 1 && len > 0, ErrorCode::invalid_params, "cusp needs a >= 1 and length > 0");
      auto speed = [a](double u) {
        const double x = std::abs(u);
        return std::sqrt(1.0 + a * a * std::pow(x, 2 * a - 2));
      };
      // branch extent X with arc length len/2
      double lo = 0, hi = len;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        double branch = 0;
        for (int k = 0; k < 64; ++k) branch += gauss_legendre(speed, mid * k / 64.0, mid * (k + 1) / 64.0);
        (branch > 0.5 * len ? hi : lo) = mid;
      }
      const double extent = 0.5 * (lo + hi);
      detail::Parametric p{[a](double u) {
                             const double x = std::abs(u);
                             return cplx(x, (u < 0 ? 1.0 : -1.0) * std::pow(x, a));
                           },
                           speed, -extent, extent, {0.0}};
      return detail::discretize(p, cells, false);
    }
  }
  fail(ErrorCode::unknown_family, "unknown curve family");
}

inline DiscretizedCurve generate_curve(const std::string& kind, const CurveParams& params, long long n) {
  const auto k = parse_curve_kind(kind);
  require(k.has_value(), ErrorCode::unknown_family, "unknown curve family '" + kind + "'");
  return generate_curve(*k, params, n);
}

/// Views an interval grid as a straight curve on the real axis.
inline DiscretizedCurve as_curve(const Grid1D& g) {
  DiscretizedCurve c;
  c.total_length = g.length();
  c.weights = g.weights;
  for (double x : g.nodes) {
    c.points.emplace_back(x, 0.0);
    c.arc_nodes.push_back(x - g.a);
  }
  for (double x : g.edges) {
    c.edge_points.emplace_back(x, 0.0);
    c.edge_arcs.push_back(x - g.a);
  }
  return c;
}

/// Curve import: one "s x y" triple per line, strictly increasing s. Each
/// sample becomes a node; cell edges sit halfway between samples in arc.
inline DiscretizedCurve parse_curve(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> s;
  std::vector<cplx> z;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    double a, x, y;
    if (!(fields >> a)) continue;
    std::string extra;
    require(static_cast<bool>(fields >> x >> y) && !(fields >> extra), ErrorCode::parse_error,
            "line " + std::to_string(line_no) + ": expected 's x y'");
    if (!s.empty()) {
      require(a > s.back(), ErrorCode::parse_error, "line " + std::to_string(line_no) + ": s must increase strictly");
      const double chord = std::abs(cplx(x, y) - z.back());
      require(chord <= (a - s.back()) * (1 + 1e-9), ErrorCode::parse_error,
              "line " + std::to_string(line_no) + ": chord exceeds arc between consecutive samples");
    }
    s.push_back(a);
    z.emplace_back(x, y);
  }
  require(s.size() >= 2, ErrorCode::parse_error, "curve file needs at least two samples");
  const std::size_t n = s.size();
  auto at_arc = [&](double arc) {
    std::size_t i = arc <= s.front() ? 0 : arc >= s.back() ? n - 2
        : static_cast<std::size_t>(std::upper_bound(s.begin(), s.end(), arc) - s.begin()) - 1;
    i = std::min(i, n - 2);
    const double t = (arc - s[i]) / (s[i + 1] - s[i]);
    return z[i] + t * (z[i + 1] - z[i]);
  };
  std::vector<double> edges(n + 1);
  edges[0] = s[0] - 0.5 * (s[1] - s[0]);
  edges[n] = s[n - 1] + 0.5 * (s[n - 1] - s[n - 2]);
  for (std::size_t k = 1; k < n; ++k) edges[k] = 0.5 * (s[k - 1] + s[k]);
  DiscretizedCurve c;
  const double origin = edges[0];
  for (std::size_t k = 0; k < n; ++k) {
    c.points.push_back(z[k]);
    c.arc_nodes.push_back(s[k] - origin);
    c.weights.push_back(edges[k + 1] - edges[k]);
  }
  for (double e : edges) {
    c.edge_arcs.push_back(e - origin);
    c.edge_points.push_back(at_arc(e));
  }
  c.total_length = edges[n] - origin;
  return c;
}

inline DiscretizedCurve load_curve(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::io_error, "cannot read curve file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_curve(buf.str());
}

inline std::vector<std::size_t> ball(const DiscretizedCurve& c, std::size_t t_index, double r) {
  require(t_index < c.size(), ErrorCode::index_out_of_range, "ball center index out of range");
  std::vector<std::size_t> idx;
  const cplx t = c.points[t_index];
  for (std::size_t k = 0; k < c.size(); ++k)
    if (std::abs(c.points[k] - t) < r) idx.push_back(k);
  return idx;
}

inline std::vector<std::size_t> arc_ball(const DiscretizedCurve& c, std::size_t t_index, double r) {
  require(t_index < c.size(), ErrorCode::index_out_of_range, "arc ball center index out of range");
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < c.size(); ++k)
    if (c.arc_distance(k, t_index) < r) idx.push_back(k);
  return idx;
}

inline std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  require(lo > 0 && hi >= lo && count >= 2, ErrorCode::invalid_params, "bad log-spaced range");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(count - 1));
  return out;
}

/// Radii for Carleson-constant searches: from 24 cells (where the cell-sum
/// measure of a ball is within 5% of its true arc measure) to the diameter.
inline std::vector<double> diagnostic_radii(const DiscretizedCurve& c, std::size_t count = 24) {
  const double diam = c.diameter();
  return log_spaced(std::min(24 * c.max_width(), diam), diam, count);
}

struct CurveDiagnostics {
  double carleson_constant = 0.0;
  double arc_chord_constant = 0.0;
  double cusp_order_estimate = 1.0;
  GrowthFit cusp_fit;
};

inline CurveDiagnostics curve_diagnostics(const DiscretizedCurve& c, const std::vector<double>& radii) {
  require(!radii.empty(), ErrorCode::empty_radii, "no radii given");
  const std::size_t n = c.size();
  std::vector<double> carleson(n, 0.0), arc_chord(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    std::vector<double> dist(n);
    for (std::size_t k = 0; k < n; ++k) dist[k] = std::abs(c.points[k] - c.points[i]);
    for (double r : radii) {
      double mu = 0;
      for (std::size_t k = 0; k < n; ++k)
        if (dist[k] < r) mu += c.weights[k];
      carleson[i] = std::max(carleson[i], mu / r);
    }
    for (std::size_t k = 0; k < n; ++k)
      if (k != i && dist[k] > 0) arc_chord[i] = std::max(arc_chord[i], c.arc_distance(i, k) / dist[k]);
  });
  CurveDiagnostics d;
  d.carleson_constant = *std::max_element(carleson.begin(), carleson.end());
  d.arc_chord_constant = *std::max_element(arc_chord.begin(), arc_chord.end());

  // Smallest chord among node pairs at a given index offset, against their
  // arc separation: chord ~ arc^a near the worst point. Pairs symmetric about
  // a cusp have odd offsets when the cusp is a cell edge and even ones when
  // it is a node, so both parities are fitted and the larger order is kept.
  for (std::size_t parity : {0u, 1u}) {
    std::vector<std::size_t> offsets;
    for (double k = 2; k <= static_cast<double>(n) / 8.0; k *= 1.25) {
      const auto off = 2 * static_cast<std::size_t>(std::lround(k / 2)) + parity;
      if (offsets.empty() || off != offsets.back()) offsets.push_back(off);
    }
    std::vector<double> arcs, chords;
    for (std::size_t off : offsets) {
      double best = std::numeric_limits<double>::infinity(), best_arc = 0;
      const std::size_t limit = c.closed ? n : n - off;
      for (std::size_t i = 0; i < limit; ++i) {
        const std::size_t j = (i + off) % n;
        const double chord = std::abs(c.points[j] - c.points[i]);
        if (chord < best) {
          best = chord;
          best_arc = c.arc_distance(i, j);
        }
      }
      if (best > 0 && best_arc > 0) {
        arcs.push_back(best_arc);
        chords.push_back(best);
      }
    }
    if (arcs.size() < 3) continue;
    const GrowthFit fit = fit_growth(arcs, chords);
    if (parity == 0 || fit.exponent > d.cusp_fit.exponent) d.cusp_fit = fit;
  }
  if (d.cusp_fit.exponent > 0) d.cusp_order_estimate = d.cusp_fit.exponent;
  return d;
}

inline CurveDiagnostics curve_diagnostics(const DiscretizedCurve& c) {
  return curve_diagnostics(c, diagnostic_radii(c));
}

/// Arc-chord constants across refinements n, 2n, ...; a positive growth
/// exponent (> 0.1) means the constant is unbounded on the continuous curve.
struct ArcChordTrend {
  std::vector<long long> ns;
  std::vector<double> constants;
  GrowthFit fit;
  bool unbounded = false;
};

inline ArcChordTrend arc_chord_trend(CurveKind kind, const CurveParams& params, long long n0, int levels) {
  require(levels >= 3, ErrorCode::invalid_params, "need at least 3 refinement levels");
  ArcChordTrend t;
  std::vector<double> xs;
  for (int l = 0; l < levels; ++l) {
    const long long n = n0 << l;
    const DiscretizedCurve c = generate_curve(kind, params, n);
    t.ns.push_back(n);
    xs.push_back(static_cast<double>(n));
    t.constants.push_back(curve_diagnostics(c, {c.diameter()}).arc_chord_constant);
  }
  t.fit = fit_growth(xs, t.constants);
  t.unbounded = t.fit.exponent > 0.1;
  return t;
}

}  // namespace morrey
