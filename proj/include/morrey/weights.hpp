#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "morrey/error.hpp"
#include "morrey/numerics.hpp"
#include "morrey/parallel.hpp"

namespace morrey {

enum class WeightKind { power, power_log, custom_table };

/// phi on (0, length]: x^alpha, x^alpha * ln(A/x)^beta (A > length), or a
/// table of positive samples interpolated linearly in (ln x, ln phi).
struct WeightSpec {
  WeightKind kind = WeightKind::power;
  double alpha = 0.0;
  double beta = 0.0;
  double A = std::exp(1.0);
  double length = 1.0;
  std::vector<double> table_x;
  std::vector<double> table_values;

  static WeightSpec power(double alpha, double length = 1.0) {
    require(length > 0 && std::isfinite(alpha), ErrorCode::invalid_params, "power weight needs length > 0");
    WeightSpec w;
    w.alpha = alpha;
    w.length = length;
    return w;
  }

  static WeightSpec power_log(double alpha, double beta, double A, double length = 1.0) {
    require(length > 0 && A > length, ErrorCode::invalid_params, "power_log weight needs A > length > 0");
    WeightSpec w;
    w.kind = WeightKind::power_log;
    w.alpha = alpha;
    w.beta = beta;
    w.A = A;
    w.length = length;
    return w;
  }

  static WeightSpec table(std::vector<double> xs, std::vector<double> values, double length) {
    require(xs.size() >= 2 && xs.size() == values.size(), ErrorCode::invalid_params,
            "weight table needs at least two (x, value) pairs");
    for (std::size_t i = 0; i < xs.size(); ++i) {
      require(xs[i] > 0 && values[i] > 0 && std::isfinite(values[i]), ErrorCode::invalid_params,
              "weight table entries must be positive");
      if (i) require(xs[i] > xs[i - 1], ErrorCode::invalid_params, "weight table x must increase strictly");
    }
    require(length > 0, ErrorCode::invalid_params, "weight table needs length > 0");
    WeightSpec w;
    w.kind = WeightKind::custom_table;
    w.length = length;
    w.table_x = std::move(xs);
    w.table_values = std::move(values);
    return w;
  }

  /// x^lambda * phi(x).
  WeightSpec times_power(double lambda) const {
    WeightSpec w = *this;
    if (kind == WeightKind::custom_table) {
      for (std::size_t i = 0; i < w.table_x.size(); ++i) w.table_values[i] *= std::pow(w.table_x[i], lambda);
    } else {
      w.alpha += lambda;
    }
    return w;
  }

  /// ln phi as a function of ln x; valid far below the smallest double.
  double log_eval_ln(double lx) const {
    switch (kind) {
      case WeightKind::power: return alpha * lx;
      case WeightKind::power_log: return alpha * lx + beta * std::log(std::log(A) - lx);
      case WeightKind::custom_table: {
        const std::size_t n = table_x.size();
        const double first = std::log(table_x.front());
        std::size_t i = 0;
        if (lx > first) {
          const auto it = std::upper_bound(table_x.begin(), table_x.end(), std::exp(lx));
          i = std::min<std::size_t>(static_cast<std::size_t>(it - table_x.begin()), n - 1) - 1;
        }
        const double x0 = std::log(table_x[i]), x1 = std::log(table_x[i + 1]);
        const double y0 = std::log(table_values[i]), y1 = std::log(table_values[i + 1]);
        return y0 + (y1 - y0) * (lx - x0) / (x1 - x0);
      }
    }
    return 0.0;
  }

  double eval(double x) const {
    require(x > 0 && x <= length * (1 + 1e-12), ErrorCode::out_of_domain,
            "weight evaluated outside (0, length]");
    if (kind == WeightKind::power) return std::pow(x, alpha);
    return std::exp(log_eval_ln(std::log(x)));
  }

  /// x phi'(x) / phi(x); empty for tables.
  std::optional<double> log_derivative(double x) const {
    switch (kind) {
      case WeightKind::power: return alpha;
      case WeightKind::power_log: return alpha - beta / std::log(A / x);
      case WeightKind::custom_table: return std::nullopt;
    }
    return std::nullopt;
  }

  double operator()(double x) const { return eval(x); }
};

/// Weight table file: one "x value" pair per line, '#' comments allowed.
inline WeightSpec parse_weight_table(const std::string& text, std::optional<double> length = std::nullopt) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> xs, vs;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    double x, v;
    if (!(fields >> x)) continue;
    std::string extra;
    require(static_cast<bool>(fields >> v) && !(fields >> extra), ErrorCode::parse_error,
            "line " + std::to_string(line_no) + ": expected 'x value'");
    require(x > 0 && v > 0, ErrorCode::parse_error, "line " + std::to_string(line_no) + ": entries must be positive");
    require(xs.empty() || x > xs.back(), ErrorCode::parse_error,
            "line " + std::to_string(line_no) + ": x must increase strictly");
    xs.push_back(x);
    vs.push_back(v);
  }
  require(xs.size() >= 2, ErrorCode::parse_error, "weight table needs at least two rows");
  const double len = length.value_or(xs.back());
  return WeightSpec::table(std::move(xs), std::move(vs), len);
}

inline WeightSpec load_weight_table(const std::string& path, std::optional<double> length = std::nullopt) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::io_error, "cannot read weight table '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_weight_table(buf.str(), length);
}

/// rho(t) = prod_k phi_k(|t - t_k|).
struct NodeWeight {
  std::vector<WeightSpec> specs;
  std::vector<cplx> nodes;

  NodeWeight() = default;
  NodeWeight(std::vector<WeightSpec> s, std::vector<cplx> t) : specs(std::move(s)), nodes(std::move(t)) {
    require(specs.size() == nodes.size(), ErrorCode::invalid_params, "one weight per node required");
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = i + 1; j < nodes.size(); ++j)
        require(nodes[i] != nodes[j], ErrorCode::invalid_params, "weight nodes must be distinct");
  }

  static NodeWeight single(const WeightSpec& w, double x0) { return NodeWeight({w}, {cplx(x0, 0.0)}); }

  double operator()(cplx t) const {
    double rho = 1.0;
    for (std::size_t k = 0; k < specs.size(); ++k) {
      const double d = std::abs(t - nodes[k]);
      require(d > 0, ErrorCode::weight_singular_at_node, "sample point coincides with a weight node");
      rho *= specs[k].eval(d);
    }
    return rho;
  }

  double operator()(double x) const { return (*this)(cplx(x, 0.0)); }
};

/// Matuszewska-Orlicz index estimates.
struct IndexEstimate {
  double m_lower = 0.0;
  double M_upper = 0.0;
  double h_min = 0.0;
  std::vector<double> x_grid;
};

/// limsup over h -> 0 is the max over the deepest quarter of the scales
/// h_j = length * 4^-j, j = 2..h_levels+1. Ratios are formed in log space so
/// scales far below the double range are usable.
inline IndexEstimate estimate_indices(const WeightSpec& w, int h_levels = 160, int x_points = 16) {
  require(h_levels >= 4 && x_points >= 8, ErrorCode::invalid_params, "need h_levels >= 4 and x_points >= 8");
  const double lnl = std::log(w.length), ln4 = std::log(4.0), ln16 = std::log(16.0);
  IndexEstimate est;
  est.h_min = w.length * std::pow(4.0, -(h_levels + 1));
  for (int k = x_points; k >= 1; --k) est.x_grid.push_back(std::exp(-ln16 * k / x_points));
  for (int k = 1; k <= x_points; ++k) est.x_grid.push_back(std::exp(ln16 * k / x_points));
  if (w.kind == WeightKind::custom_table)
    require(w.table_x.front() <= est.h_min * est.x_grid.front() * (1 + 1e-12), ErrorCode::table_too_coarse,
            "weight table has no samples below the smallest scale used");
  const int tail = std::max(1, h_levels / 4);
  est.m_lower = -std::numeric_limits<double>::infinity();
  est.M_upper = -std::numeric_limits<double>::infinity();
  for (double x : est.x_grid) {
    const double lx = std::log(x);
    double log_ratio = -std::numeric_limits<double>::infinity();
    for (int j = h_levels + 2 - tail; j <= h_levels + 1; ++j) {
      const double lh = lnl - j * ln4;
      log_ratio = std::max(log_ratio, w.log_eval_ln(lh + lx) - w.log_eval_ln(lh));
    }
    double& target = x < 1 ? est.m_lower : est.M_upper;
    target = std::max(target, log_ratio / lx);
  }
  return est;
}

enum class VClass { pp, mm, pm, mp };

inline std::optional<VClass> parse_v_class(const std::string& name) {
  if (name == "V++" || name == "pp") return VClass::pp;
  if (name == "V--" || name == "mm") return VClass::mm;
  if (name == "V+-" || name == "pm") return VClass::pm;
  if (name == "V-+" || name == "mp") return VClass::mp;
  return std::nullopt;
}

inline std::string to_string(VClass c) {
  switch (c) {
    case VClass::pp: return "V++";
    case VClass::mm: return "V--";
    case VClass::pm: return "V+-";
    case VClass::mp: return "V-+";
  }
  return "?";
}

/// Right-hand side phi(x_a)/x_b of the V-class inequality for y < x.
inline double v_class_bound(VClass c, double phi_x, double phi_y, double x, double y) {
  switch (c) {
    case VClass::pp: return phi_x / x;
    case VClass::mm: return phi_y / y;
    case VClass::pm: return phi_x / y;
    case VClass::mp: return phi_y / x;
  }
  return 1.0;
}

/// Two sups over a pair set and one twice its size agree within 5%.
inline bool stable_pair(double coarse, double fine) {
  if (!std::isfinite(coarse) || !std::isfinite(fine)) return false;
  const double scale = std::max(std::abs(coarse), std::abs(fine));
  if (scale < 1e-12) return true;
  return std::abs(fine - coarse) < 0.05 * scale;
}

/// Log grid at 8 points per decade, sized so that all pairs among K points
/// number about `samples`; doubling the samples pushes the grid toward 0.
inline std::vector<double> pair_grid(double length, long long samples) {
  const auto k = static_cast<std::size_t>(std::ceil(std::sqrt(2.0 * static_cast<double>(samples)))) + 1;
  std::vector<double> xs(k);
  for (std::size_t i = 0; i < k; ++i) xs[i] = length * std::pow(10.0, -static_cast<double>(i) / 8.0);
  return xs;
}

struct PairMax {
  double value = 0.0;
  double x = 0.0;
  double y = 0.0;
};

/// Max over pairs 0 < y < x <= length of q(x, y), where `diag(x)` handles
/// |x - y| below 1e-6 * length (returns NaN to skip).
template <class Q, class Diag>
PairMax pair_supremum(double length, long long samples, Q&& q, Diag&& diag) {
  const std::vector<double> xs = pair_grid(length, samples);
  std::vector<PairMax> best(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    PairMax b;
    const double x = xs[i];
    auto consider = [&](double v, double y) {
      if (!std::isnan(v) && v > b.value) b = {v, x, y};
    };
    for (std::size_t j = i + 1; j < xs.size(); ++j) consider(q(x, xs[j]), xs[j]);
    for (double delta : {0.1, 0.01, 0.001}) {
      const double y = x * (1 - delta);
      consider(x - y >= 1e-6 * length ? q(x, y) : diag(x), y);
    }
    best[i] = b;
  });
  PairMax out;
  for (const PairMax& b : best)
    if (b.value > out.value || std::isinf(b.value)) out = b;
  return out;
}

struct VClassResult {
  bool verdict = false;
  double min_constant = 0.0;
  double refined_constant = 0.0;
};

inline VClassResult check_v_class(const WeightSpec& w, VClass c, long long samples = 2000) {
  require(samples >= 1000, ErrorCode::invalid_params, "need at least 1000 sample pairs");
  auto q = [&](double x, double y) {
    const double px = w.eval(x), py = w.eval(y);
    return std::abs(px - py) / (x - y) / v_class_bound(c, px, py, x, y);
  };
  // x ~ y: |phi'(x)| / (phi(x)/x) for every class
  auto diag = [&](double x) {
    const auto d = w.log_derivative(x);
    return d ? std::abs(*d) : std::nan("");
  };
  VClassResult r;
  r.min_constant = pair_supremum(w.length, samples, q, diag).value;
  r.refined_constant = pair_supremum(w.length, 2 * samples, q, diag).value;
  r.verdict = stable_pair(r.min_constant, r.refined_constant);
  return r;
}

/// Almost-increasing check: sup over y < x of phi(y)/phi(x), stable under
/// doubling of the pair set.
inline VClassResult check_almost_increasing(const WeightSpec& w, long long samples = 2000) {
  auto q = [&](double x, double y) { return w.eval(y) / w.eval(x); };
  auto diag = [](double) { return 1.0; };
  VClassResult r;
  r.min_constant = pair_supremum(w.length, samples, q, diag).value;
  r.refined_constant = pair_supremum(w.length, 2 * samples, q, diag).value;
  r.verdict = stable_pair(r.min_constant, r.refined_constant);
  return r;
}

struct ZygmundResult {
  bool in_Z_beta = false;
  bool in_Z_gamma = false;
  double c_beta = 0.0;
  double c_gamma = 0.0;
  bool lower_divergent = false;
  GrowthFit beta_fit;
  GrowthFit gamma_fit;
};

namespace detail {

/// Integral over u in [0, panels*ln 4] of exp(g(u)) with 16-point Gauss
/// panels.
template <class G>
double log_panel_integral(G&& g, int panels) {
  const double width = std::log(4.0);
  double sum = 0;
  for (int k = 0; k < panels; ++k)
    sum += gauss_legendre([&](double u) { return std::exp(g(u)); }, k * width, (k + 1) * width);
  return sum;
}

}  // namespace detail

/// Required constants c(h) at h = length * 4^-j, j = 2..h_levels+1:
///   lower: (h^beta / phi(h)) * int_0^h phi(x) x^(-1-beta) dx
///   upper: (h^gamma / phi(h)) * int_h^length phi(x) x^(-1-gamma) dx
/// both written in u = |ln(x/h)|. A class holds if c(h) stays bounded over
/// the deepest quarter of scales (growth exponent in h not below -0.02).
inline ZygmundResult check_zygmund(const WeightSpec& w, double beta, double gamma, int h_levels = 160) {
  require(h_levels >= 4, ErrorCode::invalid_params, "need h_levels >= 4");
  const double lnl = std::log(w.length), ln4 = std::log(4.0);
  const int tail = std::max(3, h_levels / 4);
  std::vector<double> hs, lower, upper;
  ZygmundResult r;
  for (int j = 2; j <= h_levels + 1; ++j) {
    const double lh = lnl - j * ln4;
    const double base = w.log_eval_ln(lh);
    if (j > h_levels + 1 - tail) {
      auto g_lower = [&](double u) { return w.log_eval_ln(lh - u) - base + beta * u; };
      const double a = detail::log_panel_integral(g_lower, 200);
      const double b = detail::log_panel_integral(g_lower, 400);
      if (!std::isfinite(b) || std::abs(b - a) > 1e-3 * std::abs(b)) r.lower_divergent = true;
      auto g_upper = [&](double u) { return w.log_eval_ln(lh + u) - base - gamma * u; };
      hs.push_back(w.length * std::pow(4.0, -j));
      lower.push_back(b);
      upper.push_back(detail::log_panel_integral(g_upper, j));
    }
  }
  r.c_gamma = *std::max_element(upper.begin(), upper.end());
  r.gamma_fit = fit_growth(hs, upper);
  r.in_Z_gamma = std::isfinite(r.c_gamma) && r.gamma_fit.exponent >= -0.02;
  if (r.lower_divergent) {
    r.c_beta = std::numeric_limits<double>::infinity();
    r.in_Z_beta = false;
  } else {
    r.c_beta = *std::max_element(lower.begin(), lower.end());
    r.beta_fit = fit_growth(hs, lower);
    r.in_Z_beta = r.beta_fit.exponent >= -0.02;
  }
  return r;
}

struct AdmissibleResult {
  bool verdict = false;
  double margin = 0.0;
  IndexEstimate indices;
};

/// (lambda-1)/p < m(phi) <= M(phi) < lambda/p + 1/p'.
inline AdmissibleResult check_admissible(const WeightSpec& w, double p, double lambda, int h_levels = 160,
                                         int x_points = 16) {
  require(p > 1 && std::isfinite(p), ErrorCode::invalid_params, "need 1 < p < infinity");
  require(lambda >= 0 && lambda < 1, ErrorCode::invalid_params, "need 0 <= lambda < 1");
  AdmissibleResult r;
  r.indices = estimate_indices(w, h_levels, x_points);
  const double lo = (lambda - 1) / p, hi = lambda / p + 1 - 1 / p;
  r.margin = std::min(r.indices.m_lower - lo, hi - r.indices.M_upper);
  r.verdict = r.margin > 1e-9;
  return r;
}

}  // namespace morrey
