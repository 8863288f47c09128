#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "morrey/morrey_norm.hpp"
#include "morrey/operators.hpp"

using namespace morrey;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::precondition;
}

double max_abs_diff(const SampledFunction& a, const SampledFunction& b) {
  double d = 0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a.values[k] - b.values[k]));
  return d;
}

}  // namespace

TEST(Hardy, PowerOnConstant) {
  // H_b 1 = x^(b-1) * x^(1-b)/(1-b) = 1/(1-b)
  const Grid1D g = make_grid(0, 1, 256);
  const SampledFunction out = hardy_apply(g, HardyParams::power(0.5, HardyDirection::lower), sample(g, [](double) { return 1.0; }));
  for (const cplx& v : out.values) EXPECT_NEAR(v.real(), 2.0, 1e-12);
}

TEST(Hardy, UpperOnConstant) {
  // x * int_x^1 t^-2 dt = 1 - x
  const Grid1D g = make_grid(0, 1, 256);
  const SampledFunction out = hardy_apply(g, HardyParams::power(1.0, HardyDirection::upper), sample(g, [](double) { return 1.0; }));
  for (std::size_t k = 0; k < g.n; ++k) EXPECT_NEAR(out.values[k].real(), 1 - g.nodes[k], 1e-12);
}

TEST(Hardy, SmoothInputConverges) {
  // H_0 x = x/2; freezing f on the node's own half cell adds h^2/(8x)
  const Grid1D g = make_grid(0, 1, 1024);
  const double h = 1.0 / 1024;
  const SampledFunction out = hardy_apply(g, HardyParams::power(0.0, HardyDirection::lower), sample(g, [](double x) { return x; }));
  for (std::size_t k = 0; k < g.n; ++k) {
    const double x = g.nodes[k];
    EXPECT_NEAR(out.values[k].real(), x / 2 + h * h / (8 * x), 1e-12);
  }
}

TEST(Hardy, WeightedPowerMatchesPowerCase) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  const Grid1D g = make_grid(0, 1, 128);
  SampledFunction f;
  for (std::size_t k = 0; k < g.n; ++k) f.values.emplace_back(u(rng), u(rng));
  for (double beta : {-0.4, 0.3, 0.9})
    for (auto d : {HardyDirection::lower, HardyDirection::upper}) {
      const SampledFunction a = hardy_apply(g, HardyParams::power(beta, d), f);
      const SampledFunction b = hardy_apply(g, HardyParams::weighted(WeightSpec::power(beta), d), f);
      EXPECT_EQ(max_abs_diff(a, b), 0.0);
    }
}

TEST(Hardy, GeneralWeightQuadrature) {
  // phi = ln(e/x): int_0^x 1/ln(e/t) dt has no elementary form, compare with
  // a fine midpoint sum in the log variable
  const WeightSpec w = WeightSpec::power_log(0, 1, std::exp(1.0), 1.0);
  const Grid1D g = make_grid(0, 1, 64);
  const SampledFunction out = hardy_apply(g, HardyParams::weighted(w, HardyDirection::lower), sample(g, [](double) { return 1.0; }));
  const double x = g.nodes[40];
  double ref = 0;
  const int m = 400000;
  const double umin = -60;
  for (int i = 0; i < m; ++i) {
    const double u = umin + (std::log(x) - umin) * (i + 0.5) / m;
    ref += std::exp(u) / (1 - u) * (std::log(x) - umin) / m;
  }
  EXPECT_NEAR(out.values[40].real(), w.eval(x) / x * ref, 1e-6);
}

TEST(Hardy, NonIntegrableInput) {
  const Grid1D g = make_grid(0, 1, 16);
  EXPECT_EQ(code_of([&] {
              hardy_apply(g, HardyParams::power(1.0, HardyDirection::lower), sample(g, [](double) { return 1.0; }));
            }),
            ErrorCode::non_integrable_input);
  EXPECT_EQ(code_of([&] {
              hardy_apply(make_grid(0.5, 1, 8), HardyParams::power(0.2, HardyDirection::lower),
                          sample(make_grid(0.5, 1, 8), [](double) { return 1.0; }));
            }),
            ErrorCode::invalid_range);
  HardyParams both = HardyParams::power(0.2, HardyDirection::lower);
  both.weight = WeightSpec::power(0.2);
  EXPECT_EQ(code_of([&] { both.validate(); }), ErrorCode::invalid_params);
}

TEST(Hardy, PowerBounds) {
  EXPECT_NEAR(*hardy_power_bound(2, 0.5, 0.25, HardyDirection::lower), 2.0, 1e-14);
  EXPECT_NEAR(*hardy_power_bound(2, 0.5, 0.25, HardyDirection::upper), 2.0, 1e-14);
  EXPECT_FALSE(hardy_power_bound(2, 0.5, 0.75, HardyDirection::lower));
  EXPECT_FALSE(hardy_power_bound(2, 0.5, -0.25, HardyDirection::upper));
}

TEST(Homogeneous, IndicatorKernelIsAveraging) {
  const Grid1D kg = make_grid(0, 1, 400);
  const SampledFunction a = sample(kg, [](double) { return 1.0; });
  const Grid1D g = make_grid(0, 1, 200);
  const SampledFunction out = homogeneous_apply(kg, a, g, sample(g, [](double x) { return x * x; }));
  for (std::size_t k = 0; k + 1 < g.n; ++k) EXPECT_NEAR(out.values[k].real(), g.nodes[k] * g.nodes[k] / 3, 1e-3);
  EXPECT_NEAR(homogeneous_bound_constant(kg, a, 2, 0.5), 1 / (1 - 0.25), 1e-12);
}

TEST(Homogeneous, LinearAndBelowBound) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  const Grid1D kg = make_grid(0, 2, 200);
  const SampledFunction a = sample(kg, [](double t) { return std::exp(-t); });
  const Grid1D g = make_grid(0, 1, 256);
  SampledFunction f, h, sum;
  for (std::size_t k = 0; k < g.n; ++k) {
    f.values.emplace_back(u(rng), 0);
    h.values.emplace_back(u(rng), 0);
    sum.values.push_back(2.0 * f.values[k] - h.values[k]);
  }
  const SampledFunction af = homogeneous_apply(kg, a, g, f), ah = homogeneous_apply(kg, a, g, h);
  const SampledFunction as = homogeneous_apply(kg, a, g, sum);
  for (std::size_t k = 0; k < g.n; ++k) EXPECT_NEAR(std::abs(as.values[k] - (2.0 * af.values[k] - ah.values[k])), 0, 1e-12);
  const MorreyParams mp{2, 0.5};
  EXPECT_LE(morrey_norm(g, af, mp), 1.05 * homogeneous_bound_constant(kg, a, 2, 0.5) * morrey_norm(g, f, mp));
}

TEST(Hilbert, ConstantHasLogProfile) {
  auto exact = [](double x) { return std::log((1 - x) / x) / std::numbers::pi; };
  const Grid1D g = make_grid(0, 1, 4096);
  const EdgeValues h = hilbert_apply(g, sample(g, [](double) { return 1.0; }));
  ASSERT_EQ(h.size(), g.n - 1);
  EXPECT_EQ(h.points[1023].real(), 0.25);
  EXPECT_NEAR(h.values[1023].real(), std::log(3.0) / std::numbers::pi, 1e-3);
  const EdgeValues r = hilbert_richardson([](double) { return cplx(1.0); }, 0.0, 1.0, 4096);
  double worst = 0;
  for (std::size_t i = 0; i < r.size(); ++i)
    worst = std::max(worst, std::abs(r.values[i].real() - exact(r.points[i].real())));
  EXPECT_LT(worst, 1e-3);
}

TEST(Hilbert, RichardsonOnSmoothInput) {
  // (1/pi) pv int_0^1 t dt/(t-x) = (1 + x ln((1-x)/x))/pi
  auto exact = [](double x) { return (1 + x * std::log((1 - x) / x)) / std::numbers::pi; };
  const EdgeValues plain = hilbert_apply(make_grid(0, 1, 256), sample(make_grid(0, 1, 256), [](double t) { return t; }));
  const EdgeValues rich = hilbert_richardson([](double t) { return cplx(t); }, 0.0, 1.0, 256);
  double e_plain = 0, e_rich = 0;
  for (std::size_t i = 0; i < rich.size(); ++i) {
    const double x = rich.points[i].real();
    if (x < 0.1 || x > 0.9) continue;
    e_plain = std::max(e_plain, std::abs(plain.values[i].real() - exact(x)));
    e_rich = std::max(e_rich, std::abs(rich.values[i].real() - exact(x)));
  }
  EXPECT_LT(e_rich, e_plain);
  EXPECT_LT(e_rich, 1e-5);
}

TEST(Hilbert, PointEvaluation) {
  const Grid1D g = make_grid(0, 1, 64);
  const SampledFunction f = sample(g, [](double) { return 1.0; });
  EXPECT_EQ(code_of([&] { hilbert_at(g, f, 0.0); }), ErrorCode::evaluation_at_endpoint);
  EXPECT_EQ(code_of([&] { hilbert_at(g, f, 1.0); }), ErrorCode::evaluation_at_endpoint);
  EXPECT_NEAR(std::abs(hilbert_at(g, f, 0.5)), 0.0, 1e-12);
}

TEST(WeightedSingular, TrivialWeightIsHilbert) {
  const Grid1D g = make_grid(0, 1, 128);
  const SampledFunction f = sample(g, [](double x) { return std::cos(3 * x); });
  const EdgeValues h = hilbert_apply(g, f);
  const EdgeValues w = weighted_singular_apply(g, WeightSpec::power(0.0, 2.0), 0.0, f);
  ASSERT_EQ(h.size(), w.size());
  for (std::size_t i = 0; i < h.size(); ++i) EXPECT_NEAR(std::abs(h.values[i] - w.values[i]), 0, 1e-13);
  const EdgeValues k = difference_operator(g, NodeWeight::single(WeightSpec::power(0.0, 2.0), 0.0), f);
  for (const cplx& v : k.values) EXPECT_NEAR(std::abs(v), 0, 1e-13);
}

TEST(WeightedSingular, SkipsNodeEdges) {
  const Grid1D g = make_grid(0, 1, 8);
  const NodeWeight rho = NodeWeight::single(WeightSpec::power(0.3, 2.0), 0.5);
  const EdgeValues w = weighted_singular_apply(g, rho, sample(g, [](double) { return 1.0; }));
  EXPECT_EQ(w.size(), g.n - 2);
  for (const cplx& x : w.points) EXPECT_NE(x.real(), 0.5);
}

TEST(Cauchy, CircleHarmonics) {
  const DiscretizedCurve c = generate_curve("circle", {}, 1024);
  const cplx I(0, 1);
  for (int m = -8; m <= 8; ++m) {
    SampledFunction f;
    for (const cplx& t : c.points) f.values.push_back(std::pow(t, m));
    const EdgeValues s = cauchy_apply(c, f);
    ASSERT_EQ(s.size(), c.size());
    const cplx factor = m >= 0 ? I : -I;
    double err = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
      err = std::max(err, std::abs(s.values[i] - factor * std::pow(s.points[i], m)));
    EXPECT_LT(err, 2e-2) << m;
  }
}

TEST(Cauchy, SquareIsMinusIdentityOnCircle) {
  const DiscretizedCurve c = generate_curve("circle", {}, 512);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  SampledFunction f;
  for (std::size_t k = 0; k < c.size(); ++k) f.values.push_back(0.0);
  for (int m = -4; m <= 4; ++m) {
    const cplx coef(nd(rng), nd(rng));
    for (std::size_t k = 0; k < c.size(); ++k) f.values[k] += coef * std::pow(c.points[k], m);
  }
  const SampledFunction ss = cauchy_at_nodes(c, cauchy_at_nodes(c, f));
  double err = 0, scale = 0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    err = std::max(err, std::abs(ss.values[k] + f.values[k]));
    scale = std::max(scale, std::abs(f.values[k]));
  }
  EXPECT_LT(err, 0.05 * scale);
}

TEST(Cauchy, SegmentMatchesHilbert) {
  const Grid1D g = make_grid(0, 1, 200);
  const SampledFunction f = sample(g, [](double x) { return std::exp(x); });
  const EdgeValues h = hilbert_apply(g, f);
  const EdgeValues s = cauchy_apply(as_curve(g), f);
  ASSERT_EQ(h.size(), s.size());
  for (std::size_t i = 0; i < h.size(); ++i) EXPECT_NEAR(std::abs(h.values[i] - s.values[i]), 0, 1e-12);
}

TEST(Cauchy, NodeValuesAndDegenerateCurve) {
  const DiscretizedCurve seg = generate_curve("segment", {}, 16);
  const SampledFunction f = sample(make_grid(0, 1, 16), [](double) { return 1.0; });
  EXPECT_EQ(cauchy_at_nodes(seg, f).size(), 16u);
  DiscretizedCurve bad = seg;
  bad.edge_points[3] = bad.edge_points[4];
  EXPECT_EQ(code_of([&] { cauchy_apply(bad, f); }), ErrorCode::degenerate_curve);
}

TEST(Maximal, Properties) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const std::string kind : {"segment", "circle", "cusp"}) {
    const DiscretizedCurve c = generate_curve(kind, {}, 128);
    const auto radii = maximal_radii(c);
    SampledFunction f, one;
    for (std::size_t k = 0; k < c.size(); ++k) {
      f.values.emplace_back(u(rng), u(rng));
      one.values.emplace_back(3.0, 0);
    }
    const SampledFunction mf = maximal_apply(c, f, radii), msf = sharp_maximal_apply(c, f, radii);
    for (std::size_t k = 0; k < c.size(); ++k) EXPECT_LE(msf.values[k].real(), 2 * mf.values[k].real() + 1e-12) << kind;
    const SampledFunction mo = maximal_apply(c, one, radii), mso = sharp_maximal_apply(c, one, radii);
    for (std::size_t k = 0; k < c.size(); ++k) {
      EXPECT_NEAR(mo.values[k].real(), 3.0, 1e-9);
      EXPECT_NEAR(mso.values[k].real(), 0.0, 1e-12);
    }
  }
  EXPECT_EQ(code_of([] { maximal_radii(generate_curve("circle", {}, 16), 4); }), ErrorCode::invalid_params);
  EXPECT_EQ(code_of([] {
              const DiscretizedCurve c = generate_curve("circle", {}, 16);
              SampledFunction f;
              f.values.assign(16, 1.0);
              maximal_apply(c, f, {});
            }),
            ErrorCode::empty_radii);
}

TEST(Maximal, HalfCircleIndicator) {
  const DiscretizedCurve c = generate_curve("circle", {}, 256);
  const auto radii = maximal_radii(c);
  SampledFunction f;
  for (const cplx& t : c.points) f.values.emplace_back(t.imag() > 0 ? 1.0 : 0.0, 0);
  const SampledFunction mf = maximal_apply(c, f, radii), msf = sharp_maximal_apply(c, f, radii);
  for (std::size_t k = 0; k < c.size(); ++k) {
    EXPECT_GE(mf.values[k].real(), 0.5 - 1e-9);
    EXPECT_LE(msf.values[k].real(), 1.0 + 1e-12);
    if (c.points[k].imag() > 0.2) {
      EXPECT_NEAR(mf.values[k].real(), 1.0, 1e-12);
    }
  }
  // nodes next to the jump at t = 1
  EXPECT_GE(msf.values[0].real(), 0.4);
  EXPECT_GE(msf.values[c.size() - 1].real(), 0.4);
}

TEST(Maximal, IndicatorDecayEstimate) {
  // M chi_{ball(t, r)}(y) <= C r / (|y - t| + r), C stable under refinement
  auto worst = [](long long n) {
    const DiscretizedCurve c = generate_curve("lipschitz_graph", {}, n);
    const std::size_t t = c.size() / 3;
    const double r = 0.05;
    SampledFunction chi;
    for (const cplx& y : c.points) chi.values.emplace_back(std::abs(y - c.points[t]) < r ? 1.0 : 0.0, 0);
    const SampledFunction m = maximal_apply(c, chi, maximal_radii(c));
    double C = 0;
    for (std::size_t k = 0; k < c.size(); ++k)
      C = std::max(C, m.values[k].real() * (std::abs(c.points[k] - c.points[t]) + r) / r);
    return C;
  };
  const double c1 = worst(256), c2 = worst(512);
  EXPECT_LT(c1, 4.0);
  EXPECT_LT(std::abs(c2 / c1 - 1), 0.1);
}

TEST(Maximal, BoundedOnMorreySpace) {
  const DiscretizedCurve c = generate_curve("lipschitz_graph", {}, 256);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0, 1);
  SampledFunction f;
  for (std::size_t k = 0; k < c.size(); ++k) f.values.emplace_back(u(rng) / std::sqrt(c.arc_nodes[k] + 0.01), 0);
  const MorreyParams mp{2, 0.3};
  const double ratio = morrey_norm(c, maximal_apply(c, f, maximal_radii(c)), mp) / morrey_norm(c, f, mp);
  EXPECT_GE(ratio, 1.0 - 1e-12);
  EXPECT_LT(ratio, 10.0);
}

TEST(KernelBound, PowerWeights) {
  for (double a : {0.5, 1.0, 1.5}) {
    const KernelBoundReport r = kernel_domination_report(WeightSpec::power(a), VClass::pp);
    EXPECT_TRUE(r.stable) << a;
    EXPECT_TRUE(std::isfinite(r.min_constant));
    EXPECT_LT(r.min_constant, 2.0) << a;
  }
  const KernelBoundReport r = kernel_domination_report(WeightSpec::power(-0.5), VClass::mp);
  EXPECT_TRUE(r.stable);
  EXPECT_GT(r.worst_pair.first, 0.0);
}

TEST(KernelBound, PointwiseDomination) {
  // |K f(x)| <= C (H f(x) + upper H f(x)) for f >= 0, phi = x^a in V++
  const double a = 0.5;
  const WeightSpec w = WeightSpec::power(a, 1.0);
  const double C = kernel_domination_report(w, VClass::pp).refined_constant;
  const Grid1D g = make_grid(0, 1, 512);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  SampledFunction f;
  for (std::size_t k = 0; k < g.n; ++k) f.values.emplace_back(u(rng), 0);
  const EdgeValues k = difference_operator(g, NodeWeight::single(w, 0.0), f);
  // Hardy values at the two nodes around each edge
  const SampledFunction hl = hardy_apply(g, HardyParams::weighted(w, HardyDirection::lower), f);
  const SampledFunction hu = hardy_apply(g, HardyParams::power(0.0, HardyDirection::upper), f);
  int violations = 0;
  for (std::size_t i = 8; i + 8 < k.size(); ++i) {
    const std::size_t e = k.edges[i];
    const double dom = C * (std::max(hl.values[e].real(), hl.values[e - 1].real()) +
                            std::max(hu.values[e - 1].real(), hu.values[e].real()));
    if (std::abs(k.values[i]) > 1.1 * dom + 1e-9) ++violations;
  }
  EXPECT_EQ(violations, 0);
}

TEST(KernelBound, ClassMismatch) {
  EXPECT_EQ(code_of([] { kernel_domination_report(WeightSpec::power(-0.5), VClass::pp); }), ErrorCode::class_mismatch);
  EXPECT_EQ(code_of([] { kernel_domination_report(WeightSpec::power(0.5), VClass::mm); }), ErrorCode::invalid_params);
}
