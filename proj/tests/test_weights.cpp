#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "morrey/weights.hpp"

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

}  // namespace

TEST(Eval, ClosedForms) {
  EXPECT_DOUBLE_EQ(WeightSpec::power(0.5).eval(0.25), 0.5);
  EXPECT_DOUBLE_EQ(WeightSpec::power_log(0, 1, std::exp(1.0), 2.0).eval(1.0), 1.0);
  EXPECT_DOUBLE_EQ(WeightSpec::power(-0.25, 16).eval(16), 0.5);
}

TEST(Eval, OutOfDomain) {
  const WeightSpec w = WeightSpec::power(0.5, 1.0);
  EXPECT_EQ(code_of([&] { w.eval(0.0); }), ErrorCode::out_of_domain);
  EXPECT_EQ(code_of([&] { w.eval(-1.0); }), ErrorCode::out_of_domain);
  EXPECT_EQ(code_of([&] { w.eval(1.5); }), ErrorCode::out_of_domain);
}

TEST(Eval, PowerLogNeedsScaleAboveLength) {
  EXPECT_EQ(code_of([] { WeightSpec::power_log(0, 1, 1.0, 1.0); }), ErrorCode::invalid_params);
}

TEST(Eval, TableInterpolatesPowerLawsExactly) {
  std::vector<double> xs, vs;
  for (int i = 0; i <= 20; ++i) {
    xs.push_back(std::pow(2.0, -i * 0.5));
    vs.push_back(std::pow(xs.back(), 0.7));
  }
  std::reverse(xs.begin(), xs.end());
  std::reverse(vs.begin(), vs.end());
  const WeightSpec w = WeightSpec::table(xs, vs, 1.0);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-12, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const double x = std::exp2(u(rng));
    EXPECT_NEAR(w.eval(x), std::pow(x, 0.7), 1e-12 * std::pow(x, 0.7));
  }
}

TEST(Eval, TableParsing) {
  const WeightSpec w = parse_weight_table("# x value\n0.25 0.5\n1 1\n");
  EXPECT_DOUBLE_EQ(w.length, 1.0);
  EXPECT_NEAR(w.eval(0.5), std::sqrt(0.5), 1e-14);
  EXPECT_EQ(code_of([] { parse_weight_table("1 1\n0.5 2\n"); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { parse_weight_table("0.5 -1\n1 2\n"); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { parse_weight_table("0.5\n"); }), ErrorCode::parse_error);
}

TEST(NodeWeight, ProductOfDistances) {
  const NodeWeight rho({WeightSpec::power(0.5, 2.0), WeightSpec::power(-0.5, 2.0)}, {cplx(0, 0), cplx(1, 0)});
  EXPECT_NEAR(rho(0.25), std::sqrt(0.25) / std::sqrt(0.75), 1e-14);
  EXPECT_EQ(code_of([&] { rho(1.0); }), ErrorCode::weight_singular_at_node);
  EXPECT_EQ(code_of([] { NodeWeight({WeightSpec::power(1)}, {}); }), ErrorCode::invalid_params);
}

TEST(Indices, Power) {
  for (double a : {0.5, -0.2, 1.3}) {
    const IndexEstimate e = estimate_indices(WeightSpec::power(a), 160, 16);
    EXPECT_NEAR(e.m_lower, a, 1e-3);
    EXPECT_NEAR(e.M_upper, a, 1e-3);
  }
}

TEST(Indices, PowerLog) {
  const IndexEstimate e = estimate_indices(WeightSpec::power_log(0.3, 2, 2 * std::exp(1.0), 1.0), 160, 16);
  EXPECT_NEAR(e.m_lower, 0.3, 2e-2);
  EXPECT_NEAR(e.M_upper, 0.3, 2e-2);
  EXPECT_LE(e.m_lower, e.M_upper + 1e-6);
}

TEST(Indices, ShiftIdentity) {
  const std::vector<WeightSpec> family{WeightSpec::power(0.4), WeightSpec::power_log(0.3, 2, 3.0),
                                       WeightSpec::power_log(-0.1, -1.5, 5.0), WeightSpec::power_log(0, 1, 3.0)};
  for (const WeightSpec& w : family) {
    for (double lambda : {-0.5, 0.25, 0.9}) {
      const IndexEstimate a = estimate_indices(w), b = estimate_indices(w.times_power(lambda));
      EXPECT_NEAR(b.m_lower, a.m_lower + lambda, 2e-2);
      EXPECT_NEAR(b.M_upper, a.M_upper + lambda, 2e-2);
    }
  }
}

TEST(Indices, LowerNeverAboveUpperOnRandomWeights) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> a(-2, 2), b(-3, 3), A(1.1, 20);
  for (int trial = 0; trial < 100; ++trial) {
    const WeightSpec w = WeightSpec::power_log(a(rng), b(rng), A(rng), 1.0);
    const IndexEstimate e = estimate_indices(w, 40, 8);
    EXPECT_LE(e.m_lower, e.M_upper + 1e-6) << w.alpha << " " << w.beta << " " << w.A;
  }
}

TEST(Indices, TableTooCoarse) {
  const WeightSpec w = WeightSpec::table({0.01, 0.1, 1.0}, {0.1, 0.3, 1.0}, 1.0);
  EXPECT_EQ(code_of([&] { estimate_indices(w, 8, 8); }), ErrorCode::table_too_coarse);
  std::vector<double> xs, vs;
  for (int i = 30; i >= 0; --i) {
    xs.push_back(std::pow(4.0, -i));
    vs.push_back(std::pow(xs.back(), 0.6));
  }
  const IndexEstimate e = estimate_indices(WeightSpec::table(xs, vs, 1.0), 8, 8);
  EXPECT_NEAR(e.m_lower, 0.6, 1e-9);
  EXPECT_NEAR(e.M_upper, 0.6, 1e-9);
}

TEST(VClass, KnownExamples) {
  EXPECT_TRUE(check_v_class(WeightSpec::power(1.5), VClass::pp, 2000).verdict);
  EXPECT_FALSE(check_v_class(WeightSpec::power(1.5), VClass::mp, 2000).verdict);
  EXPECT_TRUE(check_v_class(WeightSpec::power_log(0, 1, std::exp(1.0)), VClass::mp, 2000).verdict);
  EXPECT_TRUE(check_v_class(WeightSpec::power(-0.5), VClass::mp, 2000).verdict);
  EXPECT_FALSE(check_v_class(WeightSpec::power(-0.5), VClass::pp, 2000).verdict);
}

TEST(VClass, PowerCriteria) {
  for (double a : {-1.0, -0.5, 0.0, 0.5, 1.0, 1.5}) {
    const WeightSpec w = WeightSpec::power(a);
    EXPECT_EQ(check_v_class(w, VClass::pp).verdict, a >= 0) << a;
    EXPECT_EQ(check_v_class(w, VClass::mm).verdict, a <= 1) << a;
    EXPECT_EQ(check_v_class(w, VClass::pm).verdict, a >= -1) << a;
    EXPECT_EQ(check_v_class(w, VClass::mp).verdict, a <= 0) << a;
  }
}

TEST(VClass, ConstantMatchesClosedFormForPowers) {
  // with t = y/x the V++ quotient of x^a is (1 - t^a)/(1 - t), whose sup over
  // t in (0, 1) is max(1, a)
  for (double a : {0.5, 1.0, 1.5})
    EXPECT_NEAR(check_v_class(WeightSpec::power(a), VClass::pp).min_constant, std::max(1.0, a), 1e-3);
}

TEST(AlmostIncreasing, Powers) {
  EXPECT_TRUE(check_almost_increasing(WeightSpec::power(0.5)).verdict);
  EXPECT_FALSE(check_almost_increasing(WeightSpec::power(-0.5)).verdict);
}

TEST(Zygmund, KnownExamples) {
  const WeightSpec w = WeightSpec::power(0.5);
  EXPECT_TRUE(check_zygmund(w, 0.25, 0.75).in_Z_gamma);
  EXPECT_FALSE(check_zygmund(w, 0.25, 0.4).in_Z_gamma);
  EXPECT_TRUE(check_zygmund(w, 0.25, 0.75).in_Z_beta);
}

TEST(Zygmund, ConstantsMatchClosedForm) {
  // int_0^h x^(a-1-b) dx * h^b / h^a = 1/(a-b); upper tends to 1/(g-a)
  const ZygmundResult r = check_zygmund(WeightSpec::power(0.5), 0.25, 0.75);
  EXPECT_NEAR(r.c_beta, 4.0, 1e-9);
  EXPECT_NEAR(r.c_gamma, 4.0, 1e-6);
}

TEST(Zygmund, DivergentLowerIntegralIsNotMember) {
  const ZygmundResult r = check_zygmund(WeightSpec::power(0.2), 0.3, 1.0);
  EXPECT_FALSE(r.in_Z_beta);
  EXPECT_TRUE(std::isinf(r.c_beta));
}

TEST(Zygmund, AgreesWithIndexCriteria) {
  const std::vector<WeightSpec> family{WeightSpec::power(0.5), WeightSpec::power(-0.3),
                                       WeightSpec::power_log(0.3, 2, 3.0), WeightSpec::power_log(0.2, -1, 4.0),
                                       WeightSpec::power_log(0, 1, 3.0)};
  for (const WeightSpec& w : family) {
    const IndexEstimate e = estimate_indices(w);
    for (double shift : {-0.3, -0.05, 0.05, 0.3}) {
      const double beta = e.m_lower + shift, gamma = e.M_upper + shift;
      const ZygmundResult r = check_zygmund(w, beta, gamma);
      EXPECT_EQ(r.in_Z_beta, e.m_lower > beta) << w.alpha << " beta=" << beta;
      EXPECT_EQ(r.in_Z_gamma, e.M_upper < gamma) << w.alpha << " gamma=" << gamma;
    }
  }
}

TEST(Admissible, Examples) {
  const AdmissibleResult ok = check_admissible(WeightSpec::power(0.5), 2, 0.5);
  EXPECT_TRUE(ok.verdict);
  EXPECT_NEAR(ok.margin, 0.25, 1e-9);
  EXPECT_FALSE(check_admissible(WeightSpec::power(0.8), 2, 0.5).verdict);
  EXPECT_FALSE(check_admissible(WeightSpec::power(-0.25), 2, 0.5).verdict);
}

TEST(Admissible, RandomPowersMatchWindow) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> a(-1.5, 1.5), p(1.1, 6), l(0, 0.99);
  for (int trial = 0; trial < 100; ++trial) {
    const double alpha = a(rng), pp = p(rng), lambda = l(rng);
    const double lo = (lambda - 1) / pp, hi = lambda / pp + 1 - 1 / pp;
    if (std::abs(alpha - lo) < 1e-6 || std::abs(alpha - hi) < 1e-6) continue;
    EXPECT_EQ(check_admissible(WeightSpec::power(alpha), pp, lambda, 8, 8).verdict, alpha > lo && alpha < hi);
  }
}
