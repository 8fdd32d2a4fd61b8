#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "exrmt/special.hpp"
#include "exrmt/theory.hpp"

using namespace exrmt;

namespace {
constexpr double kPi = std::numbers::pi;
const Group kGroups[] = {Group::SOEven, Group::SOOdd, Group::USp, Group::Unitary};
}  // namespace

TEST(Special, DigammaAgainstHighPrecision) {
  EXPECT_NEAR(digamma(1.0), -kEulerGamma, 1e-14);
  EXPECT_NEAR(digamma(3.5), 1.10315664064524318722569, 1e-13);
  EXPECT_NEAR(digamma(0.3), -3.502524222200133124915351, 1e-13);
  EXPECT_NEAR(digamma(-1.5), 0.7031566406452431872256903, 1e-13);
}

TEST(Special, SincAndDirichletRatio) {
  EXPECT_EQ(sinc(0.0), 1.0);
  EXPECT_NEAR(sinc(1e-5), 1 - 1e-10 / 6, 1e-17);
  EXPECT_NEAR(sinc(2.0), std::sin(2.0) / 2.0, 1e-16);
  for (int m : {1, 2, 5, 19}) {
    EXPECT_NEAR(dirichlet_ratio(m, 0.0), m, 1e-12);
    for (double t : {0.1, 1.0, 2.5, 3.0}) EXPECT_NEAR(dirichlet_ratio(m, t), std::sin(m * t) / std::sin(t), 1e-10);
  }
}

TEST(Special, QuadratureAndGoldenSection) {
  EXPECT_NEAR(integrate([](double x) { return std::exp(x); }, 0, 1), std::exp(1.0) - 1, 1e-10);
  EXPECT_NEAR(golden_section_min([](double x) { return (x - 0.3) * (x - 0.3); }, -2, 2, 1e-10), 0.3, 1e-8);
}

TEST(Kernels, UnitaryIsFlat) {
  for (double t : {0.0, 1.0, 4.0}) EXPECT_DOUBLE_EQ(finite_n_density(Group::Unitary, 9, t), 9 / (2 * kPi));
}

TEST(Kernels, OrthogonalEvenClosedForm) {
  const int N = 10;
  for (double t : {0.05, 0.7, 2.0, 3.1})
    EXPECT_NEAR(finite_n_density(Group::SOEven, N, t),
                (2 * N - 1) / (2 * kPi) + std::sin((2 * N - 1) * t) / (2 * kPi * std::sin(t)), 1e-12);
  EXPECT_NEAR(finite_n_density(Group::SOEven, N, 0.0), 2 * (2 * N - 1) / (2 * kPi), 1e-12);
}

TEST(Kernels, IntegralsCountEigenangles) {
  for (Group g : kGroups)
    for (int N : {5, 10, 20}) {
      const double hi = (g == Group::SOEven || g == Group::USp) ? kPi : 2 * kPi;
      const double integral = integrate([&](double t) { return finite_n_density(g, N, t); }, 0, hi, 1e-12, 256);
      // Paired groups: N angles in [0, pi]. SOOdd on [0, 2pi] carries the 2N non-forced angles.
      const double expect = g == Group::SOOdd ? 2.0 * N : N;
      EXPECT_NEAR(integral, expect, 1e-8) << group_name(g) << " N=" << N;
    }
}

TEST(Kernels, ExpansionLimitsAndUnitary) {
  for (double tau : {0.1, 0.5, 1.3}) {
    EXPECT_EQ(scaled_density_expansion(Group::Unitary, 5, tau, 2), 1.0);
    EXPECT_NEAR(scaled_density_expansion(Group::SOEven, 0, tau, 2), 1 + sinc(2 * kPi * tau), 1e-15);
    EXPECT_NEAR(scaled_density_expansion(Group::USp, 0, tau, 2), 1 - sinc(2 * kPi * tau), 1e-15);
  }
  EXPECT_THROW(scaled_density_expansion(Group::SOEven, 5, 0.2, 3), std::invalid_argument);
}

TEST(Kernels, ExpansionMatchesExactAtQuarter) {
  EXPECT_LE(std::abs(scaled_density_expansion(Group::SOEven, 10, 0.25, 2) - scaled_density_exact(Group::SOEven, 10, 0.25)),
            5e-3);
}

TEST(Kernels, HigherOrderTruncationIsCloser) {
  for (Group g : {Group::SOEven, Group::SOOdd, Group::USp})
    for (int N : {8, 12, 20, 40})
      for (int i = 0; i <= 90; ++i) {
        const double tau = 0.1 + 0.01 * i;
        const double exact = scaled_density_exact(g, N, tau);
        const double r1 = std::abs(scaled_density_expansion(g, N, tau, 1) - exact);
        const double r2 = std::abs(scaled_density_expansion(g, N, tau, 2) - exact);
        EXPECT_LE(r2, r1 + 1e-15) << group_name(g) << " N=" << N << " tau=" << tau;
      }
}

TEST(LowerOrder, CaseTable) {
  CoefficientInputs k;
  k.c1 = 0;
  k.c2 = 0;
  k.d1 = 0;
  EXPECT_EQ(q_lower_order(SymmetryCase::Generic, 0.3, 5, k), 0.0);
  k.a1 = 0.7;
  k.a2 = 1.1;
  EXPECT_NEAR(q_lower_order(SymmetryCase::PrincipalEven, 0.0, 4.0, k), 1 - 2 * 0.7 / 4.0, 1e-15);
  k.b1 = 2;
  k.b2 = 3;
  EXPECT_NEAR(q_lower_order(SymmetryCase::SelfCM, 0.37, 1e300, k), -sinc(2 * kPi * 0.37), 1e-15);
  for (double tau : {0.1, 0.6, 1.0})
    EXPECT_NEAR(q_lower_order(SymmetryCase::PrincipalEven, tau, 1e300, k),
                scaled_density_expansion(Group::SOEven, 0, tau, 2) - 1, 1e-15);
  EXPECT_THROW(q_lower_order(SymmetryCase::PrincipalOdd, 0.2, 5, CoefficientInputs{}), MissingInput);
  EXPECT_THROW(q_lower_order(SymmetryCase::PrincipalEven, 0.2, 0, k), std::invalid_argument);
}

TEST(Coefficients, ZeroInputsAtWeightTwo) {
  CoefficientInputs in;
  in.k = 2;
  in.A1_00 = 0;
  in.Lp_sym = 0;
  EXPECT_NEAR(*coefficient_assembly(SymmetryCase::PrincipalEven, in).a1, 2.15443132980306572, 1e-14);
  EXPECT_NEAR(*coefficient_assembly(SymmetryCase::PrincipalOdd, in).a3, 3.00879963883571227, 1e-14);
  in.Lp_chi = 0;
  in.xi0 = 0;
  in.L1_chi = 0;
  in.L1_ad = 1;
  EXPECT_NEAR(*coefficient_assembly(SymmetryCase::SelfCM, in).b1, 1 - digamma(1.0), 1e-14);
}

TEST(Coefficients, SecondOrderNeedsItsInputs) {
  CoefficientInputs in;
  in.k = 2;
  in.A1_00 = 0.1;
  in.Lp_sym = -0.2;
  auto out = coefficient_assembly(SymmetryCase::PrincipalEven, in);
  EXPECT_FALSE(out.a2.has_value());
  in.Bp0 = 0;
  in.Bpp0 = 0;
  in.Lpp_sym = 0;
  out = coefficient_assembly(SymmetryCase::PrincipalEven, in);
  ASSERT_TRUE(out.a2.has_value());
  const double g = kEulerGamma, psi = -kEulerGamma;
  EXPECT_NEAR(*out.a2, -2 * psi - 2 * psi * g + 2 * g - 2 * kStieltjes1 + (2 * psi - 2 - 2 * g) * -0.2, 1e-14);
}

TEST(Coefficients, MissingInputsAreReported) {
  CoefficientInputs in;
  EXPECT_THROW(coefficient_assembly(SymmetryCase::PrincipalEven, in), MissingInput);
  in.k = 2;
  EXPECT_THROW(coefficient_assembly(SymmetryCase::Generic, in), MissingInput);
  in.A1_00 = 0;
  in.Lp_chi = 0;
  in.xi0 = 0;
  in.L1_chi = 0;
  in.L1_ad = 0;
  EXPECT_THROW(coefficient_assembly(SymmetryCase::SelfCM, in), std::domain_error);
}

TEST(Coefficients, GenericAssembly) {
  CoefficientInputs in;
  in.k = 2;
  in.A1_00 = 0.1;
  in.A1_00_bar = 0.3;
  in.Lp_chi = 0.2;
  in.Lp_chi_bar = 0.4;
  in.Lp_sym = -0.5;
  in.Lp_sym_bar = 0.7;
  in.eta_f = 1;
  in.eta_fbar = -1;
  in.Atilde_00 = 2;
  in.Atilde_00_bar = 3;
  in.L1_chi = 1.5;
  in.L1_chi_bar = 0.5;
  in.L1_sym = 2;
  in.L1_sym_bar = 4;
  in.L1_ad = 1;
  in.L1_ad_bar = 2;
  in.Btilde_p0 = 0;
  in.Btilde_p0_bar = 0;
  in.Lprime1_sym = 0;
  in.Lprime1_sym_bar = 0;
  const auto out = coefficient_assembly(SymmetryCase::Generic, in);
  const double psi = -kEulerGamma;
  EXPECT_NEAR(*out.c1, psi + 0.5 * (0.4 - 0.6 + 0.2), 1e-15);
  EXPECT_NEAR(*out.c2, -0.5 * (1 * 2 * 1.5 * 4 / 1 + -1 * 3 * 0.5 * 2 / 2), 1e-14);
  EXPECT_NEAR(*out.d1, 4 * (psi * 2 * 1.5 - 2 * 1.5) - 2.0 / 2 * (psi * 3 * 0.5 - 3 * 0.5), 1e-13);
}

TEST(EffectiveSize, StandardSize) {
  EXPECT_NEAR(n_std(4 * kPi * kPi, 1), 0.0, 1e-15);
  EXPECT_NEAR(n_std(11, 9960), 8.56740292056848, 1e-12);
  EXPECT_LT(n_std(11, 100), n_std(11, 101));
  EXPECT_THROW(n_std(0, 1), std::invalid_argument);
}

TEST(EffectiveSize, CaseFormulas) {
  CoefficientInputs k;
  k.a1 = 1;
  const double L = std::log(std::sqrt(11.0) * 1e6 / (2 * kPi));
  EXPECT_NEAR(n_eff(SymmetryCase::PrincipalEven, 11, 1e6, k), L / 2, 1e-13);
  k.a3 = 2;
  EXPECT_NEAR(n_eff(SymmetryCase::PrincipalOdd, 11, 1e6, k), (L - 0.5) / 2 - 0.5, 1e-13);
  k.b1 = 0.5;
  EXPECT_NEAR(n_eff(SymmetryCase::SelfCM, 11, 1e6, k), 2 * L, 1e-13);
  k.R = 5;
  k.mean_e1 = 0;
  k.mean_e2 = 1.0 / 3;
  EXPECT_NEAR(n_eff(SymmetryCase::Generic, 0, 0, k), 5.0, 1e-14);
  k.mean_e2 = -1.0 / 3;
  EXPECT_THROW(n_eff(SymmetryCase::Generic, 0, 0, k), std::domain_error);
  k.a1 = 0;
  EXPECT_THROW(n_eff(SymmetryCase::PrincipalEven, 11, 1e6, k), std::domain_error);
}

TEST(EffectiveSize, L2OptimizerExamples) {
  EXPECT_NEAR(n_eff_l2_optimize(0, 1.0 / 3, 7), 7.0, 0.007);
  EXPECT_NEAR(n_eff_l2_optimize(0.1, 1.0, 10), 6.20173672946042270, 0.007 * 6.2017);
  const double one = n_eff_l2_optimize(0.05, 0.9, 12, 1), three = n_eff_l2_optimize(0.05, 0.9, 12, 3);
  EXPECT_NEAR(three / one, 1.0, 1e-6);
  EXPECT_THROW(n_eff_l2_optimize(0.25, 0.0, 5), std::domain_error);
}

TEST(EffectiveSize, L2OptimizerMatchesClosedFormOnGrid) {
  for (int i = 0; i < 100; ++i) {
    const double e1 = -0.5 + 0.1 * (i % 10);
    const double e2 = 0.2 + 0.15 * (i / 10);
    const double R = 3 + 0.7 * i;
    if (!(3 * e2 - 4 * e1 > 0)) {
      EXPECT_THROW(n_eff_l2_optimize(e1, e2, R), std::domain_error);
      continue;
    }
    const double closed = n_eff_generic(R, e1, e2);
    EXPECT_NEAR(n_eff_l2_optimize(e1, e2, R) / closed, 1.0, 1e-3) << e1 << " " << e2 << " " << R;
  }
}

TEST(PairCorrelation, Montgomery) {
  EXPECT_EQ(montgomery_r2(0.0), 0.0);
  EXPECT_NEAR(montgomery_r2(0.5), 0.594715265430648914, 1e-15);
  EXPECT_NEAR(u_pair_corr(0.5, 1000000), montgomery_r2(0.5), 1e-12);
  EXPECT_NEAR(u_pair_corr(0.5, 2), montgomery_r2(0.5) - 1.0 / 12, 1e-15);
  // Exact CUE form agrees with the 1/N^2 expansion to O(N^-4).
  EXPECT_NEAR(u_pair_corr_exact(0.7, 40), u_pair_corr(0.7, 40), 1e-6);
}

TEST(PairCorrelation, Expansion) {
  PairCorrCoefficients e;
  EXPECT_EQ(pair_corr_expansion(0.4, 3, e), montgomery_r2(0.4));
  e.e1 = 0.2;
  e.e2 = 0.3;
  e.e3 = 0.4;
  EXPECT_NEAR(pair_corr_expansion(0.0, 2, e), 0.05, 1e-16);
  EXPECT_THROW(pair_corr_expansion(0.1, 0, e), std::invalid_argument);
}

TEST(PairCorrelation, CoefficientsFromInputs) {
  PairCorrCoefficients raw;
  raw.M = 11;
  raw.lambda_M_sq = 1.0 / 11;
  raw.App0 = 0;
  raw.Appp0 = -16;
  raw.Lp_ad_prime = 0;
  auto e = e_coefficients_from_inputs(raw);
  EXPECT_NEAR(e.e1, 0.0239579239137865, 1e-15);
  EXPECT_NEAR(e.e2, -1.81245376715963477540, 1e-14);
  EXPECT_EQ(e.e3, 0.0);
  raw.App0 = 0.4;
  raw.Lp_ad_prime = 0.25;
  raw.Appp0 = 0.6;
  e = e_coefficients_from_inputs(raw);
  EXPECT_NEAR(e.e2, -2.262453767159634775402797, 1e-14);
  EXPECT_NEAR(e.e3, 1.383333333333333333, 1e-15);
  raw.lambda_M_sq = 0;
  EXPECT_THROW(e_coefficients_from_inputs(raw), std::domain_error);
  EXPECT_THROW(e_coefficients_from_inputs(PairCorrCoefficients{}), MissingInput);
}

TEST(PairCorrelation, FamilyAverageIsArithmeticMean) {
  std::vector<PairCorrCoefficients> fam(3);
  fam[0].e1 = 1;
  fam[1].e1 = 2;
  fam[2].e1 = 6;
  fam[0].e2 = -3;
  const auto [m1, m2] = family_average_e(fam);
  EXPECT_DOUBLE_EQ(m1, 3.0);
  EXPECT_DOUBLE_EQ(m2, -1.0);
  EXPECT_THROW(family_average_e({}), std::invalid_argument);
}

TEST(SmallValues, BarnesAndAsymptotics) {
  EXPECT_NEAR(barnes_g_half(), 0.603244281209446206, 1e-15);
  EXPECT_NEAR(h_asymp(20), 0.759785056301298, 1e-14);
  EXPECT_NEAR(h_asymp(12), 0.627332036155776, 1e-14);
  EXPECT_NEAR(h_asymp(16 * 7.0) / h_asymp(7.0), std::pow(2.0, 1.5), 1e-13);
  EXPECT_EQ(small_value_prob(0, 10), 0.0);
  EXPECT_NEAR(small_value_prob(4e-4, 10) / small_value_prob(1e-4, 10), 2.0, 1e-14);
  EXPECT_THROW(h_asymp(0), std::invalid_argument);
}

TEST(SmallValues, VanishingCount) {
  VanishingModel m;
  m.k = 2;
  m.delta_f = 0;
  m.kappa_f = 1;
  m.a_f_half = 1;
  auto r = vanishing_count(1e6, m);
  EXPECT_TRUE(r.divergent);
  EXPECT_DOUBLE_EQ(r.growth_exponent, 0.25);
  EXPECT_EQ(r.leading_term, 0.0);
  m.delta_f = 2;
  m.kappa_f = 0.5;
  r = vanishing_count(1e6, m);
  const double lx = std::log(1e6);
  EXPECT_NEAR(r.leading_term, 1 / (4 * lx) * 2 * h_asymp(lx) * 4 * std::pow(1e6, 0.25), 1e-9 * r.leading_term);
  m.k = 4;
  r = vanishing_count(1e6, m);
  EXPECT_FALSE(r.divergent);
  m.k = 1;
  EXPECT_THROW(vanishing_count(1e6, m), std::invalid_argument);
}

TEST(Cases, NamesAndGroups) {
  for (auto c : {SymmetryCase::PrincipalEven, SymmetryCase::PrincipalOdd, SymmetryCase::SelfCM, SymmetryCase::Generic})
    EXPECT_EQ(parse_case(case_name(c)), c);
  EXPECT_EQ(symmetry_group(SymmetryCase::PrincipalEven), Group::SOEven);
  EXPECT_EQ(symmetry_group(SymmetryCase::PrincipalOdd), Group::SOOdd);
  EXPECT_EQ(symmetry_group(SymmetryCase::SelfCM), Group::USp);
  EXPECT_EQ(symmetry_group(SymmetryCase::Generic), Group::Unitary);
  EXPECT_THROW(parse_case("orthogonal"), std::invalid_argument);
}
