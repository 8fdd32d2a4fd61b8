#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "exrmt/euler.hpp"

using namespace exrmt;

namespace {

// lambda(p) = 0, chi(p) = 1 away from the level; lambda(M) = chi(M) = 0.
NewformLocalData toy_data(std::int64_t M, std::uint64_t P) {
  NewformLocalData d;
  d.M = M;
  d.k = 2;
  for (auto p : primes_up_to(std::max<std::uint64_t>(P, static_cast<std::uint64_t>(M))))
    d.primes[p] = static_cast<std::int64_t>(p) == M ? LocalFactor{0.0, 0.0} : LocalFactor{0.0, 1.0};
  return d;
}

// Hand evaluation for the toy data, principal case, real shifts.
// Away from M: lambda(p^{2j}) = (-1)^j and odd powers vanish, so with x = p^{-(1+2a)}
// V_p = 1 + p/(p+1) (-x + p^{-(1+2g)})/(1+x); the sym^2 factor is 1/((1+t)^2(1-t)).
// At M: V_M = 1 and Y_M = (1 - M^{-(1+a+g)}) / (1 - M^{-(1+2g)}) inverted.
double toy_closed_form(double a, double g, std::int64_t M, const std::vector<double>& primes) {
  auto L = [](double t) { return 1.0 / ((1 + t) * (1 + t) * (1 - t)); };
  double prod = 1;
  for (double p : primes) {
    const double x = std::pow(p, -(1 + 2 * a)), y2g = std::pow(p, -(1 + 2 * g)), yag = std::pow(p, -(1 + a + g));
    const double V = 1 + p / (p + 1) * (-x + y2g) / (1 + x);
    const double Y = (1 / (1 - y2g)) * L(x) / ((1 / (1 - yag)) * L(yag));
    prod *= V / Y;
  }
  const double m = static_cast<double>(M);
  prod *= (1 - std::pow(m, -(1 + 2 * g))) / (1 - std::pow(m, -(1 + a + g)));
  return prod;
}

NewformLocalData random_local_data(std::int64_t M, std::uint64_t P, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  NewformLocalData d;
  d.M = M;
  for (auto p : primes_up_to(std::max<std::uint64_t>(P, static_cast<std::uint64_t>(M)))) {
    if (static_cast<std::int64_t>(p) == M) {
      d.primes[p] = {cplx(std::pow(static_cast<double>(M), -0.5) * (u(rng) < 0.5 ? 1 : -1), 0), 0.0};
    } else {
      const double theta = std::acos(2 * u(rng) - 1);
      d.primes[p] = {cplx(2 * std::cos(theta), 0), 1.0};
    }
  }
  return d;
}

}  // namespace

TEST(Satake, DegenerateAndRecurrenceExamples) {
  const auto [a, b] = satake(2.0, 1.0);
  EXPECT_NEAR(std::abs(a - 1.0), 0.0, 1e-7);
  EXPECT_NEAR(std::abs(b - 1.0), 0.0, 1e-7);
  const auto lp = lambda_powers(2.0, 1.0, 10);
  for (int m = 0; m <= 10; ++m) EXPECT_EQ(lp[m], cplx(m + 1.0));
  const auto z = lambda_powers(0.0, 1.0, 3);
  EXPECT_EQ(z[2], cplx(-1.0));
  EXPECT_EQ(z[3], cplx(0.0));
}

TEST(Satake, RecurrenceEqualsPowerSum) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 200; ++i) {
    const cplx lam = std::polar(2 * u(rng), 2 * std::numbers::pi * u(rng));
    const cplx chi = std::polar(1.0, 2 * std::numbers::pi * u(rng));
    const auto lp = lambda_powers(lam, chi, 20);
    for (int m = 0; m <= 20; ++m) EXPECT_LT(std::abs(lp[m] - satake_power_sum(lam, chi, m)), 1e-12 * std::max(1.0, std::abs(lp[m])));
  }
}

TEST(Satake, DataLookup) {
  const auto d = toy_data(11, 20);
  EXPECT_EQ(lambda_power(3, 2, d), cplx(-1.0));
  EXPECT_EQ(d.max_prime(), 19u);
  EXPECT_THROW(d.at(4), std::out_of_range);
  EXPECT_NO_THROW(d.validate());
  auto bad = d;
  bad.primes[5].lambda = 2.5;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(EulerProduct, ToyDataMatchesHandEvaluation) {
  const auto d = toy_data(11, 10);
  const std::vector<double> primes = {2, 3, 5, 7};
  for (auto [a, g] : {std::pair{0.0, 0.0}, {0.1, -0.05}, {-0.2, 0.15}}) {
    const auto v = truncated_a_f(d, SymmetryCase::PrincipalEven, 1.0, a, g, 10);
    EXPECT_NEAR(v.value.real(), toy_closed_form(a, g, 11, primes), 1e-13) << a << " " << g;
    EXPECT_NEAR(v.value.imag(), 0.0, 1e-14);
  }
}

TEST(EulerProduct, ToyDerivativeMatchesClosedForm) {
  const auto d = toy_data(11, 10);
  const std::vector<double> primes = {2, 3, 5, 7};
  const double h = 1e-5;
  const double ref = (toy_closed_form(h, 0, 11, primes) - toy_closed_form(-h, 0, 11, primes)) / (2 * h);
  const auto v = a_f_derivative(d, SymmetryCase::PrincipalEven, 1.0, 0.0, 10);
  EXPECT_NEAR(v.value.real(), ref, 1e-6);
}

TEST(EulerProduct, DiagonalIsIdenticallyOne) {
  for (auto c : {SymmetryCase::PrincipalEven, SymmetryCase::PrincipalOdd})
    for (double r : {0.0, 0.1, -0.2}) {
      const auto d = random_local_data(11, 1000, 5);
      for (std::uint64_t P : {100u, 1000u}) {
        const auto v = truncated_a_f_diagonal(d, c, -1.0, r, P);
        EXPECT_NEAR(std::abs(v.value - 1.0), 0.0, 1e-12) << r << " P=" << P;
      }
    }
}

TEST(EulerProduct, TailEstimateAndCoverage) {
  const auto d = random_local_data(11, 10000, 9);
  const auto small = truncated_a_f(d, SymmetryCase::PrincipalEven, 1.0, 0.1, 0.0, 100);
  const auto big = truncated_a_f(d, SymmetryCase::PrincipalEven, 1.0, 0.1, 0.0, 10000);
  EXPECT_GT(small.tail_estimate, 0.0);
  EXPECT_LT(big.tail_estimate, small.tail_estimate);
  const auto strict = truncated_a_f(d, SymmetryCase::PrincipalEven, 1.0, 0.1, 0.0, 100, 1e-15);
  EXPECT_FALSE(strict.converged);
  EXPECT_THROW(truncated_a_f(d, SymmetryCase::PrincipalEven, 1.0, 0.1, 0.0, 20000), std::invalid_argument);
  EXPECT_THROW(truncated_a_f(d, SymmetryCase::PrincipalEven, 1.0, 0.3, 0.0, 100), std::invalid_argument);
  auto no_level = toy_data(101, 10);
  no_level.primes.erase(101);
  EXPECT_THROW(truncated_a_f_diagonal(no_level, SymmetryCase::PrincipalEven, 1.0, 0.0, 10), std::invalid_argument);
}

TEST(EulerProduct, TildeProductIsFinite) {
  const auto d = random_local_data(11, 1000, 2);
  const auto v = truncated_a_tilde(d, SymmetryCase::SelfCM, 1.0, 0.05, 0.05, 1000);
  EXPECT_TRUE(std::isfinite(v.value.real()));
  EXPECT_TRUE(std::isfinite(v.value.imag()));
}

TEST(LocalData, CsvRoundTrip) {
  const auto d = random_local_data(11, 50, 4);
  std::ostringstream os;
  write_local_data(os, d);
  std::istringstream is(os.str());
  const auto back = read_local_data(is, 11, 2);
  ASSERT_EQ(back.primes.size(), d.primes.size());
  for (const auto& [p, f] : d.primes) {
    EXPECT_EQ(back.at(p).lambda, f.lambda);
    EXPECT_EQ(back.at(p).chi, f.chi);
  }
}

TEST(LocalData, RejectsMalformedFiles) {
  std::istringstream bad_header("p,lambda\n2,0,0,1,0\n");
  EXPECT_THROW(read_local_data(bad_header, 11, 2), std::exception);
  std::istringstream descending("p,re_lambda,im_lambda,re_chi,im_chi\n3,0,0,1,0\n2,0,0,1,0\n");
  EXPECT_THROW(read_local_data(descending, 11, 2), std::exception);
  std::istringstream junk("p,re_lambda,im_lambda,re_chi,im_chi\n2,x,0,1,0\n");
  EXPECT_THROW(read_local_data(junk, 11, 2), std::exception);
}
