#include "hrrxml/hrr.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "hrrxml/error.hpp"
#include "oracles.hpp"

namespace hrrxml {
namespace {

HrrVector random_hrr(std::size_t d, std::uint64_t seed) {
  return HrrVector(oracle::random_vector(d, seed, 1.0 / std::sqrt(static_cast<double>(d))));
}

TEST(HrrVectorTest, RejectsShortAndNonFinite) {
  EXPECT_THROW(HrrVector({1.0}), DimensionError);
  EXPECT_THROW(HrrVector(std::vector<double>{}), DimensionError);
  EXPECT_THROW(HrrVector({1.0, std::nan("")}), NumericError);
  EXPECT_THROW(HrrVector({1.0, INFINITY}), NumericError);
  EXPECT_THROW(Dimension(1), DimensionError);
  EXPECT_NO_THROW(Dimension(2));
}

TEST(HrrVectorTest, MismatchedDimensionsThrow) {
  const auto a = random_hrr(8, 1);
  const auto b = random_hrr(9, 2);
  EXPECT_THROW((void)bind(a, b), DimensionError);
  EXPECT_THROW((void)unbind(a, b), DimensionError);
  EXPECT_THROW((void)cosine_similarity(a, b), DimensionError);
}

TEST(BindTest, DeltaIsIdentity) {
  const HrrVector x{0.3, -1.2, 2.5, 0.7};
  const auto y = bind(HrrVector::delta(Dimension(4)), x);
  EXPECT_LT(oracle::max_abs_diff(y.values(), x.values()), 1e-12);
}

TEST(BindTest, SmallHandComputedCase) {
  const auto c = bind(HrrVector{1, 2, 3}, HrrVector{4, 5, 6});
  const auto expected = oracle::circular_convolution(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5, 6});
  ASSERT_EQ(expected, (std::vector<double>{31, 31, 28}));
  EXPECT_LT(oracle::max_abs_diff(c.values(), expected), 1e-12);
}

TEST(BindTest, MatchesDirectConvolutionForAllSmallDims) {
  for (std::size_t d = 2; d <= 64; ++d) {
    const auto a = random_hrr(d, 10 + d);
    const auto b = random_hrr(d, 1000 + d);
    const auto fast = bind(a, b);
    const auto slow = oracle::circular_convolution(a.values(), b.values());
    EXPECT_LT(oracle::max_abs_diff(fast.values(), slow), 1e-10) << "d=" << d;
  }
}

TEST(BindTest, CommutativeAssociativeDistributive) {
  const std::size_t d = 64;
  const auto a = random_hrr(d, 1), b = random_hrr(d, 2), c = random_hrr(d, 3);
  EXPECT_LT(oracle::max_abs_diff(bind(a, b).values(), bind(b, a).values()), 1e-12);
  EXPECT_LT(oracle::max_abs_diff(bind(bind(a, b), c).values(), bind(a, bind(b, c)).values()), 1e-12);
  EXPECT_LT(oracle::max_abs_diff(bind(a, b + c).values(), (bind(a, b) + bind(a, c)).values()), 1e-12);
}

TEST(InverseTest, DeltaIsSelfInverse) {
  const auto delta = HrrVector::delta(Dimension(4));
  EXPECT_LT(oracle::max_abs_diff(exact_inverse(delta).values(), delta.values()), 1e-12);
  EXPECT_EQ(pseudo_inverse(delta), delta);
}

TEST(InverseTest, PseudoInverseReversesTail) {
  EXPECT_EQ(pseudo_inverse(HrrVector{1, 2, 3, 4}), (HrrVector{1, 4, 3, 2}));
  const auto a = random_hrr(17, 5);
  EXPECT_EQ(pseudo_inverse(pseudo_inverse(a)), a);
}

TEST(InverseTest, ExactInverseCancelsForUnitary) {
  const auto a = sample_unitary(Dimension(32), RngSeed{7});
  const auto id = bind(a, exact_inverse(a));
  EXPECT_LT(oracle::max_abs_diff(id.values(), HrrVector::delta(Dimension(32)).values()), 1e-10);
}

TEST(InverseTest, ExactEqualsPseudoForUnitary) {
  for (std::size_t d : {128, 127, 256}) {
    const auto a = sample_unitary(Dimension(d), RngSeed{d});
    EXPECT_LT(oracle::max_abs_diff(exact_inverse(a).values(), pseudo_inverse(a).values()), 1e-8) << d;
  }
}

TEST(InverseTest, ExactInverseGeneralVectorAgainstDirectConvolution) {
  const auto a = random_hrr(24, 9);
  const auto inv = exact_inverse(a);
  const auto id = oracle::circular_convolution(a.values(), inv.values());
  std::vector<double> delta(24, 0.0);
  delta[0] = 1.0;
  EXPECT_LT(oracle::max_abs_diff(id, delta), 1e-8);
}

TEST(InverseTest, SingularSpectrumNamesBin) {
  // Constant vector: every bin except 0 is zero.
  try {
    (void)exact_inverse(HrrVector{1, 1, 1, 1});
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("bin 1"), std::string::npos) << e.what();
  }
}

TEST(UnbindTest, RecoversValueForUnitaryKey) {
  const Dimension d(256);
  const auto a = random_hrr(256, 11);
  const auto b = sample_unitary(d, RngSeed{12});
  EXPECT_LT(oracle::max_abs_diff(unbind(bind(a, b), b).values(), a.values()), 1e-10);
  const auto v = sample_unitary(d, RngSeed{13});
  EXPECT_LT(oracle::max_abs_diff(unbind(bind(v, b), b).values(), v.values()), 1e-8);
}

TEST(UnbindTest, DeltaQueryIsIdentity) {
  const auto s = random_hrr(16, 3);
  EXPECT_LT(oracle::max_abs_diff(unbind(s, HrrVector::delta(Dimension(16))).values(), s.values()), 1e-12);
}

TEST(UnbindTest, TwoPairSuperpositionRetainsSignal) {
  // With unitary operands the query returns a + noise, ||noise|| ~ ||a||, so
  // the cosine concentrates near 1/sqrt(2).
  const Dimension d(512);
  double total = 0.0;
  constexpr int kTrials = 100;
  for (int t = 0; t < kTrials; ++t) {
    const auto base = RngSeed{static_cast<std::uint64_t>(t)};
    const auto a = sample_unitary(d, derive_seed(base, 1));
    const auto b = sample_unitary(d, derive_seed(base, 2));
    const auto u = sample_unitary(d, derive_seed(base, 3));
    const auto v = sample_unitary(d, derive_seed(base, 4));
    total += cosine_similarity(unbind(bind(a, b) + bind(u, v), b), a);
  }
  EXPECT_GT(total / kTrials, 0.7);
}

TEST(ProjectTest, ScaledDeltaProjectsToDelta) {
  const auto p = project(HrrVector{2, 0, 0, 0});
  EXPECT_LT(oracle::max_abs_diff(p.values(), HrrVector::delta(Dimension(4)).values()), 1e-5);
}

TEST(ProjectTest, Idempotent) {
  const auto x = random_hrr(64, 4);
  const auto p = project(x);
  EXPECT_LT(oracle::max_abs_diff(project(p).values(), p.values()), 1e-6);
}

TEST(ProjectTest, SpectrumHasUnitMagnitudeByNaiveDft) {
  const auto p = project(random_hrr(256, 21));
  for (const auto& bin : oracle::dft(p.values())) EXPECT_NEAR(std::abs(bin), 1.0, 1e-3);
}

TEST(SampleTest, StandardNormConcentrates) {
  const auto v = sample_standard(Dimension(10000), RngSeed{1});
  EXPECT_NEAR(v.dot(v), 1.0, 0.05);
}

TEST(SampleTest, DeterministicAndNearOrthogonal) {
  EXPECT_EQ(sample_standard(Dimension(64), RngSeed{5}), sample_standard(Dimension(64), RngSeed{5}));
  EXPECT_EQ(sample_unitary(Dimension(64), RngSeed{5}), sample_unitary(Dimension(64), RngSeed{5}));
  const auto a = sample_standard(Dimension(1024), RngSeed{1});
  const auto b = sample_standard(Dimension(1024), RngSeed{2});
  EXPECT_LT(std::abs(cosine_similarity(a, b)), 0.15);
}

TEST(SampleTest, UnitaryHasUnitNorm) {
  for (std::size_t d : {64, 100, 256, 1000}) {
    EXPECT_NEAR(sample_unitary(Dimension(d), RngSeed{d}).norm(), 1.0, 1e-6) << d;
  }
}

TEST(CosineTest, BasicValues) {
  const auto a = random_hrr(32, 8);
  EXPECT_NEAR(cosine_similarity(a, a), 1.0, 1e-7);
  EXPECT_NEAR(cosine_similarity(a, -a), -1.0, 1e-7);
  EXPECT_EQ(cosine_similarity(HrrVector::zeros(Dimension(32)), a), 0.0);
}

TEST(AdjointTest, InnerProductIdentityAgainstDirectConvolution) {
  const std::size_t d = 32;
  const auto a = random_hrr(d, 1), b = random_hrr(d, 2), g = random_hrr(d, 3);
  const double lhs = oracle::dot(oracle::circular_convolution(a.values(), b.values()), g.values());
  const double rhs = a.dot(bind_adjoint(g, b));
  EXPECT_NEAR(lhs, rhs, 1e-10);
}

TEST(AdjointTest, DeltaAdjointIsIdentity) {
  const auto g = random_hrr(16, 6);
  EXPECT_LT(oracle::max_abs_diff(bind_adjoint(g, HrrVector::delta(Dimension(16))).values(), g.values()), 1e-12);
}

TEST(AdjointTest, GradientOfSquaredNormMatchesFiniteDifferences) {
  const std::size_t d = 16;
  const auto a = random_hrr(d, 31), b = random_hrr(d, 32);
  const auto analytic = bind_adjoint(bind(a, b), b) * 2.0;
  const auto numeric = oracle::numeric_gradient(
      [&](const std::vector<double>& x) {
        const auto c = oracle::circular_convolution(x, b.values());
        return oracle::dot(c, c);
      },
      a.data());
  EXPECT_LT(oracle::relative_error(analytic.values(), numeric), 1e-5);
}

}  // namespace
}  // namespace hrrxml
