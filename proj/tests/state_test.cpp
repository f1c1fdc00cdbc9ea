#include "hartree/state.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "hartree/builtin_states.hpp"

using namespace hartree;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

StateTensor basis_product(int i, int j) {
  std::vector<cplx> a(4, cplx(0));
  a[static_cast<std::size_t>(i * 2 + j)] = cplx(1);
  return StateTensor(DimProfile({2, 2}), std::move(a));
}

std::vector<cplx> ket0() { return {cplx(1), cplx(0)}; }
std::vector<cplx> ket1() { return {cplx(0), cplx(1)}; }
std::vector<cplx> ket_plus() { return {cplx(kInvSqrt2), cplx(kInvSqrt2)}; }

}  // namespace

TEST(DimProfile, RejectsFewerThanTwoModes) {
  EXPECT_THROW(DimProfile({2}), std::invalid_argument);
  EXPECT_THROW(DimProfile({}), std::invalid_argument);
  EXPECT_THROW(DimProfile({2, 0}), std::invalid_argument);
  EXPECT_NO_THROW(DimProfile({1, 1}));
}

TEST(DimProfile, TotalSize) {
  EXPECT_EQ(DimProfile({2, 3, 4}).total_size(), 24);
  EXPECT_EQ(DimProfile({1, 1, 5}).total_size(), 5);
}

TEST(IndexLayout, LastModeFastest) {
  // For dims (2,3), flat position 5 corresponds to multi-index (1,2).
  std::vector<int> dims{2, 3};
  EXPECT_EQ(flatten_index(dims, {1, 2}), 5);
  EXPECT_EQ(unflatten_index(dims, 5), (std::vector<int>{1, 2}));
}

TEST(IndexLayout, FlattenUnflattenRoundTrip) {
  std::vector<int> dims{2, 3, 4};
  std::vector<int> idx(3, 0);
  for (std::int64_t flat = 0; flat < dim_product(dims); ++flat) {
    EXPECT_EQ(flatten_index(dims, unflatten_index(dims, flat)), flat);
    EXPECT_EQ(unflatten_index(dims, flat), idx);
    increment_index(dims, idx);
  }
}

TEST(StateTensor, AmplitudeCountMustMatch) {
  EXPECT_THROW(StateTensor(DimProfile({2, 2}), std::vector<cplx>(3)),
               std::invalid_argument);
}

TEST(FrobeniusNorm, ZeroTensor) {
  StateTensor t(DimProfile({2, 2}), std::vector<cplx>(4, cplx(0)));
  EXPECT_EQ(frobenius_norm(t), 0.0);
}

TEST(FrobeniusNorm, BellIsNormalized) {
  EXPECT_NEAR(frobenius_norm(make_bell()), 1.0, 1e-15);
}

TEST(FrobeniusNorm, SingleComplexAmplitude) {
  StateTensor t(DimProfile({2, 2}), {cplx(3, 4), cplx(0), cplx(0), cplx(0)});
  EXPECT_DOUBLE_EQ(frobenius_norm(t), 5.0);
}

TEST(Normalize, ScalesToUnitRay) {
  StateTensor t(DimProfile({2, 2}), {cplx(2), cplx(0), cplx(0), cplx(0)});
  StateTensor u = normalize(t);
  EXPECT_NEAR(std::abs(u.amplitudes()[0] - cplx(1)), 0.0, 1e-15);
  EXPECT_NEAR(frobenius_norm(u), 1.0, 1e-12);
}

TEST(Normalize, RejectsZeroState) {
  StateTensor t(DimProfile({2, 2}), std::vector<cplx>(4, cplx(0)));
  EXPECT_THROW(normalize(t), std::invalid_argument);
}

TEST(Normalize, ComplexEntriesScaledByHalf) {
  StateTensor t(DimProfile({2, 2}),
                {cplx(1, 1), cplx(0), cplx(0), cplx(1, -1)});
  StateTensor u = normalize(t);
  EXPECT_NEAR(std::abs(u.amplitudes()[0] - cplx(0.5, 0.5)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u.amplitudes()[3] - cplx(0.5, -0.5)), 0.0, 1e-15);
  EXPECT_NEAR(frobenius_norm(u), 1.0, 1e-12);
}

TEST(Normalize, RandomStatesHitUnitNorm) {
  for (int trial = 0; trial < 100; ++trial) {
    StateTensor t = cplx(3.7, -1.2) * random_state(DimProfile({2, 3}), 100 + trial);
    EXPECT_NEAR(frobenius_norm(normalize(t)), 1.0, 1e-12);
  }
}

TEST(Overlap, MatchedProductState) {
  SeparableState s({ket0(), ket0()});
  EXPECT_NEAR(std::abs(overlap(basis_product(0, 0), s) - cplx(1)), 0.0, 1e-15);
}

TEST(Overlap, BellAgainstZeroZero) {
  SeparableState s({ket0(), ket0()});
  EXPECT_NEAR(std::abs(overlap(make_bell(), s) - cplx(kInvSqrt2)), 0.0, 1e-15);
}

TEST(Overlap, GhzAgainstPlusCubed) {
  SeparableState s({ket_plus(), ket_plus(), ket_plus()});
  EXPECT_NEAR(std::abs(overlap(make_ghz(3), s) - cplx(0.5)), 0.0, 1e-15);
}

TEST(Overlap, ShapeMismatchThrows) {
  SeparableState s({ket0(), ket0(), ket0()});
  EXPECT_THROW(overlap(make_bell(), s), std::invalid_argument);
}

TEST(Overlap, CauchySchwarzAtUnitNorm) {
  for (int trial = 0; trial < 100; ++trial) {
    StateTensor t = random_state(DimProfile({2, 3, 2}), 500 + trial);
    SeparableState s = random_separable(DimProfile({2, 3, 2}), 900 + trial);
    EXPECT_LE(std::abs(overlap(t, s)), 1.0 + 1e-12);
  }
}

TEST(SeparableToTensor, SingleBasisEntry) {
  StateTensor t = separable_to_tensor(SeparableState({ket0(), ket1()}));
  EXPECT_NEAR(std::abs(t.amplitudes()[1] - cplx(1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(t.amplitudes()[0]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(t.amplitudes()[2]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(t.amplitudes()[3]), 0.0, 1e-15);
}

TEST(SeparableToTensor, PlusTensorZero) {
  StateTensor t = separable_to_tensor(SeparableState({ket_plus(), ket0()}));
  EXPECT_NEAR(std::abs(t.amplitudes()[0] - cplx(kInvSqrt2)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(t.amplitudes()[1]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(t.amplitudes()[2] - cplx(kInvSqrt2)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(t.amplitudes()[3]), 0.0, 1e-15);
}

TEST(SeparableToTensor, RoundTripOverlapIsOne) {
  for (int trial = 0; trial < 100; ++trial) {
    SeparableState s = random_separable(DimProfile({2, 3, 4}), 1300 + trial);
    StateTensor t = separable_to_tensor(s);
    EXPECT_NEAR(frobenius_norm(t), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(overlap(t, s)), 1.0, 1e-10);
  }
}

TEST(RandomState, DeterministicInSeed) {
  StateTensor a = random_state(DimProfile({2, 2, 2}), 42);
  StateTensor b = random_state(DimProfile({2, 2, 2}), 42);
  ASSERT_EQ(a.amplitudes().size(), b.amplitudes().size());
  for (std::size_t i = 0; i < a.amplitudes().size(); ++i)
    EXPECT_EQ(a.amplitudes()[i], b.amplitudes()[i]);
  StateTensor c = random_state(DimProfile({2, 2, 2}), 43);
  EXPECT_NE(a.amplitudes()[0], c.amplitudes()[0]);
}

TEST(RandomState, UnitNormForAnySeed) {
  for (std::uint64_t seed = 0; seed < 50; ++seed)
    EXPECT_NEAR(frobenius_norm(random_state(DimProfile({3, 4}), seed)), 1.0, 1e-12);
}

TEST(RandomState, UniformSphereAmplitudeMoment) {
  // On the uniform sphere measure, E|a_i|^2 = 1 / prod(dims). For dims (2,2)
  // the first amplitude should average 1/4 over many seeds.
  const int samples = 10000;
  double acc = 0.0;
  for (int i = 0; i < samples; ++i) {
    StateTensor t = random_state(DimProfile({2, 2}), 77000 + static_cast<std::uint64_t>(i));
    acc += std::norm(t.amplitudes()[0]);
  }
  EXPECT_NEAR(acc / samples, 0.25, 0.02);
}

TEST(RandomSeparable, UnitFactorsAndDeterminism) {
  DimProfile dims({2, 3, 4});
  SeparableState a = random_separable(dims, 7);
  SeparableState b = random_separable(dims, 7);
  for (int k = 0; k < a.factor_count(); ++k) {
    double nrm2 = 0.0;
    for (const cplx& c : a.factor(k)) nrm2 += std::norm(c);
    EXPECT_NEAR(std::sqrt(nrm2), 1.0, 1e-12);
    for (std::size_t i = 0; i < a.factor(k).size(); ++i)
      EXPECT_EQ(a.factor(k)[i], b.factor(k)[i]);
  }
}

TEST(RandomSeparable, OverlapBoundedByOne) {
  StateTensor psi = random_state(DimProfile({2, 2, 3}), 1);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SeparableState s = random_separable(DimProfile({2, 2, 3}), seed);
    EXPECT_LE(std::abs(overlap(psi, s)), 1.0 + 1e-12);
  }
}

TEST(SeparableState, RejectsNonUnitFactor) {
  EXPECT_THROW(SeparableState({{cplx(2), cplx(0)}, {cplx(1), cplx(0)}}),
               std::invalid_argument);
  EXPECT_THROW(SeparableState({{cplx(1), cplx(0)}}), std::invalid_argument);
}

TEST(TensorArithmetic, AddScaleBehaveElementwise) {
  StateTensor bell = make_bell();
  StateTensor sum = bell + bell;
  EXPECT_NEAR(std::abs(sum.amplitudes()[0] - cplx(2.0 * kInvSqrt2)), 0.0, 1e-15);
  StateTensor scaled = cplx(0, 1) * bell;
  EXPECT_NEAR(std::abs(scaled.amplitudes()[3] - cplx(0, kInvSqrt2)), 0.0, 1e-15);
  EXPECT_THROW(bell + random_state(DimProfile({2, 3}), 0), std::invalid_argument);
}

TEST(BuiltinStates, GhzAndWShapes) {
  StateTensor ghz = make_ghz(3);
  EXPECT_NEAR(frobenius_norm(ghz), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(ghz.at({0, 0, 0}) - cplx(kInvSqrt2)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(ghz.at({1, 1, 1}) - cplx(kInvSqrt2)), 0.0, 1e-15);

  StateTensor w = make_w(3);
  const double r = 1.0 / std::sqrt(3.0);
  EXPECT_NEAR(std::abs(w.at({0, 0, 1}) - cplx(r)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(w.at({0, 1, 0}) - cplx(r)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(w.at({1, 0, 0}) - cplx(r)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(w.at({1, 1, 1})), 0.0, 1e-15);
}
