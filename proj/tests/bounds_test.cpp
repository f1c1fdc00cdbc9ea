#include "hartree/bounds.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hartree/builtin_states.hpp"
#include "hartree/eigensolver.hpp"
#include "hartree/state.hpp"

using namespace hartree;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

SolverConfig cfg_with_seed(std::uint64_t seed) {
  SolverConfig cfg;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST(Theorem3, KnownLowerBounds) {
  EXPECT_DOUBLE_EQ(theorem3_lower_bound(DimProfile({2, 2, 2})).lower, 0.5);
  EXPECT_NEAR(theorem3_lower_bound(DimProfile({3, 4, 5, 6})).lower,
              1.0 / std::sqrt(60.0), 1e-15);
}

TEST(Theorem3, BipartiteExactValue) {
  SpaceBound b = theorem3_lower_bound(DimProfile({2, 3}));
  ASSERT_TRUE(b.exact.has_value());
  EXPECT_NEAR(*b.exact, kInvSqrt2, 1e-15);
  EXPECT_NEAR(b.lower, *b.exact, 1e-15);
  EXPECT_FALSE(theorem3_lower_bound(DimProfile({2, 2, 2})).exact.has_value());
}

TEST(Theorem3, PermutationInvariant) {
  const double a = theorem3_lower_bound(DimProfile({2, 3, 4})).lower;
  EXPECT_DOUBLE_EQ(a, theorem3_lower_bound(DimProfile({4, 2, 3})).lower);
  EXPECT_DOUBLE_EQ(a, theorem3_lower_bound(DimProfile({3, 4, 2})).lower);
  EXPECT_DOUBLE_EQ(a, 1.0 / std::sqrt(6.0));
}

TEST(Theorem3, DegenerateModesAllowed) {
  EXPECT_NEAR(theorem3_lower_bound(DimProfile({1, 1, 4})).lower, 1.0, 1e-15);
}

TEST(SliceCertificate, GhzSlicesAreRankOne) {
  BoundCertificate cert = slice_certificate(make_ghz(3), cfg_with_seed(1));
  ASSERT_EQ(cert.slice_norms.size(), 2u);
  for (const SliceEntry& e : cert.slice_norms) {
    EXPECT_NEAR(e.frobenius, kInvSqrt2, 1e-12);
    EXPECT_NEAR(e.spectral, kInvSqrt2, 1e-12);
  }
  EXPECT_NEAR(cert.lambda_star, kInvSqrt2, 1e-8);
  EXPECT_TRUE(cert.chain_holds);
  // slack = (d1*d2) * lambda*^2 - 1 = 4 * 1/2 - 1
  EXPECT_NEAR(cert.slack, 1.0, 1e-7);
  EXPECT_NEAR(cert.sum_slice_frobenius_sq, 1.0, 1e-12);
}

TEST(SliceCertificate, RandomStatesSatisfyChain) {
  const std::vector<std::vector<int>> all_dims{{2, 2, 2}, {2, 2, 3}, {2, 3, 4}};
  for (int trial = 0; trial < 30; ++trial) {
    DimProfile dims(all_dims[static_cast<std::size_t>(trial) % all_dims.size()]);
    StateTensor t = random_state(dims, 200 + static_cast<std::uint64_t>(trial));
    BoundCertificate cert = slice_certificate(t, cfg_with_seed(trial));
    EXPECT_TRUE(cert.chain_holds);
    EXPECT_GE(cert.slack, -1e-9);
    EXPECT_NEAR(cert.sum_slice_frobenius_sq, cert.frobenius_sq, 1e-10);
  }
}

TEST(SliceCertificate, UnsortedDimsUseTwoLargestAsMatrix) {
  // dims (4,2,3): matrix modes should be the ones with dims 3 and 4,
  // slicing over the dim-2 mode.
  StateTensor t = random_state(DimProfile({4, 2, 3}), 33);
  BoundCertificate cert = slice_certificate(t, cfg_with_seed(2));
  ASSERT_EQ(cert.sliced_modes.size(), 1u);
  EXPECT_EQ(cert.sliced_modes[0], 1);
  EXPECT_EQ(cert.matrix_row_mode, 2);
  EXPECT_EQ(cert.matrix_col_mode, 0);
  EXPECT_EQ(cert.small_matrix_dim, 3);
  EXPECT_EQ(cert.slice_norms.size(), 2u);
  EXPECT_TRUE(cert.chain_holds);
}

TEST(SliceCertificate, BipartiteRejected) {
  EXPECT_THROW(slice_certificate(make_bell(), cfg_with_seed(1)), std::invalid_argument);
}

TEST(SliceCertificate, PrecomputedLambdaOverload) {
  BoundCertificate cert = slice_certificate(make_ghz(3), kInvSqrt2);
  EXPECT_TRUE(cert.chain_holds);
  EXPECT_NEAR(cert.slack, 1.0, 1e-12);
}

TEST(SliceNormDominance, KnownStates) {
  EXPECT_TRUE(slice_norm_dominance(make_ghz(3), cfg_with_seed(3)));
  EXPECT_TRUE(slice_norm_dominance(make_w(3), cfg_with_seed(4)));
  for (int trial = 0; trial < 20; ++trial) {
    StateTensor t = random_state(DimProfile({2, 2, 3}), 700 + static_cast<std::uint64_t>(trial));
    EXPECT_TRUE(slice_norm_dominance(t, cfg_with_seed(trial)));
  }
}

TEST(SliceNormDominance, WSliceValuesBelowLambda) {
  BoundCertificate cert = slice_certificate(make_w(3), cfg_with_seed(5));
  EXPECT_NEAR(cert.lambda_star, 2.0 / 3.0, 1e-6);
  for (const SliceEntry& e : cert.slice_norms)
    EXPECT_LE(e.spectral, cert.lambda_star + kChainTol);
}

TEST(DiagonalExtremal, BipartiteMeetsTheorem2ViaSvd) {
  // lambda* of the maximally entangled diagonal state equals the exact bound.
  for (const std::vector<int>& d : {std::vector<int>{2, 2}, {2, 5}, {3, 3}, {3, 7}}) {
    DimProfile dims(d);
    const int dmin = std::min(dims.dim(0), dims.dim(1));
    std::vector<cplx> a(static_cast<std::size_t>(dims.total_size()), cplx(0));
    for (int j = 0; j < dmin; ++j)
      a[static_cast<std::size_t>(flatten_index(dims.dims(), {j, j}))] =
          cplx(1.0 / std::sqrt(static_cast<double>(dmin)));
    SolveReport rep = svd_bipartite(StateTensor(dims, std::move(a)));
    EXPECT_NEAR(rep.lambda_star.value, *theorem3_lower_bound(dims).exact, 1e-10);
  }
}

TEST(PointwiseTheorem3, LambdaAboveLowerBound) {
  const std::vector<std::vector<int>> all_dims{{2, 2, 2}, {2, 2, 3}, {2, 3, 4}};
  for (int trial = 0; trial < 30; ++trial) {
    DimProfile dims(all_dims[static_cast<std::size_t>(trial) % all_dims.size()]);
    StateTensor t = random_state(dims, 1100 + static_cast<std::uint64_t>(trial));
    const double lambda = entanglement_eigenvalue(t, cfg_with_seed(trial)).lambda_star.value;
    EXPECT_GE(lambda, theorem3_lower_bound(dims).lower - 1e-9);
  }
}

TEST(MaxOverlapNorm, ZeroTensorIsZero) {
  StateTensor z(DimProfile({2, 2}), std::vector<cplx>(4, cplx(0)));
  EXPECT_EQ(max_overlap_norm(z, cfg_with_seed(1)), 0.0);
  StateTensor z3(DimProfile({2, 2, 2}), std::vector<cplx>(8, cplx(0)));
  EXPECT_EQ(max_overlap_norm(z3, cfg_with_seed(1)), 0.0);
}

TEST(MaxOverlapNorm, MatchesScaledEigenvalue) {
  StateTensor t = random_state(DimProfile({2, 2, 2}), 51);
  StateTensor z = cplx(2.5, -1.0) * t;
  const double expected =
      std::abs(cplx(2.5, -1.0)) * entanglement_eigenvalue(t, cfg_with_seed(6)).lambda_star.value;
  EXPECT_NEAR(max_overlap_norm(z, cfg_with_seed(6)), expected, 1e-8);
}

TEST(NormAxioms, BipartiteExactPathIsClean) {
  NormAxiomReport rep = norm_axiom_suite(DimProfile({2, 2}), 200, 2024, cfg_with_seed(7));
  EXPECT_EQ(rep.total_violations(), 0);
  EXPECT_EQ(rep.candidate_violations, 0);
  EXPECT_EQ(rep.worst_violation, 0.0);
}

TEST(NormAxioms, TripartiteCleanAfterEscalation) {
  NormAxiomReport rep = norm_axiom_suite(DimProfile({2, 2, 2}), 100, 4048, cfg_with_seed(8));
  EXPECT_EQ(rep.total_violations(), 0);
}

TEST(NormAxioms, GuardAndValidation) {
  DimProfile big(std::vector<int>(13, 2));
  EXPECT_THROW(norm_axiom_suite(big, 10, 1, cfg_with_seed(1)), GuardError);
  EXPECT_THROW(norm_axiom_suite(DimProfile({2, 2}), 0, 1, cfg_with_seed(1)),
               std::invalid_argument);
}
