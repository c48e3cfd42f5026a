#include <gtest/gtest.h>

#include <cmath>

#include "bivbeta/closure.hpp"

using bivbeta::AlphaVector;
using bivbeta::Coordinate;
using bivbeta::FamilySpec;
using bivbeta::RngState;

TEST(ComplementMoments, ExactAlgebra) {
  bivbeta::MomentEstimate e;
  e.mean_x = 0.3;
  e.mean_y = 0.6;
  e.var_x = 0.01;
  e.var_y = 0.02;
  e.correlation = 0.4;
  e.n_samples = 1000;
  const auto c = bivbeta::complement_moments(e, Coordinate::y);
  EXPECT_DOUBLE_EQ(c.mean_x, 0.3);
  EXPECT_DOUBLE_EQ(c.mean_y, 0.4);
  EXPECT_DOUBLE_EQ(c.correlation, -0.4);
  EXPECT_DOUBLE_EQ(c.var_y, 0.02);
  const auto both = bivbeta::complement_moments(e, Coordinate::both);
  EXPECT_DOUBLE_EQ(both.correlation, 0.4);
  EXPECT_DOUBLE_EQ(both.mean_x, 0.7);
}

TEST(ClosureCheck, An8GenericAllCoordinates) {
  const auto f = FamilySpec::an8({1, 2, 3, 4, 5, 6, 7, 8});
  for (auto which : {Coordinate::x, Coordinate::y, Coordinate::both}) {
    const auto r = bivbeta::closure_check(f, which, 1000000, RngState(31));
    ASSERT_TRUE(r.closed());
    EXPECT_TRUE(r.pass()) << "max |z| = " << r.comparison->max_abs_z();
  }
}

TEST(ClosureCheck, An8AsymmetricShapes) {
  const auto f = FamilySpec::an8({0.5, 3, 1, 0.2, 2, 0.7, 4, 1.5});
  const auto r = bivbeta::closure_check(f, Coordinate::y, 1000000, RngState(32));
  EXPECT_TRUE(r.pass()) << "max |z| = " << r.comparison->max_abs_z();
}

TEST(ClosureCheck, WrongPermutationIsDetected) {
  // Guard on the oracle itself: relabelling by the identity must fail.
  const auto f = FamilySpec::an8({0.5, 3, 1, 0.2, 2, 0.7, 4, 1.5});
  const auto original =
      bivbeta::complement_moments(bivbeta::estimate_moments(f, 1000000, RngState(33)), Coordinate::y);
  const auto same = bivbeta::estimate_moments(f, 1000000, RngState(34));
  EXPECT_FALSE(bivbeta::compare_moments(original, same).pass());
}

TEST(ClosureCheck, OlPlusComplementIsOlMinus) {
  const auto r = bivbeta::closure_check(FamilySpec::ol_plus({3, 1, 2}), Coordinate::y, 1000000, RngState(35));
  ASSERT_TRUE(r.complemented.has_value());
  EXPECT_EQ(r.complemented->kind(), bivbeta::FamilyKind::OLminus);
  EXPECT_TRUE(r.pass());
}

TEST(ClosureCheck, An5ReportsNotClosed) {
  const auto r = bivbeta::closure_check(FamilySpec::an5({5, 5, 5, 5, 1}), Coordinate::y, 1000, RngState(1));
  EXPECT_FALSE(r.closed());
  EXPECT_FALSE(r.pass());
  EXPECT_NE(r.message.find("not closed"), std::string::npos);
}

TEST(An8Reduction, MatchesOlLawInMoments) {
  const AlphaVector a{2, 3, 1.5};
  for (const auto& ol : {FamilySpec::ol_plus(a), FamilySpec::ol_minus(a), FamilySpec::ol_star(a)}) {
    const auto direct = bivbeta::estimate_moments(ol, 1000000, RngState(36));
    const auto embedded = bivbeta::estimate_moments(bivbeta::an8_embedding(ol), 1000000, RngState(37));
    const auto cmp = bivbeta::compare_moments(direct, embedded);
    EXPECT_TRUE(cmp.pass()) << ol.name() << " max |z| = " << cmp.max_abs_z();
  }
}
