#include <gtest/gtest.h>

#include "crmult/frame.hpp"
#include "test_support.hpp"

namespace crmult {
namespace {

using testing::CR;

TEST(JetProperty, RingAxioms) {
  testing::Rng rng(1);
  CR cr(2, 5);
  for (int t = 0; t < 50; ++t) {
    Jet f = rng.jet(cr.vars, 5, 5, 4), g = rng.jet(cr.vars, 5, 5, 4), h = rng.jet(cr.vars, 5, 5, 4);
    EXPECT_TRUE(agree(f * g, g * f));
    EXPECT_TRUE(agree((f * g) * h, f * (g * h)));
    EXPECT_TRUE(agree(f * (g + h), f * g + f * h));
    EXPECT_TRUE(agree((f + g) + h, f + (g + h)));
    EXPECT_TRUE((f - f).is_zero());
  }
}

TEST(JetProperty, Leibniz) {
  testing::Rng rng(2);
  CR cr(2, 6);
  for (int t = 0; t < 50; ++t) {
    Jet f = rng.jet(cr.vars, 6, 5, 4), g = rng.jet(cr.vars, 6, 5, 4);
    auto v = static_cast<std::size_t>(rng.uniform(0, 4));
    EXPECT_TRUE(agree((f * g).derive(v), f.derive(v) * g + f * g.derive(v)));
  }
}

TEST(JetProperty, InverseRoundTrip) {
  testing::Rng rng(3);
  CR cr(1, 6);
  for (int t = 0; t < 50; ++t) {
    Jet u = rng.unit_jet(cr.vars, 6, 5, 4);
    EXPECT_EQ(u * u.inverse(), cr.c(1));
  }
}

TEST(JetProperty, TruncationIsARingMap) {
  testing::Rng rng(4);
  CR cr(1, 6);
  for (int t = 0; t < 50; ++t) {
    Jet f = rng.jet(cr.vars, 6, 6, 5), g = rng.jet(cr.vars, 6, 6, 5);
    int k = rng.uniform(0, 6);
    EXPECT_EQ((f * g).truncated(k), f.truncated(k) * g.truncated(k));
    EXPECT_EQ((f + g).truncated(k), f.truncated(k) + g.truncated(k));
  }
}

TEST(JetProperty, ConjugationIsAnInvolutiveRingMap) {
  testing::Rng rng(5);
  CR cr(2, 5);
  for (int t = 0; t < 50; ++t) {
    Jet f = rng.jet(cr.vars, 5, 5, 4), g = rng.jet(cr.vars, 5, 5, 4);
    EXPECT_EQ(f.conj().conj(), f);
    EXPECT_TRUE(agree((f * g).conj(), f.conj() * g.conj()));
    EXPECT_TRUE((f + f.conj()).is_real());
  }
}

TEST(FormsProperty, CartanIdentity) {
  testing::Rng rng(6);
  CR cr(2, 4);
  for (int t = 0; t < 200; ++t) {
    OneForm eta = rng.one_form(cr.vars, 4);
    VectorField l = rng.vector_field(cr.vars, 4), k = rng.vector_field(cr.vars, 4);
    Jet lhs = exterior_derivative(eta)(l, k);
    Jet rhs = l.apply(pair(eta, k)) - k.apply(pair(eta, l)) - pair(eta, lie_bracket(l, k));
    ASSERT_TRUE(agree(lhs, rhs)) << t;
  }
}

TEST(FormsProperty, DSquaredVanishes) {
  testing::Rng rng(7);
  CR cr(2, 5);
  for (int t = 0; t < 200; ++t) {
    Jet f = rng.jet(cr.vars, 5, 6, 5);
    ASSERT_TRUE(exterior_derivative(differential(f)).is_zero()) << f.to_string();
  }
}

TEST(FormsProperty, JacobiIdentity) {
  testing::Rng rng(8);
  CR cr(2, 5);
  for (int t = 0; t < 200; ++t) {
    VectorField x = rng.vector_field(cr.vars, 5), y = rng.vector_field(cr.vars, 5),
                z = rng.vector_field(cr.vars, 5);
    VectorField sum = lie_bracket(x, lie_bracket(y, z)) + lie_bracket(y, lie_bracket(z, x)) +
                      lie_bracket(z, lie_bracket(x, y));
    for (const auto& c : sum.coeffs) ASSERT_TRUE(c.is_zero()) << t;
  }
}

TEST(FrameProperty, RandomHypersurfaceFramesSatisfyInvariants) {
  testing::Rng rng(9);
  for (int n = 1; n <= 2; ++n) {
    CR cr(n, 5);
    for (int t = 0; t < 5; ++t) {
      Jet phi = rng.real_jet(cr.vars, 5, 4, 3);
      int m = rng.uniform(1, 2);
      CRFrame f = build_hypersurface_frame(n, m, phi, 5);
      EXPECT_TRUE(agree(f.theta[0].conj(), f.theta[0]));
      ASSERT_TRUE(f.integrability_verified_order.has_value());
      for (const auto& l : f.L) {
        EXPECT_TRUE(pair(f.theta[0], l).is_zero());
        EXPECT_TRUE(pair(f.theta[0], l.conj()).is_zero());
        OneForm lt = lie_derivative_form(f, l, f.theta[0]);
        for (const auto& k : f.L) EXPECT_TRUE(pair(lt, k).is_zero());
      }
    }
  }
}

}  // namespace
}  // namespace crmult
