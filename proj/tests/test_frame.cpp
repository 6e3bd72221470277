#include <gtest/gtest.h>

#include "crmult/frame.hpp"
#include "test_support.hpp"

namespace crmult {
namespace {

using testing::CR;
using testing::gr;
using testing::I;

template <class F>
Errc error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::InvalidInput;  // sentinel: nothing thrown
}

void expect_frame_invariants(const CRFrame& f) {
  for (int j = 0; j < f.d; ++j) {
    EXPECT_TRUE(agree(f.theta[j].conj(), f.theta[j]));
    for (int k = 0; k < f.n; ++k) {
      EXPECT_TRUE(pair(f.theta[j], f.L[k]).is_zero());
      EXPECT_TRUE(pair(f.theta[j], f.L[k].conj()).is_zero());
    }
  }
  for (const auto& w : f.coframe)
    for (const auto& l : f.L) EXPECT_TRUE(pair(w, l).is_zero());
}

TEST(HypersurfaceFrame, LeviFormExampleMatchesHandExpansion) {
  CR cr(1, 6);
  Jet phi = cr.z() * cr.zb();
  CRFrame f = build_hypersurface_frame(1, 1, phi, 6);
  const auto& v = *cr.vars;
  // b = -i s z / (1 + i z zb), expanded by hand through degree 6.
  Jet b = (-I) * (cr.s() * cr.z()) - cr.s() * cr.z() * cr.z() * cr.zb() +
          I * (cr.s() * testing::pow(cr.z(), 3) * testing::pow(cr.zb(), 2));
  EXPECT_TRUE(agree(f.L[0][v.s()], b));
  EXPECT_EQ(f.L[0][v.zb(1)], cr.c(1));
  EXPECT_TRUE(f.L[0][v.z(1)].is_zero());
  EXPECT_EQ(f.theta[0][v.s()], cr.c(-1));
  EXPECT_TRUE(agree(f.theta[0][v.zb(1)], b));
  Jet bbar = I * (cr.s() * cr.zb()) - cr.s() * cr.zb() * cr.zb() * cr.z() -
             I * (cr.s() * testing::pow(cr.zb(), 3) * testing::pow(cr.z(), 2));
  EXPECT_TRUE(agree(f.theta[0][v.z(1)], bbar));
  expect_frame_invariants(f);
  ASSERT_TRUE(f.hypersurface.has_value());
  EXPECT_EQ(f.N(), 2);
}

TEST(HypersurfaceFrame, FlatStructure) {
  CRFrame f = flat_frame(2, 4);
  const auto& v = *f.vars;
  for (int j = 1; j <= 2; ++j) {
    EXPECT_TRUE(agree(f.L[j - 1], VectorField::coordinate(f.vars, 4, v.zb(j))));
  }
  OneForm ds = OneForm::coordinate(f.vars, 4, v.s());
  EXPECT_TRUE(agree(f.theta[0], gr(-1) * ds));
}

TEST(HypersurfaceFrame, WeaklyNondegenerateModelAccepted) {
  CR cr(2, 6);
  Jet phi = cr.z(1) * cr.zb(1) + cr.z(1) * cr.z(1) * cr.zb(2) + cr.zb(1) * cr.zb(1) * cr.z(2);
  CRFrame f = build_hypersurface_frame(2, 1, phi, 6);
  expect_frame_invariants(f);
  ASSERT_TRUE(f.integrability_verified_order.has_value());
  EXPECT_TRUE(f.warnings.empty());
}

TEST(HypersurfaceFrame, Errors) {
  CR cr(1, 5);
  EXPECT_EQ(error_code([&] { build_hypersurface_frame(1, 1, cr.z() * cr.z(), 5); }), Errc::NotReal);
  EXPECT_EQ(error_code([&] { build_hypersurface_frame(1, 3, cr.z() * cr.zb(), 3); }),
            Errc::OrderTooLow);
  EXPECT_EQ(error_code([&] { build_hypersurface_frame(2, 1, cr.z() * cr.zb(), 5); }),
            Errc::VariableMismatch);
}

struct Section6 {
  CR cr{1, 6};
  std::size_t z = cr.vars->z(1), zb = cr.vars->zb(1), s = cr.vars->s();

  VectorField l() const {
    VectorField u = VectorField::coordinate(cr.vars, 6, zb);
    u[s] = cr.s() * (I * cr.z());
    return u;
  }
  OneForm theta() const {
    OneForm w = OneForm::zero(cr.vars, 6);
    w[s] = cr.c(-1);
    w[z] = cr.s() * ((-I) * cr.zb());
    w[zb] = cr.s() * (I * cr.z());
    return w;
  }
  OneForm dz() const { return OneForm::coordinate(cr.vars, 6, z); }
};

TEST(AbstractFrame, ValidFrame) {
  Section6 e;
  CRFrame f = build_abstract_frame(1, 1, {e.l()}, {e.theta()}, {e.dz()}, 6);
  expect_frame_invariants(f);
  EXPECT_EQ(f.coframe.size(), 2u);
}

TEST(AbstractFrame, ValidationErrors) {
  Section6 e;
  OneForm bad = OneForm::zero(e.cr.vars, 6);
  bad[e.s] = e.cr.c(-1);
  bad[e.z] = e.cr.s();
  EXPECT_EQ(error_code([&] { build_abstract_frame(1, 1, {e.l()}, {bad}, {e.dz()}, 6); }),
            Errc::NotReal);
  OneForm dzb = OneForm::coordinate(e.cr.vars, 6, e.zb);
  EXPECT_EQ(error_code([&] { build_abstract_frame(1, 1, {e.l()}, {e.theta()}, {dzb}, 6); }),
            Errc::NotHolomorphic);
  OneForm minus_ds = gr(-1) * OneForm::coordinate(e.cr.vars, 6, e.s);
  EXPECT_EQ(error_code([&] { build_abstract_frame(1, 1, {e.l()}, {minus_ds}, {e.dz()}, 6); }),
            Errc::NotCharacteristic);
  EXPECT_EQ(error_code([&] { build_abstract_frame(1, 1, {e.l()}, {e.theta()}, {e.theta()}, 6); }),
            Errc::DegenerateCoframe);
}

TEST(AbstractFrame, SPowerBuilderMatchesExplicitFrame) {
  Section6 e;
  CRFrame f = build_s_power_frame(I * e.cr.z(), 1, 6);
  EXPECT_TRUE(agree(f.L[0], e.l()));
  EXPECT_TRUE(agree(f.theta[0], e.theta()));
}

TEST(LieDerivativeForm, Examples) {
  CRFrame flat = flat_frame(1, 4);
  EXPECT_TRUE(lie_derivative_form(flat, flat.L[0], flat.theta[0]).is_zero());

  Section6 e;
  CRFrame f = build_s_power_frame(I * e.cr.z(), 1, 6);
  OneForm lt = lie_derivative_form(f, f.L[0], f.theta[0]);
  OneForm expected = (I * e.cr.z()) * f.theta[0] + (gr(0, -2) * e.cr.s()) * e.dz();
  EXPECT_TRUE(agree(lt, expected));
  EXPECT_GE(lt.order(), 4);

  OneForm ds = OneForm::coordinate(e.cr.vars, 6, e.s);
  EXPECT_EQ(error_code([&] { lie_derivative_form(f, f.L[0], ds); }), Errc::NotAnnihilated);
}

TEST(LieDerivativeForm, ResultIsHolomorphic) {
  CR cr(2, 6);
  Jet phi = cr.z(1) * cr.zb(1) + cr.z(1) * cr.z(1) * cr.zb(2) + cr.zb(1) * cr.zb(1) * cr.z(2);
  CRFrame f = build_hypersurface_frame(2, 1, phi, 6);
  for (const auto& l : f.L) {
    OneForm lt = lie_derivative_form(f, l, f.theta[0]);
    for (const auto& k : f.L) EXPECT_TRUE(pair(lt, k).is_zero());
  }
}

TEST(ExpandInCoframe, Examples) {
  Section6 e;
  CRFrame f = build_s_power_frame(I * e.cr.z(), 1, 6);
  auto c0 = expand_in_coframe(f, f.theta[0]);
  ASSERT_EQ(c0.size(), 2u);
  EXPECT_TRUE(agree(c0[0], e.cr.c(1)));
  EXPECT_TRUE(c0[1].is_zero());

  OneForm eta = (I * e.cr.z()) * f.theta[0] + (gr(0, -2) * e.cr.s()) * e.dz();
  auto c1 = expand_in_coframe(f, eta);
  EXPECT_TRUE(agree(c1[0], I * e.cr.z()));
  EXPECT_TRUE(agree(c1[1], gr(0, -2) * e.cr.s()));

  OneForm dzb = OneForm::coordinate(e.cr.vars, 6, e.zb);
  EXPECT_EQ(error_code([&] { expand_in_coframe(f, dzb); }), Errc::NotHolomorphic);
}

TEST(ExpandInCoframe, RandomCombinationsRoundTrip) {
  testing::Rng rng(21);
  CR cr(2, 5);
  Jet phi = cr.z(1) * cr.zb(1) + cr.z(2) * cr.zb(2) * cr.s();
  CRFrame f = build_hypersurface_frame(2, 2, phi, 5);
  for (int t = 0; t < 10; ++t) {
    std::vector<Jet> c;
    OneForm eta = OneForm::zero(cr.vars, 5);
    for (std::size_t l = 0; l < f.coframe.size(); ++l) {
      c.push_back(rng.jet(cr.vars, 5, 4, 3));
      eta = eta + c.back() * f.coframe[l];
    }
    auto got = expand_in_coframe(f, eta);
    for (std::size_t l = 0; l < c.size(); ++l) EXPECT_TRUE(agree(got[l], c[l]));
  }
}

TEST(StructureCoefficients, Examples) {
  CRFrame flat = flat_frame(1, 4);
  for (const auto& row : structure_coefficients(flat))
    for (const auto& v : row)
      for (const auto& b : v) EXPECT_TRUE(b.is_zero());

  CR cr(1, 6);
  CRFrame h = build_hypersurface_frame(1, 1, cr.z() * cr.zb(), 6);
  auto b = structure_coefficients(h);
  for (const auto& v : b[1][0]) EXPECT_TRUE(v.is_zero());
  auto lie = expand_in_coframe(h, lie_derivative_form(h, h.L[0], h.theta[0]));
  for (std::size_t l = 0; l < 2; ++l) EXPECT_TRUE(agree(b[0][0][l], lie[l]));

  CRFrame s6 = build_s_power_frame(I * cr.z(), 1, 6);
  auto b6 = structure_coefficients(s6);
  EXPECT_TRUE(agree(b6[0][0][0], I * cr.z()));
  EXPECT_TRUE(agree(b6[0][0][1], gr(0, -2) * cr.s()));
}

TEST(InfinitesimalCR, FlatFrameExamples) {
  CRFrame f = flat_frame(1, 4);
  const auto& v = *f.vars;
  VectorField dx = VectorField::coordinate(f.vars, 4, v.z(1)) +
                   VectorField::coordinate(f.vars, 4, v.zb(1));
  EXPECT_TRUE(is_symbolic_infinitesimal_cr(f, dx).ok());

  VectorField dy = VectorField::zero(f.vars, 4);
  dy[v.z(1)] = Jet::constant(f.vars, 4, I);
  dy[v.zb(1)] = Jet::constant(f.vars, 4, -I);
  EXPECT_TRUE(is_symbolic_infinitesimal_cr(f, dy).ok());

  auto r = is_symbolic_infinitesimal_cr(f, VectorField::coordinate(f.vars, 4, v.z(1)));
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(r.field_real);
  EXPECT_TRUE(r.pairing_real);
  EXPECT_TRUE(r.cr_equations);
  EXPECT_EQ(r.witness.rfind("reality-of-field", 0), 0u);
}

TEST(InfinitesimalCR, NonCRRealField) {
  CRFrame f = flat_frame(1, 4);
  const auto& v = *f.vars;
  Jet zz = Jet::variable(f.vars, 4, v.z(1)) * Jet::variable(f.vars, 4, v.zb(1));
  VectorField x = VectorField::zero(f.vars, 4);
  x[v.z(1)] = zz;
  x[v.zb(1)] = zz;
  auto r = is_symbolic_infinitesimal_cr(f, x);
  EXPECT_TRUE(r.field_real);
  EXPECT_FALSE(r.cr_equations);
  EXPECT_EQ(r.witness.rfind("cr:", 0), 0u);
}

}  // namespace
}  // namespace crmult
