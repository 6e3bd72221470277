#include <gtest/gtest.h>

#include "crmult/forms.hpp"
#include "test_support.hpp"

namespace crmult {
namespace {

using testing::CR;
using testing::gr;
using testing::I;

struct Coords {
  CR cr;
  std::size_t z, zb, s;
  explicit Coords(int k) : cr(1, k), z(cr.vars->z(1)), zb(cr.vars->zb(1)), s(cr.vars->s()) {}
  VectorField d(std::size_t slot) const { return VectorField::coordinate(cr.vars, cr.order, slot); }
  OneForm dx(std::size_t slot) const { return OneForm::coordinate(cr.vars, cr.order, slot); }
};

TEST(LieBracket, Examples) {
  Coords c(4);
  // [d_s, s d_s] = d_s
  VectorField sds = c.d(c.s);
  sds[c.s] = c.cr.s();
  EXPECT_TRUE(agree(lie_bracket(c.d(c.s), sds), c.d(c.s)));
  // [d_zb, d_z] = 0
  VectorField br = lie_bracket(c.d(c.zb), c.d(c.z));
  for (const auto& co : br.coeffs) EXPECT_TRUE(co.is_zero());
  // [d_zb + i s z d_s, d_z - i s zb d_s] = -2 i s d_s
  VectorField u = c.d(c.zb), v = c.d(c.z);
  u[c.s] = I * (c.cr.s() * c.cr.z());
  v[c.s] = (-I) * (c.cr.s() * c.cr.zb());
  VectorField expected = VectorField::zero(c.cr.vars, 4);
  expected[c.s] = gr(0, -2) * c.cr.s();
  EXPECT_TRUE(agree(lie_bracket(u, v), expected));
  EXPECT_EQ(lie_bracket(u, v).order(), 3);
}

TEST(ExteriorDerivative, Examples) {
  Coords c(4);
  EXPECT_TRUE(exterior_derivative(c.dx(c.s)).is_zero());
  // d(zb dz) = dzb ^ dz = -dz ^ dzb
  OneForm w = c.cr.zb() * c.dx(c.z);
  TwoForm dw = exterior_derivative(w);
  EXPECT_EQ(dw.at(c.zb, c.z), c.cr.c(1).truncated(3));
  EXPECT_EQ(dw.at(c.z, c.zb), c.cr.c(-1).truncated(3));
  // d(-ds - i s zb dz + i s z dzb) = -i zb ds^dz + i z ds^dzb + 2 i s dz^dzb
  OneForm theta = OneForm::zero(c.cr.vars, 4);
  theta[c.s] = c.cr.c(-1);
  theta[c.z] = (-I) * (c.cr.s() * c.cr.zb());
  theta[c.zb] = I * (c.cr.s() * c.cr.z());
  TwoForm dt = exterior_derivative(theta);
  EXPECT_TRUE(agree(dt.at(c.s, c.z), (-I) * c.cr.zb()));
  EXPECT_TRUE(agree(dt.at(c.s, c.zb), I * c.cr.z()));
  EXPECT_TRUE(agree(dt.at(c.z, c.zb), gr(0, 2) * c.cr.s()));
}

TEST(Contract, Examples) {
  Coords c(4);
  // contract(ds ^ dz, d_s) = dz
  TwoForm w = TwoForm::zero(c.cr.vars, 4);
  w.upper(c.z, c.s) = -c.cr.c(1);  // ds^dz = -dz^ds
  OneForm r = contract(w, c.d(c.s));
  EXPECT_TRUE(agree(r, c.dx(c.z)));
  // pair(-ds, d_s) = -1
  EXPECT_EQ(pair(gr(-1) * c.dx(c.s), c.d(c.s)), c.cr.c(-1));
  // contract(2 i s dz^dzb, d_zb + i s z d_s) = -2 i s dz
  TwoForm w2 = TwoForm::zero(c.cr.vars, 4);
  w2.upper(c.z, c.zb) = gr(0, 2) * c.cr.s();
  VectorField l = c.d(c.zb);
  l[c.s] = I * (c.cr.s() * c.cr.z());
  EXPECT_TRUE(agree(contract(w2, l), gr(0, -2) * c.cr.s() * c.dx(c.z)));
}

TEST(Contract, AgreesWithTwoArgumentEvaluation) {
  testing::Rng rng(5);
  CR cr(2, 4);
  for (int t = 0; t < 20; ++t) {
    TwoForm w = TwoForm::zero(cr.vars, 4);
    for (auto& co : w.coeffs) co = rng.jet(cr.vars, 4, 3, 3);
    VectorField u = VectorField::zero(cr.vars, 4), v = VectorField::zero(cr.vars, 4);
    for (auto& co : u.coeffs) co = rng.jet(cr.vars, 4, 3, 3);
    for (auto& co : v.coeffs) co = rng.jet(cr.vars, 4, 3, 3);
    EXPECT_TRUE(agree(pair(contract(w, u), v), w(u, v)));
    EXPECT_TRUE(agree(w(u, v), -w(v, u)));
  }
}

TEST(LieDerivativeCoordinate, MatchesCartanFormula) {
  testing::Rng rng(9);
  CR cr(1, 5);
  for (int t = 0; t < 20; ++t) {
    OneForm eta = OneForm::zero(cr.vars, 5);
    VectorField l = VectorField::zero(cr.vars, 5);
    for (auto& co : eta.coeffs) co = rng.jet(cr.vars, 5, 4, 3);
    for (auto& co : l.coeffs) co = rng.jet(cr.vars, 5, 4, 3);
    OneForm cartan = contract(exterior_derivative(eta), l) + differential(pair(eta, l));
    EXPECT_TRUE(agree(lie_derivative_coordinate(l, eta), cartan));
  }
}

TEST(Conj, VectorFieldSwapsSlots) {
  Coords c(3);
  VectorField u = c.d(c.zb);
  u[c.s] = I * c.cr.z();
  VectorField cu = u.conj();
  EXPECT_EQ(cu[c.z], c.cr.c(1));
  EXPECT_TRUE(cu[c.zb].is_zero());
  EXPECT_EQ(cu[c.s], (-I) * c.cr.zb());
}

}  // namespace
}  // namespace crmult
