#include <gtest/gtest.h>

#include "crmult/cr_system.hpp"
#include "test_support.hpp"

namespace crmult {
namespace {

using testing::gr;
using testing::I;

template <class F>
Errc error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::InvalidInput;
}

struct Space {
  SpacePtr sp;
  int order;
  Space(int d, int k) : sp(make_space(make_vars(VariableSet::real(d, "x")))), order(k) {}

  RationalForm c(const GaussianRational& v) const { return RationalForm::constant(sp, order, v); }
  RationalForm xi(std::size_t k) const { return RationalForm::xi(sp, order, k); }
  Jet xj(std::size_t k) const { return Jet::variable(sp->x, order, k); }
  RationalForm x(std::size_t k) const { return RationalForm::from_jet(sp, xj(k)); }
  RationalForm zero() const { return RationalForm(sp, order); }
};

ClassicalSymbol scalar(int m, std::vector<RationalForm> terms) {
  std::vector<SymbolMatrix> mats;
  for (auto& t : terms) mats.push_back({{t}});
  return make_symbol(m, std::move(mats));
}

TEST(RationalForm, QuotientRuleAndCancellation) {
  Space s(1, 4);
  RationalForm inv = s.xi(0).inverse();
  EXPECT_TRUE(equivalent(inv * s.xi(0), s.c(1)));
  EXPECT_TRUE((inv * s.xi(0) - s.c(1)).is_zero());
  RationalForm d = inv.dxi(0);
  EXPECT_TRUE(equivalent(d * s.xi(0) * s.xi(0), s.c(-1)));
  EXPECT_EQ(d.degree(), -2);
  EXPECT_TRUE(d.satisfies_euler(-2));
  EXPECT_FALSE(d.satisfies_euler(-1));
  EXPECT_TRUE((s.xi(0) * inv).is_polynomial());
}

TEST(RationalForm, InverseNeedsUnitTimesXiPolynomial) {
  Space s(2, 4);
  RationalForm good = (s.c(1) + s.x(0)) * (s.xi(0) * s.xi(0) + s.xi(1) * s.xi(1));
  EXPECT_TRUE(equivalent(good * good.inverse(), s.c(1)));
  EXPECT_TRUE((good * good.inverse() - s.c(1)).is_zero());
  RationalForm mixed = (s.c(1) + s.x(0)) * s.xi(0) + s.xi(1);
  EXPECT_EQ(error_code([&] { mixed.inverse(); }), Errc::NotElliptic);
  EXPECT_EQ(error_code([&] { (s.x(0) * s.xi(0)).inverse(); }), Errc::NotElliptic);
}

TEST(RationalForm, EvaluatePole) {
  Space s(2, 3);
  RationalForm f = s.xi(0).inverse();
  std::vector<GaussianRational> x0{0, 0};
  std::vector<GaussianRational> good{2, 1}, bad{0, 1};
  EXPECT_EQ(f.evaluate(x0, good), GaussianRational::ratio(1, 2));
  EXPECT_EQ(error_code([&] { f.evaluate(x0, bad); }), Errc::PoleAtXi);
}

TEST(Compose, XiAfterX) {
  Space s(1, 4);
  ClassicalSymbol a = scalar(1, {s.xi(0)});
  ClassicalSymbol b = scalar(0, {s.x(0)});
  ClassicalSymbol c = compose(a, b, 2);
  EXPECT_EQ(c.order, 1);
  EXPECT_TRUE(equivalent(c.terms[0].entries[0][0], s.x(0) * s.xi(0)));
  EXPECT_TRUE(equivalent(c.terms[1].entries[0][0], s.c(-I)));
}

TEST(Compose, IdentityAndPrincipalProduct) {
  Space s(2, 3);
  ClassicalSymbol id = make_symbol(0, {detail::identity_matrix(s.sp, 3, 2)});
  ClassicalSymbol c = compose(id, id, 3);
  EXPECT_TRUE(agree(c, id));

  SymbolMatrix a1{{s.xi(0), s.x(1) * s.xi(1)}, {s.zero(), s.xi(1)}};
  SymbolMatrix b1{{s.xi(1), s.zero()}, {s.x(0) * s.xi(0), s.xi(0)}};
  ClassicalSymbol a = make_symbol(1, {a1}), b = make_symbol(1, {b1});
  ClassicalSymbol ab = compose(a, b, 1);
  SymbolMatrix expected = detail::mat_mul(a1, b1);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_TRUE(equivalent(ab.terms[0].entries[i][j], expected[i][j]));
}

TEST(Compose, Errors) {
  Space s(1, 3);
  ClassicalSymbol a = scalar(1, {s.xi(0)});
  ClassicalSymbol two = make_symbol(0, {detail::identity_matrix(s.sp, 3, 2)});
  EXPECT_EQ(error_code([&] { compose(a, two, 1); }), Errc::SizeMismatch);
  ClassicalSymbol shallow = compose(a, a, 1);
  EXPECT_EQ(error_code([&] { compose(shallow, a, 2); }), Errc::DepthExceeded);
}

// Apply Op(a) u = sum a_mu(x) D^mu u, D = -i d/dx, to a polynomial u.
Jet apply_operator(const ClassicalSymbol& a, const Jet& u) {
  Jet out(u.vars_ptr(), u.order());
  for (const auto& t : a.terms) {
    const RationalForm& e = t.entries[0][0];
    EXPECT_TRUE(e.is_polynomial());
    for (const auto& [mu, coef] : e.numerator()) {
      Jet du = u;
      GaussianRational factor = 1;
      for (std::size_t k = 0; k < e.space()->dim(); ++k)
        for (int r = 0; r < mu[k]; ++r) {
          du = du.derive(k);
          factor *= -I;
        }
      out += factor * (coef * du);
    }
  }
  return out;
}

TEST(Compose, MatchesOperatorAction) {
  testing::Rng rng(17);
  for (int d = 1; d <= 2; ++d) {
    Space s(d, 12);
    for (int trial = 0; trial < 10; ++trial) {
      auto random_poly_symbol = [&](int m) {
        std::vector<RationalForm> terms;
        for (int deg = m; deg >= 0; --deg) {
          RationalForm t = s.zero();
          for (int r = 0; r < 2; ++r) {
            Monomial mu;
            for (int e = 0; e < deg; ++e) {
              auto k = static_cast<std::size_t>(rng.uniform(0, d - 1));
              mu.set(k, mu[k] + 1);
            }
            t = t + RationalForm::from_jet(s.sp, rng.jet(s.sp->x, 12, 2, 2), mu);
          }
          terms.push_back(t);
        }
        return scalar(m, terms);
      };
      ClassicalSymbol a = random_poly_symbol(rng.uniform(0, 2));
      ClassicalSymbol b = random_poly_symbol(rng.uniform(0, 2));
      ClassicalSymbol c = compose(a, b, a.order + b.order + 3);
      for (const auto& t : c.terms)
        if (t.degree < 0) {
          EXPECT_TRUE(t.is_zero());
        }
      Jet u = rng.jet(s.sp->x, 12, 4, 4);
      Jet lhs = apply_operator(a, apply_operator(b, u));
      Jet rhs = apply_operator(c, u);
      EXPECT_TRUE(agree(lhs, rhs));
      EXPECT_GE(lhs.order(), 6);
    }
  }
}

TEST(Compose, AssociativeThroughCommonDepth) {
  testing::Rng rng(23);
  Space s(2, 8);
  auto rnd = [&](int m) {
    std::vector<SymbolMatrix> mats;
    for (int j = 0; j < 2; ++j) {
      SymbolMatrix mat = detail::zero_matrix(s.sp, 8, 2);
      for (auto& row : mat)
        for (auto& e : row) {
          Monomial mu;
          for (int t = 0; t < m - j; ++t) {
            auto k = static_cast<std::size_t>(rng.uniform(0, 1));
            mu.set(k, mu[k] + 1);
          }
          e = RationalForm::from_jet(s.sp, rng.jet(s.sp->x, 8, 2, 2), mu);
        }
      mats.push_back(mat);
    }
    return make_symbol(m, mats);
  };
  for (int trial = 0; trial < 5; ++trial) {
    ClassicalSymbol a = rnd(1), b = rnd(1), c = rnd(2);
    EXPECT_TRUE(agree(compose(compose(a, b, 3), c, 3), compose(a, compose(b, c, 3), 3)));
  }
}

TEST(Ellipticity, Examples) {
  Space s(2, 3);
  ClassicalSymbol p = make_symbol(1, {SymbolMatrix{{s.xi(0), s.zero()}, {s.zero(), s.xi(1)}}});
  std::vector<GaussianRational> x0{0, 0};
  std::vector<GaussianRational> v11{1, 1}, v10{1, 0};
  EXPECT_TRUE(is_elliptic_at(p, x0, v11));
  EXPECT_FALSE(is_elliptic_at(p, x0, v10));
  EXPECT_TRUE(equivalent(char_determinant(p), s.xi(0) * s.xi(1)));

  Space s1(1, 3);
  ClassicalSymbol ixi = scalar(1, {s1.c(I) * s1.xi(0)});
  std::vector<GaussianRational> o{0}, v{3}, w{-1};
  EXPECT_TRUE(is_elliptic_at(ixi, o, v));
  EXPECT_TRUE(is_elliptic_at(ixi, o, w));
  EXPECT_TRUE(equivalent(char_determinant(ixi), s1.c(I) * s1.xi(0)));

  ClassicalSymbol pole = scalar(-1, {s.xi(0).inverse()});
  EXPECT_EQ(error_code([&] { is_elliptic_at(pole, x0, std::vector<GaussianRational>{0, 1}); }), Errc::PoleAtXi);
}

TEST(Parametrix, Examples) {
  Space s(1, 4);
  ClassicalSymbol p = scalar(1, {s.c(I) * s.xi(0)});
  ClassicalSymbol q = parametrix(p, 3);
  EXPECT_TRUE(equivalent(q.terms[0].entries[0][0], (s.c(I) * s.xi(0)).inverse()));
  EXPECT_TRUE(q.terms[1].is_zero());
  EXPECT_TRUE(q.terms[2].is_zero());
  ClassicalSymbol qp = compose(q, p, 3);
  EXPECT_TRUE((qp.terms[0].entries[0][0] - s.c(1)).is_zero());
  EXPECT_TRUE(qp.terms[1].is_zero());
  EXPECT_TRUE(qp.terms[2].is_zero());

  ClassicalSymbol id = make_symbol(0, {detail::identity_matrix(s.sp, 4, 1)});
  EXPECT_TRUE(agree(parametrix(id, 2), id));

  // p = xi + x: q_{-1} = 1/xi, q_{-2} = -x/xi^2
  ClassicalSymbol p2 = scalar(1, {s.xi(0), s.x(0)});
  ClassicalSymbol q2 = parametrix(p2, 2);
  EXPECT_TRUE(equivalent(q2.terms[1].entries[0][0] * s.xi(0) * s.xi(0), -s.x(0)));
}

TEST(Parametrix, Errors) {
  Space s(2, 3);
  ClassicalSymbol mixed = scalar(1, {(s.c(1) + s.x(0)) * s.xi(0) + s.xi(1)});
  EXPECT_EQ(error_code([&] { parametrix(mixed, 2); }), Errc::NotElliptic);
  ClassicalSymbol p = scalar(1, {s.xi(0)});
  EXPECT_EQ(error_code([&] { parametrix(compose(p, p, 1), 2); }), Errc::DepthExceeded);
}

TEST(ParametrixProperty, RemainderVanishesThroughDepth) {
  testing::Rng rng(99);
  Space s(2, 8);
  for (int trial = 0; trial < 5; ++trial) {
    ClassicalSymbol p = testing::random_elliptic_diagonal(rng, s.sp, 8);
    ClassicalSymbol q = parametrix(p, 3);
    ClassicalSymbol r = compose(q, p, 3);
    EXPECT_TRUE((r.terms[0].entries[0][0] - s.c(1)).is_zero());
    EXPECT_TRUE(r.terms[1].is_zero());
    EXPECT_TRUE(r.terms[2].is_zero());
    EXPECT_GE(r.terms[2].order(), 4);
    for (const auto& t : q.terms) EXPECT_TRUE(t.is_homogeneous());
  }
}

TEST(ParametrixProperty, LeftAndRightAgree) {
  testing::Rng rng(100);
  Space s(2, 8);
  for (int trial = 0; trial < 3; ++trial) {
    ClassicalSymbol p = testing::random_elliptic_diagonal(rng, s.sp, 8);
    EXPECT_TRUE(agree(parametrix(p, 3), right_parametrix(p, 3)));
  }
}

TEST(ParametrixProperty, NonDiagonalPrincipalPart) {
  Space s(2, 6);
  SymbolMatrix p1{{s.xi(0), s.x(1) * s.xi(1)}, {s.zero(), s.xi(1)}};
  SymbolMatrix p0{{s.x(0), s.zero()}, {s.c(1), s.x(1)}};
  ClassicalSymbol p = make_symbol(1, {p1, p0});
  ClassicalSymbol q = parametrix(p, 3);
  ClassicalSymbol r = compose(q, p, 3);
  EXPECT_TRUE(r.terms[1].is_zero());
  EXPECT_TRUE(r.terms[2].is_zero());
  EXPECT_TRUE(agree(q, right_parametrix(p, 3)));
}

TEST(CRSystemSymbol, FlatFrame) {
  CRFrame f = flat_frame(1, 4);
  ClassicalSymbol p = build_cr_system_symbol(f);
  ASSERT_EQ(p.nu, 2u);
  const SpacePtr& sp = p.space;
  RationalForm block = RationalForm::constant(sp, 3, GaussianRational::ratio(1, 2) * I) *
                       (RationalForm::xi(sp, 3, 0) + RationalForm::constant(sp, 3, I) * RationalForm::xi(sp, 3, 1));
  for (int i = 0; i < 2; ++i) EXPECT_TRUE(equivalent(p.principal().entries[i][i], block));
  EXPECT_TRUE(p.principal().entries[0][1].is_zero());
  EXPECT_TRUE(equivalent(char_determinant(p), block * block));
  EXPECT_TRUE(p.terms[1].is_zero());
}

TEST(CRSystemSymbol, SPowerFrameCouplingTerm) {
  testing::CR cr(1, 6);
  CRFrame f = build_s_power_frame(I * cr.z(), 1, 6);
  ClassicalSymbol p = build_cr_system_symbol(f);
  const SpacePtr& sp = p.space;
  Jet x = Jet::variable(sp->x, 5, 0), y = Jet::variable(sp->x, 5, 1), s = Jet::variable(sp->x, 5, 2);
  // -K row (1,1): -B^1_{1,1} = -i z, -B^1_{1,2} = 2 i s
  EXPECT_TRUE(equivalent(p.terms[1].entries[0][0], RationalForm::from_jet(sp, (-I) * (x + I * y))));
  EXPECT_TRUE(equivalent(p.terms[1].entries[0][1], RationalForm::from_jet(sp, gr(0, 2) * s)));
  EXPECT_TRUE(p.terms[1].entries[1][0].is_zero());
  EXPECT_TRUE(p.terms[1].entries[1][1].is_zero());
}

TEST(CRSystemSymbol, CharacteristicSetIsTheDsLine) {
  testing::CR cr(1, 5);
  testing::Rng rng(55);
  for (const CRFrame& f : {flat_frame(1, 5), build_hypersurface_frame(1, 1, cr.z() * cr.zb(), 5)}) {
    ClassicalSymbol p = build_cr_system_symbol(f);
    std::vector<GaussianRational> x0{0, 0, 0};
    for (long t : {1L, -2L, 5L}) EXPECT_FALSE(is_elliptic_at(p, x0, std::vector<GaussianRational>{0, 0, t}));
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<GaussianRational> xi{rng.small_rational(), rng.small_rational(), rng.small_rational()};
      if (xi[0].is_zero() && xi[1].is_zero()) xi[0] = 1;
      EXPECT_TRUE(is_elliptic_at(p, x0, xi));
    }
  }
}

}  // namespace
}  // namespace crmult
