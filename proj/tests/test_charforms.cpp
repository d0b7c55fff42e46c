#include <doctest.h>

#include <random>

#include "chern/chartexpr.hpp"
#include "chern/newton.hpp"
#include "chern/series.hpp"

using namespace chern;

namespace {

// Symmetric-polynomial workspace in r formal variables, reusing the sparse
// Poly type (conjugate slots stay unused).
Poly elementary(int r, int l) {
  // e_l(x_1..x_r)
  Poly acc = Poly::constant(2 * r, CRat(1));
  // prod (1 + x_i t), tracked as vector of t-coefficients
  std::vector<Poly> coeffs{Poly::constant(2 * r, CRat(1))};
  for (int i = 0; i < r; ++i) {
    std::vector<Poly> next(coeffs.size() + 1, Poly(2 * r));
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      next[j] = next[j] + coeffs[j];
      next[j + 1] = next[j + 1] + coeffs[j] * Poly::variable(2 * r, i);
    }
    coeffs = std::move(next);
  }
  if (l >= int(coeffs.size())) return Poly(2 * r);
  return coeffs[l];
}

Poly powersum(int r, int l) {
  Poly p(2 * r);
  for (int i = 0; i < r; ++i) p = p + Poly::variable(2 * r, i).pow(l);
  return p;
}

Poly eval_tpoly_on_polys(const TPoly& q, const std::vector<Poly>& vals, int nvars) {
  Poly acc(nvars);
  for (const auto& [mono, coef] : q.terms) {
    Poly t = Poly::constant(nvars, CRat(coef));
    for (std::size_t j = 0; j < mono.size(); ++j)
      for (int rep = 0; rep < mono[j]; ++rep) t = t * vals[j];
    acc = acc + t;
  }
  return acc;
}

FormQ random_even_form(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> coef(-3, 3);
  FormQ f(n);
  for (std::size_t idx = 0; idx < f.table_size(); ++idx) {
    Mask I = FormQ::idx_dz(idx, n), J = FormQ::idx_dzbar(idx, n);
    int d = mask_count(I) + mask_count(J);
    if (d % 2 == 0 && d <= 2) f.coeff(I, J) = CRat(coef(rng), coef(rng));
  }
  return f;
}

}  // namespace

TEST_CASE("Newton table: first polynomials") {
  NewtonTable tab(4);
  CHECK(tab.Q(1).str() == "t1");
  CHECK(tab.Q(2).str() == "t1^2 - 2*t2");
  CHECK(tab.Q(3).str() == "t1^3 - 3*t1*t2 + 3*t3");
}

TEST_CASE("Newton polynomials against brute-force symmetric expansion, 8 variables") {
  const int r = 8, L = 8;
  NewtonTable tab(L);
  std::vector<Poly> evals(L);
  for (int j = 1; j <= L; ++j) evals[j - 1] = elementary(r, j);
  for (int l = 1; l <= L; ++l) {
    Poly composed = eval_tpoly_on_polys(tab.Q(l), evals, 2 * r);
    CHECK(composed == powersum(r, l));
  }
}

TEST_CASE("Q3 via brute force in 6 variables") {
  const int r = 6;
  NewtonTable tab(3);
  std::vector<Poly> evals{elementary(r, 1), elementary(r, 2), elementary(r, 3)};
  CHECK(eval_tpoly_on_polys(tab.Q(3), evals, 2 * r) == powersum(r, 3));
}

TEST_CASE("weighted homogeneity of Q, Qtilde, Qhat through degree 8") {
  NewtonTable tab(8);
  for (int l = 1; l <= 8; ++l) {
    CHECK(tab.Q(l).weighted_homogeneous(l));
    CHECK((tab.Qtilde(l).is_zero() || tab.Qtilde(l).weighted_homogeneous(l)));
    CHECK((tab.Qhat(l).is_zero() || tab.Qhat(l).weighted_homogeneous(l)));
    CHECK(tab.ch_from_c(l).weighted_homogeneous(l));
    CHECK(tab.c_from_ch(l).weighted_homogeneous(l));
  }
}

TEST_CASE("c <-> ch conversion tables invert each other exactly through degree 8") {
  const int L = 8;
  NewtonTable tab(L);
  for (int l = 1; l <= L; ++l) {
    std::vector<TPoly> subs(L);
    for (int j = 1; j <= L; ++j) subs[j - 1] = tab.ch_from_c(j);
    TPoly round = tab.c_from_ch(l).compose(subs);
    CHECK((round - TPoly::var(l, L)).is_zero());
    for (int j = 1; j <= L; ++j) subs[j - 1] = tab.c_from_ch(j);
    TPoly round2 = tab.ch_from_c(l).compose(subs);
    CHECK((round2 - TPoly::var(l, L)).is_zero());
  }
}

TEST_CASE("ch1 and ch2 closed forms") {
  NewtonTable tab(2);
  CHECK((tab.ch_from_c(1) - TPoly::var(1, 2)).is_zero());
  // ch2 = (c1^2 - 2 c2)/2
  TPoly expect = (TPoly::var(1, 2) * TPoly::var(1, 2) - TPoly::var(2, 2).scaled(2)).scaled(Rat(1, 2));
  CHECK((tab.ch_from_c(2) - expect).is_zero());
}

TEST_CASE("series inversion on the nilpotent algebra") {
  int n = 2;
  FormSeries<CRat> one = FormSeries<CRat>::one(n);
  CHECK((invert_series(one) - one).comp(0).is_zero());

  // (1 + a)^{-1} = 1 - a + a^a for a 2-form on a 2-fold
  FormQ a(n);
  a.coeff(0b01, 0b01) = CRat(2);
  a.coeff(0b10, 0b10) = CRat::ratio(1, 3);
  FormSeries<CRat> s = FormSeries<CRat>::one(n);
  s.comp(1) = a;
  FormSeries<CRat> inv = invert_series(s);
  CHECK(inv.comp(1) == -a);
  CHECK(inv.comp(2) == wedge(a, a));

  std::mt19937_64 rng(2024);
  for (int it = 0; it < 10; ++it) {
    FormSeries<CRat> u = FormSeries<CRat>::one(n);
    for (int l = 1; l <= n; ++l) u.comp(l) = random_even_form(rng, n).degree_part(2 * l);
    FormSeries<CRat> ui = invert_series(u);
    FormSeries<CRat> prod = u * ui;
    CHECK(prod.comp(0) == FormQ::scalar(n, CRat(1)));
    for (int l = 1; l <= n; ++l) CHECK(prod.comp(l).is_zero());
    // double inversion is the identity
    FormSeries<CRat> uii = invert_series(ui);
    for (int l = 0; l <= n; ++l) CHECK(uii.comp(l) == u.comp(l));
  }
}

TEST_CASE("level Chern form: basic shapes") {
  int n = 2;
  // zero curvature
  FormMat<CRat> z(1, 1, n);
  FormSeries<CRat> s = level_chern_form(z, 1, CRat(1));
  CHECK(s.comp(0) == FormQ::scalar(n, CRat(1)));
  CHECK(s.comp(1).is_zero());

  // rank 1: c1 = scale * lambda dz^dzbar
  FormMat<CRat> t(1, 1, n);
  t.at(0, 0) = FormQ::basis(n, 0b01, 0b01, CRat(3));
  CHECK(level_chern_form(t, 1, CRat::ratio(1, 2)).comp(1) == FormQ::basis(n, 0b01, 0b01, CRat::ratio(3, 2)));

  // rank 2 diagonal: c2 = scale^2 A^B
  FormMat<CRat> d(2, 2, n);
  FormQ A = FormQ::basis(n, 0b01, 0b01, CRat(2));
  FormQ B = FormQ::basis(n, 0b10, 0b10, CRat(5));
  d.at(0, 0) = A;
  d.at(1, 1) = B;
  FormSeries<CRat> sd = level_chern_form(d, 2, CRat::ratio(1, 7));
  CHECK(sd.comp(2) == CRat::ratio(1, 49) * wedge(A, B));
  CHECK(sd.comp(1) == CRat::ratio(1, 7) * (A + B));
}

TEST_CASE("det-trace consistency: Newton identities on curvature blocks") {
  std::mt19937_64 rng(5150);
  int n = 3, r = 3;
  NewtonTable tab(4);
  for (int it = 0; it < 6; ++it) {
    FormMat<CRat> m(r, r, n);
    for (auto& f : m.e) f = random_even_form(rng, n).degree_part(2);
    FormSeries<CRat> c = level_chern_form(m, r, CRat(1));
    // p_l = tr(M^l) computed directly
    auto mat_mul = [&](const FormMat<CRat>& a, const FormMat<CRat>& b) {
      FormMat<CRat> out(r, r, n);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
          for (int k = 0; k < r; ++k) out.at(i, j) += wedge(a.at(i, k), b.at(k, j));
      return out;
    };
    FormMat<CRat> pw = m;
    for (int l = 1; l <= 4; ++l) {
      FormQ tr(n);
      for (int i = 0; i < r; ++i) tr += pw.at(i, i);
      FormQ viaQ = eval_tpoly(tab.Q(l), c);
      CHECK(tr == viaQ);
      if (l < 4) pw = mat_mul(pw, m);
    }
  }
}

TEST_CASE("block-sum multiplicativity crosses the Leibniz and Newton routes") {
  std::mt19937_64 rng(616);
  int n = 2;
  // A rank-2 and rank-3 block with pure degree-2 even entries
  auto pure2 = [&](int rows) {
    FormMat<CRat> m(rows, rows, n);
    for (auto& f : m.e) f = random_even_form(rng, n).degree_part(2);
    return m;
  };
  FormMat<CRat> A = pure2(2), B = pure2(3);
  FormMat<CRat> AB(5, 5, n);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) AB.at(i, j) = A.at(i, j);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) AB.at(2 + i, 2 + j) = B.at(i, j);
  FormSeries<CRat> whole = level_chern_form(AB, 5, CRat(1));   // Newton route
  FormSeries<CRat> parts = level_chern_form(A, 2, CRat(1)) * level_chern_form(B, 3, CRat(1));
  for (int l = 0; l <= n; ++l) CHECK(whole.comp(l) == parts.comp(l));
}

TEST_CASE("power sums over a graded complex") {
  int n = 2;
  std::vector<FormMat<CRat>> thetas;
  thetas.emplace_back(1, 1, n);
  CHECK(power_sum(thetas, 1).is_zero());

  // single rank-1 level: p2 = A^A
  FormQ A(n);
  A.coeff(0b01, 0b01) = CRat(1);
  A.coeff(0b10, 0b10) = CRat(4);
  thetas[0].at(0, 0) = A;
  CHECK(power_sum(thetas, 2) == wedge(A, A));

  // alternating sign on levels
  std::vector<FormMat<CRat>> two = thetas;
  two.emplace_back(1, 1, n);
  two[1].at(0, 0) = A;
  CHECK(power_sum(two, 1).is_zero());
}

TEST_CASE("formal log of the series reproduces the Newton conversion") {
  std::mt19937_64 rng(90210);
  int n = 2;
  NewtonTable tab(n);
  for (int it = 0; it < 8; ++it) {
    FormSeries<CRat> u = FormSeries<CRat>::one(n);
    for (int l = 1; l <= n; ++l) u.comp(l) = random_even_form(rng, n).degree_part(2 * l);
    // ln(u) truncated on the nilpotent algebra
    FormSeries<CRat> a(n);
    for (int l = 1; l <= n; ++l) a.comp(l) = u.comp(l);
    FormSeries<CRat> logu(n), p = a;
    for (int j = 1; j <= n; ++j) {
      FormSeries<CRat> term(n);
      for (int l = 0; l <= n; ++l)
        term.comp(l) = ScalarOf<CRat>::from_ratio((j & 1) ? 1 : -1, j) * p.comp(l);
      logu += term;
      // p <- p * a (positive-degree shifts only)
      FormSeries<CRat> np(n);
      for (int l = 1; l <= n; ++l)
        for (int i = 1; i < l; ++i) np.comp(l) += wedge(p.comp(i), a.comp(l - i));
      p = np;
    }
    FormSeries<CRat> ch = c_to_ch(u, tab);
    for (int l = 1; l <= n; ++l) {
      // ln(c)_l = (-1)^{l-1} (l-1)! ch_l
      Rat f = 1;
      for (int i = 2; i < l + 1 - 1; ++i) f *= i;
      // (l-1)!
      Rat fact = 1;
      for (int i = 2; i <= l - 1; ++i) fact *= i;
      CRat scale = CRat(((l - 1) & 1) ? -fact : fact);
      CHECK(logu.comp(l) == scale * ch.comp(l));
    }
    // and the round trip on values
    FormSeries<CRat> back = ch_to_c(ch, tab);
    for (int l = 1; l <= n; ++l) CHECK(back.comp(l) == u.comp(l));
  }
}

TEST_CASE("projective resolution Chern classes by pure series algebra") {
  // ranks (1,2,1) with c(E_0)=1, c(E_1)=1-(k+l+m)w+k(l+m)w^2, c(E_2)=1-(k+l)w;
  // the alternating product has degree parts m*w and (m^2+l(m-k))w^2.
  int n = 2;
  for (auto [k, l, m] : {std::tuple<int, int, int>{3, 1, 1}, {4, 2, 1}, {5, 2, 3}}) {
    FormQ w = FormQ::basis(n, 0b01, 0b01, CRat(1));  // formal hyperplane form
    FormSeries<CRat> c0 = FormSeries<CRat>::one(n);
    FormSeries<CRat> c1 = FormSeries<CRat>::one(n);
    c1.comp(1) = CRat(-(k + l + m)) * w;
    c1.comp(2) = CRat(k * (l + m)) * wedge(w, w);
    FormSeries<CRat> c2 = FormSeries<CRat>::one(n);
    c2.comp(1) = CRat(-(k + l)) * w;
    FormSeries<CRat> total = c0 * invert_series(c1) * c2;
    CHECK(total.comp(1) == CRat(m) * w);
    CHECK(total.comp(2) == CRat(m * m + l * (m - k)) * wedge(w, w));
  }
}
