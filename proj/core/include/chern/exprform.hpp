#ifndef CHERN_EXPRFORM_HPP
#define CHERN_EXPRFORM_HPP

#include <array>
#include <boost/container/small_vector.hpp>
#include <complex>

#include "chern/chartexpr.hpp"
#include "chern/forms.hpp"
#include "chern/endoform.hpp"

namespace chern {

// Forms and form matrices with exact chart-expression coefficients, with the
// Wirtinger exterior operators and fast compiled evaluation for the
// quadrature path.

using FormX = Form<ChartExpr>;
using FormMatX = FormMat<ChartExpr>;

inline FormX partial_form(const FormX& f, ChartExpr::Dir dir) {
  int n = f.dim();
  FormX r(n);
  f.for_each([&](Mask I, Mask J, const ChartExpr& c) {
    for (int i = 0; i < n; ++i) {
      ChartExpr dc = c.dim() == 0 ? ChartExpr(n) : c.partial(dir, i);
      if (dc.is_zero()) continue;
      Mask di = (dir == ChartExpr::Dir::Holomorphic) ? Mask(1) << i : 0;
      Mask dj = (dir == ChartExpr::Dir::Antiholomorphic) ? Mask(1) << i : 0;
      if ((I & di) || (J & dj)) continue;
      int s = wedge_sign(di, dj, I, J);
      if (s < 0) dc = -dc;
      r.coeff(I | di, J | dj) += dc;
    }
  });
  return r;
}

inline FormX d_form(const FormX& f) {
  return partial_form(f, ChartExpr::Dir::Holomorphic) + partial_form(f, ChartExpr::Dir::Antiholomorphic);
}

inline FormMatX d_form(const FormMatX& m) {
  FormMatX r = m;
  for (auto& f : r.e) f = d_form(f);
  return r;
}

template <class S>
Form<S> eval_form(const FormX& f, const std::vector<S>& point) {
  Form<S> r(f.dim());
  f.for_each([&](Mask I, Mask J, const ChartExpr& c) { r.coeff(I, J) = c.eval(point); });
  return r;
}

template <class S>
FormMat<S> eval_form(const FormMatX& m, const std::vector<S>& point) {
  int n = m.e.empty() ? 0 : m.e[0].dim();
  FormMat<S> r(m.rows, m.cols, n);
  for (std::size_t i = 0; i < m.e.size(); ++i) r.e[i] = eval_form(m.e[i], point);
  return r;
}

// (1,0) or (0,1) matrix-valued form from per-direction coefficient matrices.
inline FormMatX one_form(const std::vector<ExprMatrix>& per_dir, ChartExpr::Dir dir, int n) {
  int rows = per_dir.empty() ? 0 : per_dir[0].rows;
  int cols = per_dir.empty() ? 0 : per_dir[0].cols;
  FormMatX r(rows, cols, n);
  for (int i = 0; i < n; ++i) {
    Mask di = (dir == ChartExpr::Dir::Holomorphic) ? Mask(1) << i : 0;
    Mask dj = (dir == ChartExpr::Dir::Antiholomorphic) ? Mask(1) << i : 0;
    for (int a = 0; a < rows; ++a)
      for (int b = 0; b < cols; ++b) r.at(a, b).coeff(di, dj) += per_dir[i].at(a, b);
  }
  return r;
}

inline FormMatX zero_form_mat(const ExprMatrix& m, int n) {
  FormMatX r(m.rows, m.cols, n);
  for (int a = 0; a < m.rows; ++a)
    for (int b = 0; b < m.cols; ++b) r.at(a, b).coeff(0, 0) = m.at(a, b);
  return r;
}

// Plain matrix product with wedge entries (single-level connection blocks;
// no super signs at this layer).
inline FormMatX mat_wedge(const FormMatX& a, const FormMatX& b) {
  int n = a.e.empty() ? 0 : a.e[0].dim();
  FormMatX r(a.rows, b.cols, n);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < b.cols; ++j)
      for (int k = 0; k < a.cols; ++k) r.at(i, j) += wedge(a.at(i, k), b.at(k, j));
  return r;
}

// ------- compiled evaluation -------

using Cplx = std::complex<double>;

constexpr int kFlatMaxVars = 12;

struct PowTable {
  int nslots = 0;
  int maxdeg = 0;
  boost::container::small_vector<Cplx, 64> v;  // (slot, degree) -> value

  void init(const std::vector<Cplx>& point, int max_degree);
  const Cplx& at(int slot, int deg) const { return v[std::size_t(slot) * (maxdeg + 1) + deg]; }
};

struct FlatPoly {
  struct Term {
    Cplx c;
    std::array<std::uint8_t, kFlatMaxVars> e;
    std::uint8_t nnz = 0;                              // number of active slots
    std::array<std::uint8_t, kFlatMaxVars> slots{};    // active slot list
  };
  std::vector<Term> terms;
  bool is_one = false;

  Cplx eval(const PowTable& t) const {
    Cplx acc(0, 0);
    for (const auto& term : terms) {
      Cplx x = term.c;
      for (int s = 0; s < term.nnz; ++s) x *= t.at(term.slots[s], term.e[term.slots[s]]);
      acc += x;
    }
    return acc;
  }
};

struct FlatExpr {
  FlatPoly num, den;
  Cplx eval(const PowTable& t) const {
    Cplx n = num.eval(t);
    if (den.is_one) return n;
    return n / den.eval(t);
  }
};

FlatPoly flatten(const Poly& p, int& maxdeg);
FlatExpr flatten(const ChartExpr& e, int& maxdeg);

struct FlatForm {
  int n = 0;
  std::vector<std::pair<std::uint32_t, FlatExpr>> entries;  // coeff table index -> expr

  FormC eval(const PowTable& t) const {
    FormC f(n);
    for (const auto& [idx, ex] : entries) f.coeff_at(idx) += ex.eval(t);
    return f;
  }
};

FlatForm flatten(const FormX& f, int& maxdeg);

struct FlatFormMat {
  int rows = 0, cols = 0, n = 0;
  std::vector<FlatForm> e;

  FormMat<Cplx> eval(const PowTable& t) const {
    FormMat<Cplx> m(rows, cols, n);
    for (std::size_t i = 0; i < e.size(); ++i) m.e[i] = e[i].eval(t);
    return m;
  }
};

FlatFormMat flatten(const FormMatX& m, int& maxdeg);

struct FlatExprMat {
  int rows = 0, cols = 0;
  std::vector<FlatExpr> e;

  void eval(const PowTable& t, std::vector<Cplx>& out) const {
    out.resize(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) out[i] = e[i].eval(t);
  }
};

FlatExprMat flatten(const ExprMatrix& m, int& maxdeg);

}  // namespace chern

#endif
