#ifndef CHERN_SERIES_HPP
#define CHERN_SERIES_HPP

#include <stdexcept>
#include <vector>

#include "chern/endoform.hpp"
#include "chern/newton.hpp"

namespace chern {

// Total characteristic form 1 + s_1 + s_2 + ... on an n-fold, graded by even
// form degree 2l; components beyond 2n vanish by nilpotency.  Components of
// positive degree are built from curvature 2-forms and therefore commute.
template <class R>
class FormSeries {
 public:
  FormSeries() = default;
  explicit FormSeries(int n) : n_(n), comps_(n + 1, Form<R>(n)) {}

  static FormSeries one(int n) {
    FormSeries s(n);
    s.comps_[0] = Form<R>::scalar(n, ScalarOf<R>::from_int(1));
    return s;
  }

  int dim() const { return n_; }
  Form<R>& comp(int l) { return comps_.at(l); }
  const Form<R>& comp(int l) const { return comps_.at(l); }

  bool is_unit() const {
    return comps_[0] == Form<R>::scalar(n_, ScalarOf<R>::from_int(1));
  }

  FormSeries& operator+=(const FormSeries& o) {
    for (int l = 0; l <= n_; ++l) comps_[l] += o.comps_[l];
    return *this;
  }
  friend FormSeries operator+(FormSeries a, const FormSeries& b) { a += b; return a; }
  friend FormSeries operator-(FormSeries a, const FormSeries& b) {
    for (int l = 0; l <= a.n_; ++l) a.comps_[l] -= b.comps_[l];
    return a;
  }

  friend FormSeries operator*(const FormSeries& a, const FormSeries& b) {
    FormSeries r(a.n_);
    for (int l = 0; l <= a.n_; ++l)
      for (int i = 0; i <= l; ++i) r.comps_[l] += wedge(a.comps_[i], b.comps_[l - i]);
    return r;
  }

 private:
  int n_ = 0;
  std::vector<Form<R>> comps_;
};

// Neumann inversion of a unit series; exact on the nilpotent algebra.
template <class R>
FormSeries<R> invert_series(const FormSeries<R>& s) {
  if (!s.is_unit()) throw std::invalid_argument("invert_series: series has no unit part");
  int n = s.dim();
  FormSeries<R> a(n);  // positive-degree part
  for (int l = 1; l <= n; ++l) a.comp(l) = s.comp(l);
  FormSeries<R> r = FormSeries<R>::one(n);
  FormSeries<R> p = FormSeries<R>::one(n);
  for (int j = 1; j <= n; ++j) {
    FormSeries<R> q(n);
    for (int l = 1; l <= n; ++l)
      for (int i = 1; i <= l; ++i) q.comp(l) += wedge(a.comp(i), p.comp(l - i));
    // q = a * p truncated to positive degrees
    for (int l = 0; l <= n; ++l) q.comp(l) = -q.comp(l);
    p = q;
    r += p;
  }
  return r;
}

namespace detail {
template <class R>
void check_even(const FormMat<R>& m) {
  for (const auto& f : m.e)
    if (!f.is_pure_even())
      throw std::invalid_argument("char form: curvature block has odd-degree entries");
}
}  // namespace detail

// Chern form of one level: coefficients of det(I + scale * Theta t).
// Leibniz expansion for rank <= 4, trace/Newton route above that.
template <class R>
FormSeries<R> level_chern_form(const FormMat<R>& theta, int rank, const R& scale) {
  if (theta.rows != rank || theta.cols != rank)
    throw std::invalid_argument("level_chern_form: block is not rank x rank");
  detail::check_even(theta);
  int n = rank ? theta.e[0].dim() : 0;
  FormSeries<R> s = FormSeries<R>::one(n);
  int top = std::min(rank, n);
  if (rank <= 4) {
    // sum over principal minors, Leibniz expansion per minor
    std::vector<int> idx;
    for (int l = 1; l <= top; ++l) {
      Form<R> cl(n);
      std::vector<int> sel(l);
      // iterate l-subsets of {0..rank-1}
      for (int i = 0; i < l; ++i) sel[i] = i;
      for (;;) {
        // permanent-style Leibniz det over wedge of the minor
        std::vector<int> perm(l);
        for (int i = 0; i < l; ++i) perm[i] = i;
        do {
          int inv = 0;
          for (int i = 0; i < l; ++i)
            for (int j = i + 1; j < l; ++j)
              if (perm[i] > perm[j]) ++inv;
          Form<R> t = Form<R>::scalar(n, ScalarOf<R>::from_int((inv & 1) ? -1 : 1));
          for (int i = 0; i < l; ++i) t = wedge(t, theta.at(sel[i], sel[perm[i]]));
          cl += t;
        } while (std::next_permutation(perm.begin(), perm.end()));
        // next subset
        int i = l - 1;
        while (i >= 0 && sel[i] == rank - l + i) --i;
        if (i < 0) break;
        ++sel[i];
        for (int j = i + 1; j < l; ++j) sel[j] = sel[j - 1] + 1;
      }
      R f = ScalarOf<R>::from_int(1);
      for (int i = 0; i < l; ++i) f = f * scale;
      s.comp(l) = f * cl;
    }
    return s;
  }
  // power sums p_j = tr((scale Theta)^j), then e_l by Newton's identities
  FormMat<R> m(rank, rank, n);
  for (std::size_t i = 0; i < m.e.size(); ++i) m.e[i] = scale * theta.e[i];
  std::vector<Form<R>> p(top + 1, Form<R>(n));
  FormMat<R> pw = m;
  auto mat_tr = [&](const FormMat<R>& a) {
    Form<R> t(n);
    for (int i = 0; i < rank; ++i) t += a.at(i, i);
    return t;
  };
  auto mat_mul = [&](const FormMat<R>& a, const FormMat<R>& b) {
    FormMat<R> r(rank, rank, n);
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j)
        for (int k = 0; k < rank; ++k) r.at(i, j) += wedge(a.at(i, k), b.at(k, j));
    return r;
  };
  p[1] = mat_tr(pw);
  for (int j = 2; j <= top; ++j) {
    pw = mat_mul(pw, m);
    p[j] = mat_tr(pw);
  }
  // l e_l = sum_{i=1..l} (-1)^{i-1} e_{l-i} p_i
  for (int l = 1; l <= top; ++l) {
    Form<R> acc(n);
    for (int i = 1; i <= l; ++i) {
      Form<R> t = wedge(s.comp(l - i), p[i]);
      if ((i - 1) & 1) t = -t;
      acc += t;
    }
    s.comp(l) = ScalarOf<R>::from_ratio(1, l) * acc;
  }
  return s;
}

// Alternating product prod_k c(E_k, D_k)^{(-1)^k}.
template <class R>
FormSeries<R> total_chern(const std::vector<FormMat<R>>& curvatures, const std::vector<int>& ranks,
                          const R& scale) {
  if (curvatures.size() != ranks.size()) throw std::invalid_argument("total_chern: size mismatch");
  int n = 0;
  for (const auto& m : curvatures)
    if (!m.e.empty()) n = m.e[0].dim();
  FormSeries<R> r = FormSeries<R>::one(n);
  for (std::size_t k = 0; k < curvatures.size(); ++k) {
    FormSeries<R> ck = level_chern_form(curvatures[k], ranks[k], scale);
    r = (k & 1) ? r * invert_series(ck) : r * ck;
  }
  return r;
}

// p_l(E, D) = sum_k (-1)^k tr Theta_k^l, optionally with every curvature
// block first projected to bidegree (1,1).
template <class R>
Form<R> power_sum(const std::vector<FormMat<R>>& curvatures, int l, bool project11 = false) {
  if (l < 1) throw std::invalid_argument("power_sum: l must be >= 1");
  int n = 0;
  for (const auto& m : curvatures)
    if (!m.e.empty()) n = m.e[0].dim();
  Form<R> acc(n);
  for (std::size_t k = 0; k < curvatures.size(); ++k) {
    const FormMat<R>& src = curvatures[k];
    int r = src.rows;
    if (r == 0) continue;
    detail::check_even(src);
    FormMat<R> m = src;
    if (project11)
      for (auto& f : m.e) f = f.project(1, 1);
    FormMat<R> pw = m;
    for (int j = 1; j < l; ++j) {
      FormMat<R> nx(r, r, n);
      for (int i = 0; i < r; ++i)
        for (int jj = 0; jj < r; ++jj)
          for (int t = 0; t < r; ++t) nx.at(i, jj) += wedge(pw.at(i, t), m.at(t, jj));
      pw = nx;
    }
    Form<R> tr(n);
    for (int i = 0; i < r; ++i) tr += pw.at(i, i);
    if (k & 1) tr = -tr;
    acc += tr;
  }
  return acc;
}

// Evaluate a Hirzebruch-Newton style polynomial on series components
// (t_j := comp(j), weighted degree tracked by the table).
template <class R>
Form<R> eval_tpoly(const TPoly& p, const FormSeries<R>& s) {
  int n = s.dim();
  Form<R> acc(n);
  for (const auto& [mono, coef] : p.terms) {
    // components beyond the nilpotency cap are absent, i.e. zero
    bool truncated = false;
    for (std::size_t j = 0; j < mono.size(); ++j)
      if (mono[j] > 0 && int(j) + 1 > n) truncated = true;
    if (truncated) continue;
    Form<R> t = Form<R>::scalar(n, from_rat<R>(coef));
    for (std::size_t j = 0; j < mono.size(); ++j)
      for (int rep = 0; rep < mono[j]; ++rep) t = wedge(t, s.comp(int(j) + 1));
    acc += t;
  }
  return acc;
}

// ch_l from a total Chern series; exact through the nilpotency degree.
template <class R>
FormSeries<R> c_to_ch(const FormSeries<R>& c, const NewtonTable& table) {
  int n = c.dim();
  FormSeries<R> ch(n);
  for (int l = 1; l <= n; ++l) ch.comp(l) = eval_tpoly(table.ch_from_c(l), c);
  return ch;
}

template <class R>
FormSeries<R> ch_to_c(const FormSeries<R>& ch, const NewtonTable& table) {
  int n = ch.dim();
  FormSeries<R> c = FormSeries<R>::one(n);
  for (int l = 1; l <= n; ++l) c.comp(l) = eval_tpoly(table.c_from_ch(l), ch);
  return c;
}

}  // namespace chern

#endif
