#ifndef CHERN_FORMS_HPP
#define CHERN_FORMS_HPP

#include <bit>
#include <boost/container/small_vector.hpp>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "chern/rational.hpp"

namespace chern {

// Pointwise exterior algebra on a chart of complex dimension n.
//
// A Form stores the coefficients of dz^I ^ dzbar^J for strictly increasing
// multi-indices I, J <= {1..n}, encoded as bitmasks.  Canonical coefficient
// order puts all dz factors before all dzbar factors; all reordering signs
// are applied when terms are combined.  Convention fixed once for the whole
// project: d = dd' + ddbar'' acts from the left.

using Mask = std::uint32_t;

inline int mask_count(Mask m) { return std::popcount(m); }

// Sign of merging sorted index set K after sorted index set I (disjoint):
// (-1)^{# pairs (i in I, k in K) with k < i}.
inline int merge_sign(Mask i_mask, Mask k_mask) {
  int inv = 0;
  Mask k = k_mask;
  while (k) {
    int b = std::countr_zero(k);
    inv += std::popcount(i_mask >> (b + 1));
    k &= k - 1;
  }
  return (inv & 1) ? -1 : 1;
}

template <class R>
class Form {
 public:
  Form() : n_(0), c_(1) {}
  explicit Form(int n) : n_(n), c_(std::size_t(1) << (2 * n)) {
    if (n < 0 || n > 6) throw std::invalid_argument("Form: chart dimension out of range");
  }

  static Form scalar(int n, R v) {
    Form f(n);
    f.c_[0] = std::move(v);
    return f;
  }
  static Form basis(int n, Mask dz, Mask dzbar, R v) {
    Form f(n);
    f.coeff(dz, dzbar) = std::move(v);
    return f;
  }

  int dim() const { return n_; }
  std::size_t table_size() const { return c_.size(); }

  R& coeff(Mask dz, Mask dzbar) { return c_[(std::size_t(dz) << n_) | dzbar]; }
  const R& coeff(Mask dz, Mask dzbar) const { return c_[(std::size_t(dz) << n_) | dzbar]; }
  R& coeff_at(std::size_t idx) { return c_[idx]; }
  const R& coeff_at(std::size_t idx) const { return c_[idx]; }
  static Mask idx_dz(std::size_t idx, int n) { return Mask(idx >> n); }
  static Mask idx_dzbar(std::size_t idx, int n) { return Mask(idx) & ((Mask(1) << n) - 1); }

  bool is_zero() const {
    for (const auto& v : c_)
      if (!ring_is_zero(v)) return false;
    return true;
  }

  Form& operator+=(const Form& o) {
    check_dim(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Form& operator-=(const Form& o) {
    check_dim(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += -o.c_[i];
    return *this;
  }
  friend Form operator+(Form a, const Form& b) { a += b; return a; }
  friend Form operator-(Form a, const Form& b) { a -= b; return a; }
  friend Form operator-(const Form& a) {
    Form r(a.n_);
    for (std::size_t i = 0; i < a.c_.size(); ++i) r.c_[i] = -a.c_[i];
    return r;
  }

  Form& scale(const R& s) {
    for (auto& v : c_) v = v * s;
    return *this;
  }
  friend Form operator*(const R& s, Form f) { return f.scale(s); }

  friend bool operator==(const Form& a, const Form& b) {
    if (a.n_ != b.n_) return false;
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      if (!ring_is_zero(a.c_[i] + -b.c_[i])) return false;
    return true;
  }

  template <class F>
  void for_each(F&& fn) const {
    int n = n_;
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (!ring_is_zero(c_[i])) fn(idx_dz(i, n), idx_dzbar(i, n), c_[i]);
  }

  Form project(int p, int q) const {
    Form r(n_);
    for_each([&](Mask I, Mask J, const R& v) {
      if (mask_count(I) == p && mask_count(J) == q) r.coeff(I, J) = v;
    });
    return r;
  }

  Form degree_part(int d) const {
    Form r(n_);
    for_each([&](Mask I, Mask J, const R& v) {
      if (mask_count(I) + mask_count(J) == d) r.coeff(I, J) = v;
    });
    return r;
  }

  // Parity split of the form degree; used by super-Leibniz rules.
  Form parity_part(int parity) const {
    Form r(n_);
    for_each([&](Mask I, Mask J, const R& v) {
      if (((mask_count(I) + mask_count(J)) & 1) == parity) r.coeff(I, J) = v;
    });
    return r;
  }

  bool is_pure_even() const {
    bool even = true;
    for_each([&](Mask I, Mask J, const R&) {
      if ((mask_count(I) + mask_count(J)) & 1) even = false;
    });
    return even;
  }

  int max_degree() const {
    int d = -1;
    for_each([&](Mask I, Mask J, const R&) {
      int t = mask_count(I) + mask_count(J);
      if (t > d) d = t;
    });
    return d;
  }

  Form conjugated() const {
    Form r(n_);
    for_each([&](Mask I, Mask J, const R& v) {
      // conj(dz^I ^ dzbar^J) = dzbar^I ^ dz^J; reorder to canonical.
      int s = ((mask_count(I) * mask_count(J)) & 1) ? -1 : 1;
      R w = ring_conj(v);
      if (s < 0) w = -w;
      r.coeff(J, I) += w;
    });
    return r;
  }

 private:
  void check_dim(const Form& o) const {
    if (n_ != o.n_) throw std::invalid_argument("Form: chart dimension mismatch");
  }
  int n_;
  boost::container::small_vector<R, 16> c_;
};

// Wedge sign of (dz^I ^ dzbar^J) ^ (dz^K ^ dzbar^L), zero-overlap assumed.
inline int wedge_sign(Mask I, Mask J, Mask K, Mask L) {
  int s = ((mask_count(J) * mask_count(K)) & 1) ? -1 : 1;
  return s * merge_sign(I, K) * merge_sign(J, L);
}

template <class R>
Form<R> wedge(const Form<R>& a, const Form<R>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("wedge: chart dimension mismatch");
  Form<R> r(a.dim());
  a.for_each([&](Mask I, Mask J, const R& va) {
    b.for_each([&](Mask K, Mask L, const R& vb) {
      if ((I & K) || (J & L)) return;
      int s = wedge_sign(I, J, K, L);
      R term = va * vb;
      if (s < 0) term = -term;
      r.coeff(I | K, J | L) += term;
    });
  });
  return r;
}

// k-fold wedge power (entries of even degree commute, but this is valid for
// any form).
template <class R>
Form<R> wedge_pow(const Form<R>& a, int k) {
  Form<R> r = Form<R>::scalar(a.dim(), ScalarOf<R>::from_int(1));
  for (int i = 0; i < k; ++i) r = wedge(r, a);
  return r;
}

using FormC = Form<std::complex<double>>;
using FormQ = Form<CRat>;

inline double abs_max(const FormC& f) {
  double m = 0;
  f.for_each([&](Mask, Mask, const std::complex<double>& v) { m = std::max(m, std::abs(v)); });
  return m;
}

}  // namespace chern

#endif
