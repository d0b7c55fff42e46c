#ifndef CHERN_ENDOFORM_HPP
#define CHERN_ENDOFORM_HPP

#include <boost/container/flat_map.hpp>
#include <boost/container/small_vector.hpp>
#include <stdexcept>
#include <utility>
#include <vector>

#include "chern/forms.hpp"

namespace chern {

// Form-valued endomorphisms of a graded bundle E = E_0 + ... + E_N with the
// Z_2 superstructure of the grading.  A block (k,l) is a matrix of Forms
// representing a Hom(E_l, E_k)-valued form; its endomorphism degree is k-l.
//
// Composition, trace and the induced connection all carry the super signs;
// every juxtaposition of operators in this project is the super product
// implemented here, never the plain matrix product.

template <class R>
struct FormMat {
  int rows = 0, cols = 0;
  boost::container::small_vector<Form<R>, 4> e;

  FormMat() = default;
  FormMat(int r, int c, int n) : rows(r), cols(c), e(std::size_t(r) * c, Form<R>(n)) {}
  Form<R>& at(int i, int j) { return e[std::size_t(i) * cols + j]; }
  const Form<R>& at(int i, int j) const { return e[std::size_t(i) * cols + j]; }

  friend FormMat operator+(FormMat a, const FormMat& b) {
    for (std::size_t i = 0; i < a.e.size(); ++i) a.e[i] += b.e[i];
    return a;
  }
  friend FormMat operator-(FormMat a, const FormMat& b) {
    for (std::size_t i = 0; i < a.e.size(); ++i) a.e[i] -= b.e[i];
    return a;
  }
};

template <class R>
class EndoForm {
 public:
  EndoForm() = default;
  EndoForm(std::vector<int> ranks, int n) : ranks_(std::move(ranks)), n_(n) {}

  static EndoForm identity(const std::vector<int>& ranks, int n) {
    EndoForm a(ranks, n);
    for (int k = 0; k < int(ranks.size()); ++k) {
      auto& b = a.block(k, k);
      for (int i = 0; i < ranks[k]; ++i) b.at(i, i) = Form<R>::scalar(n, ScalarOf<R>::from_int(1));
    }
    return a;
  }

  int levels() const { return int(ranks_.size()); }
  int rank(int k) const { return ranks_.at(k); }
  const std::vector<int>& ranks() const { return ranks_; }
  int dim() const { return n_; }

  bool has_block(int k, int l) const { return blocks_.count({k, l}) != 0; }

  FormMat<R>& block(int k, int l) {
    auto it = blocks_.find({k, l});
    if (it == blocks_.end()) {
      check_level(k); check_level(l);
      it = blocks_.emplace(std::make_pair(k, l), FormMat<R>(ranks_[k], ranks_[l], n_)).first;
    }
    return it->second;
  }
  const FormMat<R>& block(int k, int l) const {
    static const FormMat<R> empty;
    auto it = blocks_.find({k, l});
    return it == blocks_.end() ? empty : it->second;
  }

  template <class F>
  void for_each_block(F&& fn) const {
    for (const auto& [kl, m] : blocks_) fn(kl.first, kl.second, m);
  }

  EndoForm& operator+=(const EndoForm& o) {
    o.for_each_block([&](int k, int l, const FormMat<R>& m) {
      auto& b = block(k, l);
      for (std::size_t i = 0; i < m.e.size(); ++i) b.e[i] += m.e[i];
    });
    return *this;
  }
  EndoForm& operator-=(const EndoForm& o) {
    o.for_each_block([&](int k, int l, const FormMat<R>& m) {
      auto& b = block(k, l);
      for (std::size_t i = 0; i < m.e.size(); ++i) b.e[i] -= m.e[i];
    });
    return *this;
  }
  friend EndoForm operator+(EndoForm a, const EndoForm& b) { a += b; return a; }
  friend EndoForm operator-(EndoForm a, const EndoForm& b) { a -= b; return a; }
  friend EndoForm operator-(const EndoForm& a) {
    EndoForm r(a.ranks_, a.n_);
    a.for_each_block([&](int k, int l, const FormMat<R>& m) {
      auto& b = r.block(k, l);
      for (std::size_t i = 0; i < m.e.size(); ++i) b.e[i] = -m.e[i];
    });
    return r;
  }

  EndoForm& scale(const R& s) {
    for (auto& [kl, m] : blocks_) for (auto& f : m.e) f.scale(s);
    return *this;
  }
  friend EndoForm operator*(const R& s, EndoForm a) { return a.scale(s); }

  // Select terms by parity of the total degree (form degree + endo degree).
  EndoForm parity_part(int parity) const {
    EndoForm r(ranks_, n_);
    for_each_block([&](int k, int l, const FormMat<R>& m) {
      int ep = (k - l) & 1;
      auto& b = r.block(k, l);
      for (std::size_t i = 0; i < m.e.size(); ++i) b.e[i] = m.e[i].parity_part((parity ^ ep) & 1);
    });
    return r;
  }

  EndoForm project(int p, int q) const {
    EndoForm r(ranks_, n_);
    for_each_block([&](int k, int l, const FormMat<R>& m) {
      auto& b = r.block(k, l);
      for (std::size_t i = 0; i < m.e.size(); ++i) b.e[i] = m.e[i].project(p, q);
    });
    return r;
  }

  bool is_zero() const {
    for (const auto& [kl, m] : blocks_)
      for (const auto& f : m.e)
        if (!f.is_zero()) return false;
    return true;
  }

 private:
  void check_level(int k) const {
    if (k < 0 || k >= int(ranks_.size())) throw std::out_of_range("EndoForm: level out of range");
  }
  std::vector<int> ranks_;
  int n_ = 0;
  boost::container::flat_map<std::pair<int, int>, FormMat<R>> blocks_;
};

// alpha beta with the sign (-1)^{deg_e alpha * deg_f beta-term} folded into
// the coefficient accumulation.
template <class R>
EndoForm<R> super_compose(const EndoForm<R>& a, const EndoForm<R>& b) {
  if (a.ranks() != b.ranks()) throw std::invalid_argument("super_compose: rank mismatch");
  EndoForm<R> r(a.ranks(), a.dim());
  a.for_each_block([&](int k, int m, const FormMat<R>& am) {
    int ep = (k - m) & 1;
    b.for_each_block([&](int m2, int l, const FormMat<R>& bm) {
      if (m2 != m) return;
      auto& out = r.block(k, l);
      for (int i = 0; i < am.rows; ++i)
        for (int t = 0; t < am.cols; ++t) {
          const Form<R>& af = am.at(i, t);
          if (af.is_zero()) continue;
          for (int j = 0; j < bm.cols; ++j) {
            const Form<R>& bf = bm.at(t, j);
            Form<R>& dst = out.at(i, j);
            af.for_each([&](Mask I, Mask J, const R& va) {
              bf.for_each([&](Mask K, Mask L, const R& vb) {
                if ((I & K) || (J & L)) return;
                int s = wedge_sign(I, J, K, L);
                if (ep && ((mask_count(K) + mask_count(L)) & 1)) s = -s;
                R term = va * vb;
                if (s < 0) term = -term;
                dst.coeff(I | K, J | L) += term;
              });
            });
          }
        }
    });
  });
  return r;
}

// Trace over the diagonal blocks; off-diagonal blocks are ignored by
// definition (mixed-level terms arise naturally in tr(Dphi...R) chains).
template <class R>
Form<R> supertrace(const EndoForm<R>& a) {
  Form<R> t(a.dim());
  a.for_each_block([&](int k, int l, const FormMat<R>& m) {
    if (k != l) return;
    for (int i = 0; i < m.rows; ++i) t += m.at(i, i);
  });
  return t;
}

// omega ^ alpha for a scalar form omega (endo degree 0, so no super sign
// beyond the wedge reordering).
template <class R>
EndoForm<R> form_mul(const Form<R>& w, const EndoForm<R>& a) {
  EndoForm<R> r(a.ranks(), a.dim());
  a.for_each_block([&](int k, int l, const FormMat<R>& m) {
    auto& b = r.block(k, l);
    for (std::size_t i = 0; i < m.e.size(); ++i) b.e[i] = wedge(w, m.e[i]);
  });
  return r;
}

// Induced connection on End E in a local trivialization:
//   D alpha = d alpha + theta alpha - (-1)^{deg alpha} alpha theta.
// d alpha must be supplied by the caller (symbolically differentiated or
// assembled from exact derivative data).
template <class R>
EndoForm<R> d_endo(const EndoForm<R>& alpha, const EndoForm<R>& d_alpha, const EndoForm<R>& theta) {
  EndoForm<R> even = alpha.parity_part(0);
  EndoForm<R> odd = alpha.parity_part(1);
  return d_alpha + super_compose(theta, alpha) - super_compose(even, theta) +
         super_compose(odd, theta);
}

using EndoC = EndoForm<std::complex<double>>;
using EndoQ = EndoForm<CRat>;

inline double abs_max(const EndoC& a) {
  double m = 0;
  a.for_each_block([&](int, int, const FormMat<std::complex<double>>& b) {
    for (const auto& f : b.e) m = std::max(m, abs_max(f));
  });
  return m;
}

}  // namespace chern

#endif
