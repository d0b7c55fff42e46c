#include "chern/chartexpr.hpp"

#include <algorithm>
#include <sstream>

namespace chern {

Poly Poly::constant(int nvars, const CRat& c) {
  Poly p(nvars);
  if (!c.is_zero()) p.terms_[Mono{std::vector<std::uint16_t>(nvars, 0)}] = c;
  return p;
}

Poly Poly::variable(int nvars, int slot) {
  Poly p(nvars);
  Mono m{std::vector<std::uint16_t>(nvars, 0)};
  m.e[slot] = 1;
  p.terms_[m] = CRat(1);
  return p;
}

bool Poly::is_one() const {
  if (terms_.size() != 1) return false;
  const auto& [m, c] = *terms_.begin();
  return m.total() == 0 && c == CRat(1);
}

void Poly::add_term(const Mono& m, const CRat& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_[m] = c;
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly r = a;
  for (const auto& [m, c] : b.terms_) r.add_term(m, c);
  return r;
}

Poly operator-(const Poly& a, const Poly& b) {
  Poly r = a;
  for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r(a.nvars_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      Mono m = ma;
      for (int v = 0; v < a.nvars_; ++v) m.e[v] = std::uint16_t(m.e[v] + mb.e[v]);
      r.add_term(m, ca * cb);
    }
  return r;
}

Poly Poly::negated() const {
  Poly r(nvars_);
  for (const auto& [m, c] : terms_) r.terms_[m] = -c;
  return r;
}

Poly Poly::scaled(const CRat& c) const {
  Poly r(nvars_);
  if (c.is_zero()) return r;
  for (const auto& [m, v] : terms_) r.terms_[m] = v * c;
  return r;
}

Poly Poly::derivative(int slot) const {
  Poly r(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m.e[slot] == 0) continue;
    Mono d = m;
    d.e[slot] -= 1;
    r.add_term(d, c * CRat(long(m.e[slot])));
  }
  return r;
}

Poly Poly::conjugated() const {
  int n = nvars_ / 2;
  Poly r(nvars_);
  for (const auto& [m, c] : terms_) {
    Mono s = m;
    for (int i = 0; i < n; ++i) std::swap(s.e[i], s.e[n + i]);
    r.terms_[s] = c.conj();
  }
  return r;
}

Poly Poly::pow(int k) const {
  Poly r = Poly::constant(nvars_, CRat(1));
  for (int i = 0; i < k; ++i) r = r * *this;
  return r;
}

CRat Poly::leading_coeff() const {
  if (terms_.empty()) return CRat(0);
  return terms_.rbegin()->second;
}

Mono Poly::monomial_content() const {
  Mono m{std::vector<std::uint16_t>(nvars_, 0)};
  bool first = true;
  for (const auto& [t, c] : terms_) {
    (void)c;
    if (first) {
      m = t;
      first = false;
    } else {
      for (int v = 0; v < nvars_; ++v) m.e[v] = std::min(m.e[v], t.e[v]);
    }
  }
  return m;
}

Poly Poly::divided_by_monomial(const Mono& m) const {
  Poly r(nvars_);
  for (const auto& [t, c] : terms_) {
    Mono d = t;
    for (int v = 0; v < nvars_; ++v) d.e[v] = std::uint16_t(d.e[v] - m.e[v]);
    r.terms_[d] = c;
  }
  return r;
}

ChartExpr::ChartExpr(int n) : n_(n), num_(2 * n), den_(Poly::constant(2 * n, CRat(1))) {}

ChartExpr::ChartExpr(Poly num, Poly den) : n_(num.nvars() / 2), num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::invalid_argument("ChartExpr: zero denominator");
  reduce();
}

ChartExpr ChartExpr::constant(int n, const CRat& c) {
  ChartExpr e(n);
  e.num_ = Poly::constant(2 * n, c);
  return e;
}

ChartExpr ChartExpr::coordinate(int n, int i) {
  ChartExpr e(n);
  e.num_ = Poly::variable(2 * n, i);
  return e;
}

ChartExpr ChartExpr::coordinate_conj(int n, int i) {
  ChartExpr e(n);
  e.num_ = Poly::variable(2 * n, n + i);
  return e;
}

bool ChartExpr::is_constant() const {
  return den_.is_one() && (num_.is_zero() || (num_.term_count() == 1 && num_.terms().begin()->first.total() == 0));
}

void ChartExpr::reduce() {
  if (num_.is_zero()) {
    den_ = Poly::constant(2 * n_, CRat(1));
    return;
  }
  if (num_ == den_) {
    num_ = Poly::constant(2 * n_, CRat(1));
    den_ = Poly::constant(2 * n_, CRat(1));
    return;
  }
  // Common monomial factor.
  Mono mn = num_.monomial_content();
  Mono md = den_.monomial_content();
  Mono common{std::vector<std::uint16_t>(2 * n_, 0)};
  bool any = false;
  for (int v = 0; v < 2 * n_; ++v) {
    common.e[v] = std::min(mn.e[v], md.e[v]);
    if (common.e[v]) any = true;
  }
  if (any) {
    num_ = num_.divided_by_monomial(common);
    den_ = den_.divided_by_monomial(common);
  }
  // Normalize the denominator to leading coefficient 1 (canonical scaling,
  // subsumes content reduction).
  CRat lead = den_.leading_coeff();
  if (!(lead == CRat(1))) {
    CRat inv = CRat(1) / lead;
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
  }
}

ChartExpr ChartExpr::promoted(int n) const {
  if (n_ == n) return *this;
  if (!is_constant())
    throw std::invalid_argument("ChartExpr: dimension mismatch (only constants promote)");
  CRat v = num_.is_zero() ? CRat(0) : num_.terms().begin()->second;
  return ChartExpr::constant(n, v);
}

namespace {
void align_dims(ChartExpr& a, ChartExpr& b) {
  if (a.dim() == b.dim()) return;
  // constants promote toward the concrete (larger) chart dimension
  if (a.is_constant() && b.is_constant()) {
    if (a.dim() < b.dim()) a = a.promoted(b.dim());
    else b = b.promoted(a.dim());
  } else if (a.is_constant() && a.dim() < b.dim()) {
    a = a.promoted(b.dim());
  } else if (b.is_constant() && b.dim() < a.dim()) {
    b = b.promoted(a.dim());
  } else {
    throw std::invalid_argument("ChartExpr: dimension mismatch");
  }
}
}  // namespace

ChartExpr operator+(const ChartExpr& a0, const ChartExpr& b0) {
  ChartExpr a = a0, b = b0;
  align_dims(a, b);
  if (a.den_ == b.den_) return ChartExpr(a.num_ + b.num_, a.den_);
  return ChartExpr(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

ChartExpr operator-(const ChartExpr& a0, const ChartExpr& b0) {
  ChartExpr a = a0, b = b0;
  align_dims(a, b);
  if (a.den_ == b.den_) return ChartExpr(a.num_ - b.num_, a.den_);
  return ChartExpr(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

ChartExpr operator*(const ChartExpr& a0, const ChartExpr& b0) {
  ChartExpr a = a0, b = b0;
  align_dims(a, b);
  return ChartExpr(a.num_ * b.num_, a.den_ * b.den_);
}

ChartExpr operator/(const ChartExpr& a0, const ChartExpr& b0) {
  ChartExpr a = a0, b = b0;
  align_dims(a, b);
  if (b.num_.is_zero()) throw std::invalid_argument("ChartExpr: division by zero expression");
  return ChartExpr(a.num_ * b.den_, a.den_ * b.num_);
}

ChartExpr ChartExpr::operator-() const {
  ChartExpr r = *this;
  r.num_ = r.num_.negated();
  return r;
}

ChartExpr ChartExpr::partial(Dir d, int i) const {
  int slot = (d == Dir::Holomorphic) ? i : n_ + i;
  if (den_.is_one()) return ChartExpr(num_.derivative(slot), den_);
  // (p/q)' = (p'q - pq') / q^2
  return ChartExpr(num_.derivative(slot) * den_ - num_ * den_.derivative(slot), den_ * den_);
}

ChartExpr ChartExpr::conjugated() const { return ChartExpr(num_.conjugated(), den_.conjugated()); }

ChartExpr ChartExpr::pow(int k) const {
  if (k < 0) return ChartExpr(den_.pow(-k), num_.pow(-k));
  return ChartExpr(num_.pow(k), den_.pow(k));
}

ChartExpr ChartExpr::substitute(const std::vector<ChartExpr>& subs) const {
  int n = n_;
  if (int(subs.size()) != n) throw std::invalid_argument("substitute: wrong count");
  int m = subs.empty() ? n : subs[0].dim();
  std::vector<ChartExpr> slot_subs(2 * n, ChartExpr(m));
  for (int i = 0; i < n; ++i) {
    slot_subs[i] = subs[i];
    slot_subs[n + i] = subs[i].conjugated();
  }
  auto subst_poly = [&](const Poly& p) -> ChartExpr {
    ChartExpr acc = ChartExpr::constant(m, CRat(0));
    for (const auto& [mono, c] : p.terms()) {
      ChartExpr t = ChartExpr::constant(m, c);
      for (int v = 0; v < 2 * n; ++v)
        if (mono.e[v]) t = t * slot_subs[v].pow(mono.e[v]);
      acc = acc + t;
    }
    return acc;
  };
  ChartExpr nr = subst_poly(num_);
  ChartExpr dr = subst_poly(den_);
  if (dr.is_zero()) throw std::runtime_error("substitute: identically singular result");
  return nr / dr;
}

ChartExpr transition(const ChartExpr& e, int from_chart, int to_chart, int projective_dim) {
  int n = projective_dim;
  if (e.dim() != n) throw std::invalid_argument("transition: dimension mismatch");
  if (from_chart == to_chart) return e;
  // Chart `from` coordinate with index idx corresponds to Z_m/Z_from where m
  // runs over 0..n skipping `from`.  In chart `to`, Z_m/Z_from =
  // w_m / w_from with w_to = 1.
  auto chart_var_of = [&](int chart, int m) -> int {
    // index of homogeneous coordinate m within chart's coordinate list
    int idx = 0;
    for (int j = 0; j <= n; ++j) {
      if (j == chart) continue;
      if (j == m) return idx;
      ++idx;
    }
    return -1;
  };
  ChartExpr w_from = ChartExpr::coordinate(n, chart_var_of(to_chart, from_chart));
  std::vector<ChartExpr> subs;
  for (int m = 0; m <= n; ++m) {
    if (m == from_chart) continue;
    ChartExpr zm = (m == to_chart) ? ChartExpr::constant(n, CRat(1))
                                   : ChartExpr::coordinate(n, chart_var_of(to_chart, m));
    subs.push_back(zm / w_from);
  }
  return e.substitute(subs);
}

ExprMatrix ExprMatrix::conj_transpose() const {
  ExprMatrix r(cols, rows, e.empty() ? 0 : e[0].dim());
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) r.at(j, i) = at(i, j).conjugated();
  return r;
}

ExprMatrix ExprMatrix::derivative(ChartExpr::Dir d, int i) const {
  ExprMatrix r = *this;
  for (auto& x : r.e) x = x.partial(d, i);
  return r;
}

ExprMatrix operator*(const ExprMatrix& a, const ExprMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("ExprMatrix: shape mismatch");
  int n = a.e.empty() ? (b.e.empty() ? 0 : b.e[0].dim()) : a.e[0].dim();
  ExprMatrix r(a.rows, b.cols, n);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < b.cols; ++j) {
      ChartExpr acc(n);
      for (int k = 0; k < a.cols; ++k) acc = acc + a.at(i, k) * b.at(k, j);
      r.at(i, j) = acc;
    }
  return r;
}

ExprMatrix operator+(const ExprMatrix& a, const ExprMatrix& b) {
  ExprMatrix r = a;
  for (std::size_t i = 0; i < r.e.size(); ++i) r.e[i] = r.e[i] + b.e[i];
  return r;
}

ExprMatrix operator-(const ExprMatrix& a, const ExprMatrix& b) {
  ExprMatrix r = a;
  for (std::size_t i = 0; i < r.e.size(); ++i) r.e[i] = r.e[i] - b.e[i];
  return r;
}

ExprMatrix invert(const ExprMatrix& m) {
  if (m.rows != m.cols) throw std::invalid_argument("invert: not square");
  int r = m.rows;
  int n = m.e.empty() ? 0 : m.e[0].dim();
  // Gauss-Jordan over the rational function field.
  ExprMatrix a = m;
  ExprMatrix inv(r, r, n);
  for (int i = 0; i < r; ++i) inv.at(i, i) = ChartExpr::constant(n, CRat(1));
  for (int col = 0; col < r; ++col) {
    int piv = -1;
    for (int i = col; i < r; ++i)
      if (!a.at(i, col).is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) throw std::runtime_error("invert: singular matrix expression");
    if (piv != col)
      for (int j = 0; j < r; ++j) {
        std::swap(a.at(piv, j), a.at(col, j));
        std::swap(inv.at(piv, j), inv.at(col, j));
      }
    ChartExpr p = a.at(col, col);
    for (int j = 0; j < r; ++j) {
      a.at(col, j) = a.at(col, j) / p;
      inv.at(col, j) = inv.at(col, j) / p;
    }
    for (int i = 0; i < r; ++i) {
      if (i == col || a.at(i, col).is_zero()) continue;
      ChartExpr f = a.at(i, col);
      for (int j = 0; j < r; ++j) {
        a.at(i, j) = a.at(i, j) - f * a.at(col, j);
        inv.at(i, j) = inv.at(i, j) - f * inv.at(col, j);
      }
    }
  }
  return inv;
}

// --- printing ---

namespace {

void print_coeff(std::ostringstream& os, const CRat& c, bool lead_term) {
  auto rat_str = [](const Rat& r) { return to_string(r); };
  if (c.im == 0) {
    Rat v = c.re;
    bool neg = v < 0;
    if (!lead_term) os << (neg ? " - " : " + ");
    else if (neg) os << "-";
    os << rat_str(neg ? Rat(-v) : v);
  } else if (c.re == 0) {
    Rat v = c.im;
    bool neg = v < 0;
    if (!lead_term) os << (neg ? " - " : " + ");
    else if (neg) os << "-";
    Rat a = neg ? Rat(-v) : v;
    if (a == 1) os << "i";
    else os << rat_str(a) << "*i";
  } else {
    if (!lead_term) os << " + ";
    os << "(" << rat_str(c.re);
    if (c.im < 0) os << "-" << rat_str(Rat(-c.im));
    else os << "+" << rat_str(c.im);
    os << "*i)";
  }
}

void print_poly(std::ostringstream& os, const Poly& p, const std::vector<std::string>& names, int n) {
  if (p.is_zero()) {
    os << "0";
    return;
  }
  bool first = true;
  // highest term first
  const auto& terms = p.terms();
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    const auto& [m, c] = *it;
    bool has_vars = m.total() > 0;
    bool unit = (c == CRat(1));
    bool neg_unit = (c == CRat(-1));
    if (has_vars && unit) {
      if (!first) os << " + ";
    } else if (has_vars && neg_unit) {
      os << (first ? "-" : " - ");
    } else {
      print_coeff(os, c, first);
      if (has_vars) os << "*";
    }
    bool firstv = true;
    for (int v = 0; v < 2 * n; ++v) {
      if (!m.e[v]) continue;
      if (!firstv) os << "*";
      firstv = false;
      if (v < n) os << names[v];
      else os << "conj(" << names[v - n] << ")";
      if (m.e[v] > 1) os << "^" << int(m.e[v]);
    }
    first = false;
  }
}

}  // namespace

std::string ChartExpr::str(const std::vector<std::string>& var_names) const {
  std::ostringstream os;
  if (den_.is_one()) {
    print_poly(os, num_, var_names, n_);
  } else {
    os << "(";
    print_poly(os, num_, var_names, n_);
    os << ")/(";
    print_poly(os, den_, var_names, n_);
    os << ")";
  }
  return os.str();
}

}  // namespace chern
