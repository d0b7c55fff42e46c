#ifndef CHERN_CHARTEXPR_HPP
#define CHERN_CHARTEXPR_HPP

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "chern/rational.hpp"

namespace chern {

// Sparse distributed polynomial in z_1..z_n and conj(z_1)..conj(z_n) over
// complex rationals.  Variable slots 0..n-1 are the z_i, slots n..2n-1 the
// conjugates.  Terms are kept in graded-lex order with no explicit zeros.

struct Mono {
  std::vector<std::uint16_t> e;

  int total() const {
    int t = 0;
    for (auto x : e) t += x;
    return t;
  }
  bool operator<(const Mono& o) const {
    int ta = total(), tb = o.total();
    if (ta != tb) return ta < tb;
    return e < o.e;
  }
  bool operator==(const Mono& o) const { return e == o.e; }
};

class Poly {
 public:
  Poly() : nvars_(0) {}
  explicit Poly(int nvars) : nvars_(nvars) {}
  static Poly constant(int nvars, const CRat& c);
  static Poly variable(int nvars, int slot);

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  std::size_t term_count() const { return terms_.size(); }
  const std::map<Mono, CRat>& terms() const { return terms_; }

  void add_term(const Mono& m, const CRat& c);

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly& operator+=(const Poly& o) { *this = *this + o; return *this; }
  Poly negated() const;
  Poly scaled(const CRat& c) const;
  bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

  Poly derivative(int slot) const;
  Poly conjugated() const;  // swap z <-> conj(z) slots, conjugate coefficients
  Poly pow(int k) const;

  // Leading coefficient in graded-lex order (zero polynomial -> 0).
  CRat leading_coeff() const;
  // Per-variable minimum exponent over all terms.
  Mono monomial_content() const;
  Poly divided_by_monomial(const Mono& m) const;

  template <class S>
  S eval(const std::vector<S>& zvals) const;  // zvals has 2n entries (z then conj z)

 private:
  int nvars_;
  std::map<Mono, CRat> terms_;
};

// Exact rational expression in chart coordinates, closed under the Wirtinger
// derivatives, conjugation and chart transitions.  Representation is reduced
// by coefficient content and common monomial factors only (no full
// multivariate gcd), with the denominator normalized to leading coefficient
// one; that is enough for structural equality on everything the scenarios
// produce.
class ChartExpr {
 public:
  ChartExpr() : n_(0), num_(0), den_(Poly::constant(0, CRat(1))) {}
  explicit ChartExpr(int n);
  ChartExpr(Poly num, Poly den);

  static ChartExpr constant(int n, const CRat& c);
  static ChartExpr coordinate(int n, int i);        // z_i, 0-based
  static ChartExpr coordinate_conj(int n, int i);   // conj(z_i)

  int dim() const { return n_; }
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const;
  bool denominator_is_one() const { return den_.is_one(); }

  friend ChartExpr operator+(const ChartExpr& a, const ChartExpr& b);
  friend ChartExpr operator-(const ChartExpr& a, const ChartExpr& b);
  friend ChartExpr operator*(const ChartExpr& a, const ChartExpr& b);
  friend ChartExpr operator/(const ChartExpr& a, const ChartExpr& b);
  ChartExpr& operator+=(const ChartExpr& o) { *this = *this + o; return *this; }
  ChartExpr& operator-=(const ChartExpr& o) { *this = *this - o; return *this; }
  ChartExpr operator-() const;
  bool operator==(const ChartExpr& o) const { return num_ == o.num_ && den_ == o.den_; }

  enum class Dir { Holomorphic, Antiholomorphic };
  ChartExpr partial(Dir d, int i) const;  // quotient rule, exact
  ChartExpr conjugated() const;
  ChartExpr pow(int k) const;

  struct PoleError : std::runtime_error {
    using std::runtime_error::runtime_error;
  };

  // Rebuild a dimensionless constant in n variables.  Binary operators call
  // this so that ring constants (e.g. the unit supplied by the generic form
  // algebra) combine with chart expressions of any dimension.
  ChartExpr promoted(int n) const;

  template <class S>
  S eval(const std::vector<S>& point) const;  // point has n complex entries

  // Substitute z_i := subs[i] (holomorphic maps; conj slots get the
  // conjugated substitution).
  ChartExpr substitute(const std::vector<ChartExpr>& subs) const;

  std::string str(const std::vector<std::string>& var_names) const;

 private:
  void reduce();
  int n_;
  Poly num_, den_;
};

// Standard chart change on P^n: rewrite an expression given in the
// coordinates of chart `from` in the coordinates of chart `to`.  Chart i has
// coordinates Z_m/Z_i listed for m != i in increasing m.
ChartExpr transition(const ChartExpr& e, int from_chart, int to_chart, int projective_dim);

struct ExprMatrix {
  int rows = 0, cols = 0;
  std::vector<ChartExpr> e;

  ExprMatrix() = default;
  ExprMatrix(int r, int c, int n) : rows(r), cols(c), e(std::size_t(r) * c, ChartExpr(n)) {}
  ChartExpr& at(int i, int j) { return e[std::size_t(i) * cols + j]; }
  const ChartExpr& at(int i, int j) const { return e[std::size_t(i) * cols + j]; }

  ExprMatrix conj_transpose() const;
  ExprMatrix derivative(ChartExpr::Dir d, int i) const;
  friend ExprMatrix operator*(const ExprMatrix& a, const ExprMatrix& b);
  friend ExprMatrix operator+(const ExprMatrix& a, const ExprMatrix& b);
  friend ExprMatrix operator-(const ExprMatrix& a, const ExprMatrix& b);
};

// Inverse via adjugate / Gaussian elimination over the rational function
// field; intended for the small metric matrices (rank <= 4).
ExprMatrix invert(const ExprMatrix& m);

// --- parsing ---

struct ParseError : std::runtime_error {
  int position;
  ParseError(const std::string& msg, int pos) : std::runtime_error(msg), position(pos) {}
};

// var_names[i] is the display/parse name of z_i.
ChartExpr parse_expr(const std::string& text, const std::vector<std::string>& var_names);

// ring interface so ChartExpr can serve as a Form coefficient ring
inline bool ring_is_zero(const ChartExpr& e) { return e.is_zero(); }
inline ChartExpr ring_conj(const ChartExpr& e) { return e.conjugated(); }
template <class S> struct ScalarOf;
template <> struct ScalarOf<ChartExpr> {
  static ChartExpr from_int(long n) { return ChartExpr::constant(0, CRat(n)); }
  static ChartExpr from_ratio(long n, long d) { return ChartExpr::constant(0, CRat(Rat(n) / Rat(d))); }
  static ChartExpr imaginary_unit() { return ChartExpr::constant(0, CRat::i()); }
};

template <class S>
S convert_crat(const CRat& c);
template <>
inline std::complex<double> convert_crat<std::complex<double>>(const CRat& c) { return c.to_complex(); }
template <>
inline CRat convert_crat<CRat>(const CRat& c) { return c; }

template <class S>
S Poly::eval(const std::vector<S>& zvals) const {
  S acc = S(0);
  for (const auto& [m, c] : terms_) {
    S t = convert_crat<S>(c);
    for (int v = 0; v < nvars_; ++v)
      for (int k = 0; k < m.e[v]; ++k) t = t * zvals[v];
    acc += t;
  }
  return acc;
}

template <class S>
S ChartExpr::eval(const std::vector<S>& point) const {
  std::vector<S> zvals(2 * n_);
  for (int i = 0; i < n_; ++i) {
    zvals[i] = point[i];
    zvals[n_ + i] = ring_conj(point[i]);
  }
  S d = den_.eval(zvals);
  if (ring_is_zero(d)) throw PoleError("ChartExpr: denominator vanishes at evaluation point");
  return num_.eval(zvals) / d;
}

}  // namespace chern

#endif
