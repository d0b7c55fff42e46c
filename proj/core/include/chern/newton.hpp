#ifndef CHERN_NEWTON_HPP
#define CHERN_NEWTON_HPP

#include <map>
#include <string>
#include <vector>

#include "chern/rational.hpp"

namespace chern {

// Polynomials in weighted variables t_1, t_2, ... (t_j of weight j) with
// exact rational coefficients; exponent vectors are indexed from t_1.
struct TPoly {
  std::map<std::vector<int>, Rat> terms;

  static TPoly zero() { return {}; }
  static TPoly constant(const Rat& c);
  static TPoly var(int j, int nvars);  // t_j, 1-based

  bool is_zero() const { return terms.empty(); }
  void add(const std::vector<int>& mono, const Rat& c);

  friend TPoly operator+(const TPoly& a, const TPoly& b);
  friend TPoly operator-(const TPoly& a, const TPoly& b);
  friend TPoly operator*(const TPoly& a, const TPoly& b);
  TPoly scaled(const Rat& c) const;

  // substitute t_j := subs[j-1]
  TPoly compose(const std::vector<TPoly>& subs) const;

  int weighted_degree() const;
  bool weighted_homogeneous(int degree) const;

  std::string str(const std::string& varname = "t") const;
};

template <class R>
R from_rat(const Rat& r);
template <>
inline CRat from_rat<CRat>(const Rat& r) { return CRat(r); }
template <>
inline std::complex<double> from_rat<std::complex<double>>(const Rat& r) { return {to_double(r), 0.0}; }

// Hirzebruch-Newton polynomials Q_l with p_l = Q_l(e_1..e_l), the companion
// polynomials of the c <-> ch conversions, and the full conversion tables
// through degree L.  All entries are exact rationals.
class NewtonTable {
 public:
  explicit NewtonTable(int L);

  int max_degree() const { return L_; }

  const TPoly& Q(int l) const { return Q_.at(l); }        // p_l = Q_l(e)
  const TPoly& Qtilde(int l) const { return Qt_.at(l); }  // ch_l = (-1)^{l-1}/(l-1)! c_l + Qtilde_l(c_1..c_{l-1})
  const TPoly& Qhat(int l) const { return Qh_.at(l); }    // c_l = (-1)^{l-1}(l-1)! ch_l + Qhat_l(ch_1..ch_{l-1})

  const TPoly& ch_from_c(int l) const { return chc_.at(l); }  // ch_l as polynomial in c_1..c_l
  const TPoly& c_from_ch(int l) const { return cch_.at(l); }  // c_l as polynomial in ch_1..ch_l

 private:
  int L_;
  std::vector<TPoly> Q_, Qt_, Qh_, chc_, cch_;
};

}  // namespace chern

#endif
