#ifndef CHERN_COMPLEX_SPEC_HPP
#define CHERN_COMPLEX_SPEC_HPP

#include <optional>
#include <string>
#include <vector>

#include "chern/exprform.hpp"

namespace chern {

// Per-chart data of a bounded complex (E, phi) of Hermitian bundles:
// morphism matrices, metric matrices, and the squared norm of the section F
// cutting out the non-exactness set.
struct ChartGeometry {
  int n = 0;
  std::vector<std::string> vars;
  std::vector<ExprMatrix> phi;  // phi[k] : E_k -> E_{k-1} for k = 1..N (slot 0 unused)
  std::vector<ExprMatrix> h;    // h[k] for k = 0..N, Hermitian positive definite
  ChartExpr fnorm2;             // |F|^2 as an exact expression; {F = 0} = Z
  // Custom (1,0)-connection matrices: custom_theta[k][i] is the dz_i
  // coefficient on level k.  Empty means Chern connections h^{-1} d'h.
  std::vector<std::vector<ExprMatrix>> custom_theta;
};

// Metric preset for O(d_1) + ... + O(d_r) on P^n in a standard chart:
// diag((1 + |zeta|^2)^{-d_i}).
ExprMatrix projective_twist_metric(const std::vector<int>& twists, int n);

class ComplexSpec {
 public:
  ComplexSpec(std::string name, std::vector<int> ranks, std::vector<ChartGeometry> charts,
              bool projective);

  const std::string& name() const { return name_; }
  int length() const { return int(ranks_.size()) - 1; }  // N
  const std::vector<int>& ranks() const { return ranks_; }
  int chart_count() const { return int(charts_.size()); }
  const ChartGeometry& chart(int c) const { return charts_.at(c); }
  ChartGeometry& chart_mutable(int c) { return charts_.at(c); }
  bool projective() const { return projective_; }
  int dim() const { return charts_.empty() ? 0 : charts_[0].n; }

 private:
  void validate() const;
  std::string name_;
  std::vector<int> ranks_;
  std::vector<ChartGeometry> charts_;
  bool projective_ = false;
};

// Symbolic precompilation of one chart: connection and curvature matrices,
// morphism derivatives, metric derivatives, all flattened for fast pointwise
// evaluation.  Immutable after construction and shared read-only between
// quadrature workers.
class CompiledChart {
 public:
  CompiledChart(const ComplexSpec& spec, int chart_index);

  int dim() const { return n_; }
  int length() const { return N_; }
  const std::vector<int>& ranks() const { return ranks_; }
  int maxdeg() const { return maxdeg_; }
  int chart_index() const { return chart_; }
  const std::vector<std::string>& vars() const { return vars_; }

  // flattened (fast) evaluators
  const FlatExprMat& phi_flat(int k) const { return phi_[k]; }
  const FlatExprMat& h_flat(int k) const { return h_[k]; }
  const FlatExprMat& dphi_flat(int k, int i) const { return dphi_[k][i]; }
  // direction slots: 0..n-1 holomorphic, n..2n-1 antiholomorphic
  const FlatExprMat& dh_flat(int k, int mu) const { return dh_[k][mu]; }
  const FlatFormMat& theta_flat(int k) const { return theta_[k]; }
  const FlatFormMat& dtheta_flat(int k) const { return dtheta_[k]; }
  const FlatFormMat& curvature_flat(int k) const { return curv_[k]; }
  const FlatExpr& fnorm2_flat() const { return fnorm2_; }
  const FlatForm& dF2_flat() const { return dF2_; }             // full 1-form d|F|^2
  const FlatForm& dbarF2_flat() const { return dbarF2_; }       // (0,1) part

  // symbolic views (exact tests, diagnostics)
  const FormMatX& theta_sym(int k) const { return theta_sym_[k]; }
  const FormMatX& curvature_sym(int k) const { return curv_sym_[k]; }
  const ExprMatrix& phi_sym(int k) const { return phi_sym_[k]; }
  const ExprMatrix& h_sym(int k) const { return h_sym_[k]; }
  const ChartExpr& fnorm2_sym() const { return fnorm2_sym_; }

  int generic_rank(int k) const { return generic_rank_[k]; }  // of phi_k

 private:
  int chart_, n_, N_;
  std::vector<int> ranks_;
  std::vector<std::string> vars_;
  int maxdeg_ = 0;

  std::vector<FlatExprMat> phi_, h_;
  std::vector<std::vector<FlatExprMat>> dphi_, dh_;
  std::vector<FlatFormMat> theta_, dtheta_, curv_;
  FlatExpr fnorm2_;
  FlatForm dF2_, dbarF2_;

  std::vector<FormMatX> theta_sym_, curv_sym_;
  std::vector<ExprMatrix> phi_sym_, h_sym_;
  ChartExpr fnorm2_sym_;

  std::vector<int> generic_rank_;
};

}  // namespace chern

#endif
