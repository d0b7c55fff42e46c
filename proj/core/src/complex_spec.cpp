#include "chern/complex_spec.hpp"

#include <Eigen/Dense>
#include <stdexcept>

namespace chern {

ExprMatrix projective_twist_metric(const std::vector<int>& twists, int n) {
  ChartExpr u = ChartExpr::constant(n, CRat(1));
  for (int i = 0; i < n; ++i)
    u += ChartExpr::coordinate(n, i) * ChartExpr::coordinate_conj(n, i);
  ExprMatrix m(int(twists.size()), int(twists.size()), n);
  for (std::size_t i = 0; i < twists.size(); ++i) m.at(int(i), int(i)) = u.pow(-twists[i]);
  return m;
}

ComplexSpec::ComplexSpec(std::string name, std::vector<int> ranks, std::vector<ChartGeometry> charts,
                         bool projective)
    : name_(std::move(name)), ranks_(std::move(ranks)), charts_(std::move(charts)), projective_(projective) {
  validate();
}

namespace {

bool poly_is_holomorphic(const Poly& p, int n) {
  for (const auto& [m, c] : p.terms()) {
    (void)c;
    for (int i = 0; i < n; ++i)
      if (m.e[n + i]) return false;
  }
  return true;
}

}  // namespace

void ComplexSpec::validate() const {
  int N = length();
  if (N < 0) throw std::invalid_argument("ComplexSpec: needs at least one level");
  if (charts_.empty()) throw std::invalid_argument("ComplexSpec: needs at least one chart");
  for (const auto& cg : charts_) {
    if (int(cg.h.size()) != N + 1) throw std::invalid_argument("ComplexSpec: metric count mismatch");
    if (int(cg.phi.size()) != N + 1) throw std::invalid_argument("ComplexSpec: morphism count mismatch");
    for (int k = 0; k <= N; ++k) {
      if (cg.h[k].rows != ranks_[k] || cg.h[k].cols != ranks_[k])
        throw std::invalid_argument("ComplexSpec: metric shape mismatch at level " + std::to_string(k));
      ExprMatrix hc = cg.h[k].conj_transpose();
      for (std::size_t i = 0; i < hc.e.size(); ++i)
        if (!(hc.e[i] == cg.h[k].e[i]))
          throw std::invalid_argument("ComplexSpec: metric not Hermitian at level " + std::to_string(k));
    }
    for (int k = 1; k <= N; ++k) {
      if (cg.phi[k].rows != ranks_[k - 1] || cg.phi[k].cols != ranks_[k])
        throw std::invalid_argument("ComplexSpec: morphism shape mismatch at level " + std::to_string(k));
      for (const auto& e : cg.phi[k].e)
        if (!poly_is_holomorphic(e.num(), cg.n) || !poly_is_holomorphic(e.den(), cg.n))
          throw std::invalid_argument("ComplexSpec: morphism entries must be holomorphic");
    }
    // phi_{k-1} phi_k = 0 identically
    for (int k = 2; k <= N; ++k) {
      ExprMatrix prod = cg.phi[k - 1] * cg.phi[k];
      for (const auto& e : prod.e)
        if (!e.is_zero())
          throw std::invalid_argument("ComplexSpec: phi_{k-1} phi_k != 0 at level " + std::to_string(k));
    }
    if (cg.fnorm2.is_zero()) throw std::invalid_argument("ComplexSpec: |F|^2 expression required");
  }
  // positive definiteness spot check at a few sample points
  std::vector<std::vector<Cplx>> samples = {
      {}, {}, {}};
  for (auto& s : samples) s.assign(charts_[0].n, Cplx(0, 0));
  double vals[3] = {0.3, -0.55, 0.85};
  for (int si = 0; si < 3; ++si)
    for (int i = 0; i < charts_[0].n; ++i)
      samples[si][i] = Cplx(vals[si] / (i + 1), vals[(si + 1) % 3] / (i + 2));
  for (const auto& cg : charts_)
    for (int k = 0; k <= N; ++k)
      for (const auto& pt : samples) {
        Eigen::MatrixXcd hm(ranks_[k], ranks_[k]);
        for (int i = 0; i < ranks_[k]; ++i)
          for (int j = 0; j < ranks_[k]; ++j) hm(i, j) = cg.h[k].at(i, j).eval(pt);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hm);
        if (es.eigenvalues().minCoeff() <= 0)
          throw std::invalid_argument("ComplexSpec: metric not positive definite at sample point");
      }
}

CompiledChart::CompiledChart(const ComplexSpec& spec, int chart_index)
    : chart_(chart_index),
      n_(spec.chart(chart_index).n),
      N_(spec.length()),
      ranks_(spec.ranks()),
      vars_(spec.chart(chart_index).vars) {
  const ChartGeometry& cg = spec.chart(chart_index);
  using Dir = ChartExpr::Dir;

  phi_sym_.resize(N_ + 1);
  h_sym_.resize(N_ + 1);
  theta_sym_.resize(N_ + 1);
  curv_sym_.resize(N_ + 1);

  phi_.resize(N_ + 1);
  h_.resize(N_ + 1);
  dphi_.resize(N_ + 1);
  dh_.resize(N_ + 1);
  theta_.resize(N_ + 1);
  dtheta_.resize(N_ + 1);
  curv_.resize(N_ + 1);

  for (int k = 0; k <= N_; ++k) {
    h_sym_[k] = cg.h[k];
    h_[k] = flatten(cg.h[k], maxdeg_);
    dh_[k].resize(2 * n_);
    for (int i = 0; i < n_; ++i) {
      dh_[k][i] = flatten(cg.h[k].derivative(Dir::Holomorphic, i), maxdeg_);
      dh_[k][n_ + i] = flatten(cg.h[k].derivative(Dir::Antiholomorphic, i), maxdeg_);
    }

    if (k >= 1) {
      phi_sym_[k] = cg.phi[k];
      phi_[k] = flatten(cg.phi[k], maxdeg_);
      dphi_[k].resize(n_);
      for (int i = 0; i < n_; ++i) dphi_[k][i] = flatten(cg.phi[k].derivative(Dir::Holomorphic, i), maxdeg_);
    }

    // connection matrix: Chern h^{-1} d'h unless custom matrices are given
    std::vector<ExprMatrix> theta_dirs(n_);
    if (!cg.custom_theta.empty() && !cg.custom_theta[k].empty()) {
      theta_dirs = cg.custom_theta[k];
    } else {
      ExprMatrix hinv = invert(cg.h[k]);
      for (int i = 0; i < n_; ++i) theta_dirs[i] = hinv * cg.h[k].derivative(Dir::Holomorphic, i);
    }
    FormMatX th = one_form(theta_dirs, Dir::Holomorphic, n_);
    FormMatX dth = d_form(th);
    FormMatX curv = dth + mat_wedge(th, th);
    theta_sym_[k] = th;
    curv_sym_[k] = curv;
    theta_[k] = flatten(th, maxdeg_);
    dtheta_[k] = flatten(dth, maxdeg_);
    curv_[k] = flatten(curv, maxdeg_);
  }

  fnorm2_sym_ = cg.fnorm2;
  fnorm2_ = flatten(cg.fnorm2, maxdeg_);
  FormX f2(n_);
  f2.coeff(0, 0) = cg.fnorm2;
  FormX dbar = partial_form(f2, Dir::Antiholomorphic);
  dF2_ = flatten(partial_form(f2, Dir::Holomorphic) + dbar, maxdeg_);
  dbarF2_ = flatten(dbar, maxdeg_);

  // generic ranks of phi_k at deterministic sample points clear of Z
  generic_rank_.assign(N_ + 1, 0);
  std::vector<std::vector<Cplx>> pts;
  double seeds[4] = {0.731, -0.412, 0.297, -0.888};
  for (int s = 0; s < 4; ++s) {
    std::vector<Cplx> p(n_);
    for (int i = 0; i < n_; ++i)
      p[i] = Cplx(seeds[s] / (1.0 + 0.37 * i), seeds[(s + i + 1) % 4] * 0.63);
    pts.push_back(p);
  }
  for (int k = 1; k <= N_; ++k) {
    int best = 0;
    for (const auto& p : pts) {
      Eigen::MatrixXcd m(ranks_[k - 1], ranks_[k]);
      bool ok = true;
      for (int i = 0; i < ranks_[k - 1] && ok; ++i)
        for (int j = 0; j < ranks_[k] && ok; ++j) {
          try {
            m(i, j) = cg.phi[k].at(i, j).eval(p);
          } catch (const ChartExpr::PoleError&) {
            ok = false;
          }
        }
      if (!ok) continue;
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
      double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
      int r = 0;
      for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1e-10 * std::max(smax, 1.0)) ++r;
      best = std::max(best, r);
    }
    generic_rank_[k] = best;
  }
}

}  // namespace chern
