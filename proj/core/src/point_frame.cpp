#include "chern/point_frame.hpp"

namespace chern {

namespace {



MatC eval_flat(const FlatExprMat& m, const PowTable& t) {
  MatC out(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out(i, j) = m.e[std::size_t(i) * m.cols + j].eval(t);
  return out;
}

// dU for U the upper Cholesky factor (h = U^* U, real positive diagonal):
// Y = upper(M) + diag(M)/2 with M = U^{-*} dh U^{-1}, dU = Y U.
MatC chol_derivative(const MatC& U, const MatC& Uinv, const MatC& dh) {
  MatC M = Uinv.adjoint() * dh * Uinv;
  MatC Y = MatC::Zero(M.rows(), M.cols());
  for (int i = 0; i < M.rows(); ++i) {
    Y(i, i) = 0.5 * M(i, i);
    for (int j = i + 1; j < M.cols(); ++j) Y(i, j) = M(i, j);
  }
  return Y * U;
}

}  // namespace

MetricPinv metric_pinv(const MatC& phi, const MatC& h_out, const MatC& h_in,
                       const std::vector<MatC>& dphi_hol, const std::vector<MatC>& dh_out,
                       const std::vector<MatC>& dh_in, double rank_tol, bool want_derivatives) {
  const int n = int(dphi_hol.size());
  // h-orthonormal frames via upper Cholesky factors
  Eigen::LLT<MatC> llt_out(h_out), llt_in(h_in);
  if (llt_out.info() != Eigen::Success || llt_in.info() != Eigen::Success)
    throw std::runtime_error("metric_pinv: metric not positive definite at point");
  MatC Uo = MatC(llt_out.matrixL()).adjoint();
  MatC Ui = MatC(llt_in.matrixL()).adjoint();
  MatC Uo_inv = Uo.triangularView<Eigen::Upper>().solve(MatC::Identity(Uo.rows(), Uo.cols()));
  MatC Ui_inv = Ui.triangularView<Eigen::Upper>().solve(MatC::Identity(Ui.rows(), Ui.cols()));

  MatC ft = Uo * phi * Ui_inv;  // phi in orthonormal frames
  Eigen::JacobiSVD<MatC> svd(ft, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double smax = sv.size() ? sv(0) : 0.0;
  MetricPinv out;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > rank_tol * std::max(smax, rank_tol)) ++out.rank;
  MatC sinv = MatC::Zero(ft.cols(), ft.rows());
  for (int i = 0; i < out.rank; ++i) sinv(i, i) = 1.0 / sv(i);
  MatC st = svd.matrixV() * sinv * svd.matrixU().adjoint();
  out.sigma = Ui_inv * st * Uo;

  if (!want_derivatives) return out;

  const MatC P = ft * st;                                     // projector onto im(ft)
  const MatC Q = st * ft;                                     // projector onto coim(ft)
  const MatC Ip = MatC::Identity(P.rows(), P.cols()) - P;
  const MatC Iq = MatC::Identity(Q.rows(), Q.cols()) - Q;

  // derivative of the orthonormal-frame morphism per direction slot
  std::vector<MatC> dft(2 * n);
  std::vector<MatC> dUo(2 * n), dUi(2 * n);
  for (int mu = 0; mu < 2 * n; ++mu) {
    dUo[mu] = chol_derivative(Uo, Uo_inv, dh_out[mu]);
    dUi[mu] = chol_derivative(Ui, Ui_inv, dh_in[mu]);
    MatC dphi_mu = (mu < n) ? dphi_hol[mu] : MatC::Zero(phi.rows(), phi.cols());
    dft[mu] = dUo[mu] * phi * Ui_inv + Uo * dphi_mu * Ui_inv - ft * dUi[mu] * Ui_inv;
  }

  out.dsigma.resize(2 * n);
  for (int mu = 0; mu < 2 * n; ++mu) {
    int conj_mu = (mu < n) ? mu + n : mu - n;
    const MatC& A = dft[mu];
    MatC Bh = dft[conj_mu].adjoint();
    MatC dst = -st * A * st + st * st.adjoint() * Bh * Ip + Iq * Bh * st.adjoint() * st;
    out.dsigma[mu] = -Ui_inv * dUi[mu] * Ui_inv * st * Uo + Ui_inv * dst * Uo + Ui_inv * st * dUo[mu];
  }
  return out;
}

PointFrame::PointFrame(const CompiledChart& cc, std::vector<Cplx> point, double rank_tol,
                       bool sigma_derivatives)
    : cc_(cc), pt_(std::move(point)), rank_tol_(rank_tol), sigma_derivs_(sigma_derivatives),
      n_(cc.dim()), N_(cc.length()), dF2_(cc.dim()), dbarF2_(cc.dim()) {
  pow_.init(pt_, cc_.maxdeg());
  f2_ = cc_.fnorm2_flat().eval(pow_).real();
}

void PointFrame::ensure_connection() {
  if (conn_done_) return;
  conn_done_ = true;
  dF2_ = cc_.dF2_flat().eval(pow_);
  dbarF2_ = cc_.dbarF2_flat().eval(pow_);
  theta_ = EndoC(cc_.ranks(), n_);
  dtheta_ = EndoC(cc_.ranks(), n_);
  curv_ = EndoC(cc_.ranks(), n_);
  for (int k = 0; k <= N_; ++k) {
    theta_.block(k, k) = cc_.theta_flat(k).eval(pow_);
    dtheta_.block(k, k) = cc_.dtheta_flat(k).eval(pow_);
    curv_.block(k, k) = cc_.curvature_flat(k).eval(pow_);
  }
}

const FormC& PointFrame::dF2() { ensure_connection(); return dF2_; }
const FormC& PointFrame::dbarF2() { ensure_connection(); return dbarF2_; }
const EndoC& PointFrame::theta() { ensure_connection(); return theta_; }
const EndoC& PointFrame::dtheta() { ensure_connection(); return dtheta_; }
const EndoC& PointFrame::curvature() { ensure_connection(); return curv_; }

std::vector<FormMat<Cplx>> PointFrame::curvature_blocks() {
  ensure_connection();
  std::vector<FormMat<Cplx>> out;
  for (int k = 0; k <= N_; ++k) out.push_back(curv_.block(k, k));
  return out;
}

void PointFrame::ensure_sigma() {
  if (sigma_done_) return;
  sigma_done_ = true;
  ensure_connection();

  std::vector<MatC> h(N_ + 1), phim(N_ + 1);
  std::vector<std::vector<MatC>> dh(N_ + 1);
  for (int k = 0; k <= N_; ++k) {
    h[k] = eval_flat(cc_.h_flat(k), pow_);
    dh[k].resize(2 * n_);
    if (sigma_derivs_)
      for (int mu = 0; mu < 2 * n_; ++mu) dh[k][mu] = eval_flat(cc_.dh_flat(k, mu), pow_);
  }

  phi_ = EndoC(cc_.ranks(), n_);
  dphiE_ = EndoC(cc_.ranks(), n_);
  sigmaE_ = EndoC(cc_.ranks(), n_);
  dsigmaE_ = EndoC(cc_.ranks(), n_);
  sig_.assign(N_ + 1, MatC());

  sigma_ok_ = true;
  for (int k = 1; k <= N_; ++k) {
    MatC pm = eval_flat(cc_.phi_flat(k), pow_);
    phim[k] = pm;
    std::vector<MatC> dpm(n_);
    for (int i = 0; i < n_; ++i) dpm[i] = eval_flat(cc_.dphi_flat(k, i), pow_);

    auto& pb = phi_.block(k - 1, k);
    auto& dpb = dphiE_.block(k - 1, k);
    for (int i = 0; i < pm.rows(); ++i)
      for (int j = 0; j < pm.cols(); ++j) {
        pb.at(i, j).coeff(0, 0) = pm(i, j);
        for (int d = 0; d < n_; ++d) dpb.at(i, j).coeff(Mask(1) << d, 0) = dpm[d](i, j);
      }

    MetricPinv mp = metric_pinv(pm, h[k - 1], h[k], dpm, dh[k - 1], dh[k], rank_tol_, sigma_derivs_);
    if (mp.rank != cc_.generic_rank(k)) {
      sigma_ok_ = false;
      continue;
    }
    sig_[k] = mp.sigma;
    auto& sb = sigmaE_.block(k, k - 1);
    auto& dsb = dsigmaE_.block(k, k - 1);
    for (int i = 0; i < mp.sigma.rows(); ++i)
      for (int j = 0; j < mp.sigma.cols(); ++j) {
        sb.at(i, j).coeff(0, 0) = mp.sigma(i, j);
        if (!sigma_derivs_) continue;
        for (int mu = 0; mu < 2 * n_; ++mu) {
          Mask dz = (mu < n_) ? Mask(1) << mu : 0;
          Mask dzb = (mu < n_) ? 0 : Mask(1) << (mu - n_);
          dsb.at(i, j).coeff(dz, dzb) += mp.dsigma[mu](i, j);
        }
      }
  }

  // D phi = d phi + theta phi - (-1)^{deg phi} phi theta (deg phi odd)
  Dphi_ = d_endo(phi_, dphiE_, theta_);
}

void PointFrame::ensure_hat_parts() {
  ensure_sigma();
  if (hat_done_) return;
  hat_done_ = true;
  // d(D phi) = dtheta phi - theta dphi + dphi theta - phi dtheta
  dDphi_ = super_compose(dtheta_, phi_) - super_compose(theta_, dphiE_) +
           super_compose(dphiE_, theta_) - super_compose(phi_, dtheta_);
  if (sigma_ok_) {
    sDphi_ = super_compose(sigmaE_, Dphi_);
    // d(sigma Dphi) = dsigma Dphi - sigma d(Dphi)   (sigma has odd degree)
    dsDphi_ = super_compose(dsigmaE_, Dphi_) - super_compose(sigmaE_, dDphi_);
  }
}

bool PointFrame::sigma_available() {
  ensure_sigma();
  return sigma_ok_;
}

const EndoC& PointFrame::phi() { ensure_sigma(); return phi_; }
const EndoC& PointFrame::dphi_raw() { ensure_sigma(); return dphiE_; }
const EndoC& PointFrame::Dphi() { ensure_sigma(); return Dphi_; }
const EndoC& PointFrame::dDphi() { ensure_hat_parts(); return dDphi_; }

const EndoC& PointFrame::sigma() {
  ensure_sigma();
  if (!sigma_ok_) throw RankDropError("sigma: rank drop at evaluation point");
  return sigmaE_;
}
const EndoC& PointFrame::dsigma() {
  ensure_sigma();
  if (!sigma_ok_) throw RankDropError("dsigma: rank drop at evaluation point");
  return dsigmaE_;
}
const MatC& PointFrame::sigma_mat(int k) {
  ensure_sigma();
  if (!sigma_ok_) throw RankDropError("sigma: rank drop at evaluation point");
  return sig_.at(k);
}
const EndoC& PointFrame::sDphi() {
  ensure_hat_parts();
  if (!sigma_ok_) throw RankDropError("sigma Dphi: rank drop at evaluation point");
  return sDphi_;
}
const EndoC& PointFrame::d_sDphi() {
  ensure_hat_parts();
  if (!sigma_ok_) throw RankDropError("d(sigma Dphi): rank drop at evaluation point");
  return dsDphi_;
}

EndoC PointFrame::theta_hat(double chi) {
  ensure_connection();
  EndoC th = theta_;
  if (chi != 0.0) th -= Cplx(chi, 0) * sDphi();
  return th;
}

EndoC PointFrame::curvature_hat(double chi, const FormC& dchi) {
  ensure_connection();
  if (chi == 0.0 && abs_max(dchi) == 0.0) return curv_;
  const EndoC& m = sDphi();
  const EndoC& dm = d_sDphi();
  EndoC th = theta_ - Cplx(chi, 0) * m;
  // d theta-hat = d theta - dchi ^ m - chi dm
  EndoC dth = dtheta_ - form_mul(dchi, m) - Cplx(chi, 0) * dm;
  return dth + super_compose(th, th);
}

EndoC PointFrame::theta_tilde() { ensure_sigma(); return theta_ - sDphi(); }

EndoC PointFrame::curvature_tilde() {
  ensure_sigma();
  EndoC th = theta_ - sDphi();
  EndoC dth = dtheta_ - d_sDphi();
  return dth + super_compose(th, th);
}

namespace {
std::vector<FormMat<Cplx>> diag_blocks(const EndoC& a, int N) {
  std::vector<FormMat<Cplx>> out;
  for (int k = 0; k <= N; ++k) out.push_back(a.block(k, k));
  return out;
}
}  // namespace

std::vector<FormMat<Cplx>> PointFrame::curvature_hat_blocks(double chi, const FormC& dchi) {
  return diag_blocks(curvature_hat(chi, dchi), N_);
}

std::vector<FormMat<Cplx>> PointFrame::curvature_tilde_blocks() {
  return diag_blocks(curvature_tilde(), N_);
}

}  // namespace chern
