#ifndef CHERN_POINT_FRAME_HPP
#define CHERN_POINT_FRAME_HPP

#include <Eigen/Dense>
#include <optional>

#include "chern/complex_spec.hpp"
#include "chern/endoform.hpp"

namespace chern {

struct RankDropError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// dense complex matrices with stack storage (ranks are tiny)
using MatC = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;

// All numeric data of the complex at one chart point: morphisms, connection
// and curvature matrices, minimal inverses with their exact first
// derivatives, and the assembled connections D-tilde / D-hat.
//
// The sigma machinery is only touched on demand, so points inside the
// cutoff dead zone (chi = chi' = 0) never evaluate anything singular.
//
// One worker owns one frame; nothing here is shared.
class PointFrame {
 public:
  // sigma_derivatives = false skips the pseudoinverse differential (the
  // p = 1 residue chains never touch dbar-sigma)
  PointFrame(const CompiledChart& cc, std::vector<Cplx> point, double rank_tol = 1e-10,
             bool sigma_derivatives = true);

  int dim() const { return n_; }
  const std::vector<Cplx>& point() const { return pt_; }

  // smooth branch (never singular)
  double fnorm2() const { return f2_; }
  const FormC& dF2();     // d|F|^2 as a numeric 1-form
  const FormC& dbarF2();  // (0,1) part
  const EndoC& theta();
  const EndoC& dtheta();
  const EndoC& curvature();
  std::vector<FormMat<Cplx>> curvature_blocks();  // per level, for char forms

  // sigma branch
  bool sigma_available();  // rank equals generic rank at this point
  const EndoC& phi();      // blocks (k-1, k)
  const EndoC& dphi_raw(); // entrywise d of phi (holomorphic 1-forms)
  const EndoC& Dphi();     // D phi with super signs
  const EndoC& dDphi();    // entrywise exterior derivative of D phi
  const EndoC& sigma();    // blocks (k, k-1)
  const EndoC& dsigma();   // 1-form blocks, exact pseudoinverse differential
  const MatC& sigma_mat(int k);

  // sigma_k D phi_k (diagonal part used by every connection formula)
  const EndoC& sDphi();
  const EndoC& d_sDphi();

  // connection/curvature matrices of D-hat^eps given the numeric cutoff
  // values at this point, and of the compatible connection D-tilde
  EndoC theta_hat(double chi);
  EndoC curvature_hat(double chi, const FormC& dchi);  // dead zone returns the plain curvature
  EndoC theta_tilde();
  EndoC curvature_tilde();
  std::vector<FormMat<Cplx>> curvature_hat_blocks(double chi, const FormC& dchi);
  std::vector<FormMat<Cplx>> curvature_tilde_blocks();

 private:
  void ensure_connection();
  void ensure_sigma();
  const CompiledChart& cc_;
  std::vector<Cplx> pt_;
  double rank_tol_;
  bool sigma_derivs_;
  int n_, N_;
  PowTable pow_;

  double f2_ = 0;
  bool conn_done_ = false;
  FormC dF2_, dbarF2_;
  EndoC theta_, dtheta_, curv_;

  bool sigma_done_ = false;
  bool sigma_ok_ = false;
  bool hat_done_ = false;
  std::vector<MatC> sig_;
  EndoC phi_, dphiE_, Dphi_, dDphi_, sigmaE_, dsigmaE_, sDphi_, dsDphi_;

  void ensure_hat_parts();
};

// Shared helpers (also used by tests): metric Moore-Penrose data at a point.
struct MetricPinv {
  MatC sigma;                  // pseudoinverse in the original frames
  std::vector<MatC> dsigma;    // per direction slot (2n of them)
  int rank = 0;
};

// phi: r_out x r_in, h_out/h_in the metrics, dphi[i] holomorphic derivative
// (antiholomorphic ones vanish), dh_out/dh_in per direction slot.
MetricPinv metric_pinv(const MatC& phi, const MatC& h_out, const MatC& h_in,
                       const std::vector<MatC>& dphi_hol, const std::vector<MatC>& dh_out,
                       const std::vector<MatC>& dh_in, double rank_tol, bool want_derivatives);

}  // namespace chern

#endif
