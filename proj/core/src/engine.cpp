#include "chern/engine.hpp"

#include <algorithm>
#include <cmath>

namespace chern {

namespace {

// The whole eps schedule of a family against a test form, one component per
// eps, as a vector-valued cell integrand over the real chart coordinates.
class SliceIntegrand : public CellIntegrand {
 public:
  SliceIntegrand(std::unique_ptr<FormFamily> family, const TestForm* test, const ChiProfile& chi,
                 std::vector<double> eps, int n, bool use_pou = false, int chart = 0, int projdim = 0)
      : family_(std::move(family)), test_(test), chi_(chi), eps_(std::move(eps)), n_(n),
        use_pou_(use_pou), chart_(chart), projdim_(projdim), forms_(eps_.size(), FormC(n)) {
    eps_min_ = eps_.back();
    eps_max_ = eps_.front();
    for (double e : eps_) {
      eps_min_ = std::min(eps_min_, e);
      eps_max_ = std::max(eps_max_, e);
    }
  }

  int n_values() const override { return int(eps_.size()); }

  void eval(const double* c, Cplx* out) override {
    std::vector<Cplx> p(n_);
    for (int i = 0; i < n_; ++i) p[i] = Cplx(c[2 * i], c[2 * i + 1]);
    const int nv = n_values();
    FormC tv(n_);
    if (test_) {
      if (test_->bump(p) == 0.0) {
        for (int j = 0; j < nv; ++j) out[j] = Cplx(0, 0);
        return;
      }
      tv = test_->value(p);
    }
    double weight = use_pou_ ? pou_weights(chart_, p, projdim_)[chart_] : 1.0;
    family_->eval(p, eps_, forms_.data());
    Mask full = (Mask(1) << n_) - 1;
    Cplx density = top_density_factor(n_);
    for (int j = 0; j < nv; ++j) {
      Cplx top = test_ ? wedge(forms_[j], tv).coeff(full, full) : forms_[j].coeff(full, full);
      out[j] = weight * top * density;
    }
  }

  bool dead_cell(const Box& cell) override {
    if (test_ && test_->vanishes_on(cell)) return true;
    if (!family_->cutoff_supported()) return false;
    auto [lo, hi] = f2_range(cell);
    double span = hi - lo;
    // chi' vanishes for every eps: either inside every dead zone or outside
    // every shell
    if (hi + 0.75 * span < chi_.a() * eps_min_) return true;
    if (lo - 0.75 * span > chi_.b() * eps_max_) return true;
    return false;
  }

  bool force_refine(const Box& cell) override {
    auto [lo, hi] = f2_range(cell);
    double span = hi - lo;
    double lo_c = lo - 0.5 * span, hi_c = hi + 0.5 * span;
    for (double e : eps_) {
      if (hi_c < chi_.a() * e || lo_c > chi_.b() * e) continue;
      // straddles this shell; refined enough once the |F|^2 variation is
      // comparable to the shell width
      if (span > 1.5 * (chi_.b() - chi_.a()) * e && cell.max_side() > 1e-5) return true;
    }
    return false;
  }

  int preferred_axis(const Box& cell) override {
    if (!force_refine(cell)) return -1;
    // split along the real axis with the largest |F|^2 variation so shell
    // refinement does not waste cells on flat directions
    std::vector<Cplx> c(n_);
    for (int i = 0; i < n_; ++i)
      c[i] = Cplx(0.5 * (cell.lo[2 * i] + cell.hi[2 * i]),
                  0.5 * (cell.lo[2 * i + 1] + cell.hi[2 * i + 1]));
    int best = -1;
    double bestv = 0;
    double f0 = family_->fnorm2(c);
    for (int ax = 0; ax < 2 * n_; ++ax) {
      double step = 0.25 * (cell.hi[ax] - cell.lo[ax]);
      std::vector<Cplx> p = c;
      double re = p[ax / 2].real(), im = p[ax / 2].imag();
      if (ax % 2 == 0) p[ax / 2] = Cplx(re + step, im);
      else p[ax / 2] = Cplx(re, im + step);
      double fp = family_->fnorm2(p);
      if (ax % 2 == 0) p[ax / 2] = Cplx(re - step, im);
      else p[ax / 2] = Cplx(re, im - step);
      double fm = family_->fnorm2(p);
      double v = std::max(std::abs(fp - f0), std::abs(fm - f0));
      if (v > bestv * (1.0 + 1e-9)) {
        bestv = v;
        best = ax;
      }
    }
    return best;
  }

 private:
  std::pair<double, double> f2_range(const Box& cell) {
    std::vector<Cplx> p(n_);
    double lo = 1e300, hi = -1e300;
    int corners = 1 << (2 * n_);
    for (int mask = 0; mask <= corners; ++mask) {
      for (int i = 0; i < 2 * n_; ++i) {
        double v = (mask == corners) ? 0.5 * (cell.lo[i] + cell.hi[i])
                                     : ((mask >> i) & 1 ? cell.hi[i] : cell.lo[i]);
        if (i % 2 == 0) p[i / 2] = Cplx(v, p[i / 2].imag());
        else p[i / 2] = Cplx(p[i / 2].real(), v);
      }
      double f = family_->fnorm2(p);
      lo = std::min(lo, f);
      hi = std::max(hi, f);
    }
    return {lo, hi};
  }

  std::unique_ptr<FormFamily> family_;
  const TestForm* test_;
  const ChiProfile& chi_;
  std::vector<double> eps_;
  int n_;
  bool use_pou_;
  int chart_, projdim_;
  std::vector<FormC> forms_;
  double eps_min_ = 0, eps_max_ = 0;
};

struct SliceFactory : IntegrandFactory {
  const FormFamilyFactory* family;
  const TestForm* test = nullptr;
  const ChiProfile* chi;
  std::vector<double> eps;
  int n;
  bool pou = false;
  int chart = 0, projdim = 0;

  std::unique_ptr<CellIntegrand> make() const override {
    return std::make_unique<SliceIntegrand>(family->make(), test, *chi, eps, n, pou, chart, projdim);
  }
};

}  // namespace

std::vector<double> pou_weights(int chart, const std::vector<Cplx>& p, int projective_dim) {
  int n = projective_dim;
  std::vector<double> w(n + 1, 0.0);
  double denom = 1.0;
  for (const auto& z : p) denom += std::norm(z);
  int idx = 0;
  for (int j = 0; j <= n; ++j) {
    if (j == chart) {
      w[j] = 1.0 / denom;
    } else {
      w[j] = std::norm(p[idx]) / denom;
      ++idx;
    }
  }
  return w;
}

void extrapolate_tail(CurrentEstimate& est, double ratio) {
  const auto& I = est.pairings;
  int M = int(I.size());
  double qerr = 0;
  for (double e : est.quad_errors) qerr = std::max(qerr, e);
  if (M == 1) {
    est.limit = I[0];
    est.error = qerr;
    return;
  }
  std::vector<Cplx> d(M - 1);
  for (int j = 0; j + 1 < M; ++j) d[j] = I[j + 1] - I[j];
  double scale = 0;
  for (const auto& v : I) scale = std::max(scale, std::abs(v));
  double noise = 4.0 * qerr + 1e-13 * std::max(scale, 1.0);

  if (std::abs(d[M - 2]) <= noise) {
    // converged to quadrature noise
    est.limit = I[M - 1];
    est.error = std::abs(d[M - 2]) + qerr;
    est.alpha = 0;
    return;
  }

  // empirical order from the last few difference ratios
  std::vector<double> alphas;
  for (int j = std::max(0, M - 5); j + 1 < M - 1; ++j) {
    double r = std::abs(d[j + 1]) / std::max(std::abs(d[j]), 1e-300);
    if (r > 1e-8 && r < 0.97) alphas.push_back(std::log(r) / std::log(ratio));
  }
  bool stable = alphas.size() >= 2;
  if (stable) {
    double amin = alphas[0], amax = alphas[0], asum = 0;
    for (double a : alphas) {
      amin = std::min(amin, a);
      amax = std::max(amax, a);
      asum += a;
    }
    if (amax - amin > 0.45) stable = false;
    if (stable) {
      double alpha = asum / double(alphas.size());
      double r = std::pow(ratio, alpha);
      auto extrap = [&](int j) { return I[j] + d[j - 1] * (r / (1.0 - r)); };
      Cplx aM = extrap(M - 1), aM1 = extrap(M - 2);
      est.limit = aM;
      est.alpha = alpha;
      est.error = std::abs(aM - aM1) + std::abs(d[M - 2]) * r * r / (1.0 - r) + qerr;
      est.converged = true;
      return;
    }
  }

  // fallback: last value with the last difference as the error bar
  est.limit = I[M - 1];
  est.alpha = 0;
  est.error = 2.0 * std::abs(d[M - 2]) + qerr;
  est.converged = !(M >= 3 && std::abs(d[M - 2]) > 1.5 * std::abs(d[M - 3]));
}

namespace {
std::vector<double> schedule_eps(const EpsSchedule& s) {
  std::vector<double> e(s.count);
  for (int j = 0; j < s.count; ++j) e[j] = s.eps(j);
  return e;
}
}  // namespace

CurrentEstimate pair_family(const FormFamilyFactory& factory, const TestForm& test,
                            const ChiProfile& chi, const EpsSchedule& schedule,
                            const QuadConfig& quad) {
  CurrentEstimate est;
  Box dom = test.support_box();
  SliceFactory sf;
  sf.family = &factory;
  sf.test = &test;
  sf.chi = &chi;
  sf.eps = schedule_eps(schedule);
  sf.n = test.dim();
  QuadResult qr = adaptive_integrate(sf, dom, quad);
  est.epsilons = sf.eps;
  for (std::size_t j = 0; j < sf.eps.size(); ++j) {
    est.pairings.push_back(qr.values[j]);
    est.quad_errors.push_back(qr.errors[j]);
    est.cells.push_back(qr.cells);
    est.depths.push_back(qr.depth);
  }
  extrapolate_tail(est, schedule.ratio);
  return est;
}

CurrentEstimate pair_family_global(const std::vector<const FormFamilyFactory*>& per_chart,
                                   int projective_dim, double box_half_width,
                                   const ChiProfile& chi, const EpsSchedule& schedule,
                                   const QuadConfig& quad) {
  CurrentEstimate est;
  int n = projective_dim;
  std::vector<double> eps = schedule_eps(schedule);
  auto chart_box = [&](double L) {
    Box b;
    b.lo.assign(2 * n, -L);
    b.hi.assign(2 * n, L);
    return b;
  };
  auto run = [&](const std::vector<double>& eps_list, double L) {
    ValueVec total(eps_list.size(), Cplx(0, 0));
    std::vector<double> err(eps_list.size(), 0.0);
    long cells = 0;
    int depth = 0;
    for (std::size_t c = 0; c < per_chart.size(); ++c) {
      SliceFactory sf;
      sf.family = per_chart[c];
      sf.test = nullptr;
      sf.chi = &chi;
      sf.eps = eps_list;
      sf.n = n;
      sf.pou = true;
      sf.chart = int(c);
      sf.projdim = n;
      QuadResult qr = adaptive_integrate(sf, chart_box(L), quad);
      for (std::size_t j = 0; j < eps_list.size(); ++j) {
        total[j] += qr.values[j];
        err[j] += qr.errors[j];
      }
      cells += qr.cells;
      depth = std::max(depth, qr.depth);
    }
    return std::tuple<ValueVec, std::vector<double>, long, int>{total, err, cells, depth};
  };

  auto [vals, errs, cells, depth] = run(eps, box_half_width);
  // truncation control: one box-doubling check at the coarsest eps
  auto [vw, ew, cw, dw] = run({eps[0]}, 2 * box_half_width);
  (void)cw;
  (void)dw;
  double truncation = std::abs(vw[0] - vals[0]) + ew[0];

  est.epsilons = eps;
  for (std::size_t j = 0; j < eps.size(); ++j) {
    est.pairings.push_back(vals[j]);
    est.quad_errors.push_back(errs[j] + truncation);
    est.cells.push_back(cells);
    est.depths.push_back(depth);
  }
  extrapolate_tail(est, schedule.ratio);
  return est;
}

}  // namespace chern
