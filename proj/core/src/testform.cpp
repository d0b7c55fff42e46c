#include "chern/testform.hpp"

namespace chern {

TestForm::TestForm(std::vector<Cplx> center, std::vector<double> radius, FormX factor)
    : n_(int(center.size())), center_(std::move(center)), radius_(std::move(radius)),
      factor_(std::move(factor)), dfactor_(d_form(factor_)) {
  flat_factor_ = flatten(factor_, maxdeg_);
  flat_dfactor_ = flatten(dfactor_, maxdeg_);
}

Box TestForm::support_box() const {
  Box b;
  b.lo.resize(2 * n_);
  b.hi.resize(2 * n_);
  for (int i = 0; i < n_; ++i) {
    b.lo[2 * i] = center_[i].real() - radius_[i];
    b.hi[2 * i] = center_[i].real() + radius_[i];
    b.lo[2 * i + 1] = center_[i].imag() - radius_[i];
    b.hi[2 * i + 1] = center_[i].imag() + radius_[i];
  }
  return b;
}

namespace {
inline double beta(double u) {
  if (u >= 1.0) return 0.0;
  double w = 1.0 - u;
  return w * w * w;
}
inline double beta_prime(double u) {
  if (u >= 1.0) return 0.0;
  double w = 1.0 - u;
  return -3.0 * w * w;
}
}  // namespace

double TestForm::bump(const std::vector<Cplx>& p) const {
  double b = 1.0;
  for (int i = 0; i < n_; ++i) {
    double u = std::norm(p[i] - center_[i]) / (radius_[i] * radius_[i]);
    b *= beta(u);
    if (b == 0.0) return 0.0;
  }
  return b;
}

FormC TestForm::value(const std::vector<Cplx>& p) const {
  double b = bump(p);
  if (b == 0.0) return FormC(n_);
  PowTable t;
  t.init(p, maxdeg_);
  FormC f = flat_factor_.eval(t);
  return Cplx(b, 0) * f;
}

FormC TestForm::d_value(const std::vector<Cplx>& p) const {
  double b = bump(p);
  PowTable t;
  t.init(p, maxdeg_);
  FormC out(n_);
  if (b != 0.0) out += Cplx(b, 0) * flat_dfactor_.eval(t);
  // d(bump) ^ factor
  std::vector<double> betas(n_), dbetas(n_);
  for (int i = 0; i < n_; ++i) {
    double u = std::norm(p[i] - center_[i]) / (radius_[i] * radius_[i]);
    betas[i] = beta(u);
    dbetas[i] = beta_prime(u);
  }
  FormC fac = flat_factor_.eval(t);
  for (int i = 0; i < n_; ++i) {
    double others = 1.0;
    for (int j = 0; j < n_; ++j)
      if (j != i) others *= betas[j];
    if (others == 0.0 || dbetas[i] == 0.0) continue;
    double r2 = radius_[i] * radius_[i];
    Cplx zc = p[i] - center_[i];
    FormC db(n_);
    db.coeff(Mask(1) << i, 0) = others * dbetas[i] * std::conj(zc) / r2;
    db.coeff(0, Mask(1) << i) = others * dbetas[i] * zc / r2;
    out += wedge(db, fac);
  }
  return out;
}

bool TestForm::vanishes_on(const Box& cell) const {
  // the support is the product of the coordinate discs; compare against the
  // per-coordinate rectangle distance
  for (int i = 0; i < n_; ++i) {
    double cx = center_[i].real(), cy = center_[i].imag();
    double dx = std::max({cell.lo[2 * i] - cx, cx - cell.hi[2 * i], 0.0});
    double dy = std::max({cell.lo[2 * i + 1] - cy, cy - cell.hi[2 * i + 1], 0.0});
    if (dx * dx + dy * dy >= radius_[i] * radius_[i]) return true;
  }
  return false;
}

TestForm TestForm::wedged_with(const FormX& extra) const {
  return TestForm(center_, radius_, wedge(factor_, extra));
}

namespace {

class CyclePointIntegrand : public CellIntegrand {
 public:
  CyclePointIntegrand(const TestForm& test, int axis, Cplx pinned)
      : test_(test), axis_(axis), pinned_(pinned), n_(test.dim()) {}

  Cplx eval(const double* c) override {
    std::vector<Cplx> p(n_);
    int slot = 0;
    for (int i = 0; i < n_; ++i) {
      if (i == axis_) {
        p[i] = pinned_;
      } else {
        p[i] = Cplx(c[2 * slot], c[2 * slot + 1]);
        ++slot;
      }
    }
    FormC v = test_.value(p);
    // pull back: keep the top form in the remaining coordinates
    Mask rem = 0;
    for (int i = 0; i < n_; ++i)
      if (i != axis_) rem |= Mask(1) << i;
    Cplx coeff = v.coeff(rem, rem);
    return coeff * top_density_factor(n_ - 1);
  }

 private:
  const TestForm& test_;
  int axis_;
  Cplx pinned_;
  int n_;
};

struct CycleFactory : IntegrandFactory {
  const TestForm* test;
  int axis;
  Cplx pinned;
  std::unique_ptr<CellIntegrand> make() const override {
    return std::make_unique<CyclePointIntegrand>(*test, axis, pinned);
  }
};

}  // namespace

Cplx pair_cycle(const CycleSpec& cycle, const TestForm& test, const QuadConfig& cfg) {
  Cplx total(0, 0);
  int n = test.dim();
  for (const auto& comp : cycle.components) {
    if (comp.kind == CycleComponent::Kind::Point) {
      FormC v = test.value(comp.point);
      total += double(comp.multiplicity) * v.coeff(0, 0);
      continue;
    }
    if (n < 2) throw std::invalid_argument("pair_cycle: line component needs n >= 2");
    // rectangle covering the support in the remaining coordinates
    Box full = test.support_box();
    Box sub;
    for (int i = 0; i < n; ++i) {
      if (i == comp.line_axis) continue;
      sub.lo.push_back(full.lo[2 * i]);
      sub.hi.push_back(full.hi[2 * i]);
      sub.lo.push_back(full.lo[2 * i + 1]);
      sub.hi.push_back(full.hi[2 * i + 1]);
    }
    CycleFactory fac;
    fac.test = &test;
    fac.axis = comp.line_axis;
    fac.pinned = comp.line_value;
    QuadResult qr = adaptive_integrate(fac, sub, cfg);
    total += double(comp.multiplicity) * qr.value;
  }
  return total;
}

}  // namespace chern
