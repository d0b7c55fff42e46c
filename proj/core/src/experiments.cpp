#include "chern/experiments.hpp"

namespace chern {

namespace {

class ChartFamilyBase : public FormFamily {
 public:
  ChartFamilyBase(const CompiledChart& cc, const ChiProfile& chi) : cc_(cc), chi_(chi) {}

  double fnorm2(const std::vector<Cplx>& p) override {
    PowTable t;
    t.init(p, cc_.maxdeg());
    return cc_.fnorm2_flat().eval(t).real();
  }

  double fnorm2_grad(const std::vector<Cplx>& p) override {
    PowTable t;
    t.init(p, cc_.maxdeg());
    FormC df = cc_.dF2_flat().eval(t);
    double g = 0;
    df.for_each([&](Mask, Mask, const Cplx& v) { g += std::abs(v); });
    return g;
  }

 protected:
  const CompiledChart& cc_;
  ChiProfile chi_;
};

class ChernProductFamily : public ChartFamilyBase {
 public:
  ChernProductFamily(const CompiledChart& cc, const ChiProfile& chi, const std::vector<int>& degrees,
                     bool character, Cplx prefactor, std::shared_ptr<const NewtonTable> table)
      : ChartFamilyBase(cc, chi), degrees_(degrees), character_(character), prefactor_(prefactor),
        table_(std::move(table)) {}

  bool cutoff_supported() const override { return false; }

  FormC eval(const std::vector<Cplx>& p, double eps) override {
    PointFrame fr(cc_, p);
    auto [chi, chip] = chi_.eval(fr.fnorm2() / eps);
    std::vector<FormMat<Cplx>> blocks;
    if (chi == 0.0 && chip == 0.0) {
      blocks = fr.curvature_blocks();  // dead zone: the smooth branch
    } else {
      FormC dchi = Cplx(chip / eps, 0) * fr.dF2();
      blocks = fr.curvature_hat_blocks(chi, dchi);
    }
    auto series = total_chern(blocks, cc_.ranks(), Cplx(0, 1) / (2 * M_PI));
    FormC out = Form<Cplx>::scalar(cc_.dim(), prefactor_);
    if (character_) {
      for (int l : degrees_) out = wedge(out, eval_tpoly(table_->ch_from_c(l), series));
    } else {
      for (int l : degrees_) out = wedge(out, series.comp(l));
    }
    return out;
  }

 private:
  std::vector<int> degrees_;
  bool character_;
  Cplx prefactor_;
  std::shared_ptr<const NewtonTable> table_;
};

class ResidueRouteFamily : public ChartFamilyBase {
 public:
  ResidueRouteFamily(const CompiledChart& cc, const ChiProfile& chi, int p, Cplx prefactor)
      : ChartFamilyBase(cc, chi), p_(p), prefactor_(prefactor) {}

  bool cutoff_supported() const override { return true; }

  FormC eval(const std::vector<Cplx>& p, double eps) override {
    PointFrame fr(cc_, p, 1e-10, p_ >= 2);
    auto [chi, chip] = chi_.eval(fr.fnorm2() / eps);
    if (chip == 0.0) return FormC(cc_.dim());
    FormC dbar_chi = Cplx(chip / eps, 0) * fr.dbarF2();

    // sigma (dbar sigma)^{p-1}, then Dphi^p on the left
    EndoC chain = fr.sigma();
    if (p_ >= 2) {
      EndoC dbs = fr.dsigma().project(0, 1);
      for (int j = 1; j < p_; ++j) chain = super_compose(chain, dbs);
    }
    EndoC R = form_mul(dbar_chi, chain);
    EndoC Dp = fr.Dphi();
    for (int j = 1; j < p_; ++j) Dp = super_compose(Dp, fr.Dphi());
    FormC tr = alternating_supertrace(super_compose(Dp, R));
    return prefactor_ * tr;
  }

 private:
  int p_;
  Cplx prefactor_;
};

class ResidueEntryFamily : public ChartFamilyBase {
 public:
  ResidueEntryFamily(const CompiledChart& cc, const ChiProfile& chi, int k, int l, int row, int col,
                     Cplx prefactor)
      : ChartFamilyBase(cc, chi), k_(k), l_(l), row_(row), col_(col), prefactor_(prefactor) {}

  bool cutoff_supported() const override { return true; }

  FormC eval(const std::vector<Cplx>& p, double eps) override {
    PointFrame fr(cc_, p);
    auto [chi, chip] = chi_.eval(fr.fnorm2() / eps);
    (void)chi;
    if (chip == 0.0) return FormC(cc_.dim());
    FormC dbar_chi = Cplx(chip / eps, 0) * fr.dbarF2();
    EndoC chain = fr.sigma();
    EndoC dbs = fr.dsigma().project(0, 1);
    for (int j = 0; j < k_ - l_ - 1; ++j) chain = super_compose(chain, dbs);
    EndoC R = form_mul(dbar_chi, chain);
    return prefactor_ * R.block(k_, l_).at(row_, col_);
  }

 private:
  int k_, l_, row_, col_;
  Cplx prefactor_;
};

class PartialChiSigmaFamily : public ChartFamilyBase {
 public:
  PartialChiSigmaFamily(const CompiledChart& cc, const ChiProfile& chi, int k, int row, int col)
      : ChartFamilyBase(cc, chi), k_(k), row_(row), col_(col) {}

  bool cutoff_supported() const override { return true; }

  FormC eval(const std::vector<Cplx>& p, double eps) override {
    PointFrame fr(cc_, p);
    auto [chi, chip] = chi_.eval(fr.fnorm2() / eps);
    (void)chi;
    if (chip == 0.0) return FormC(cc_.dim());
    FormC d_chi = Cplx(chip / eps, 0) * (fr.dF2() - fr.dbarF2());  // (1,0) part
    return wedge(d_chi, fr.sigma().block(k_, k_ - 1).at(row_, col_));
  }

 private:
  int k_, row_, col_;
};

}  // namespace

ChernProductFactory::ChernProductFactory(const CompiledChart& cc, ChiProfile chi,
                                         std::vector<int> degrees, bool character, Cplx prefactor)
    : cc_(cc), chi_(std::move(chi)), degrees_(std::move(degrees)), character_(character),
      prefactor_(prefactor) {
  int lmax = 1;
  for (int l : degrees_) lmax = std::max(lmax, l);
  if (character_) table_ = std::make_shared<NewtonTable>(std::max(lmax, cc_.dim()));
}

std::unique_ptr<FormFamily> ChernProductFactory::make() const {
  return std::make_unique<ChernProductFamily>(cc_, chi_, degrees_, character_, prefactor_, table_);
}

ResidueRouteFactory::ResidueRouteFactory(const CompiledChart& cc, ChiProfile chi, int p, Cplx prefactor)
    : cc_(cc), chi_(std::move(chi)), p_(p), prefactor_(prefactor) {}

std::unique_ptr<FormFamily> ResidueRouteFactory::make() const {
  return std::make_unique<ResidueRouteFamily>(cc_, chi_, p_, prefactor_);
}

ResidueEntryFactory::ResidueEntryFactory(const CompiledChart& cc, ChiProfile chi, int k, int l,
                                         int row, int col, Cplx prefactor)
    : cc_(cc), chi_(std::move(chi)), k_(k), l_(l), row_(row), col_(col), prefactor_(prefactor) {}

std::unique_ptr<FormFamily> ResidueEntryFactory::make() const {
  return std::make_unique<ResidueEntryFamily>(cc_, chi_, k_, l_, row_, col_, prefactor_);
}

PartialChiSigmaFactory::PartialChiSigmaFactory(const CompiledChart& cc, ChiProfile chi, int k,
                                               int row, int col)
    : cc_(cc), chi_(std::move(chi)), k_(k), row_(row), col_(col) {}

std::unique_ptr<FormFamily> PartialChiSigmaFactory::make() const {
  return std::make_unique<PartialChiSigmaFamily>(cc_, chi_, k_, row_, col_);
}

}  // namespace chern
