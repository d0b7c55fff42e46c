#ifndef CHERN_EXPERIMENTS_HPP
#define CHERN_EXPERIMENTS_HPP

#include <memory>

#include "chern/engine.hpp"
#include "chern/point_frame.hpp"
#include "chern/series.hpp"

namespace chern {

// sum_k (-1)^k tr of the diagonal blocks
template <class R>
Form<R> alternating_supertrace(const EndoForm<R>& a) {
  Form<R> t(a.dim());
  a.for_each_block([&](int k, int l, const FormMat<R>& m) {
    if (k != l) return;
    Form<R> tr(a.dim());
    for (int i = 0; i < m.rows; ++i) tr += m.at(i, i);
    if (k & 1) tr = -tr;
    t += tr;
  });
  return t;
}

// Families of forms whose eps -> 0 pairings realize the Chern-current and
// residue-current statements.  Each factory produces per-worker instances
// bound to one compiled chart.

// Product of Chern-form components c_{l_1}(E, D-hat) ^ ... ^ c_{l_m}; with
// `character` set, Chern character components instead.
class ChernProductFactory : public FormFamilyFactory {
 public:
  ChernProductFactory(const CompiledChart& cc, ChiProfile chi, std::vector<int> degrees,
                      bool character = false, Cplx prefactor = Cplx(1, 0));
  std::unique_ptr<FormFamily> make() const override;

 private:
  const CompiledChart& cc_;
  ChiProfile chi_;
  std::vector<int> degrees_;
  bool character_;
  Cplx prefactor_;
  std::shared_ptr<const NewtonTable> table_;
};

// The residue route of the degree-p theorems:
//   prefactor * sum_k (-1)^k tr(Dphi_{k+1} ... Dphi_{k+p} R^k_{k+p})
// realized at finite eps by replacing R with dbar-chi_eps ^ sigma dbar-sigma
// chains.
class ResidueRouteFactory : public FormFamilyFactory {
 public:
  ResidueRouteFactory(const CompiledChart& cc, ChiProfile chi, int p, Cplx prefactor = Cplx(1, 0));
  std::unique_ptr<FormFamily> make() const override;

 private:
  const CompiledChart& cc_;
  ChiProfile chi_;
  int p_;
  Cplx prefactor_;
};

// A single matrix entry of the regularized residue chain
// dbar-chi_eps ^ sigma_k dbar-sigma_{k-1} ... dbar-sigma_{l+1}  (a (0, k-l)-form).
class ResidueEntryFactory : public FormFamilyFactory {
 public:
  ResidueEntryFactory(const CompiledChart& cc, ChiProfile chi, int k, int l, int row, int col,
                      Cplx prefactor = Cplx(1, 0));
  std::unique_ptr<FormFamily> make() const override;

 private:
  const CompiledChart& cc_;
  ChiProfile chi_;
  int k_, l_, row_, col_;
  Cplx prefactor_;
};

// The 0-th pairing scale: < integrand-as-is, test >, for oracles and for
// custom integrand experiments (e.g. the dbar-part vanishing of Lemma 2.1:
// d'chi_eps ^ smooth sigma entries -> 0).
class PartialChiSigmaFactory : public FormFamilyFactory {
 public:
  // d'chi_eps ^ (entry (row,col) of sigma_k), a holomorphic-direction probe
  PartialChiSigmaFactory(const CompiledChart& cc, ChiProfile chi, int k, int row, int col);
  std::unique_ptr<FormFamily> make() const override;

 private:
  const CompiledChart& cc_;
  ChiProfile chi_;
  int k_, row_, col_;
};

}  // namespace chern

#endif
