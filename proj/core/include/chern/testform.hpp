#ifndef CHERN_TESTFORM_HPP
#define CHERN_TESTFORM_HPP

#include "chern/exprform.hpp"
#include "chern/quadrature.hpp"

namespace chern {

// Compactly supported C^2 test form on a chart: a product bump profile
// beta(|z_i - c_i|^2 / R_i^2), beta(u) = (1-u)^3, times a polynomial or
// rational form factor with exact derivative data.
class TestForm {
 public:
  TestForm(std::vector<Cplx> center, std::vector<double> radius, FormX factor);

  static TestForm bump_function(std::vector<Cplx> center, std::vector<double> radius) {
    int n = int(center.size());
    FormX one(n);
    one.coeff(0, 0) = ChartExpr::constant(n, CRat(1));
    return TestForm(std::move(center), std::move(radius), std::move(one));
  }

  int dim() const { return n_; }
  const std::vector<Cplx>& center() const { return center_; }
  const std::vector<double>& radius() const { return radius_; }
  Box support_box() const;

  double bump(const std::vector<Cplx>& p) const;
  FormC value(const std::vector<Cplx>& p) const;    // bump * factor
  FormC d_value(const std::vector<Cplx>& p) const;  // exterior derivative, exact
  bool vanishes_on(const Box& cell) const;          // cell disjoint from the support

  // test form with the factor wedged by an extra exact form (e.g. a
  // Fubini-Study form for references against omega ^ [cycle])
  TestForm wedged_with(const FormX& extra) const;

  const FormX& factor() const { return factor_; }

 private:
  int n_;
  std::vector<Cplx> center_;
  std::vector<double> radius_;
  FormX factor_, dfactor_;
  int maxdeg_ = 0;
  FlatForm flat_factor_, flat_dfactor_;
};

// Cycles supplied as scenario inputs: points and coordinate lines with
// integer multiplicities.
struct CycleComponent {
  enum class Kind { Point, Line };
  Kind kind = Kind::Point;
  std::vector<Cplx> point;  // Point: location
  int line_axis = 0;        // Line: which coordinate is pinned
  Cplx line_value{0, 0};
  long multiplicity = 1;
};

struct CycleSpec {
  std::vector<CycleComponent> components;
};

// Integration current of the cycle applied to the test form (affine chart).
Cplx pair_cycle(const CycleSpec& cycle, const TestForm& test, const QuadConfig& cfg);

// Lebesgue density of the top coefficient of a form on C^n: the factor
// relating the canonical dz^{1..n} ^ dzbar^{1..n} coefficient to
// dx_1 dy_1 ... dx_n dy_n.
inline Cplx top_density_factor(int n) {
  // dz^I dzbar^I (canonical order, all dz first) = sign * prod_i dz_i^dzbar_i
  // with sign = (-1)^{n(n-1)/2}, and dz^dzbar = -2i dx^dy.
  Cplx f(1, 0);
  for (int i = 0; i < n; ++i) f *= Cplx(0, -2);
  if (((n * (n - 1) / 2) & 1) != 0) f = -f;
  return f;
}

}  // namespace chern

#endif
