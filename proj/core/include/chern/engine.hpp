#ifndef CHERN_ENGINE_HPP
#define CHERN_ENGINE_HPP

#include "chern/chi.hpp"
#include "chern/testform.hpp"

namespace chern {

// Numeric action of an eps-family of forms paired against a test form,
// with the eps -> 0 limit estimated from the tail of the schedule.
struct CurrentEstimate {
  std::vector<double> epsilons;
  std::vector<Cplx> pairings;
  std::vector<double> quad_errors;
  std::vector<long> cells;
  std::vector<int> depths;
  Cplx limit{0, 0};
  double error = 0;   // >= |difference of the last two extrapolants|
  double alpha = 0;   // fitted empirical order, 0 when the fallback was used
  bool converged = true;
};

// A family member evaluates the integrand form for the whole eps schedule at
// once, so the pointwise frames (pseudoinverses, curvatures) are shared
// across the schedule and the adaptive mesh is built once per pairing.
class FormFamily {
 public:
  virtual ~FormFamily() = default;
  virtual void eval(const std::vector<Cplx>& p, const std::vector<double>& eps, FormC* out) = 0;
  // |F|^2 at p, for the shell refinement and dead-zone logic
  virtual double fnorm2(const std::vector<Cplx>& p) = 0;
  // true when every term of the family carries a dchi factor, so the
  // integrand vanishes wherever chi' = 0 for every eps of the schedule
  virtual bool cutoff_supported() const = 0;
};

struct FormFamilyFactory {
  virtual ~FormFamilyFactory() = default;
  virtual std::unique_ptr<FormFamily> make() const = 0;
};

// < family_eps, test > over the schedule, then extrapolation.
CurrentEstimate pair_family(const FormFamilyFactory& factory, const TestForm& test,
                            const ChiProfile& chi, const EpsSchedule& schedule,
                            const QuadConfig& quad);

// Global pairing over P^n via the partition of unity w_i = |Z_i|^2/|Z|^2:
// one family per chart, each integrated over a truncated box [-L, L]^{2n}
// with a single box-doubling check folded into the error estimate.
CurrentEstimate pair_family_global(const std::vector<const FormFamilyFactory*>& per_chart,
                                   int projective_dim, double box_half_width,
                                   const ChiProfile& chi, const EpsSchedule& schedule,
                                   const QuadConfig& quad);

// Partition-of-unity weights on P^n evaluated in chart `chart`:
// returns w_0..w_n with sum 1.
std::vector<double> pou_weights(int chart, const std::vector<Cplx>& p, int projective_dim);

// Tail fit I(eps) ~ a0 + a1 eps^alpha with the order estimated from
// successive differences; falls back to last-value-plus-difference.
void extrapolate_tail(CurrentEstimate& est, double ratio);

}  // namespace chern

#endif
