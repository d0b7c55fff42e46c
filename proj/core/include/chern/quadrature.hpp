#ifndef CHERN_QUADRATURE_HPP
#define CHERN_QUADRATURE_HPP

#include <boost/container/small_vector.hpp>
#include <complex>
#include <memory>
#include <vector>

namespace chern {

using Cplx = std::complex<double>;
using ValueVec = boost::container::small_vector<Cplx, 12>;

struct Box {
  std::vector<double> lo, hi;

  int dims() const { return int(lo.size()); }
  double volume() const {
    double v = 1;
    for (int i = 0; i < dims(); ++i) v *= hi[i] - lo[i];
    return v;
  }
  double max_side() const {
    double m = 0;
    for (int i = 0; i < dims(); ++i) m = std::max(m, hi[i] - lo[i]);
    return m;
  }
};

struct QuadConfig {
  int order = 6;        // Gauss-Legendre nodes per axis
  int max_depth = 60;   // single-split depth bound
  double rel_tol = 2e-4;
  double abs_tol = 1e-11;
  long max_cells = 2000000;
  int workers = 2;
  bool trace = false;  // print refinement progress (debugging)
};

struct QuadResult {
  ValueVec values;                 // one integral per integrand component
  std::vector<double> errors;      // per-component discrepancy sums
  long cells = 0;
  int depth = 0;
  bool exhausted = false;  // depth or cell budget hit before tolerance
};

// A vector-valued integrand over real chart coordinates; all components are
// integrated on one shared adaptive mesh (the epsilon schedule of a current
// family amortizes every expensive pointwise frame this way).  Workers own
// their instance.
class CellIntegrand {
 public:
  virtual ~CellIntegrand() = default;
  virtual int n_values() const = 0;
  virtual void eval(const double* coords, Cplx* out) = 0;
  // cell straddles some active cutoff shell too coarsely: refine first
  virtual bool force_refine(const Box& cell) { (void)cell; return false; }
  // integrand identically zero on the cell (every component)
  virtual bool dead_cell(const Box& cell) { (void)cell; return false; }
  // split-axis hint (-1 for the longest-side default)
  virtual int preferred_axis(const Box& cell) { (void)cell; return -1; }
};

struct IntegrandFactory {
  virtual ~IntegrandFactory() = default;
  virtual std::unique_ptr<CellIntegrand> make() const = 0;
};

// h-adaptive tensor Gauss-Legendre integration with deterministic worst-first
// refinement and a canonical pairwise reduction: results are bit-identical
// for any worker count.
QuadResult adaptive_integrate(const IntegrandFactory& factory, const Box& domain,
                              const QuadConfig& cfg);

// Gauss-Legendre nodes/weights on [-1, 1].
const std::vector<std::pair<double, double>>& gauss_rule(int order);

}  // namespace chern

#endif
