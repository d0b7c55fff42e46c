#include "chern/exprform.hpp"

#include <stdexcept>

namespace chern {

void PowTable::init(const std::vector<Cplx>& point, int max_degree) {
  int n = int(point.size());
  nslots = 2 * n;
  maxdeg = max_degree;
  v.assign(std::size_t(nslots) * (maxdeg + 1), Cplx(1, 0));
  for (int s = 0; s < nslots; ++s) {
    Cplx z = s < n ? point[s] : std::conj(point[s - n]);
    Cplx acc(1, 0);
    for (int d = 1; d <= maxdeg; ++d) {
      acc *= z;
      v[std::size_t(s) * (maxdeg + 1) + d] = acc;
    }
  }
}

FlatPoly flatten(const Poly& p, int& maxdeg) {
  if (p.nvars() > kFlatMaxVars) throw std::invalid_argument("flatten: too many variables");
  FlatPoly f;
  f.is_one = p.is_one();
  for (const auto& [m, c] : p.terms()) {
    FlatPoly::Term t;
    t.c = c.to_complex();
    t.e.fill(0);
    t.nnz = 0;
    for (int v = 0; v < p.nvars(); ++v) {
      t.e[v] = std::uint8_t(m.e[v]);
      if (m.e[v]) {
        t.slots[t.nnz++] = std::uint8_t(v);
        maxdeg = std::max(maxdeg, int(m.e[v]));
      }
    }
    f.terms.push_back(t);
  }
  return f;
}

FlatExpr flatten(const ChartExpr& e, int& maxdeg) {
  FlatExpr f;
  f.num = flatten(e.num(), maxdeg);
  f.den = flatten(e.den(), maxdeg);
  return f;
}

FlatForm flatten(const FormX& f, int& maxdeg) {
  FlatForm out;
  out.n = f.dim();
  f.for_each([&](Mask I, Mask J, const ChartExpr& c) {
    std::uint32_t idx = (std::uint32_t(I) << f.dim()) | J;
    out.entries.emplace_back(idx, flatten(c, maxdeg));
  });
  return out;
}

FlatFormMat flatten(const FormMatX& m, int& maxdeg) {
  FlatFormMat out;
  out.rows = m.rows;
  out.cols = m.cols;
  out.n = m.e.empty() ? 0 : m.e[0].dim();
  out.e.reserve(m.e.size());
  for (const auto& f : m.e) out.e.push_back(flatten(f, maxdeg));
  return out;
}

FlatExprMat flatten(const ExprMatrix& m, int& maxdeg) {
  FlatExprMat out;
  out.rows = m.rows;
  out.cols = m.cols;
  out.e.reserve(m.e.size());
  for (const auto& x : m.e) out.e.push_back(flatten(x, maxdeg));
  return out;
}

}  // namespace chern
