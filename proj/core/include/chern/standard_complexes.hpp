#ifndef CHERN_STANDARD_COMPLEXES_HPP
#define CHERN_STANDARD_COMPLEXES_HPP

#include <string>
#include <vector>

#include "chern/complex_spec.hpp"

namespace chern {

// The worked examples used across tests and the built-in scenario corpus.

// Koszul complex of (x, y) on C^2 with trivial metrics:
//   0 -> O -> O^2 -> O -> 0,  phi_2 = [-y; x], phi_1 = [x, y].
inline ComplexSpec koszul_xy_complex() {
  ChartGeometry cg;
  cg.n = 2;
  cg.vars = {"x", "y"};
  auto P = [&](const std::string& s) { return parse_expr(s, cg.vars); };
  cg.phi.resize(3);
  cg.phi[1] = ExprMatrix(1, 2, 2);
  cg.phi[1].at(0, 0) = P("x");
  cg.phi[1].at(0, 1) = P("y");
  cg.phi[2] = ExprMatrix(2, 1, 2);
  cg.phi[2].at(0, 0) = P("-y");
  cg.phi[2].at(1, 0) = P("x");
  cg.h.resize(3);
  cg.h[0] = ExprMatrix(1, 1, 2);
  cg.h[0].at(0, 0) = P("1");
  cg.h[1] = ExprMatrix(2, 2, 2);
  cg.h[1].at(0, 0) = P("1");
  cg.h[1].at(1, 1) = P("1");
  cg.h[2] = ExprMatrix(1, 1, 2);
  cg.h[2].at(0, 0) = P("1");
  cg.fnorm2 = P("x*conj(x) + y*conj(y)");
  return ComplexSpec("koszul-xy", {1, 2, 1}, {cg}, false);
}

// The resolution of O/(y^k, x^l y^m) on P^2 (m < k):
//   0 -> O(-k-l) -> O(-k) + O(-l-m) -> O -> 0,
// with the metrics induced by the standard metric on O(1) and F = y (a
// section of O(1)).  Charts: 0 ~ {t=1} with (x,y), 1 ~ {x=1} with (t,y),
// 2 ~ {y=1} with (t,x).
inline ComplexSpec p2_jkl_complex(int k, int l, int m) {
  std::vector<ChartGeometry> charts(3);
  auto mk_chart = [&](int c, std::vector<std::string> vars, const std::string& p1a,
                      const std::string& p1b, const std::string& p2a, const std::string& p2b,
                      const std::string& f2) {
    ChartGeometry cg;
    cg.n = 2;
    cg.vars = std::move(vars);
    auto P = [&](const std::string& s) { return parse_expr(s, cg.vars); };
    cg.phi.resize(3);
    cg.phi[1] = ExprMatrix(1, 2, 2);
    cg.phi[1].at(0, 0) = P(p1a);
    cg.phi[1].at(0, 1) = P(p1b);
    cg.phi[2] = ExprMatrix(2, 1, 2);
    cg.phi[2].at(0, 0) = P(p2a);
    cg.phi[2].at(1, 0) = P(p2b);
    cg.h.resize(3);
    cg.h[0] = projective_twist_metric({0}, 2);
    cg.h[1] = projective_twist_metric({-k, -l - m}, 2);
    cg.h[2] = projective_twist_metric({-k - l}, 2);
    cg.fnorm2 = P(f2);
    charts[c] = std::move(cg);
  };
  auto pw = [](const std::string& v, int e) {
    if (e == 0) return std::string("1");
    return v + "^" + std::to_string(e);
  };
  mk_chart(0, {"x", "y"}, pw("y", k), pw("x", l) + "*" + pw("y", m), "-" + pw("x", l),
           pw("y", k - m), "y*conj(y)/(1 + x*conj(x) + y*conj(y))");
  mk_chart(1, {"t", "y"}, pw("y", k), pw("y", m), "-1", pw("y", k - m),
           "y*conj(y)/(1 + t*conj(t) + y*conj(y))");
  mk_chart(2, {"t", "x"}, "1", pw("x", l), "-" + pw("x", l), "1",
           "1/(1 + t*conj(t) + x*conj(x))");
  return ComplexSpec("p2-example", {1, 2, 1}, charts, true);
}

// Divisor resolution 0 -> O(L*) -s-> O -> 0 for s = y on a bidisc; h1 is the
// metric weight on L* (rational, positive).
inline ComplexSpec divisor_complex(const std::string& h1_expr = "1") {
  ChartGeometry cg;
  cg.n = 2;
  cg.vars = {"x", "y"};
  auto P = [&](const std::string& s) { return parse_expr(s, cg.vars); };
  cg.phi.resize(2);
  cg.phi[1] = ExprMatrix(1, 1, 2);
  cg.phi[1].at(0, 0) = P("y");
  cg.h.resize(2);
  cg.h[0] = ExprMatrix(1, 1, 2);
  cg.h[0].at(0, 0) = P("1");
  cg.h[1] = ExprMatrix(1, 1, 2);
  cg.h[1].at(0, 0) = P(h1_expr);
  cg.fnorm2 = P("y*conj(y)");
  return ComplexSpec("divisor-pl", {1, 1}, {cg}, false);
}

// An everywhere-exact complex on C^2 with nonconstant morphisms and
// nontrivial metrics; Z is empty (F = 1).
inline ComplexSpec exact_complex() {
  ChartGeometry cg;
  cg.n = 2;
  cg.vars = {"x", "y"};
  auto P = [&](const std::string& s) { return parse_expr(s, cg.vars); };
  cg.phi.resize(3);
  cg.phi[1] = ExprMatrix(1, 2, 2);
  cg.phi[1].at(0, 0) = P("-y");
  cg.phi[1].at(0, 1) = P("1");
  cg.phi[2] = ExprMatrix(2, 1, 2);
  cg.phi[2].at(0, 0) = P("1");
  cg.phi[2].at(1, 0) = P("y");
  cg.h.resize(3);
  cg.h[0] = ExprMatrix(1, 1, 2);
  cg.h[0].at(0, 0) = P("1 + x*conj(x)");
  cg.h[1] = ExprMatrix(2, 2, 2);
  cg.h[1].at(0, 0) = P("1 + y*conj(y)");
  cg.h[1].at(0, 1) = P("x*conj(y)/2");
  cg.h[1].at(1, 0) = P("y*conj(x)/2");
  cg.h[1].at(1, 1) = P("2 + x*conj(x)");
  cg.h[2] = ExprMatrix(1, 1, 2);
  cg.h[2].at(0, 0) = P("1 + x*conj(x)*y*conj(y)");
  cg.fnorm2 = P("1");
  return ComplexSpec("exactness-whitney", {1, 2, 1}, {cg}, false);
}

}  // namespace chern

#endif
