#ifndef CHERN_CHI_HPP
#define CHERN_CHI_HPP

#include <string>
#include <utility>

namespace chern {

// Smooth approximand of the characteristic function of [1, infinity):
// identically 0 below a, identically 1 above b, monotone C^2 spline in
// between, with a closed-form derivative.
class ChiProfile {
 public:
  // "default": quintic smoothstep on [1, 2]; "alt": C^3 septic on [1/2, 3].
  static ChiProfile by_id(const std::string& id);
  static ChiProfile quintic(double a, double b) { return ChiProfile(Kind::Quintic, a, b, "quintic"); }
  static ChiProfile septic(double a, double b) { return ChiProfile(Kind::Septic, a, b, "septic"); }

  double a() const { return a_; }
  double b() const { return b_; }
  const std::string& id() const { return id_; }

  // (chi(t), chi'(t)); chi' vanishes outside [a, b]
  std::pair<double, double> eval(double t) const;

 private:
  enum class Kind { Quintic, Septic };
  ChiProfile(Kind k, double a, double b, std::string id) : kind_(k), a_(a), b_(b), id_(std::move(id)) {}
  Kind kind_;
  double a_, b_;
  std::string id_;
};

// Strictly decreasing geometric schedule eps_j = eps_max * ratio^j.
struct EpsSchedule {
  double eps_max = 1e-1;
  double ratio = 0.5;
  int count = 8;

  double eps(int j) const {
    double e = eps_max;
    for (int i = 0; i < j; ++i) e *= ratio;
    return e;
  }
};

}  // namespace chern

#endif
