#include "chern/chi.hpp"

#include <stdexcept>

namespace chern {

ChiProfile ChiProfile::by_id(const std::string& id) {
  if (id == "default" || id == "quintic") return quintic(1.0, 2.0);
  if (id == "alt" || id == "septic") return septic(0.5, 3.0);
  throw std::invalid_argument("unknown chi profile '" + id + "'");
}

std::pair<double, double> ChiProfile::eval(double t) const {
  if (t <= a_) return {0.0, 0.0};
  if (t >= b_) return {1.0, 0.0};
  double w = b_ - a_;
  double s = (t - a_) / w;
  switch (kind_) {
    case Kind::Quintic: {
      double v = s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
      double d = 30.0 * s * s * (1.0 - s) * (1.0 - s) / w;
      return {v, d};
    }
    case Kind::Septic: {
      double s4 = s * s * s * s;
      double v = s4 * (35.0 + s * (-84.0 + s * (70.0 - 20.0 * s)));
      double d = 140.0 * s * s * s * (1.0 - s) * (1.0 - s) * (1.0 - s) / w;
      return {v, d};
    }
  }
  return {0.0, 0.0};
}

}  // namespace chern
