#include "chern/newton.hpp"

#include <sstream>
#include <stdexcept>

namespace chern {

TPoly TPoly::constant(const Rat& c) {
  TPoly p;
  if (c != 0) p.terms[{}] = c;
  return p;
}

TPoly TPoly::var(int j, int nvars) {
  (void)nvars;
  TPoly p;
  std::vector<int> m(j, 0);
  m[j - 1] = 1;
  p.terms[m] = 1;
  return p;
}

namespace {
void pad(std::vector<int>& m, std::size_t k) {
  if (m.size() < k) m.resize(k, 0);
  while (!m.empty() && m.back() == 0) m.pop_back();
}
}  // namespace

void TPoly::add(const std::vector<int>& mono, const Rat& c) {
  if (c == 0) return;
  std::vector<int> m = mono;
  pad(m, 0);
  auto it = terms.find(m);
  if (it == terms.end()) {
    terms[m] = c;
  } else {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

TPoly operator+(const TPoly& a, const TPoly& b) {
  TPoly r = a;
  for (const auto& [m, c] : b.terms) r.add(m, c);
  return r;
}

TPoly operator-(const TPoly& a, const TPoly& b) {
  TPoly r = a;
  for (const auto& [m, c] : b.terms) r.add(m, -c);
  return r;
}

TPoly operator*(const TPoly& a, const TPoly& b) {
  TPoly r;
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      std::vector<int> m = ma;
      if (m.size() < mb.size()) m.resize(mb.size(), 0);
      for (std::size_t i = 0; i < mb.size(); ++i) m[i] += mb[i];
      pad(m, 0);
      r.add(m, ca * cb);
    }
  return r;
}

TPoly TPoly::scaled(const Rat& c) const {
  TPoly r;
  if (c == 0) return r;
  for (const auto& [m, v] : terms) r.terms[m] = v * c;
  return r;
}

TPoly TPoly::compose(const std::vector<TPoly>& subs) const {
  TPoly r;
  for (const auto& [m, c] : terms) {
    TPoly t = TPoly::constant(c);
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (m[j] == 0) continue;
      if (j >= subs.size()) throw std::invalid_argument("TPoly::compose: missing substitution");
      for (int rep = 0; rep < m[j]; ++rep) t = t * subs[j];
    }
    r = r + t;
  }
  return r;
}

int TPoly::weighted_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms) {
    (void)c;
    int w = 0;
    for (std::size_t j = 0; j < m.size(); ++j) w += int(j + 1) * m[j];
    if (w > d) d = w;
  }
  return d;
}

bool TPoly::weighted_homogeneous(int degree) const {
  for (const auto& [m, c] : terms) {
    (void)c;
    int w = 0;
    for (std::size_t j = 0; j < m.size(); ++j) w += int(j + 1) * m[j];
    if (w != degree) return false;
  }
  return true;
}

std::string TPoly::str(const std::string& varname) const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    const auto& [m, c] = *it;
    Rat a = c;
    if (!first) {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    } else if (a < 0) {
      os << "-";
      a = -a;
    }
    bool has_vars = false;
    for (int e : m)
      if (e) has_vars = true;
    if (a != 1 || !has_vars) {
      os << a;
      if (has_vars) os << "*";
    }
    bool firstv = true;
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (!m[j]) continue;
      if (!firstv) os << "*";
      firstv = false;
      os << varname << (j + 1);
      if (m[j] > 1) os << "^" << m[j];
    }
    first = false;
  }
  return os.str();
}

namespace {
Rat factorial(int k) {
  Rat r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}
}  // namespace

NewtonTable::NewtonTable(int L) : L_(L) {
  if (L < 1) throw std::invalid_argument("NewtonTable: L must be >= 1");
  Q_.resize(L + 1);
  Qt_.resize(L + 1);
  Qh_.resize(L + 1);
  chc_.resize(L + 1);
  cch_.resize(L + 1);

  // Newton's identities: p_l = (-1)^{l-1} l e_l + sum_{i<l} (-1)^{l-i-1} e_{l-i} p_i.
  for (int l = 1; l <= L; ++l) {
    TPoly q = TPoly::var(l, L).scaled(Rat(((l - 1) & 1) ? -l : l));
    for (int i = 1; i <= l - 1; ++i) {
      TPoly term = TPoly::var(l - i, L) * Q_[i];
      q = q + term.scaled(((l - i - 1) & 1) ? Rat(-1) : Rat(1));
    }
    Q_[l] = q;
  }

  // ch_l = Q_l(c_1..c_l) / l!, and Qtilde_l = ch_l minus its c_l part.
  for (int l = 1; l <= L; ++l) {
    chc_[l] = Q_[l].scaled(Rat(1) / factorial(l));
    Rat lead = ((l - 1) & 1) ? -Rat(1) / factorial(l - 1) : Rat(1) / factorial(l - 1);
    Qt_[l] = chc_[l] - TPoly::var(l, L).scaled(lead);
  }

  // Triangular back-substitution: c_l = (-1)^{l-1}(l-1)! (ch_l - Qtilde_l(c_1..c_{l-1})).
  for (int l = 1; l <= L; ++l) {
    std::vector<TPoly> subs(L);
    for (int j = 1; j <= L; ++j) subs[j - 1] = (j < l) ? cch_[j] : TPoly::var(j, L);
    TPoly inner = TPoly::var(l, L) - Qt_[l].compose(subs);
    Rat f = factorial(l - 1);
    cch_[l] = inner.scaled(((l - 1) & 1) ? -f : f);
    Qh_[l] = cch_[l] - TPoly::var(l, L).scaled(((l - 1) & 1) ? -f : f);
  }
}

}  // namespace chern
