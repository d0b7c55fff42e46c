#include "chern/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <thread>

namespace chern {

const std::vector<std::pair<double, double>>& gauss_rule(int order) {
  static std::mutex mu;
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  std::vector<std::pair<double, double>> rule(order);
  for (int i = 0; i < order; ++i) {
    // Newton iteration from the Chebyshev initial guess
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= order; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = order * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1, p1 = x;
    for (int k = 2; k <= order; ++k) {
      double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = order * (x * p1 - p0) / (x * x - 1);
    rule[i] = {x, 2.0 / ((1 - x * x) * dp * dp)};
  }
  std::sort(rule.begin(), rule.end());
  auto [pos, ok] = cache.emplace(order, std::move(rule));
  (void)ok;
  return pos->second;
}

namespace {

void gauss_cell(CellIntegrand& f, const Box& cell, int order, ValueVec& out) {
  const auto& rule = gauss_rule(order);
  int d = cell.dims();
  int nv = f.n_values();
  out.assign(nv, Cplx(0, 0));
  ValueVec point_vals(nv);
  std::vector<int> idx(d, 0);
  std::vector<double> coords(d);
  double jac = 1;
  for (int i = 0; i < d; ++i) jac *= 0.5 * (cell.hi[i] - cell.lo[i]);
  for (;;) {
    double w = 1;
    for (int i = 0; i < d; ++i) {
      const auto& [x, wi] = rule[idx[i]];
      coords[i] = 0.5 * (cell.lo[i] + cell.hi[i]) + 0.5 * (cell.hi[i] - cell.lo[i]) * x;
      w *= wi;
    }
    f.eval(coords.data(), point_vals.data());
    for (int v = 0; v < nv; ++v) out[v] += w * point_vals[v];
    int i = 0;
    while (i < d && ++idx[i] == order) idx[i++] = 0;
    if (i == d) break;
  }
  for (int v = 0; v < nv; ++v) out[v] *= jac;
}

struct Cell {
  Box box;
  int depth = 0;
  std::uint64_t path = 1;  // leading 1 sentinel, then one bit per split
  ValueVec values;
  bool forced = false;  // shell-straddling, refine ahead of everything
  bool dead = false;    // integrand identically zero on the cell
  double disc = 0;      // worst-component share of the parent discrepancy
  boost::container::small_vector<double, 12> disc_vec;
};

struct Leaf {
  std::uint64_t path;
  int depth;
  ValueVec values;
};

Cplx pairwise_sum(const std::vector<Leaf>& leaves, int comp, std::size_t lo, std::size_t hi) {
  if (hi - lo == 0) return {0, 0};
  if (hi - lo == 1)
    return comp < int(leaves[lo].values.size()) ? leaves[lo].values[comp] : Cplx(0, 0);
  std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(leaves, comp, lo, mid) + pairwise_sum(leaves, comp, mid, hi);
}

int split_axis(const Box& b) {
  int ax = 0;
  double best = b.hi[0] - b.lo[0];
  for (int i = 1; i < b.dims(); ++i)
    if (b.hi[i] - b.lo[i] > best + 1e-14) {
      best = b.hi[i] - b.lo[i];
      ax = i;
    }
  return ax;
}

double abs_sum(const ValueVec& v) {
  double t = 0;
  for (const auto& x : v) t += std::abs(x);
  return t;
}

}  // namespace

QuadResult adaptive_integrate(const IntegrandFactory& factory, const Box& domain,
                              const QuadConfig& cfg) {
  int nworkers = std::max(1, cfg.workers);
  std::vector<std::unique_ptr<CellIntegrand>> workers;
  for (int i = 0; i < nworkers; ++i) workers.push_back(factory.make());
  const int nv = workers[0]->n_values();

  QuadResult res;
  res.errors.assign(nv, 0.0);

  // Deterministic worst-first ordering: forced cells first, then by
  // discrepancy, ties broken by the subdivision path.
  struct Key {
    bool forced;
    double disc;
    std::uint64_t path;
    bool operator<(const Key& o) const {
      if (forced != o.forced) return forced;
      if (disc != o.disc) return disc > o.disc;
      return path < o.path;
    }
  };
  std::map<Key, Cell> active;
  std::vector<Leaf> leaves;
  std::vector<double> accepted_disc(nv, 0.0), active_disc(nv, 0.0);
  std::vector<double> accepted_abs(nv, 0.0), active_abs(nv, 0.0);
  long forced_count = 0;

  auto push_active = [&](Cell&& c) {
    for (int v = 0; v < nv; ++v) {
      active_abs[v] += std::abs(v < int(c.values.size()) ? c.values[v] : Cplx(0, 0));
      active_disc[v] += v < int(c.disc_vec.size()) ? c.disc_vec[v] : 0.0;
    }
    if (c.forced) ++forced_count;
    active.emplace(Key{c.forced, c.disc, c.path}, std::move(c));
  };
  auto accept_leaf = [&](Cell&& c) {
    for (int v = 0; v < nv; ++v) {
      accepted_disc[v] += v < int(c.disc_vec.size()) ? c.disc_vec[v] : 0.0;
      accepted_abs[v] += std::abs(v < int(c.values.size()) ? c.values[v] : Cplx(0, 0));
    }
    leaves.push_back({c.path, c.depth, std::move(c.values)});
  };

  {
    Cell root;
    root.box = domain;
    if (workers[0]->dead_cell(domain)) {
      res.values.assign(nv, Cplx(0, 0));
      return res;
    }
    gauss_cell(*workers[0], domain, cfg.order, root.values);
    root.forced = workers[0]->force_refine(domain);
    root.disc = abs_sum(root.values) + cfg.abs_tol + 1;  // examine the root at least once
    root.disc_vec.assign(nv, root.disc);
    ++res.cells;
    push_active(std::move(root));
  }

  // Fixed batch width: refinement decisions depend only on the queue state,
  // never on the worker count.
  const int batch = 16;
  long round = 0;

  while (!active.empty()) {
    if (res.cells > cfg.max_cells) {
      res.exhausted = true;
      break;
    }
    bool done = forced_count == 0;
    if (done) {
      for (int v = 0; v < nv && done; ++v) {
        double tol = std::max(cfg.abs_tol, cfg.rel_tol * (accepted_abs[v] + active_abs[v]));
        if (accepted_disc[v] + active_disc[v] > tol) done = false;
      }
      if (done) break;
    }
    if (cfg.trace && (++round % 50 == 0))
      std::fprintf(stderr, "[quad] round=%ld cells=%ld active=%zu forced=%ld\n", round, res.cells,
                   active.size(), forced_count);

    std::vector<Cell> todo;
    for (int i = 0; i < batch && !active.empty(); ++i) {
      auto it = active.begin();
      for (int v = 0; v < nv; ++v) {
        active_abs[v] -= std::abs(v < int(it->second.values.size()) ? it->second.values[v] : Cplx(0, 0));
        active_disc[v] -= v < int(it->second.disc_vec.size()) ? it->second.disc_vec[v] : 0.0;
      }
      if (it->second.forced) --forced_count;
      todo.push_back(std::move(it->second));
      active.erase(it);
    }

    struct Refined {
      Cell a, b;
      bool as_leaf = false;
      Cell parent;
    };
    std::vector<Refined> results(todo.size());
    std::atomic<std::size_t> next{0};
    auto work = [&](int w) {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= todo.size()) return;
        Cell& cell = todo[i];
        if (cell.depth >= cfg.max_depth) {
          results[i].as_leaf = true;
          results[i].parent = std::move(cell);
          continue;
        }
        CellIntegrand& f = *workers[w];
        int ax = f.preferred_axis(cell.box);
        if (ax < 0) ax = split_axis(cell.box);
        double mid = 0.5 * (cell.box.lo[ax] + cell.box.hi[ax]);
        Cell c0, c1;
        c0.box = cell.box;
        c1.box = cell.box;
        c0.box.hi[ax] = mid;
        c1.box.lo[ax] = mid;
        c0.depth = c1.depth = cell.depth + 1;
        c0.path = (cell.path << 1) | 0;
        c1.path = (cell.path << 1) | 1;
        for (Cell* c : {&c0, &c1}) {
          if (f.dead_cell(c->box)) {
            c->dead = true;
            c->values.assign(nv, Cplx(0, 0));
          } else {
            gauss_cell(f, c->box, cfg.order, c->values);
            c->forced = f.force_refine(c->box);
          }
        }
        c0.disc_vec.assign(nv, 0.0);
        c1.disc_vec.assign(nv, 0.0);
        double worst = 0;
        for (int v = 0; v < nv; ++v) {
          Cplx parent_v = v < int(cell.values.size()) ? cell.values[v] : Cplx(0, 0);
          double dv = std::abs(parent_v - (c0.values[v] + c1.values[v]));
          worst = std::max(worst, dv);
          if (!c0.dead) c0.disc_vec[v] = c1.dead ? dv : 0.5 * dv;
          if (!c1.dead) c1.disc_vec[v] = c0.dead ? dv : 0.5 * dv;
        }
        if (!c0.dead) c0.disc = c1.dead ? worst : 0.5 * worst;
        if (!c1.dead) c1.disc = c0.dead ? worst : 0.5 * worst;
        results[i].a = std::move(c0);
        results[i].b = std::move(c1);
        results[i].parent = std::move(cell);
      }
    };
    if (nworkers == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < nworkers; ++w) pool.emplace_back(work, w);
      for (auto& t : pool) t.join();
    }

    for (auto& r : results) {
      if (r.as_leaf) {
        accept_leaf(std::move(r.parent));
        res.exhausted = true;
        continue;
      }
      res.cells += 2;
      res.depth = std::max(res.depth, r.a.depth);
      for (Cell* c : {&r.a, &r.b}) {
        if (c->dead || (!c->forced && c->disc <= cfg.abs_tol)) accept_leaf(std::move(*c));
        else push_active(std::move(*c));
      }
    }
  }

  for (auto& [k, c] : active) accept_leaf(std::move(const_cast<Cell&>(c)));

  std::sort(leaves.begin(), leaves.end(), [](const Leaf& a, const Leaf& b) {
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.path < b.path;
  });
  res.values.assign(nv, Cplx(0, 0));
  for (int v = 0; v < nv; ++v) res.values[v] = pairwise_sum(leaves, v, 0, leaves.size());
  for (int v = 0; v < nv; ++v) res.errors[v] = accepted_disc[v];
  return res;
}

}  // namespace chern
