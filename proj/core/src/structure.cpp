#include "fpmc/structure.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>

namespace fpmc {

Digraph matrix_graph(const RationalMatrix& m) {
  Digraph g(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      if (sgn(m[i][j]) != 0) g[j].push_back(i);
    }
  }
  return g;
}

namespace {

struct Tarjan {
  const Digraph& g;
  std::vector<std::size_t> index, low;
  std::vector<bool> on_stack;
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> out;
  std::size_t counter = 0;
  static constexpr std::size_t kUnseen = std::numeric_limits<std::size_t>::max();

  explicit Tarjan(const Digraph& graph)
      : g(graph), index(graph.size(), kUnseen), low(graph.size(), 0), on_stack(graph.size(), false) {}

  void visit(std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : g[v]) {
      if (index[w] == kUnseen) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> comp;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      out.push_back(std::move(comp));
    }
  }
};

bool has_self_loop(const Digraph& g, std::size_t v) {
  return std::find(g[v].begin(), g[v].end(), v) != g[v].end();
}

}  // namespace

std::vector<std::size_t> simple_cycle_lengths(const Digraph& g, const std::vector<std::size_t>& component) {
  std::vector<bool> inside(g.size(), false);
  for (std::size_t v : component) inside[v] = true;
  std::vector<std::size_t> lengths;
  std::vector<bool> on_path(g.size(), false);
  // Each cycle is enumerated once, from its smallest vertex.
  for (std::size_t s : component) {
    std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t v, std::size_t depth) {
      on_path[v] = true;
      for (std::size_t w : g[v]) {
        if (!inside[w] || w < s) continue;
        if (w == s) lengths.push_back(depth);
        else if (!on_path[w]) dfs(w, depth + 1);
      }
      on_path[v] = false;
    };
    dfs(s, 1);
  }
  return lengths;
}

std::uint64_t scc_period(const Digraph& g, const std::vector<std::size_t>& component, PeriodMode mode) {
  if (component.empty()) return 1;
  if (mode == PeriodMode::LcmSimpleCycles) {
    std::uint64_t p = 1;
    for (std::size_t len : simple_cycle_lengths(g, component)) p = lcm_u64(p, len);
    return p;
  }
  std::vector<bool> inside(g.size(), false);
  for (std::size_t v : component) inside[v] = true;
  std::vector<std::int64_t> level(g.size(), -1);
  std::deque<std::size_t> queue{component.front()};
  level[component.front()] = 0;
  std::uint64_t period = 0;
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : g[v]) {
      if (!inside[w]) continue;
      if (level[w] < 0) {
        level[w] = level[v] + 1;
        queue.push_back(w);
      } else {
        std::int64_t diff = level[v] + 1 - level[w];
        period = gcd_u64(period, static_cast<std::uint64_t>(diff < 0 ? -diff : diff));
      }
    }
  }
  return period == 0 ? 1 : period;
}

SccDecomposition scc_decompose(const Digraph& g, PeriodMode mode) {
  Tarjan tarjan(g);
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (tarjan.index[v] == Tarjan::kUnseen) tarjan.visit(v);
  }
  SccDecomposition dec;
  dec.components.assign(tarjan.out.rbegin(), tarjan.out.rend());
  dec.component_of.assign(g.size(), 0);
  for (std::size_t c = 0; c < dec.components.size(); ++c) {
    for (std::size_t v : dec.components[c]) dec.component_of[v] = c;
  }
  std::vector<std::set<std::size_t>> feeders(dec.components.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    for (std::size_t w : g[v]) {
      std::size_t cv = dec.component_of[v], cw = dec.component_of[w];
      if (cv != cw) feeders[cw].insert(cv);
    }
  }
  for (std::size_t c = 0; c < dec.components.size(); ++c) {
    dec.feeders.emplace_back(feeders[c].begin(), feeders[c].end());
    const auto& comp = dec.components[c];
    bool cyclic = comp.size() > 1 || has_self_loop(g, comp.front());
    dec.cyclic.push_back(cyclic);
    dec.periods.push_back(cyclic ? scc_period(g, comp, mode) : 1);
  }
  return dec;
}

SccDecomposition scc_decompose(const Lds& lds, PeriodMode mode) {
  return scc_decompose(matrix_graph(lds.matrix()), mode);
}

namespace {

Lds expand(const Lds& base, std::uint64_t phases) {
  const std::size_t d = base.dim();
  const std::size_t n = d * phases;
  RationalMatrix m(n, std::vector<Rational>(n, Rational(0)));
  std::vector<Rational> x(n, Rational(0));
  for (std::size_t q = 0; q < d; ++q) {
    for (std::size_t r = 0; r < d; ++r) {
      if (sgn(base.entry(q, r)) == 0) continue;
      for (std::uint64_t i = 0; i < phases; ++i) {
        m[q * phases + (i + 1) % phases][r * phases + i] = base.entry(q, r);
      }
    }
    x[q * phases] = base.init()[q];
  }
  return Lds(std::move(m), std::move(x), base.format());
}

}  // namespace

PhasedLds::PhasedLds(const Lds& base, std::uint64_t phases)
    : base_(base), phases_(phases == 0 ? 1 : phases), lds_(expand(base, phases_)) {}

FpVector PhasedLds::project(const FpVector& phased, std::size_t t) const {
  FpVector out(base_dim());
  std::uint64_t i = t % phases_;
  for (std::size_t q = 0; q < base_dim(); ++q) out[q] = phased[index(q, i)];
  return out;
}

FpVector PhasedLds::embed(const FpVector& original, std::size_t t) const {
  FpVector out(lds_.dim());
  std::uint64_t i = t % phases_;
  for (std::size_t q = 0; q < base_dim(); ++q) out[index(q, i)] = original[q];
  return out;
}

std::uint64_t blowup_factor(const Lds& lds, PeriodMode mode) {
  auto dec = scc_decompose(lds, mode);
  std::uint64_t p = 1;
  for (std::size_t c = 0; c < dec.components.size(); ++c) {
    if (dec.cyclic[c]) p = lcm_u64(p, dec.periods[c]);
  }
  return p;
}

PhasedLds blowup(const Lds& lds, PeriodMode mode) { return PhasedLds(lds, blowup_factor(lds, mode)); }

std::uint64_t positivity_index(const PhasedLds& phased, const std::vector<std::size_t>& component) {
  const std::size_t n = component.size();
  const Lds& m = phased.lds();
  const std::uint64_t P = phased.phases();
  if (n == 1 && sgn(m.entry(component[0], component[0])) == 0) {
    // Acyclic singletons have no power to become positive; a lone phased
    // state is self-reachable only through a loop.
    return 0;
  }
  using Bool = std::vector<std::vector<char>>;
  Bool adj(n, std::vector<char>(n, 0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) adj[a][b] = sgn(m.entry(component[a], component[b])) != 0;
  }
  auto multiply = [n](const Bool& x, const Bool& y) {
    Bool z(n, std::vector<char>(n, 0));
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t k = 0; k < n; ++k) {
        if (!x[a][k]) continue;
        for (std::size_t b = 0; b < n; ++b) z[a][b] |= y[k][b];
      }
    }
    return z;
  };
  Bool step = adj;
  for (std::uint64_t k = 1; k < P; ++k) step = multiply(step, adj);
  auto slice_positive = [&](const Bool& x) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        bool same = phased.phase_of(component[a]) == phased.phase_of(component[b]);
        if (same && !x[a][b]) return false;
      }
    }
    return true;
  };
  Bool power = step;
  const std::uint64_t limit = n * n + 1;
  for (std::uint64_t k = 1; k <= limit; ++k) {
    if (slice_positive(power)) return k * P;
    power = multiply(power, step);
  }
  throw std::runtime_error("component power never becomes positive on its phase slices");
}

}  // namespace fpmc
