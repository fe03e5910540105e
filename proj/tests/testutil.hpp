// Shared helpers for the test suites: seeded generators and oracles.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "classcode/hfset.hpp"
#include "classcode/memcode.hpp"

namespace testutil {

using classcode::hf::Hf;

// Random hereditarily finite set of rank <= max_rank. Element counts are
// kept small so transitive closures stay manageable.
inline Hf random_hf(std::mt19937& rng, unsigned max_rank, unsigned max_width = 3) {
  if (max_rank == 0) return classcode::hf::empty_set();
  std::uniform_int_distribution<unsigned> width(0, max_width);
  unsigned w = width(rng);
  std::vector<Hf> elems;
  for (unsigned i = 0; i < w; ++i) elems.push_back(random_hf(rng, max_rank - 1, max_width));
  return classcode::hf::make(elems);
}

// Random set with tc_size <= k, by rejection from a rank-bounded generator.
inline Hf random_hf_tc(std::mt19937& rng, std::uint64_t k) {
  for (int tries = 0; tries < 200; ++tries) {
    Hf x = random_hf(rng, 4, 3);
    if (x.tc_size() <= k) return x;
  }
  return classcode::hf::empty_set();
}

// Relabels a code with fresh names driven by the rng; collapse-invariant.
inline classcode::code::MemCode relabel(std::mt19937& rng, const classcode::code::MemCode& c,
                                        const std::string& prefix = "n") {
  std::vector<int> perm(c.node_count());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = int(i);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::map<std::string, std::string> rename;
  for (std::size_t i = 0; i < perm.size(); ++i)
    rename[c.label(int(i))] = prefix + std::to_string(perm[i]);
  classcode::code::RawPointedGraph g = c.to_raw();
  for (auto& n : g.nodes) n = rename.at(n);
  for (auto& [a, b] : g.edges) {
    a = rename.at(a);
    b = rename.at(b);
  }
  g.top = rename.at(g.top);
  return classcode::code::MemCode::checked(g);
}

// Random valid membership code with <= max_nodes nodes: canonical code of a
// random set, randomly relabeled.
inline classcode::code::MemCode random_code(std::mt19937& rng, std::uint64_t max_nodes,
                                            const std::string& prefix = "n") {
  Hf x = random_hf_tc(rng, max_nodes);
  return relabel(rng, classcode::code::canonical_code(x), prefix);
}

// All valid membership codes with exactly n nodes in triangular form (edges
// run from lower to higher index, top is the last node). Every isomorphism
// class of n-node codes has a representative here. Keep n <= 6.
inline std::vector<classcode::code::MemCode> all_codes_with_nodes(int n) {
  using namespace classcode::code;
  std::vector<MemCode> out;
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) slots.emplace_back(i, j);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    RawPointedGraph g;
    for (int i = 0; i < n; ++i) g.nodes.push_back("v" + std::to_string(i));
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (mask & (std::uint64_t{1} << s))
        g.edges.emplace_back("v" + std::to_string(slots[s].first),
                             "v" + std::to_string(slots[s].second));
    g.top = "v" + std::to_string(n - 1);
    auto r = validate(g);
    if (auto* m = std::get_if<MemCode>(&r)) out.push_back(std::move(*m));
  }
  return out;
}

inline std::vector<classcode::code::MemCode> all_codes_up_to(int n) {
  std::vector<classcode::code::MemCode> out;
  for (int k = 1; k <= n; ++k) {
    auto v = all_codes_with_nodes(k);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

// Brute-force enumeration of every initial partial isomorphism A -> B, by
// DFS over single-node extensions. Independent of max_ipi.
inline std::vector<std::map<int, int>> all_ipis(const classcode::code::MemCode& a,
                                                const classcode::code::MemCode& b) {
  using classcode::code::MemCode;
  std::vector<std::map<int, int>> found;
  std::set<std::map<int, int>> seen;
  std::map<int, int> cur;

  auto is_valid_extension = [&](int u, int v) {
    // domain stays downward closed
    for (int p : a.preds(u))
      if (!cur.count(p)) return false;
    // range stays downward closed
    std::set<int> range;
    for (auto& [x, y] : cur) range.insert(y);
    if (range.count(v)) return false;
    for (int p : b.preds(v))
      if (!range.count(p)) return false;
    // edges preserved in both directions against all mapped nodes
    for (auto& [x, y] : cur) {
      if (a.has_edge(x, u) != b.has_edge(y, v)) return false;
      if (a.has_edge(u, x) != b.has_edge(v, y)) return false;
    }
    return true;
  };

  std::function<void()> dfs = [&]() {
    if (!seen.insert(cur).second) return;
    found.push_back(cur);
    for (std::size_t u = 0; u < a.node_count(); ++u) {
      if (cur.count(int(u))) continue;
      for (std::size_t v = 0; v < b.node_count(); ++v) {
        if (!is_valid_extension(int(u), int(v))) continue;
        cur.emplace(int(u), int(v));
        dfs();
        cur.erase(int(u));
      }
    }
  };
  dfs();
  return found;
}

}  // namespace testutil
