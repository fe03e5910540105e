#include "classcode/memcode.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace classcode::code {

namespace {

struct Indexed {
  std::vector<std::string> labels;                       // sorted
  std::unordered_map<std::string, int> index;
  std::vector<std::vector<int>> preds, succs;
  int top = -1;
};

std::optional<MissingNode> build_index(const RawPointedGraph& g, Indexed& ix) {
  ix.labels = g.nodes;
  std::sort(ix.labels.begin(), ix.labels.end());
  ix.labels.erase(std::unique(ix.labels.begin(), ix.labels.end()), ix.labels.end());
  for (std::size_t i = 0; i < ix.labels.size(); ++i) ix.index[ix.labels[i]] = int(i);
  ix.preds.assign(ix.labels.size(), {});
  ix.succs.assign(ix.labels.size(), {});
  for (const auto& [a, b] : g.edges) {
    auto ia = ix.index.find(a), ib = ix.index.find(b);
    if (ia == ix.index.end()) return MissingNode{a};
    if (ib == ix.index.end()) return MissingNode{b};
    ix.preds[ib->second].push_back(ia->second);
    ix.succs[ia->second].push_back(ib->second);
  }
  for (auto& v : ix.preds) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  for (auto& v : ix.succs) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  auto it = ix.index.find(g.top);
  if (it == ix.index.end()) return MissingNode{g.top.empty() ? "<no top>" : g.top};
  ix.top = it->second;
  return std::nullopt;
}

// Returns a closed walk if the edge relation has a cycle.
std::optional<std::vector<int>> find_cycle(const std::vector<std::vector<int>>& succs) {
  int n = int(succs.size());
  std::vector<int> color(n, 0);  // 0 white, 1 on stack, 2 done
  std::vector<int> stack, parent(n, -1);
  for (int s = 0; s < n; ++s) {
    if (color[s] != 0) continue;
    std::vector<std::pair<int, std::size_t>> dfs{{s, 0}};
    color[s] = 1;
    while (!dfs.empty()) {
      auto& [v, ei] = dfs.back();
      if (ei < succs[v].size()) {
        int w = succs[v][ei++];
        if (color[w] == 1) {
          std::vector<int> cycle{w};
          for (auto it = dfs.rbegin(); it != dfs.rend(); ++it) {
            cycle.push_back(it->first);
            if (it->first == w) break;
          }
          std::reverse(cycle.begin(), cycle.end());
          return cycle;
        }
        if (color[w] == 0) {
          color[w] = 1;
          dfs.emplace_back(w, 0);
        }
      } else {
        color[v] = 2;
        dfs.pop_back();
      }
    }
  }
  return std::nullopt;
}

std::vector<int> topo_sort(const Indexed& ix) {
  // Kahn's algorithm over pred-counts; the ready set is kept ordered by node
  // index (labels are sorted, so this is label order) for determinism.
  int n = int(ix.labels.size());
  std::vector<int> remaining(n);
  for (int v = 0; v < n; ++v) remaining[v] = int(ix.preds[v].size());
  std::set<int> ready;
  for (int v = 0; v < n; ++v)
    if (remaining[v] == 0) ready.insert(v);
  std::vector<int> out;
  while (!ready.empty()) {
    int v = *ready.begin();
    ready.erase(ready.begin());
    out.push_back(v);
    for (int w : ix.succs[v])
      if (--remaining[w] == 0) ready.insert(w);
  }
  return out;
}

// Nodes y with y <= x under the reflexive-transitive closure (pred side).
std::vector<char> cone_mask(const std::vector<std::vector<int>>& preds, int x) {
  std::vector<char> in(preds.size(), 0);
  std::vector<int> stack{x};
  in[x] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int p : preds[v])
      if (!in[p]) {
        in[p] = 1;
        stack.push_back(p);
      }
  }
  return in;
}

}  // namespace

std::string describe(const CodeDefect& d) {
  std::ostringstream os;
  if (auto* c = std::get_if<CycleFound>(&d)) {
    os << "CycleFound:";
    for (const auto& n : c->path) os << " " << n;
  } else if (auto* t = std::get_if<NoTop>(&d)) {
    os << "NoTop: node " << t->node << " does not reach the top";
  } else if (auto* e = std::get_if<ExtensionalityViolation>(&d)) {
    os << "ExtensionalityViolation: " << e->a << " and " << e->b
       << " have equal predecessor sets";
  } else if (auto* m = std::get_if<MissingNode>(&d)) {
    os << "MissingNode: " << m->node;
  }
  return os.str();
}

std::variant<MemCode, CodeDefect> validate(const RawPointedGraph& g) {
  Indexed ix;
  if (auto missing = build_index(g, ix)) return CodeDefect{*missing};

  if (auto cyc = find_cycle(ix.succs)) {
    CycleFound cf;
    for (int v : *cyc) cf.path.push_back(ix.labels[v]);
    return CodeDefect{cf};
  }

  // Every node must reach the top: walk predecessors down from it.
  std::vector<char> reaches = cone_mask(ix.preds, ix.top);
  for (std::size_t v = 0; v < ix.labels.size(); ++v)
    if (!reaches[v]) return CodeDefect{NoTop{ix.labels[v]}};

  std::map<std::vector<int>, int> by_preds;
  for (std::size_t v = 0; v < ix.labels.size(); ++v) {
    auto [it, inserted] = by_preds.emplace(ix.preds[v], int(v));
    if (!inserted)
      return CodeDefect{ExtensionalityViolation{ix.labels[it->second], ix.labels[v]}};
  }

  MemCode m;
  m.labels_ = std::move(ix.labels);
  m.preds_ = std::move(ix.preds);
  m.succs_ = std::move(ix.succs);
  m.top_ = ix.top;
  Indexed tmp;
  tmp.labels = m.labels_;
  tmp.preds = m.preds_;
  tmp.succs = m.succs_;
  m.topo_ = topo_sort(tmp);
  return m;
}

MemCode MemCode::checked(const RawPointedGraph& g) {
  auto r = validate(g);
  if (auto* d = std::get_if<CodeDefect>(&r))
    throw std::invalid_argument("invalid membership code: " + describe(*d));
  return std::get<MemCode>(std::move(r));
}

int MemCode::index_of(const std::string& label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) return -1;
  return int(it - labels_.begin());
}

bool MemCode::has_edge(int a, int b) const {
  return std::binary_search(preds_[b].begin(), preds_[b].end(), a);
}

std::size_t MemCode::edge_count() const {
  std::size_t n = 0;
  for (const auto& p : preds_) n += p.size();
  return n;
}

RawPointedGraph MemCode::to_raw() const {
  RawPointedGraph g;
  g.nodes = labels_;
  for (std::size_t v = 0; v < labels_.size(); ++v)
    for (int p : preds_[v]) g.edges.emplace_back(labels_[p], labels_[v]);
  std::sort(g.edges.begin(), g.edges.end());
  g.top = labels_[top_];
  return g;
}

std::vector<hf::Hf> collapse_map(const MemCode& a) {
  std::vector<hf::Hf> val(a.node_count());
  for (int v : a.topo_order()) {
    std::vector<hf::Hf> elems;
    elems.reserve(a.preds(v).size());
    for (int p : a.preds(v)) elems.push_back(val[p]);
    val[v] = hf::make(elems);
  }
  return val;
}

hf::Hf collapse(const MemCode& a) { return collapse_map(a)[a.top()]; }

hf::Hf collapse_raw(const RawPointedGraph& g) {
  Indexed ix;
  if (auto missing = build_index(g, ix))
    throw std::invalid_argument("collapse_raw: " + describe(CodeDefect{*missing}));
  if (find_cycle(ix.succs)) throw std::invalid_argument("collapse_raw: graph has a cycle");
  std::vector<int> order = topo_sort(ix);
  std::vector<hf::Hf> val(ix.labels.size());
  for (int v : order) {
    std::vector<hf::Hf> elems;
    for (int p : ix.preds[v]) elems.push_back(val[p]);
    val[v] = hf::make(elems);
  }
  return val[ix.top];
}

MemCode canonical_code(const hf::Hf& x) {
  std::vector<hf::Hf> tc = hf::transitive_closure(x);
  // Nodes are labeled by their Ackermann indices. When an index is too large
  // to materialize, fall back to the node's position in the sorted closure,
  // which is still canonical and injective within the code.
  std::unordered_map<const hf::detail::Node*, std::string> name;
  for (std::size_t i = 0; i < tc.size(); ++i) {
    std::string s = hf::ack_string_if_small(tc[i]);
    name[tc[i].raw()] = s.empty() ? "x" + std::to_string(i) : s;
  }
  RawPointedGraph g;
  for (const hf::Hf& u : tc) g.nodes.push_back(name.at(u.raw()));
  for (const hf::Hf& v : tc)
    for (const hf::Hf& u : v.elements())
      g.edges.emplace_back(name.at(u.raw()), name.at(v.raw()));
  g.top = name.at(x.raw());
  return MemCode::checked(g);
}

MemCode normalize(const RawPointedGraph& g) { return canonical_code(collapse_raw(g)); }

MemCode restrict_below(const MemCode& a, int x) {
  if (x < 0 || std::size_t(x) >= a.node_count())
    throw std::invalid_argument("restrict_below: node out of range");
  std::vector<char> keep(a.node_count(), 0);
  {
    std::vector<int> stack{x};
    keep[x] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int p : a.preds(v))
        if (!keep[p]) {
          keep[p] = 1;
          stack.push_back(p);
        }
    }
  }
  RawPointedGraph g;
  for (std::size_t v = 0; v < a.node_count(); ++v)
    if (keep[v]) g.nodes.push_back(a.label(int(v)));
  for (std::size_t v = 0; v < a.node_count(); ++v)
    if (keep[v])
      for (int p : a.preds(int(v))) g.edges.emplace_back(a.label(p), a.label(int(v)));
  g.top = a.label(x);
  return MemCode::checked(g);
}

MemCode restrict_below(const MemCode& a, const std::string& x) {
  int v = a.index_of(x);
  if (v < 0) throw std::invalid_argument("restrict_below: no node labeled " + x);
  return restrict_below(a, v);
}

InitialPartialIso max_ipi(const MemCode& a, const MemCode& b) {
  // pi(u) is the unique node of B whose predecessors are exactly the image
  // of u's predecessors, provided those are all already mapped.
  std::map<std::vector<int>, int> b_by_preds;
  for (std::size_t v = 0; v < b.node_count(); ++v)
    b_by_preds.emplace(b.preds(int(v)), int(v));

  InitialPartialIso pi;
  std::vector<int> image(a.node_count(), -1);
  for (int u : a.topo_order()) {
    std::vector<int> key;
    key.reserve(a.preds(u).size());
    bool all_mapped = true;
    for (int p : a.preds(u)) {
      if (image[p] < 0) {
        all_mapped = false;
        break;
      }
      key.push_back(image[p]);
    }
    if (!all_mapped) continue;
    std::sort(key.begin(), key.end());
    auto it = b_by_preds.find(key);
    if (it == b_by_preds.end()) continue;
    image[u] = it->second;
    pi.mapping.emplace(u, it->second);
  }
  return pi;
}

std::optional<InitialPartialIso> iso(const MemCode& a, const MemCode& b) {
  InitialPartialIso pi = max_ipi(a, b);
  if (pi.mapping.size() != a.node_count() || pi.mapping.size() != b.node_count())
    return std::nullopt;
  return pi;
}

VinVerdict vin(const MemCode& a, const MemCode& b) {
  VinVerdict verdict;
  InitialPartialIso pi = max_ipi(a, b);

  if (pi.mapping.size() == a.node_count()) {
    int image_top = pi.mapping.at(a.top());
    if (b.has_edge(image_top, b.top())) {
      // ran pi is predecessor-closed, so it is exactly the cone below the
      // image of A's top; that node witnesses membership.
      verdict.member = true;
      verdict.witness_b = image_top;
      return verdict;
    }
  }

  verdict.member = false;
  verdict.max_partial = pi;
  std::vector<char> in_range(b.node_count(), 0);
  for (const auto& [u, v] : pi.mapping) in_range[v] = 1;

  for (int pb : b.pen()) {
    std::vector<char> cone = cone_mask([&] {
      std::vector<std::vector<int>> preds(b.node_count());
      for (std::size_t v = 0; v < b.node_count(); ++v) preds[v] = b.preds(int(v));
      return preds;
    }(), pb);
    VinNegativeEntry entry;
    entry.pen_node_b = pb;
    int uncovered = -1;
    for (std::size_t v = 0; v < b.node_count(); ++v)
      if (cone[v] && !in_range[v]) {
        uncovered = int(v);
        break;
      }
    if (uncovered >= 0) {
      entry.kind = VinNegativeEntry::UncoveredConeNode;
      entry.witness = uncovered;
    } else {
      // Cone fully covered, so the blocked side is in A: the first node in
      // topological order whose image is not in the cone.
      entry.kind = VinNegativeEntry::BlockedNodeOfA;
      entry.witness = -1;
      for (int u : a.topo_order()) {
        auto it = pi.mapping.find(u);
        if (it == pi.mapping.end() || !cone[it->second]) {
          entry.witness = u;
          break;
        }
      }
    }
    verdict.certificate.push_back(entry);
  }
  return verdict;
}

MemCode union_code(const MemCode& x) {
  RawPointedGraph g = x.to_raw();
  const std::string top = g.top;
  std::erase_if(g.edges, [&](const auto& e) { return e.second == top; });
  for (int y : x.pen())
    for (int z : x.preds(y)) g.edges.emplace_back(x.label(z), top);
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  return normalize(g);
}

GlueResult glue(const MemCode& a, const MemCode& b) {
  InitialPartialIso pi = max_ipi(a, b);
  GlueResult out;
  out.graph.nodes = b.labels();
  for (std::size_t v = 0; v < b.node_count(); ++v)
    for (int p : b.preds(int(v))) out.graph.edges.emplace_back(b.label(p), b.label(int(v)));
  for (const auto& l : b.labels()) out.embed_b[l] = l;

  auto a_name = [&](int u) {
    auto it = pi.mapping.find(u);
    if (it != pi.mapping.end()) return b.label(it->second);
    return std::string("aux:A:") + a.label(u);
  };
  for (std::size_t u = 0; u < a.node_count(); ++u) {
    out.embed_a[a.label(int(u))] = a_name(int(u));
    if (!pi.defined(int(u))) out.graph.nodes.push_back(a_name(int(u)));
  }
  for (std::size_t v = 0; v < a.node_count(); ++v) {
    if (pi.defined(int(v))) continue;  // edges within dom pi are already in B
    for (int p : a.preds(int(v))) out.graph.edges.emplace_back(a_name(p), a_name(int(v)));
  }
  std::sort(out.graph.edges.begin(), out.graph.edges.end());
  out.graph.edges.erase(std::unique(out.graph.edges.begin(), out.graph.edges.end()),
                        out.graph.edges.end());
  std::sort(out.graph.nodes.begin(), out.graph.nodes.end());
  return out;
}

MemCode pair_code(const MemCode& a, const MemCode& b) {
  GlueResult g = glue(a, b);
  const std::string top = "aux:pair";
  g.graph.nodes.push_back(top);
  g.graph.edges.emplace_back(g.embed_a.at(a.label(a.top())), top);
  g.graph.edges.emplace_back(g.embed_b.at(b.label(b.top())), top);
  std::sort(g.graph.edges.begin(), g.graph.edges.end());
  g.graph.edges.erase(std::unique(g.graph.edges.begin(), g.graph.edges.end()),
                      g.graph.edges.end());
  g.graph.top = top;
  return normalize(g.graph);
}

namespace {

// Shared by wellorder_code and function_code: attach the Kuratowski gadget
// for (x,y) above the nodes nx, ny and feed the pair node into `top`.
void add_kuratowski(RawPointedGraph& g, const std::string& nx, const std::string& ny,
                    const std::string& tag, const std::string& top) {
  std::string sx = "aux:s:" + nx;
  std::string pxy = "aux:p:" + tag;
  std::string kxy = "aux:k:" + tag;
  g.nodes.push_back(sx);
  g.nodes.push_back(pxy);
  g.nodes.push_back(kxy);
  g.edges.emplace_back(nx, sx);
  g.edges.emplace_back(nx, pxy);
  g.edges.emplace_back(ny, pxy);
  g.edges.emplace_back(sx, kxy);
  g.edges.emplace_back(pxy, kxy);
  g.edges.emplace_back(kxy, top);
}

void dedupe(RawPointedGraph& g) {
  std::sort(g.nodes.begin(), g.nodes.end());
  g.nodes.erase(std::unique(g.nodes.begin(), g.nodes.end()), g.nodes.end());
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
}

}  // namespace

MemCode wellorder_code(const MemCode& a, const std::vector<std::string>& order) {
  std::vector<std::string> pen_labels;
  for (int p : a.pen()) pen_labels.push_back(a.label(p));
  std::sort(pen_labels.begin(), pen_labels.end());
  std::vector<std::string> sorted_order = order;
  std::sort(sorted_order.begin(), sorted_order.end());
  if (sorted_order != pen_labels)
    throw std::invalid_argument("wellorder_code: order must list pen(A) exactly");

  RawPointedGraph g = a.to_raw();
  const std::string old_top = g.top;
  std::erase_if(g.edges, [&](const auto& e) { return e.second == old_top; });
  const std::string top = "aux:top";
  g.nodes.push_back(top);
  g.top = top;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j)
      add_kuratowski(g, order[i], order[j], order[i] + ":" + order[j], top);
  dedupe(g);
  return normalize(g);
}

MemCode function_code(const MemCode& a, const MemCode& b,
                      const std::map<std::string, std::string>& f) {
  std::set<std::string> pen_a, pen_b;
  for (int p : a.pen()) pen_a.insert(a.label(p));
  for (int p : b.pen()) pen_b.insert(b.label(p));
  for (const auto& l : pen_a)
    if (!f.count(l)) throw std::invalid_argument("function_code: f not total on pen(A)");
  for (const auto& [x, y] : f) {
    if (!pen_a.count(x)) throw std::invalid_argument("function_code: " + x + " not in pen(A)");
    if (!pen_b.count(y)) throw std::invalid_argument("function_code: " + y + " not in pen(B)");
  }

  GlueResult glued = glue(a, b);
  RawPointedGraph g = glued.graph;
  const std::string top = "aux:top";
  g.nodes.push_back(top);
  g.top = top;
  for (const auto& [x, y] : f)
    add_kuratowski(g, glued.embed_a.at(x), glued.embed_b.at(y), x + ":" + y, top);
  if (f.empty()) {
    // empty function: the code for the empty set
    g.nodes = {top};
    g.edges.clear();
  }
  dedupe(g);
  return normalize(g);
}

std::map<std::string, std::string> function_of_code(const MemCode& g, const MemCode& a,
                                                    const MemCode& b) {
  // Decode each member of G as a Kuratowski pair of cones and match the
  // components against the penultimate cones of A and B.
  auto match_pen = [](const MemCode& host, const MemCode& cone) -> int {
    for (int p : host.pen())
      if (iso(cone, restrict_below(host, p))) return p;
    return -1;
  };

  std::map<std::string, std::string> f;
  for (int gp : g.pen()) {
    MemCode pair_cone = restrict_below(g, gp);
    std::vector<int> parts = pair_cone.pen();
    MemCode u_cone = pair_cone, v_cone = pair_cone;  // placeholders
    if (parts.size() == 1) {
      // (u,u) = {{u}}
      MemCode s = restrict_below(pair_cone, parts[0]);
      if (s.pen().size() != 1)
        throw std::invalid_argument("function_of_code: member is not an ordered pair");
      u_cone = restrict_below(s, s.pen()[0]);
      v_cone = u_cone;
    } else if (parts.size() == 2) {
      MemCode c0 = restrict_below(pair_cone, parts[0]);
      MemCode c1 = restrict_below(pair_cone, parts[1]);
      const MemCode* sing = nullptr;
      const MemCode* duo = nullptr;
      if (c0.pen().size() == 1 && c1.pen().size() == 2) {
        sing = &c0;
        duo = &c1;
      } else if (c1.pen().size() == 1 && c0.pen().size() == 2) {
        sing = &c1;
        duo = &c0;
      } else {
        throw std::invalid_argument("function_of_code: member is not an ordered pair");
      }
      u_cone = restrict_below(*sing, sing->pen()[0]);
      MemCode d0 = restrict_below(*duo, duo->pen()[0]);
      MemCode d1 = restrict_below(*duo, duo->pen()[1]);
      if (iso(d0, u_cone))
        v_cone = d1;
      else if (iso(d1, u_cone))
        v_cone = d0;
      else
        throw std::invalid_argument("function_of_code: member is not an ordered pair");
    } else {
      throw std::invalid_argument("function_of_code: member is not an ordered pair");
    }
    int pa = match_pen(a, u_cone);
    int pb = match_pen(b, v_cone);
    if (pa < 0 || pb < 0)
      throw std::invalid_argument("function_of_code: pair components not in pen(A) x pen(B)");
    auto [it, inserted] = f.emplace(a.label(pa), b.label(pb));
    if (!inserted && it->second != b.label(pb))
      throw std::invalid_argument("function_of_code: G is not functional");
  }
  for (int p : a.pen())
    if (!f.count(a.label(p)))
      throw std::invalid_argument("function_of_code: G is not total on collapse(A)");
  return f;
}

MemCode ordinal_code(const std::vector<std::string>& order) {
  {
    std::set<std::string> uniq(order.begin(), order.end());
    if (uniq.size() != order.size())
      throw std::invalid_argument("ordinal_code: duplicate labels");
  }
  RawPointedGraph g;
  const std::string top = "aux:top";
  g.nodes = order;
  g.nodes.push_back(top);
  g.top = top;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j)
      g.edges.emplace_back(order[i], order[j]);
    g.edges.emplace_back(order[i], top);
  }
  return MemCode::checked(g);
}

std::string raw_to_json(const RawPointedGraph& g) {
  nlohmann::json j;
  j["nodes"] = g.nodes;
  auto edges = nlohmann::json::array();
  for (const auto& [a, b] : g.edges) edges.push_back({a, b});
  j["edges"] = edges;
  j["top"] = g.top;
  return j.dump();
}

std::string to_json(const MemCode& a) { return raw_to_json(a.to_raw()); }

RawPointedGraph raw_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  RawPointedGraph g;
  for (const auto& n : j.at("nodes")) g.nodes.push_back(n.get<std::string>());
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("code json: edge must be a pair");
    g.edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
  }
  g.top = j.at("top").get<std::string>();
  return g;
}

std::string to_dot(const MemCode& a) {
  std::ostringstream os;
  os << "digraph code {\n";
  for (std::size_t v = 0; v < a.node_count(); ++v) {
    os << "  \"" << a.label(int(v)) << "\"";
    if (int(v) == a.top()) os << " [peripheries=2]";
    os << ";\n";
  }
  RawPointedGraph g = a.to_raw();
  for (const auto& [x, y] : g.edges) os << "  \"" << x << "\" -> \"" << y << "\";\n";
  os << "}\n";
  return os.str();
}

}  // namespace classcode::code
