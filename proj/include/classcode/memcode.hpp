// Membership codes: finite well-founded extensional pointed digraphs,
// with the code-level set constructions and the isomorphism machinery.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "classcode/hfset.hpp"

namespace classcode::code {

// Pointed digraph where only acyclicity is guaranteed. Edge (a,b) reads
// "a is an immediate member of b".
struct RawPointedGraph {
  std::vector<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
  std::string top;
};

struct CycleFound {
  std::vector<std::string> path;  // closed walk, first == last
};
struct NoTop {
  std::string node;  // node that cannot reach the declared top
};
struct ExtensionalityViolation {
  std::string a, b;  // distinct nodes with equal predecessor sets
};
struct MissingNode {
  std::string node;  // edge endpoint or top absent from the node list
};
using CodeDefect = std::variant<CycleFound, NoTop, ExtensionalityViolation, MissingNode>;

std::string describe(const CodeDefect&);

class MemCode {
 public:
  // Checked construction; throws std::invalid_argument on defect.
  static MemCode checked(const RawPointedGraph& g);

  std::size_t node_count() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int v) const { return labels_[v]; }
  int top() const { return top_; }
  int index_of(const std::string& label) const;  // -1 if absent

  const std::vector<int>& preds(int v) const { return preds_[v]; }
  const std::vector<int>& succs(int v) const { return succs_[v]; }
  bool has_edge(int a, int b) const;

  // Immediate predecessors of the top node.
  std::vector<int> pen() const { return preds_[top_]; }

  // Indices in a fixed topological order (edges point from earlier to later),
  // ties broken by label order.
  const std::vector<int>& topo_order() const { return topo_; }

  std::size_t edge_count() const;
  RawPointedGraph to_raw() const;

 private:
  friend std::variant<MemCode, CodeDefect> validate(const RawPointedGraph&);
  MemCode() = default;

  std::vector<std::string> labels_;          // sorted
  std::vector<std::vector<int>> preds_;      // sorted index lists
  std::vector<std::vector<int>> succs_;
  std::vector<int> topo_;
  int top_ = -1;
};

// The three invariants, checked in order: acyclic, top-reachable, extensional.
std::variant<MemCode, CodeDefect> validate(const RawPointedGraph& g);

// Mostowski collapse of the top node.
hf::Hf collapse(const MemCode& a);
// Collapse of every node, indexed as the code's nodes.
std::vector<hf::Hf> collapse_map(const MemCode& a);
// Collapse computed directly on an acyclic raw graph (no extensionality
// needed; duplicate values simply merge).
hf::Hf collapse_raw(const RawPointedGraph& g);

// E_x: nodes tc({x}) labeled by Ackermann index, edges the true membership.
MemCode canonical_code(const hf::Hf& x);

// Cone restriction plus extensional quotient; collapse-preserving and
// idempotent. Output is the canonical code of the raw collapse.
MemCode normalize(const RawPointedGraph& g);

// A restricted below node x (by label); induced subgraph on {y : y <= x}.
MemCode restrict_below(const MemCode& a, const std::string& x);
MemCode restrict_below(const MemCode& a, int x);

// Partial map from nodes of A to nodes of B, domain and range downward
// closed, edge preserving in both directions.
struct InitialPartialIso {
  std::map<int, int> mapping;  // node index in A -> node index in B
  bool defined(int a) const { return mapping.count(a) != 0; }
};

// Maximum initial partial isomorphism, built by predecessor matching in
// topological order. Contains every initial partial isomorphism A -> B.
InitialPartialIso max_ipi(const MemCode& a, const MemCode& b);

// Total isomorphism when one exists; present iff the collapses agree.
std::optional<InitialPartialIso> iso(const MemCode& a, const MemCode& b);

// Verdict for A vin B. Positive carries the witness a <| t_B with
// A iso B|a. Negative carries the maximum initial partial isomorphism and,
// per a <| t_B, either a cone node outside its range or the node of A at
// which extension into that cone is blocked.
struct VinNegativeEntry {
  int pen_node_b;
  enum Kind { UncoveredConeNode, BlockedNodeOfA } kind;
  int witness;  // node of B (uncovered) or node of A (blocked)
};
struct VinVerdict {
  bool member;
  int witness_b = -1;               // set when positive
  InitialPartialIso max_partial;    // set when negative
  std::vector<VinNegativeEntry> certificate;
};
VinVerdict vin(const MemCode& a, const MemCode& b);

// Code-level set constructions (section-2.1 surgeries, then normalize).
MemCode union_code(const MemCode& x);
MemCode pair_code(const MemCode& a, const MemCode& b);

// Amalgamation of A and B along their maximum initial partial isomorphism.
// The result has no distinguished top; both embeddings preserve collapse.
struct GlueResult {
  RawPointedGraph graph;                  // acyclic and extensional; top unset
  std::map<std::string, std::string> embed_a;  // label of A -> label in graph
  std::map<std::string, std::string> embed_b;
};
GlueResult glue(const MemCode& a, const MemCode& b);

// Code for the strict order {(x,y) : x before y} over collapse(A), as
// Kuratowski pairs. `order` lists the penultimate labels in order.
MemCode wellorder_code(const MemCode& a, const std::vector<std::string>& order);

// F*: code for the function {(x, f(x))}, f given on penultimate labels.
MemCode function_code(const MemCode& a, const MemCode& b,
                      const std::map<std::string, std::string>& f);
// G_*: reads a function code back as a map pen(A) -> pen(B); throws
// std::invalid_argument if G does not collapse to such a function.
std::map<std::string, std::string> function_of_code(const MemCode& g, const MemCode& a,
                                                    const MemCode& b);

// Gamma+1: the strict linear order on `order` plus a top; collapses to the
// von Neumann ordinal |order|.
MemCode ordinal_code(const std::vector<std::string>& order);

// Canonical JSON {"nodes":[...],"edges":[["a","b"],...],"top":"t"}.
std::string to_json(const MemCode& a);
std::string raw_to_json(const RawPointedGraph& g);
RawPointedGraph raw_from_json(const std::string& text);
// DOT export, top node double-circled.
std::string to_dot(const MemCode& a);

}  // namespace classcode::code
