// Finite second-order models and the compositional evaluator, including
// FULL-powerset class quantification and a graph-semantics evaluator used
// by the node-level translations.
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "classcode/formula.hpp"
#include "classcode/hfset.hpp"

namespace classcode::fol {

// A finite class: either a set of universe elements or a set of pairs of
// universe elements (used by recursion solutions and relation parameters).
struct ClassValue {
  enum Kind { Elements, Pairs } kind = Elements;
  std::vector<hf::Hf> elems;                      // sorted, for Elements
  std::vector<std::pair<hf::Hf, hf::Hf>> pairs;   // sorted, for Pairs

  bool contains(const hf::Hf& x) const;
  bool contains_pair(const hf::Hf& a, const hf::Hf& b) const;
  bool operator==(const ClassValue& o) const;
};

using ClassPtr = std::shared_ptr<const ClassValue>;
ClassPtr make_class(std::vector<hf::Hf> elems);
ClassPtr make_pair_class(std::vector<std::pair<hf::Hf, hf::Hf>> pairs);

struct SOModel {
  enum class Family { FULL, EXPLICIT };

  std::vector<hf::Hf> universe;  // transitive, duplicate-free, sorted
  Family family = Family::FULL;
  // Class-quantifier range when EXPLICIT.
  std::vector<ClassPtr> domain;
  // Named classes usable as class symbols in formulas.
  std::map<std::string, ClassPtr> named;
  // Cutoff bound (kappa'), when this model came from a cutting-off.
  std::optional<std::uint64_t> kappa_prime;

  bool in_universe(const hf::Hf& x) const;
};

// Checks transitivity and sorts; throws std::invalid_argument otherwise.
SOModel make_model(std::vector<hf::Hf> universe, SOModel::Family family = SOModel::Family::FULL);

// Model whose universe is {x : tc_size(x) <= k} (always transitive).
SOModel h_bounded_model(std::uint64_t k);

struct Valuation {
  std::map<std::string, hf::Hf> sets;
  std::map<std::string, ClassPtr> classes;
};

// Extension point for the Trm atom: installed by the truth module.
struct EvalHooks {
  std::function<bool(const hf::Hf& level, const hf::Hf& formula_code,
                     const hf::Hf& valuation_code)>
      trm;
};

// Compositional truth. Set quantifiers range over the universe, bounded
// quantifiers over the bound's elements, class quantifiers over the class
// family (all subsets of the universe under FULL, guarded at 16 elements).
// Throws std::invalid_argument for unbound variables, std::domain_error for
// an oversized FULL quantification, std::logic_error for a Trm atom with no
// installed hook.
bool eval(const SOModel& m, const FormulaPtr& f, const Valuation& v,
          const EvalHooks* hooks = nullptr);

// A finite first-order structure given purely by a node set and a binary
// "membership" matrix; used to evaluate node-level translated formulas over
// a membership code (and definability over code graphs).
struct GraphModel {
  int n = 0;
  std::vector<std::vector<char>> in;  // in[a][b]: a is a member of b
  // optional unary predicates by class symbol
  std::map<std::string, std::vector<char>> preds;
};

// Evaluates over a GraphModel: (in a b) reads the matrix, (= a b) is node
// identity, (inclass a P) reads a predicate, quantifiers range over nodes;
// bounded quantifiers range over the members of the bound node. Trm and
// class quantifiers are rejected.
bool eval_graph(const GraphModel& g, const FormulaPtr& f, const std::map<std::string, int>& env);

}  // namespace classcode::fol
