// Formula AST for the set-theoretic language with class symbols, class
// quantifiers and the ternary Trm atom; s-expression parser and printer;
// Levy-style complexity classification.
#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace classcode::fol {

enum class Kind {
  Eq,          // (= u v)
  In,          // (in u v)
  InClass,     // (inclass u A)
  TrAtom,      // (tr u v w)
  And,         // (and f...)
  Or,          // (or f...)
  Not,         // (not f)
  Exists,      // (ex x f)
  Forall,      // (all x f)
  ExistsIn,    // (exin x y f)
  ForallIn,    // (allin x y f)
  ExistsClass, // (exC X f)
  ForallClass  // (allC X f)
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  Kind kind;
  std::string a, b, c;            // atom arguments (b is the class symbol for InClass)
  std::string var;                // bound variable for quantifiers
  std::string bound;              // bounding set variable for exin/allin
  std::vector<FormulaPtr> kids;
};

FormulaPtr f_eq(const std::string& u, const std::string& v);
FormulaPtr f_in(const std::string& u, const std::string& v);
FormulaPtr f_inclass(const std::string& u, const std::string& cls);
FormulaPtr f_tr(const std::string& u, const std::string& v, const std::string& w);
FormulaPtr f_and(std::vector<FormulaPtr> kids);
FormulaPtr f_or(std::vector<FormulaPtr> kids);
FormulaPtr f_not(FormulaPtr f);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);  // sugar: (or (not a) b)
FormulaPtr f_ex(const std::string& x, FormulaPtr f);
FormulaPtr f_all(const std::string& x, FormulaPtr f);
FormulaPtr f_exin(const std::string& x, const std::string& y, FormulaPtr f);
FormulaPtr f_allin(const std::string& x, const std::string& y, FormulaPtr f);
FormulaPtr f_exC(const std::string& X, FormulaPtr f);
FormulaPtr f_allC(const std::string& X, FormulaPtr f);

// Parses the s-expression grammar; throws std::invalid_argument with a
// position on syntax errors.
FormulaPtr parse_formula(const std::string& text);
// Canonical printer; print-then-parse is the identity.
std::string print_formula(const FormulaPtr& f);

bool equal(const FormulaPtr& x, const FormulaPtr& y);

// Free set variables / free class variables (class symbols not bound by a
// class quantifier count as free).
std::set<std::string> free_set_vars(const FormulaPtr& f);
std::set<std::string> free_class_vars(const FormulaPtr& f);

// Negation normal form: negations pushed to atoms, implications expanded.
FormulaPtr to_nnf(const FormulaPtr& f);

// Prenex transform for unbounded quantifiers (set and class); bounded
// quantifiers are unfolded into guarded unbounded ones when a quantifier
// must cross them. Capture is avoided with fresh variables.
FormulaPtr to_prenex(const FormulaPtr& f);

// Complexity tags: Sigma_0, Sigma_k / Pi_k (first-order), Sigma^1_k / Pi^1_k.
struct ComplexityTag {
  int order = 0;     // 0 first-order, 1 second-order
  char letter = 'S'; // 'S' or 'P'; meaningless when k == 0
  int k = 0;
};
std::string to_string(const ComplexityTag&);
// Partial order: t1 <= t2 when every t1-formula is (syntactically) t2.
bool leq(const ComplexityTag& t1, const ComplexityTag& t2);

// Syntactic classification: bounded quantifiers are transparent, class
// alternations dominate set alternations.
ComplexityTag classify(const FormulaPtr& f);
ComplexityTag dual(const ComplexityTag& t);

}  // namespace classcode::fol
