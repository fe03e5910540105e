#include "classcode/formula.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace classcode::fol {

namespace {

FormulaPtr quantifier(Kind k, const std::string& var, const std::string& bound, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->var = var;
  f->bound = bound;
  f->kids = {std::move(body)};
  return f;
}

}  // namespace

FormulaPtr f_eq(const std::string& u, const std::string& v) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Eq;
  f->a = u;
  f->b = v;
  return f;
}

FormulaPtr f_in(const std::string& u, const std::string& v) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::In;
  f->a = u;
  f->b = v;
  return f;
}

FormulaPtr f_inclass(const std::string& u, const std::string& cls) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::InClass;
  f->a = u;
  f->b = cls;
  return f;
}

FormulaPtr f_tr(const std::string& u, const std::string& v, const std::string& w) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::TrAtom;
  f->a = u;
  f->b = v;
  f->c = w;
  return f;
}

FormulaPtr f_and(std::vector<FormulaPtr> kids) {
  if (kids.empty()) throw std::invalid_argument("and: needs children");
  if (kids.size() == 1) return kids[0];
  auto f = std::make_shared<Formula>();
  f->kind = Kind::And;
  f->kids = std::move(kids);
  return f;
}

FormulaPtr f_or(std::vector<FormulaPtr> kids) {
  if (kids.empty()) throw std::invalid_argument("or: needs children");
  if (kids.size() == 1) return kids[0];
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Or;
  f->kids = std::move(kids);
  return f;
}

FormulaPtr f_not(FormulaPtr g) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Not;
  f->kids = {std::move(g)};
  return f;
}

FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
  return f_or({f_not(std::move(a)), std::move(b)});
}

FormulaPtr f_ex(const std::string& x, FormulaPtr f) {
  return quantifier(Kind::Exists, x, "", std::move(f));
}
FormulaPtr f_all(const std::string& x, FormulaPtr f) {
  return quantifier(Kind::Forall, x, "", std::move(f));
}
FormulaPtr f_exin(const std::string& x, const std::string& y, FormulaPtr f) {
  return quantifier(Kind::ExistsIn, x, y, std::move(f));
}
FormulaPtr f_allin(const std::string& x, const std::string& y, FormulaPtr f) {
  return quantifier(Kind::ForallIn, x, y, std::move(f));
}
FormulaPtr f_exC(const std::string& X, FormulaPtr f) {
  return quantifier(Kind::ExistsClass, X, "", std::move(f));
}
FormulaPtr f_allC(const std::string& X, FormulaPtr f) {
  return quantifier(Kind::ForallClass, X, "", std::move(f));
}

// -------- parser --------

namespace {

struct Parser {
  const std::string& s;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument("formula syntax error at position " + std::to_string(pos) +
                                ": " + msg);
  }

  void skip_ws() {
    while (pos < s.size() && isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= s.size();
  }

  char peek() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input");
    return s[pos];
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }

  std::string symbol() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && !isspace(static_cast<unsigned char>(s[pos])) && s[pos] != '(' &&
           s[pos] != ')')
      ++pos;
    if (start == pos) fail("expected a symbol");
    return s.substr(start, pos - start);
  }

  FormulaPtr formula() {
    expect('(');
    std::string head = symbol();
    FormulaPtr out;
    if (head == "=" || head == "in") {
      std::string u = symbol(), v = symbol();
      out = head == "=" ? f_eq(u, v) : f_in(u, v);
    } else if (head == "inclass") {
      std::string u = symbol(), cls = symbol();
      out = f_inclass(u, cls);
    } else if (head == "tr") {
      std::string u = symbol(), v = symbol(), w = symbol();
      out = f_tr(u, v, w);
    } else if (head == "and" || head == "or") {
      std::vector<FormulaPtr> kids;
      while (peek() != ')') kids.push_back(formula());
      if (kids.size() < 2) fail(head + " needs at least two children");
      out = head == "and" ? f_and(std::move(kids)) : f_or(std::move(kids));
    } else if (head == "not") {
      out = f_not(formula());
    } else if (head == "ex" || head == "all" || head == "exC" || head == "allC") {
      std::string x = symbol();
      FormulaPtr body = formula();
      if (head == "ex")
        out = f_ex(x, body);
      else if (head == "all")
        out = f_all(x, body);
      else if (head == "exC")
        out = f_exC(x, body);
      else
        out = f_allC(x, body);
    } else if (head == "exin" || head == "allin") {
      std::string x = symbol(), y = symbol();
      FormulaPtr body = formula();
      out = head == "exin" ? f_exin(x, y, body) : f_allin(x, y, body);
    } else {
      fail("unknown operator '" + head + "'");
    }
    expect(')');
    return out;
  }
};

}  // namespace

FormulaPtr parse_formula(const std::string& text) {
  Parser p{text};
  FormulaPtr f = p.formula();
  if (!p.at_end()) p.fail("trailing input");
  return f;
}

std::string print_formula(const FormulaPtr& f) {
  std::ostringstream os;
  switch (f->kind) {
    case Kind::Eq: os << "(= " << f->a << " " << f->b << ")"; break;
    case Kind::In: os << "(in " << f->a << " " << f->b << ")"; break;
    case Kind::InClass: os << "(inclass " << f->a << " " << f->b << ")"; break;
    case Kind::TrAtom: os << "(tr " << f->a << " " << f->b << " " << f->c << ")"; break;
    case Kind::And:
    case Kind::Or:
      os << (f->kind == Kind::And ? "(and" : "(or");
      for (const auto& k : f->kids) os << " " << print_formula(k);
      os << ")";
      break;
    case Kind::Not: os << "(not " << print_formula(f->kids[0]) << ")"; break;
    case Kind::Exists: os << "(ex " << f->var << " " << print_formula(f->kids[0]) << ")"; break;
    case Kind::Forall: os << "(all " << f->var << " " << print_formula(f->kids[0]) << ")"; break;
    case Kind::ExistsIn:
      os << "(exin " << f->var << " " << f->bound << " " << print_formula(f->kids[0]) << ")";
      break;
    case Kind::ForallIn:
      os << "(allin " << f->var << " " << f->bound << " " << print_formula(f->kids[0]) << ")";
      break;
    case Kind::ExistsClass:
      os << "(exC " << f->var << " " << print_formula(f->kids[0]) << ")";
      break;
    case Kind::ForallClass:
      os << "(allC " << f->var << " " << print_formula(f->kids[0]) << ")";
      break;
  }
  return os.str();
}

bool equal(const FormulaPtr& x, const FormulaPtr& y) {
  return print_formula(x) == print_formula(y);
}

namespace {

void collect_vars(const FormulaPtr& f, std::set<std::string>& set_free,
                  std::set<std::string>& class_free, std::set<std::string> set_bound,
                  std::set<std::string> class_bound) {
  switch (f->kind) {
    case Kind::Eq:
    case Kind::In:
      if (!set_bound.count(f->a)) set_free.insert(f->a);
      if (!set_bound.count(f->b)) set_free.insert(f->b);
      return;
    case Kind::InClass:
      if (!set_bound.count(f->a)) set_free.insert(f->a);
      if (!class_bound.count(f->b)) class_free.insert(f->b);
      return;
    case Kind::TrAtom:
      for (const std::string* v : {&f->a, &f->b, &f->c})
        if (!set_bound.count(*v)) set_free.insert(*v);
      return;
    case Kind::And:
    case Kind::Or:
    case Kind::Not:
      for (const auto& k : f->kids) collect_vars(k, set_free, class_free, set_bound, class_bound);
      return;
    case Kind::Exists:
    case Kind::Forall:
      set_bound.insert(f->var);
      collect_vars(f->kids[0], set_free, class_free, set_bound, class_bound);
      return;
    case Kind::ExistsIn:
    case Kind::ForallIn:
      if (!set_bound.count(f->bound)) set_free.insert(f->bound);
      set_bound.insert(f->var);
      collect_vars(f->kids[0], set_free, class_free, set_bound, class_bound);
      return;
    case Kind::ExistsClass:
    case Kind::ForallClass:
      class_bound.insert(f->var);
      collect_vars(f->kids[0], set_free, class_free, set_bound, class_bound);
      return;
  }
}

}  // namespace

std::set<std::string> free_set_vars(const FormulaPtr& f) {
  std::set<std::string> s, c;
  collect_vars(f, s, c, {}, {});
  return s;
}

std::set<std::string> free_class_vars(const FormulaPtr& f) {
  std::set<std::string> s, c;
  collect_vars(f, s, c, {}, {});
  return c;
}

namespace {

FormulaPtr nnf(const FormulaPtr& f, bool neg) {
  switch (f->kind) {
    case Kind::Eq:
    case Kind::In:
    case Kind::InClass:
    case Kind::TrAtom: {
      auto atom = std::make_shared<Formula>(*f);
      return neg ? f_not(atom) : FormulaPtr(atom);
    }
    case Kind::Not:
      return nnf(f->kids[0], !neg);
    case Kind::And:
    case Kind::Or: {
      std::vector<FormulaPtr> kids;
      for (const auto& k : f->kids) kids.push_back(nnf(k, neg));
      bool mk_and = (f->kind == Kind::And) != neg;
      return mk_and ? f_and(std::move(kids)) : f_or(std::move(kids));
    }
    case Kind::Exists:
      return quantifier(neg ? Kind::Forall : Kind::Exists, f->var, "", nnf(f->kids[0], neg));
    case Kind::Forall:
      return quantifier(neg ? Kind::Exists : Kind::Forall, f->var, "", nnf(f->kids[0], neg));
    case Kind::ExistsIn:
      return quantifier(neg ? Kind::ForallIn : Kind::ExistsIn, f->var, f->bound,
                        nnf(f->kids[0], neg));
    case Kind::ForallIn:
      return quantifier(neg ? Kind::ExistsIn : Kind::ForallIn, f->var, f->bound,
                        nnf(f->kids[0], neg));
    case Kind::ExistsClass:
      return quantifier(neg ? Kind::ForallClass : Kind::ExistsClass, f->var, "",
                        nnf(f->kids[0], neg));
    case Kind::ForallClass:
      return quantifier(neg ? Kind::ExistsClass : Kind::ForallClass, f->var, "",
                        nnf(f->kids[0], neg));
  }
  throw std::logic_error("nnf: unreachable");
}

void all_names(const FormulaPtr& f, std::set<std::string>& names) {
  for (const std::string* s : {&f->a, &f->b, &f->c, &f->var, &f->bound})
    if (!s->empty()) names.insert(*s);
  for (const auto& k : f->kids) all_names(k, names);
}

FormulaPtr rename_var(const FormulaPtr& f, const std::string& from, const std::string& to) {
  auto g = std::make_shared<Formula>(*f);
  auto fix = [&](std::string& s) {
    if (s == from) s = to;
  };
  fix(g->a);
  fix(g->b);
  fix(g->c);
  fix(g->bound);
  if (g->var == from) return g;  // shadowed below this binder
  g->kids.clear();
  for (const auto& k : f->kids) g->kids.push_back(rename_var(k, from, to));
  return g;
}

struct PrenexEntry {
  Kind kind;
  std::string var;
};

struct PrenexState {
  std::set<std::string> used;
  int counter = 0;
  std::string fresh(const std::string& base) {
    while (true) {
      std::string name = base + std::to_string(counter++);
      if (!used.count(name)) {
        used.insert(name);
        return name;
      }
    }
  }
};

void prenex(const FormulaPtr& f, PrenexState& st, std::vector<PrenexEntry>& prefix,
            FormulaPtr& matrix) {
  switch (f->kind) {
    case Kind::Eq:
    case Kind::In:
    case Kind::InClass:
    case Kind::TrAtom:
    case Kind::Not:
      matrix = f;
      return;
    case Kind::And:
    case Kind::Or: {
      std::vector<FormulaPtr> mats;
      for (const auto& k : f->kids) {
        FormulaPtr m;
        prenex(k, st, prefix, m);
        mats.push_back(m);
      }
      matrix = f->kind == Kind::And ? f_and(std::move(mats)) : f_or(std::move(mats));
      return;
    }
    case Kind::Exists:
    case Kind::Forall:
    case Kind::ExistsClass:
    case Kind::ForallClass: {
      bool cls = f->kind == Kind::ExistsClass || f->kind == Kind::ForallClass;
      std::string fresh = st.fresh(cls ? "Q" : "q");
      prefix.push_back({f->kind, fresh});
      FormulaPtr body = rename_var(f->kids[0], f->var, fresh);
      prenex(body, st, prefix, matrix);
      return;
    }
    case Kind::ExistsIn:
    case Kind::ForallIn: {
      std::vector<PrenexEntry> inner_prefix;
      FormulaPtr inner_matrix;
      std::string fresh = st.fresh("q");
      FormulaPtr body = rename_var(f->kids[0], f->var, fresh);
      prenex(body, st, inner_prefix, inner_matrix);
      if (inner_prefix.empty()) {
        matrix = quantifier(f->kind, fresh, f->bound, inner_matrix);
        return;
      }
      // a quantifier must cross the bounded one: unfold to the guarded form
      FormulaPtr guard = f_in(fresh, f->bound);
      if (f->kind == Kind::ExistsIn) {
        prefix.push_back({Kind::Exists, fresh});
        prefix.insert(prefix.end(), inner_prefix.begin(), inner_prefix.end());
        matrix = f_and({guard, inner_matrix});
      } else {
        prefix.push_back({Kind::Forall, fresh});
        prefix.insert(prefix.end(), inner_prefix.begin(), inner_prefix.end());
        matrix = f_or({f_not(guard), inner_matrix});
      }
      return;
    }
  }
}

}  // namespace

FormulaPtr to_nnf(const FormulaPtr& f) { return nnf(f, false); }

FormulaPtr to_prenex(const FormulaPtr& f) {
  FormulaPtr n = to_nnf(f);
  PrenexState st;
  all_names(n, st.used);
  std::vector<PrenexEntry> prefix;
  FormulaPtr matrix;
  prenex(n, st, prefix, matrix);
  FormulaPtr out = matrix;
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    out = quantifier(it->kind, it->var, "", out);
  return out;
}

// -------- classification --------

namespace {

bool is_subsequence(const std::string& sub, const std::string& sup) {
  std::size_t i = 0;
  for (char c : sup)
    if (i < sub.size() && sub[i] == c) ++i;
  return i == sub.size();
}

std::string alt_string(char start, std::size_t len) {
  std::string s;
  char c = start;
  for (std::size_t i = 0; i < len; ++i) {
    s += c;
    c = c == 'E' ? 'A' : 'E';
  }
  return s;
}

// Shortest alternating supersequence of two alternating block patterns;
// ties prefer an existential lead.
std::string merge_patterns(const std::string& p, const std::string& q) {
  if (p.empty()) return q;
  if (q.empty()) return p;
  for (std::size_t len = std::max(p.size(), q.size()); len <= p.size() + q.size(); ++len)
    for (char start : {'E', 'A'}) {
      std::string cand = alt_string(start, len);
      if (is_subsequence(p, cand) && is_subsequence(q, cand)) return cand;
    }
  return p + q;  // unreachable
}

std::string prepend_block(char c, const std::string& p) {
  if (!p.empty() && p[0] == c) return p;
  return std::string(1, c) + p;
}

struct Sig {
  std::string cls;
  std::string set;
};

Sig signature(const FormulaPtr& f) {
  switch (f->kind) {
    case Kind::Eq:
    case Kind::In:
    case Kind::InClass:
    case Kind::TrAtom:
    case Kind::Not:  // NNF input: only atoms under Not
      return {};
    case Kind::And:
    case Kind::Or: {
      Sig out;
      for (const auto& k : f->kids) {
        Sig s = signature(k);
        out.cls = merge_patterns(out.cls, s.cls);
        out.set = merge_patterns(out.set, s.set);
      }
      return out;
    }
    case Kind::Exists:
    case Kind::Forall: {
      Sig s = signature(f->kids[0]);
      s.set = prepend_block(f->kind == Kind::Exists ? 'E' : 'A', s.set);
      return s;
    }
    case Kind::ExistsIn:
    case Kind::ForallIn:
      return signature(f->kids[0]);  // bounded quantifiers are transparent
    case Kind::ExistsClass:
    case Kind::ForallClass: {
      Sig s = signature(f->kids[0]);
      s.cls = prepend_block(f->kind == Kind::ExistsClass ? 'E' : 'A', s.cls);
      return s;
    }
  }
  throw std::logic_error("signature: unreachable");
}

}  // namespace

std::string to_string(const ComplexityTag& t) {
  if (t.k == 0 && t.order == 0) return "Sigma_0";
  std::string letter = t.letter == 'S' ? "Sigma" : "Pi";
  if (t.order == 0) return letter + "_" + std::to_string(t.k);
  return letter + "^1_" + std::to_string(t.k);
}

bool leq(const ComplexityTag& a, const ComplexityTag& b) {
  if (a.order == 0 && a.k == 0) return true;
  if (a.order == 0) {
    if (b.order == 1) return true;  // first-order formulas are Sigma^1_0-compatible
    if (a.k < b.k) return true;
    return a.k == b.k && a.letter == b.letter;
  }
  if (b.order == 0) return false;
  if (a.k < b.k) return true;
  return a.k == b.k && a.letter == b.letter;
}

ComplexityTag classify(const FormulaPtr& f) {
  Sig s = signature(to_nnf(f));
  ComplexityTag t;
  if (!s.cls.empty()) {
    t.order = 1;
    t.letter = s.cls[0] == 'E' ? 'S' : 'P';
    t.k = int(s.cls.size());
  } else if (!s.set.empty()) {
    t.order = 0;
    t.letter = s.set[0] == 'E' ? 'S' : 'P';
    t.k = int(s.set.size());
  }
  return t;
}

ComplexityTag dual(const ComplexityTag& t) {
  ComplexityTag d = t;
  if (t.k > 0) d.letter = t.letter == 'S' ? 'P' : 'S';
  return d;
}

}  // namespace classcode::fol
