#include "classcode/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace classcode::fol {

bool ClassValue::contains(const hf::Hf& x) const {
  return kind == Elements && std::binary_search(elems.begin(), elems.end(), x);
}

bool ClassValue::contains_pair(const hf::Hf& a, const hf::Hf& b) const {
  return kind == Pairs &&
         std::binary_search(pairs.begin(), pairs.end(), std::make_pair(a, b));
}

bool ClassValue::operator==(const ClassValue& o) const {
  return kind == o.kind && elems == o.elems && pairs == o.pairs;
}

ClassPtr make_class(std::vector<hf::Hf> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  auto c = std::make_shared<ClassValue>();
  c->kind = ClassValue::Elements;
  c->elems = std::move(elems);
  return c;
}

ClassPtr make_pair_class(std::vector<std::pair<hf::Hf, hf::Hf>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  auto c = std::make_shared<ClassValue>();
  c->kind = ClassValue::Pairs;
  c->pairs = std::move(pairs);
  return c;
}

bool SOModel::in_universe(const hf::Hf& x) const {
  return std::binary_search(universe.begin(), universe.end(), x);
}

SOModel make_model(std::vector<hf::Hf> universe, SOModel::Family family) {
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
  SOModel m;
  m.universe = std::move(universe);
  m.family = family;
  for (const hf::Hf& x : m.universe)
    for (const hf::Hf& y : x.elements())
      if (!m.in_universe(y))
        throw std::invalid_argument("make_model: universe is not transitive");
  return m;
}

SOModel h_bounded_model(std::uint64_t k) {
  return make_model(hf::enumerate_tc_bounded(k));
}

namespace {

struct Env {
  const SOModel& m;
  const EvalHooks* hooks;
  std::map<std::string, hf::Hf> sets;
  std::map<std::string, ClassPtr> classes;

  const hf::Hf& set(const std::string& name) const {
    auto it = sets.find(name);
    if (it == sets.end()) throw std::invalid_argument("unbound set variable: " + name);
    return it->second;
  }

  const ClassPtr& cls(const std::string& name) const {
    auto it = classes.find(name);
    if (it != classes.end()) return it->second;
    auto nit = m.named.find(name);
    if (nit != m.named.end()) return nit->second;
    throw std::invalid_argument("unbound class symbol: " + name);
  }
};

class SavedSet {
 public:
  SavedSet(std::map<std::string, hf::Hf>& map, const std::string& key) : map_(map), key_(key) {
    auto it = map_.find(key_);
    if (it != map_.end()) old_ = it->second;
  }
  ~SavedSet() {
    if (old_)
      map_[key_] = *old_;
    else
      map_.erase(key_);
  }

 private:
  std::map<std::string, hf::Hf>& map_;
  std::string key_;
  std::optional<hf::Hf> old_;
};

class SavedClass {
 public:
  SavedClass(std::map<std::string, ClassPtr>& map, const std::string& key)
      : map_(map), key_(key) {
    auto it = map_.find(key_);
    if (it != map_.end()) old_ = it->second;
  }
  ~SavedClass() {
    if (old_)
      map_[key_] = old_;
    else
      map_.erase(key_);
  }

 private:
  std::map<std::string, ClassPtr>& map_;
  std::string key_;
  ClassPtr old_;
};

bool eval_rec(const FormulaPtr& f, Env& env);

// Enumerates the class-quantifier domain, calling fn until it returns true
// (existential short circuit); returns whether fn ever returned true.
bool scan_class_domain(const Env& env, const std::function<bool(const ClassPtr&)>& fn) {
  if (env.m.family == SOModel::Family::EXPLICIT) {
    for (const ClassPtr& c : env.m.domain)
      if (fn(c)) return true;
    return false;
  }
  const auto& u = env.m.universe;
  if (u.size() > 16)
    throw std::domain_error("FULL class quantification over a universe larger than 16");
  std::uint64_t total = std::uint64_t{1} << u.size();
  std::vector<hf::Hf> buf;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    buf.clear();
    for (std::size_t i = 0; i < u.size(); ++i)
      if (mask & (std::uint64_t{1} << i)) buf.push_back(u[i]);
    if (fn(make_class(buf))) return true;
  }
  return false;
}

bool eval_rec(const FormulaPtr& f, Env& env) {
  switch (f->kind) {
    case Kind::Eq:
      return env.set(f->a) == env.set(f->b);
    case Kind::In:
      return env.set(f->b).contains(env.set(f->a));
    case Kind::InClass: {
      const ClassPtr& c = env.cls(f->b);
      const hf::Hf& x = env.set(f->a);
      if (c->kind == ClassValue::Elements) return c->contains(x);
      hf::Hf p, q;
      return hf::kuratowski_split(x, p, q) && c->contains_pair(p, q);
    }
    case Kind::TrAtom: {
      if (!env.hooks || !env.hooks->trm)
        throw std::logic_error("Trm atom evaluated without an installed truth context");
      return env.hooks->trm(env.set(f->a), env.set(f->b), env.set(f->c));
    }
    case Kind::And:
      for (const auto& k : f->kids)
        if (!eval_rec(k, env)) return false;
      return true;
    case Kind::Or:
      for (const auto& k : f->kids)
        if (eval_rec(k, env)) return true;
      return false;
    case Kind::Not:
      return !eval_rec(f->kids[0], env);
    case Kind::Exists:
    case Kind::Forall: {
      bool exists = f->kind == Kind::Exists;
      SavedSet save(env.sets, f->var);
      // When the body is guarded by class membership, only the class's
      // elements can matter; they lie in the universe by the model invariant.
      const FormulaPtr& body = f->kids[0];
      const std::vector<hf::Hf>* range = &env.m.universe;
      std::vector<hf::Hf> narrowed;
      if (exists && body->kind == Kind::And && body->kids[0]->kind == Kind::InClass &&
          body->kids[0]->a == f->var) {
        const ClassPtr& c = env.cls(body->kids[0]->b);
        if (c->kind == ClassValue::Elements) {
          narrowed = c->elems;
          range = &narrowed;
        }
      }
      if (!exists && body->kind == Kind::Or && body->kids[0]->kind == Kind::Not &&
          body->kids[0]->kids[0]->kind == Kind::InClass && body->kids[0]->kids[0]->a == f->var) {
        const ClassPtr& c = env.cls(body->kids[0]->kids[0]->b);
        if (c->kind == ClassValue::Elements) {
          narrowed = c->elems;
          range = &narrowed;
        }
      }
      for (const hf::Hf& x : *range) {
        env.sets[f->var] = x;
        bool r = eval_rec(body, env);
        if (exists && r) return true;
        if (!exists && !r) return false;
      }
      return !exists;
    }
    case Kind::ExistsIn:
    case Kind::ForallIn: {
      bool exists = f->kind == Kind::ExistsIn;
      hf::Hf bound = env.set(f->bound);
      SavedSet save(env.sets, f->var);
      for (const hf::Hf& x : bound.elements()) {
        env.sets[f->var] = x;
        bool r = eval_rec(f->kids[0], env);
        if (exists && r) return true;
        if (!exists && !r) return false;
      }
      return !exists;
    }
    case Kind::ExistsClass:
    case Kind::ForallClass: {
      bool exists = f->kind == Kind::ExistsClass;
      SavedClass save(env.classes, f->var);
      bool hit = scan_class_domain(env, [&](const ClassPtr& c) {
        env.classes[f->var] = c;
        bool r = eval_rec(f->kids[0], env);
        return exists ? r : !r;
      });
      return exists ? hit : !hit;
    }
  }
  throw std::logic_error("eval: unreachable");
}

}  // namespace

bool eval(const SOModel& m, const FormulaPtr& f, const Valuation& v, const EvalHooks* hooks) {
  Env env{m, hooks, v.sets, v.classes};
  return eval_rec(f, env);
}

namespace {

bool eval_graph_rec(const GraphModel& g, const FormulaPtr& f, std::map<std::string, int>& env) {
  auto lookup = [&](const std::string& name) {
    auto it = env.find(name);
    if (it == env.end()) throw std::invalid_argument("unbound node variable: " + name);
    return it->second;
  };
  switch (f->kind) {
    case Kind::Eq:
      return lookup(f->a) == lookup(f->b);
    case Kind::In:
      return g.in[lookup(f->a)][lookup(f->b)] != 0;
    case Kind::InClass: {
      auto it = g.preds.find(f->b);
      if (it == g.preds.end())
        throw std::invalid_argument("unbound graph predicate: " + f->b);
      return it->second[lookup(f->a)] != 0;
    }
    case Kind::TrAtom:
      throw std::logic_error("Trm atom in graph semantics");
    case Kind::And:
      for (const auto& k : f->kids)
        if (!eval_graph_rec(g, k, env)) return false;
      return true;
    case Kind::Or:
      for (const auto& k : f->kids)
        if (eval_graph_rec(g, k, env)) return true;
      return false;
    case Kind::Not:
      return !eval_graph_rec(g, f->kids[0], env);
    case Kind::Exists:
    case Kind::Forall: {
      bool exists = f->kind == Kind::Exists;
      auto old = env.find(f->var) != env.end() ? std::optional<int>(env[f->var]) : std::nullopt;
      for (int v = 0; v < g.n; ++v) {
        env[f->var] = v;
        bool r = eval_graph_rec(g, f->kids[0], env);
        if (exists && r) {
          if (old) env[f->var] = *old; else env.erase(f->var);
          return true;
        }
        if (!exists && !r) {
          if (old) env[f->var] = *old; else env.erase(f->var);
          return false;
        }
      }
      if (old) env[f->var] = *old; else env.erase(f->var);
      return !exists;
    }
    case Kind::ExistsIn:
    case Kind::ForallIn: {
      bool exists = f->kind == Kind::ExistsIn;
      int b = lookup(f->bound);
      auto old = env.find(f->var) != env.end() ? std::optional<int>(env[f->var]) : std::nullopt;
      for (int v = 0; v < g.n; ++v) {
        if (!g.in[v][b]) continue;
        env[f->var] = v;
        bool r = eval_graph_rec(g, f->kids[0], env);
        if (exists && r) {
          if (old) env[f->var] = *old; else env.erase(f->var);
          return true;
        }
        if (!exists && !r) {
          if (old) env[f->var] = *old; else env.erase(f->var);
          return false;
        }
      }
      if (old) env[f->var] = *old; else env.erase(f->var);
      return !exists;
    }
    case Kind::ExistsClass:
    case Kind::ForallClass:
      throw std::logic_error("class quantifier in graph semantics");
  }
  throw std::logic_error("eval_graph: unreachable");
}

}  // namespace

bool eval_graph(const GraphModel& g, const FormulaPtr& f, const std::map<std::string, int>& env) {
  std::map<std::string, int> e = env;
  return eval_graph_rec(g, f, e);
}

}  // namespace classcode::fol
