#include "classcode/godel.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace classcode::fol {

namespace {

using hf::Hf;

// Operator tags, encoded via the Ackermann bijection to keep code ranks flat.
enum Tag : int {
  kEq = 0,
  kIn = 1,
  kInClass = 2,
  kTrAtom = 3,
  kAnd = 4,
  kOr = 5,
  kNot = 6,
  kExists = 7,
  kForall = 8,
  kExistsIn = 9,
  kForallIn = 10
};

Hf tag_code(Tag t) { return hf::unack(hf::Nat(int(t))); }

std::optional<int> tag_of(const Hf& h) {
  for (int t = kEq; t <= kForallIn; ++t)
    if (h == hf::unack(hf::Nat(t))) return t;
  return std::nullopt;
}

Hf var_code(const std::string& name) {
  int i = codable_var_index(name);
  if (i < 0)
    throw std::invalid_argument("godel_encode: variable '" + name +
                                "' is outside the codable namespace v0, v1, ...");
  return hf::unack(hf::Nat(i));
}

std::optional<int> var_index_of(const Hf& h) {
  // inverse Ackermann within a sane range
  for (int i = 0; i < 4096; ++i)
    if (h == hf::unack(hf::Nat(i))) return i;
  return std::nullopt;
}

Hf k2(const Hf& a, const Hf& b) { return hf::kuratowski(a, b); }

Hf encode_list(const std::vector<Hf>& xs) {
  Hf out = hf::empty_set();
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) out = k2(*it, out);
  return out;
}

std::optional<std::vector<Hf>> decode_list(Hf h) {
  std::vector<Hf> out;
  while (!(h == hf::empty_set())) {
    Hf head, tail;
    if (!hf::kuratowski_split(h, head, tail)) return std::nullopt;
    out.push_back(head);
    h = tail;
    if (out.size() > 10000) return std::nullopt;
  }
  return out;
}

}  // namespace

int codable_var_index(const std::string& name) {
  if (name.size() < 2 || name[0] != 'v') return -1;
  for (std::size_t i = 1; i < name.size(); ++i)
    if (!isdigit(static_cast<unsigned char>(name[i]))) return -1;
  if (name.size() > 5) return -1;
  int idx = std::stoi(name.substr(1));
  return idx;
}

std::string codable_var(int index) { return "v" + std::to_string(index); }

hf::Hf godel_encode(const FormulaPtr& f) {
  switch (f->kind) {
    case Kind::Eq:
      return k2(tag_code(kEq), k2(var_code(f->a), var_code(f->b)));
    case Kind::In:
      return k2(tag_code(kIn), k2(var_code(f->a), var_code(f->b)));
    case Kind::InClass:
      if (f->b != kParamClassSymbol)
        throw std::invalid_argument(
            "godel_encode: only the distinguished parameter class A is codable");
      return k2(tag_code(kInClass), var_code(f->a));
    case Kind::TrAtom:
      return k2(tag_code(kTrAtom), k2(var_code(f->a), k2(var_code(f->b), var_code(f->c))));
    case Kind::And:
    case Kind::Or: {
      std::vector<Hf> kids;
      for (const auto& k : f->kids) kids.push_back(godel_encode(k));
      return k2(tag_code(f->kind == Kind::And ? kAnd : kOr), encode_list(kids));
    }
    case Kind::Not:
      return k2(tag_code(kNot), godel_encode(f->kids[0]));
    case Kind::Exists:
    case Kind::Forall:
      return k2(tag_code(f->kind == Kind::Exists ? kExists : kForall),
                k2(var_code(f->var), godel_encode(f->kids[0])));
    case Kind::ExistsIn:
    case Kind::ForallIn:
      return k2(tag_code(f->kind == Kind::ExistsIn ? kExistsIn : kForallIn),
                k2(var_code(f->var), k2(var_code(f->bound), godel_encode(f->kids[0]))));
    case Kind::ExistsClass:
    case Kind::ForallClass:
      throw std::invalid_argument("godel_encode: class quantifiers are not in the codable language");
  }
  throw std::logic_error("godel_encode: unreachable");
}

namespace {

std::optional<FormulaPtr> decode_rec(const Hf& code, int depth) {
  if (depth > 512) return std::nullopt;
  Hf t, payload;
  if (!hf::kuratowski_split(code, t, payload)) return std::nullopt;
  auto tag = tag_of(t);
  if (!tag) return std::nullopt;
  auto var_of = [&](const Hf& h) -> std::optional<std::string> {
    auto i = var_index_of(h);
    if (!i) return std::nullopt;
    return codable_var(*i);
  };
  switch (*tag) {
    case kEq:
    case kIn: {
      Hf u, v;
      if (!hf::kuratowski_split(payload, u, v)) return std::nullopt;
      auto su = var_of(u), sv = var_of(v);
      if (!su || !sv) return std::nullopt;
      return *tag == kEq ? f_eq(*su, *sv) : f_in(*su, *sv);
    }
    case kInClass: {
      auto su = var_of(payload);
      if (!su) return std::nullopt;
      return f_inclass(*su, kParamClassSymbol);
    }
    case kTrAtom: {
      Hf u, rest, v, w;
      if (!hf::kuratowski_split(payload, u, rest)) return std::nullopt;
      if (!hf::kuratowski_split(rest, v, w)) return std::nullopt;
      auto su = var_of(u), sv = var_of(v), sw = var_of(w);
      if (!su || !sv || !sw) return std::nullopt;
      return f_tr(*su, *sv, *sw);
    }
    case kAnd:
    case kOr: {
      auto items = decode_list(payload);
      if (!items || items->size() < 2) return std::nullopt;
      std::vector<FormulaPtr> kids;
      for (const Hf& h : *items) {
        auto k = decode_rec(h, depth + 1);
        if (!k) return std::nullopt;
        kids.push_back(*k);
      }
      return *tag == kAnd ? f_and(std::move(kids)) : f_or(std::move(kids));
    }
    case kNot: {
      auto k = decode_rec(payload, depth + 1);
      if (!k) return std::nullopt;
      return f_not(*k);
    }
    case kExists:
    case kForall: {
      Hf x, body;
      if (!hf::kuratowski_split(payload, x, body)) return std::nullopt;
      auto sx = var_of(x);
      auto k = decode_rec(body, depth + 1);
      if (!sx || !k) return std::nullopt;
      return *tag == kExists ? f_ex(*sx, *k) : f_all(*sx, *k);
    }
    case kExistsIn:
    case kForallIn: {
      Hf x, rest, y, body;
      if (!hf::kuratowski_split(payload, x, rest)) return std::nullopt;
      if (!hf::kuratowski_split(rest, y, body)) return std::nullopt;
      auto sx = var_of(x), sy = var_of(y);
      auto k = decode_rec(body, depth + 1);
      if (!sx || !sy || !k) return std::nullopt;
      return *tag == kExistsIn ? f_exin(*sx, *sy, *k) : f_allin(*sx, *sy, *k);
    }
  }
  return std::nullopt;
}

}  // namespace

FormulaPtr godel_decode(const hf::Hf& code) {
  auto f = decode_rec(code, 0);
  if (!f) throw std::invalid_argument("godel_decode: not a formula code");
  return *f;
}

std::optional<FormulaPtr> godel_try_decode(const hf::Hf& code) { return decode_rec(code, 0); }

hf::Hf encode_valuation(const std::vector<std::pair<int, hf::Hf>>& assignments) {
  std::vector<std::pair<int, Hf>> sorted = assignments;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].first == sorted[i - 1].first)
      throw std::invalid_argument("encode_valuation: duplicate variable");
  std::vector<Hf> items;
  for (const auto& [i, v] : sorted) items.push_back(k2(hf::unack(hf::Nat(i)), v));
  return encode_list(items);
}

std::optional<std::vector<std::pair<int, hf::Hf>>> decode_valuation(const hf::Hf& code) {
  auto items = decode_list(code);
  if (!items) return std::nullopt;
  std::vector<std::pair<int, Hf>> out;
  int last = -1;
  for (const Hf& it : *items) {
    Hf idx, val;
    if (!hf::kuratowski_split(it, idx, val)) return std::nullopt;
    auto i = var_index_of(idx);
    if (!i) return std::nullopt;
    if (*i <= last) return std::nullopt;  // must be strictly sorted
    last = *i;
    out.emplace_back(*i, val);
  }
  return out;
}

std::vector<FormulaPtr> enumerate_coded_formulas(std::uint32_t max_rank, const FormulaSpace& sp) {
  std::vector<FormulaPtr> out;
  std::map<std::string, bool> seen;
  auto add = [&](const FormulaPtr& f) {
    if (godel_encode(f).rank() > max_rank) return;
    std::string key = print_formula(f);
    if (seen.emplace(key, true).second) out.push_back(f);
  };

  std::vector<std::string> vars;
  for (int i = 0; i <= sp.max_var; ++i) vars.push_back(codable_var(i));

  for (const auto& u : vars)
    for (const auto& v : vars) {
      add(f_eq(u, v));
      add(f_in(u, v));
    }
  if (sp.with_param_atom)
    for (const auto& u : vars) add(f_inclass(u, kParamClassSymbol));
  if (sp.with_trm)
    for (const auto& u : vars)
      for (const auto& v : vars)
        for (const auto& w : vars) add(f_tr(u, v, w));

  // close under the connectives and quantifiers until no new formula fits
  std::size_t frontier_start = 0;
  while (frontier_start < out.size()) {
    std::size_t end = out.size();
    for (std::size_t i = frontier_start; i < end; ++i) {
      FormulaPtr f = out[i];
      add(f_not(f));
      for (const auto& x : vars) {
        add(f_ex(x, f));
        add(f_all(x, f));
        for (const auto& y : vars) {
          if (x == y) continue;
          add(f_exin(x, y, f));
          add(f_allin(x, y, f));
        }
      }
      for (std::size_t j = 0; j <= i; ++j) {
        add(f_and({out[j], f}));
        add(f_or({out[j], f}));
        if (j != i) {
          add(f_and({f, out[j]}));
          add(f_or({f, out[j]}));
        }
      }
    }
    frontier_start = end;
  }
  return out;
}

}  // namespace classcode::fol
