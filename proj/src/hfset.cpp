#include "classcode/hfset.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace classcode::hf {

namespace detail {

int cmp(const Node* a, const Node* b) {
  if (a == b) return 0;
  if (a->rank != b->rank) return a->rank < b->rank ? -1 : 1;
  // Same rank: N(x) and N(y) differ at the highest element not shared.
  // Children are stored ascending, so walk from the back.
  auto ia = a->elems.rbegin(), ea = a->elems.rend();
  auto ib = b->elems.rbegin(), eb = b->elems.rend();
  while (ia != ea && ib != eb) {
    if (*ia == *ib) {
      ++ia;
      ++ib;
      continue;
    }
    return cmp(*ia, *ib);
  }
  if (ia == ea && ib == eb) return 0;  // unreachable for interned distinct nodes
  return ia == ea ? -1 : 1;
}

}  // namespace detail

namespace {

std::mutex g_caps_mutex;
Caps g_caps;

// Interning store. Append-only: nodes are never removed, so handles stay
// valid for the process lifetime. Insert-if-absent under a single mutex.
struct Store {
  std::mutex mutex;
  std::map<std::vector<const detail::Node*>, std::unique_ptr<detail::Node>> by_elems;
  std::unordered_map<const detail::Node*, Nat> ack_memo;
  const detail::Node* empty = nullptr;

  Store() {
    auto n = std::make_unique<detail::Node>();
    n->rank = 0;
    n->tc_size.store(1);
    empty = n.get();
    by_elems.emplace(std::vector<const detail::Node*>{}, std::move(n));
  }
};

Store& store() {
  static Store s;
  return s;
}

const detail::Node* intern(std::vector<const detail::Node*> elems) {
  std::sort(elems.begin(), elems.end(),
            [](const detail::Node* a, const detail::Node* b) { return detail::cmp(a, b) < 0; });
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());

  Store& s = store();
  std::lock_guard<std::mutex> lock(s.mutex);
  auto it = s.by_elems.find(elems);
  if (it != s.by_elems.end()) return it->second.get();

  auto n = std::make_unique<detail::Node>();
  n->elems = elems;
  std::uint32_t r = 0;
  for (const detail::Node* e : n->elems) r = std::max(r, e->rank + 1);
  n->rank = r;
  const detail::Node* out = n.get();
  s.by_elems.emplace(std::move(elems), std::move(n));
  return out;
}

constexpr std::uint64_t kAckBitCap = 8'000'000;

// Must be called with the store mutex held.
const Nat& ack_of_locked(Store& s, const detail::Node* n) {
  auto it = s.ack_memo.find(n);
  if (it != s.ack_memo.end()) return it->second;
  Nat a = 0;
  for (const detail::Node* e : n->elems) {
    const Nat& ea = ack_of_locked(s, e);
    if (ea > kAckBitCap)
      throw CapExceeded("Ackermann index too large to materialize");
    a += Nat(1) << ea.convert_to<std::uint64_t>();
  }
  return s.ack_memo.emplace(n, std::move(a)).first->second;
}

void collect_tc(const detail::Node* n, std::unordered_set<const detail::Node*>& seen) {
  if (!seen.insert(n).second) return;
  for (const detail::Node* e : n->elems) collect_tc(e, seen);
}

}  // namespace

Caps caps() {
  std::lock_guard<std::mutex> lock(g_caps_mutex);
  return g_caps;
}

void set_caps(const Caps& c) {
  std::lock_guard<std::mutex> lock(g_caps_mutex);
  g_caps = c;
}

Hf::Hf() : node_(store().empty) {}

std::uint64_t Hf::tc_size() const {
  std::uint64_t cached = node_->tc_size.load(std::memory_order_relaxed);
  if (cached != 0) return cached;
  std::unordered_set<const detail::Node*> seen;
  collect_tc(node_, seen);
  std::uint64_t n = seen.size();
  node_->tc_size.store(n, std::memory_order_relaxed);
  return n;
}

std::vector<Hf> Hf::elements() const {
  std::vector<Hf> out;
  out.reserve(node_->elems.size());
  for (const detail::Node* e : node_->elems) out.emplace_back(e);
  return out;
}

bool Hf::contains(const Hf& x) const {
  return std::binary_search(
      node_->elems.begin(), node_->elems.end(), x.raw(),
      [](const detail::Node* a, const detail::Node* b) { return detail::cmp(a, b) < 0; });
}

Hf make(std::span<const Hf> children) {
  std::vector<const detail::Node*> elems;
  elems.reserve(children.size());
  for (const Hf& c : children) elems.push_back(c.raw());
  return Hf(intern(std::move(elems)));
}

Hf make(std::initializer_list<Hf> children) {
  return make(std::span<const Hf>(children.begin(), children.size()));
}

Hf empty_set() { return Hf(); }

const Nat& ack_index(const Hf& x) {
  Store& s = store();
  std::lock_guard<std::mutex> lock(s.mutex);
  return ack_of_locked(s, x.raw());
}

std::string ack_string_if_small(const Hf& x, std::uint64_t max_bits) {
  try {
    const Nat& n = ack_index(x);
    if (boost::multiprecision::msb(n + 1) <= max_bits) return n.str();
  } catch (const CapExceeded&) {
  }
  return {};
}

Hf unack(const Nat& n) {
  if (n < 0) throw std::invalid_argument("unack: negative index");
  std::vector<Hf> elems;
  Nat rest = n;
  std::uint64_t bit = 0;
  while (rest > 0) {
    if (boost::multiprecision::bit_test(rest, 0)) elems.push_back(unack(Nat(bit)));
    rest >>= 1;
    ++bit;
  }
  return make(elems);
}

Measures measures(const Hf& x) { return {x.rank(), x.tc_size()}; }

Hf v_stage(unsigned n) {
  if (n > caps().v_stage)
    throw CapExceeded("v_stage " + std::to_string(n) + " exceeds cap " +
                      std::to_string(caps().v_stage));
  Hf v = empty_set();
  for (unsigned i = 0; i < n; ++i) {
    // v := powerset(v)
    std::vector<Hf> elems = v.elements();
    std::vector<Hf> subsets;
    subsets.reserve(std::size_t{1} << elems.size());
    std::vector<Hf> buf;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << elems.size()); ++mask) {
      buf.clear();
      for (std::size_t j = 0; j < elems.size(); ++j)
        if (mask & (std::uint64_t{1} << j)) buf.push_back(elems[j]);
      subsets.push_back(make(buf));
    }
    v = make(subsets);
  }
  return v;
}

namespace {

// Transitive sets of size m arise as T + {y} with T transitive of size m-1,
// y a subset of T not already present. Sets with tc_size m are then the
// subsets of some transitive T of size m-1 whose element closures cover T.
struct TcEnum {
  std::mutex mutex;
  // level k -> all x with tc_size(x) == k, sorted
  std::vector<std::vector<Hf>> by_size{{}, {empty_set()}};
  // size m -> all transitive sets with m elements
  std::vector<std::vector<Hf>> trans{{empty_set()}, {make({empty_set()})}};

  void grow_to(std::uint64_t k) {
    while (by_size.size() <= k) {
      std::size_t m = by_size.size();
      while (trans.size() < m) {
        std::size_t tm = trans.size();
        std::vector<Hf> next;
        for (const Hf& t : trans[tm - 1]) {
          std::vector<Hf> telems = t.elements();
          if (telems.size() >= 60) throw CapExceeded("transitive enumeration too wide");
          std::uint64_t full = std::uint64_t{1} << telems.size();
          std::vector<Hf> buf;
          for (std::uint64_t mask = 0; mask < full; ++mask) {
            buf.clear();
            for (std::size_t j = 0; j < telems.size(); ++j)
              if (mask & (std::uint64_t{1} << j)) buf.push_back(telems[j]);
            Hf y = make(buf);
            if (!t.contains(y)) {
              std::vector<Hf> all = telems;
              all.push_back(y);
              next.push_back(make(all));
            }
          }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        trans.push_back(std::move(next));
      }
      std::vector<Hf> level;
      for (const Hf& t : trans[m - 1]) {
        std::vector<Hf> telems = t.elements();
        if (telems.size() >= 60) throw CapExceeded("tc enumeration too wide");
        std::uint64_t full = std::uint64_t{1} << telems.size();
        std::vector<Hf> buf;
        for (std::uint64_t mask = 0; mask < full; ++mask) {
          buf.clear();
          for (std::size_t j = 0; j < telems.size(); ++j)
            if (mask & (std::uint64_t{1} << j)) buf.push_back(telems[j]);
          Hf x = make(buf);
          if (t.contains(x)) continue;
          if (x.tc_size() == m) level.push_back(x);
        }
      }
      std::sort(level.begin(), level.end());
      level.erase(std::unique(level.begin(), level.end()), level.end());
      by_size.push_back(std::move(level));
    }
  }
};

TcEnum& tc_enum() {
  static TcEnum e;
  return e;
}

}  // namespace

std::vector<Hf> enumerate_tc_bounded(std::uint64_t k) {
  if (k > caps().tc_bound)
    throw CapExceeded("tc bound " + std::to_string(k) + " exceeds cap " +
                      std::to_string(caps().tc_bound));
  TcEnum& e = tc_enum();
  std::lock_guard<std::mutex> lock(e.mutex);
  e.grow_to(k);
  std::vector<Hf> out;
  for (std::uint64_t m = 1; m <= k; ++m)
    out.insert(out.end(), e.by_size[m].begin(), e.by_size[m].end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Hf> transitive_closure(const Hf& x) {
  std::unordered_set<const detail::Node*> seen;
  collect_tc(x.raw(), seen);
  std::vector<Hf> out;
  out.reserve(seen.size());
  for (const detail::Node* n : seen) out.emplace_back(n);
  std::sort(out.begin(), out.end());
  return out;
}

Hf kuratowski(const Hf& a, const Hf& b) { return make({make({a}), make({a, b})}); }

bool kuratowski_split(const Hf& p, Hf& a, Hf& b) {
  std::vector<Hf> elems = p.elements();
  if (elems.empty() || elems.size() > 2) return false;
  if (elems.size() == 1) {
    // {{a}} = (a,a)
    std::vector<Hf> inner = elems[0].elements();
    if (inner.size() != 1) return false;
    a = inner[0];
    b = inner[0];
    return true;
  }
  // one singleton {a}, one pair {a,b}
  std::vector<Hf> e0 = elems[0].elements(), e1 = elems[1].elements();
  const std::vector<Hf>*sing = nullptr, *pair = nullptr;
  if (e0.size() == 1 && e1.size() == 2) {
    sing = &e0;
    pair = &e1;
  } else if (e1.size() == 1 && e0.size() == 2) {
    sing = &e1;
    pair = &e0;
  } else {
    return false;
  }
  a = (*sing)[0];
  if ((*pair)[0] == a)
    b = (*pair)[1];
  else if ((*pair)[1] == a)
    b = (*pair)[0];
  else
    return false;
  return true;
}

Hf von_neumann(std::uint64_t n) {
  std::vector<Hf> elems;
  Hf cur = empty_set();
  for (std::uint64_t i = 0; i < n; ++i) {
    elems.push_back(cur);
    cur = make(elems);
  }
  return cur;
}

bool as_von_neumann(const Hf& x, std::uint64_t& n) {
  std::vector<Hf> elems = x.elements();
  Hf cur = empty_set();
  std::vector<Hf> acc;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (elems[i] != cur) return false;
    acc.push_back(cur);
    cur = make(acc);
  }
  n = elems.size();
  return true;
}

namespace {

Hf parse_braces(const std::string& s, std::size_t& pos) {
  if (pos >= s.size() || s[pos] != '{') throw std::invalid_argument("expected '{'");
  ++pos;
  std::vector<Hf> elems;
  while (pos < s.size() && s[pos] != '}') {
    if (s[pos] == ',') {
      ++pos;
      continue;
    }
    elems.push_back(parse_braces(s, pos));
  }
  if (pos >= s.size()) throw std::invalid_argument("unterminated '{'");
  ++pos;
  return make(elems);
}

}  // namespace

Hf parse_literal(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw std::invalid_argument("empty set literal");
  if (t[0] == '#') {
    Nat n;
    try {
      n = Nat(t.substr(1));
    } catch (...) {
      throw std::invalid_argument("bad Ackermann literal: " + text);
    }
    return unack(n);
  }
  std::size_t pos = 0;
  Hf x = parse_braces(t, pos);
  if (pos != t.size()) throw std::invalid_argument("trailing input in set literal");
  return x;
}

std::string to_braces(const Hf& x) {
  std::string out = "{";
  bool first = true;
  for (const Hf& e : x.elements()) {
    if (!first) out += ",";
    first = false;
    out += to_braces(e);
  }
  out += "}";
  return out;
}

}  // namespace classcode::hf
