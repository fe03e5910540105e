// Canonical hereditarily finite sets with Ackermann indexing.
#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace classcode::hf {

using Nat = boost::multiprecision::cpp_int;

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Enumeration caps. The defaults keep exhaustive suites fast; override via
// set_caps() (the CLI wires this to CLASSCODE_CAPS).
struct Caps {
  std::uint64_t tc_bound = 12;
  unsigned v_stage = 5;
};

Caps caps();
void set_caps(const Caps&);

namespace detail {
struct Node {
  std::vector<const Node*> elems;  // sorted ascending in Ackermann order
  std::uint32_t rank = 0;
  // |tc({x})|, computed on first demand. 0 marks "not yet computed";
  // concurrent recomputation is idempotent.
  mutable std::atomic<std::uint64_t> tc_size{0};
};
// Ackermann order without materializing indices: rank-stratified, then the
// highest differing element decides (binary comparison of index bit sets).
int cmp(const Node* a, const Node* b);
}  // namespace detail

// Immutable interned handle; equality is pointer equality and coincides
// with extensional equality.
class Hf {
 public:
  Hf();  // the empty set
  explicit Hf(const detail::Node* n) : node_(n) {}

  bool operator==(const Hf& o) const { return node_ == o.node_; }
  // Orders by Ackermann index (canonical, stable across runs).
  bool operator<(const Hf& o) const { return detail::cmp(node_, o.node_) < 0; }

  std::uint32_t rank() const { return node_->rank; }
  std::uint64_t tc_size() const;

  std::size_t size() const { return node_->elems.size(); }
  bool empty() const { return node_->elems.empty(); }
  std::vector<Hf> elements() const;
  bool contains(const Hf& x) const;

  const detail::Node* raw() const { return node_; }

 private:
  const detail::Node* node_;
};

// Canonical constructor: duplicates removed, result interned.
Hf make(std::span<const Hf> children);
Hf make(std::initializer_list<Hf> children);
Hf empty_set();

// The index N(x) = sum over y in x of 2^N(y). Materialized on demand and
// memoized; throws CapExceeded beyond ~8M bits (iterated exponentials).
const Nat& ack_index(const Hf& x);
Hf unack(const Nat& n);
// Decimal index when it materializes within `max_bits`, else empty.
std::string ack_string_if_small(const Hf& x, std::uint64_t max_bits = 4096);

struct Measures {
  std::uint64_t rank;
  std::uint64_t tc_size;
};
Measures measures(const Hf& x);

// V_0 = {}, V_{k+1} = powerset(V_k); n capped by caps().v_stage.
Hf v_stage(unsigned n);

// All x with tc_size(x) <= k, sorted by Ackermann index; k capped.
std::vector<Hf> enumerate_tc_bounded(std::uint64_t k);

// tc({x}) including x, sorted by Ackermann index.
std::vector<Hf> transitive_closure(const Hf& x);

// Convenience builders.
Hf kuratowski(const Hf& a, const Hf& b);  // {{a},{a,b}}
// Decodes {{a},{a,b}}; returns false if p is not a Kuratowski pair.
bool kuratowski_split(const Hf& p, Hf& a, Hf& b);
Hf von_neumann(std::uint64_t n);
// Returns the ordinal value if x is a von Neumann ordinal.
bool as_von_neumann(const Hf& x, std::uint64_t& n);

// Literal syntax: nested braces "{{},{{}}}" or "#N" (Ackermann index).
Hf parse_literal(const std::string& text);
std::string to_braces(const Hf& x);

}  // namespace classcode::hf

template <>
struct std::hash<classcode::hf::Hf> {
  std::size_t operator()(const classcode::hf::Hf& h) const noexcept {
    return std::hash<const void*>{}(h.raw());
  }
};
