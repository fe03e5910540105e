// Godel coding of truth-language formulas (first-order + Trm + the
// distinguished parameter symbol) and of valuations, as hereditarily
// finite tuples.
#pragma once

#include <optional>
#include <vector>

#include "classcode/formula.hpp"
#include "classcode/hfset.hpp"

namespace classcode::fol {

// The class symbol reserved for the truth predicate's parameter class.
inline const char* kParamClassSymbol = "A";

// Canonical codable variables are v0, v1, ...; returns the index or -1.
int codable_var_index(const std::string& name);
std::string codable_var(int index);

// Encodes a formula of the codable language: Eq, In, InClass(u, A), TrAtom,
// And, Or, Not, Exists, Forall, ExistsIn, ForallIn, over variables v<i>.
// Throws std::invalid_argument outside that language.
hf::Hf godel_encode(const FormulaPtr& f);

// Strict inverse; throws std::invalid_argument on non-codes.
FormulaPtr godel_decode(const hf::Hf& code);
std::optional<FormulaPtr> godel_try_decode(const hf::Hf& code);

// Valuation codes: an association list, sorted by variable index, of
// (index, value) pairs.
hf::Hf encode_valuation(const std::vector<std::pair<int, hf::Hf>>& assignments);
std::optional<std::vector<std::pair<int, hf::Hf>>> decode_valuation(const hf::Hf& code);

// All codable formulas whose codes have rank <= max_rank, using variables
// v0..v<max_var>, atoms over the given signature flags. Complete for that
// bound within the bounded variable pool.
struct FormulaSpace {
  int max_var = 1;
  bool with_param_atom = false;  // include (inclass u A)
  bool with_trm = false;         // include (tr u v w)
};
std::vector<FormulaPtr> enumerate_coded_formulas(std::uint32_t max_rank, const FormulaSpace& sp);

}  // namespace classcode::fol
