#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace rlv {

/// Unbounded natural number. All arithmetic in the object language and the
/// logic is over naturals; subtraction is truncated at zero (monus).
using Nat = mpz_class;

inline Nat monus(const Nat& a, const Nat& b) { return b <= a ? Nat(a - b) : Nat(0); }

inline Nat nat_of(std::uint64_t v) { return Nat(static_cast<unsigned long>(v)); }

inline std::string nat_str(const Nat& n) { return n.get_str(); }

}  // namespace rlv
