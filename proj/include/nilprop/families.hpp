#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nilprop/rational.hpp"

namespace nilprop {

// ---------------------------------------------------------------------------
// Group family descriptors.
//
// Two dihedral indexings coexist on purpose and are never interchanged:
//   DihedralSpec{n}        : the group of order 2n (rotation subgroup C_n)
//   DihedralOrderSpec{N}   : the group of order N itself, N even
// Applying the order-indexed formula at N does NOT equal the half-order
// formula at n = N/2 (order 12: 27/34 vs 13/16), so both variants exist.
// ---------------------------------------------------------------------------

struct DihedralSpec { uint64_t n; };          // order 2n
struct DihedralOrderSpec { uint64_t order; }; // order N, even
struct DicyclicSpec { uint64_t n; };          // order 4n
struct CpC4Spec { uint64_t p; };              // C_p x| C_4, order 4p
struct CpQ2nSpec { uint64_t p; uint32_t n; }; // C_p x| Q_{2^n}, order 2^n p, n >= 3
struct Cp2C4Spec { uint64_t p; };             // C_{p^2} x| C_4, order 4p^2
struct Cp2Q8Spec { uint64_t p; };             // C_{p^2} x| Q_8, order 8p^2
struct CqCpC4Spec { uint64_t q; uint64_t p; };// C_q x| (C_p x| C_4), order 4pq
struct CpCqnSpec { uint64_t p; uint64_t q; uint32_t n; }; // C_p x| C_{q^n}, n >= 2

using GroupSpec = std::variant<DihedralSpec, DihedralOrderSpec, DicyclicSpec,
                               CpC4Spec, CpQ2nSpec, Cp2C4Spec, Cp2Q8Spec,
                               CqCpC4Spec, CpCqnSpec>;

/// Parameter constraints (primality, ranges, q != p, ...). Throws
/// std::invalid_argument naming the violated constraint.
void validate(const GroupSpec& spec);

uint64_t group_order(const GroupSpec& spec);
std::string family_name(const GroupSpec& spec);
std::string spec_to_string(const GroupSpec& spec);

/// Malformed spec text ("dihedral:n=12" grammar). Distinct from parameter
/// violations so the CLI can map syntax and semantics to different exits.
class SpecParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Grammar: family:key=value[,key=value...] with families
/// dihedral(n), dihedral-order(N), dicyclic(n), cpc4(p), cpq2n(p,n),
/// cp2c4(p), cp2q8(p), cqcpc4(q,p), cpcqn(p,q,n).
/// Throws SpecParseError on syntax, std::invalid_argument on bad parameters.
GroupSpec parse_group_spec(std::string_view text);

// --- closed-form counts ----------------------------------------------------

/// Total subgroups of the order-2n dihedral group: tau(n) + sigma(n).
uint64_t l_dihedral(uint64_t n);

/// Nilpotent subgroups of the order-2n dihedral group: tau(n) + s2(n).
uint64_t nil_dihedral(uint64_t n);

Rational j_dihedral(uint64_t n);

/// Order-indexed dihedral proportion (tau(N)+s2(N))/(tau(N)+sigma(N)), N even.
Rational j_dihedral_by_order(uint64_t order);

/// Total subgroups of the order-4n dicyclic group: tau(2n) + sigma(n).
uint64_t l_dicyclic(uint64_t n);

/// Closed-form nilpotent subgroup count for the given family member.
uint64_t nil_family(const GroupSpec& spec);

/// Closed-form total subgroup count for the given family member.
uint64_t l_family(const GroupSpec& spec);

Rational j_family(const GroupSpec& spec);

// --- analytic limits ---------------------------------------------------------

enum class LimitFamily {
    Dihedral3p, // order 6p  (n = 3p),  limit 3/4, primes p >= 5
    Dihedral6p, // order 12p (n = 6p),  limit 3/4, primes p >= 5
    DihedralP,  // order 2p  (n = p),   limit 1,   odd primes
    Dihedral4p, // order 4p  (n = 2p),  limit 1,   odd primes
    CpC4,       // limit 1, odd primes
    CpQ2n,      // fixed n >= 3, limit 1, odd primes
    Cp2C4,      // limit 1, odd primes
    Cp2Q8,      // limit 1, odd primes
    CqCpC4,     // fixed odd prime q, limit q/(q+1), odd primes p != q
};

struct LimitFamilyRef {
    LimitFamily family;
    uint64_t fixed = 0; // n for CpQ2n, q for CqCpC4, ignored otherwise
};

/// "dihedral-3p", "dihedral-6p", "dihedral-p", "dihedral-4p", "cpc4",
/// "cpq2n:n=3", "cp2c4", "cp2q8", "cqcpc4:q=3"
LimitFamilyRef parse_limit_family(std::string_view text);
std::string limit_family_name(const LimitFamilyRef& ref);

/// Exact limit of J along the family as the running prime grows.
Rational limit_value(const LimitFamilyRef& ref);

/// Exact J of the family member at prime p (throws std::invalid_argument
/// for inadmissible primes, naming the constraint).
Rational j_limit_family_member(const LimitFamilyRef& ref, uint64_t p);

struct LimitTableRow {
    uint64_t prime;
    Rational j;
    Rational limit;
    Rational gap; // |j - limit|
};

std::vector<LimitTableRow> limit_table(const LimitFamilyRef& ref,
                                       std::span<const uint64_t> primes);

/// First `count` admissible primes for the family, ascending.
std::vector<uint64_t> admissible_primes(const LimitFamilyRef& ref, std::size_t count);

/// Limit of J(spec's family) when the paper states one for it.
std::optional<Rational> limit_for_spec(const GroupSpec& spec);

} // namespace nilprop
