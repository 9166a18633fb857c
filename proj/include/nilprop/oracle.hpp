#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nilprop/rational.hpp"

namespace nilprop {

/// Finite group as a Cayley table over element indices 0..order-1.
/// Invariants (enforced by the builders): the table is a Latin square,
/// index 0 is a two-sided identity, every element has a two-sided inverse,
/// and the product is associative (checked exhaustively up to order 128,
/// by 1e5 random triples above that).
struct FiniteGroup {
    uint32_t order = 0;
    std::vector<uint16_t> table; // row-major: table[a * order + b] = a*b
    uint16_t identity = 0;
    std::string label;
    std::vector<uint16_t> inverses;

    uint16_t mul(uint16_t a, uint16_t b) const { return table[std::size_t(a) * order + b]; }
    uint16_t inv(uint16_t a) const { return inverses[a]; }
};

/// Brute-force order cap (lattice enumeration cost grows quickly).
/// Default 400; override with set_oracle_order_cap or the
/// NILPROP_ORACLE_CAP environment variable (read once at first use).
uint32_t oracle_order_cap();
void set_oracle_order_cap(uint32_t cap);

FiniteGroup build_cyclic(uint64_t n);
FiniteGroup build_dihedral(uint64_t n);   // order 2n
FiniteGroup build_dicyclic(uint64_t n);   // order 4n: a^(2n)=1, b^2=a^n, bab^-1=a^-1

/// C_p x| C_{q^n} with the acting automorphism of order exactly q
/// (action kernel of order q^(n-1)). Requires q | p-1.
FiniteGroup build_semidirect_cp_cqn(uint64_t p, uint64_t q, uint32_t n);

FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h);

/// Re-checks all FiniteGroup invariants; throws std::logic_error on violation.
void validate_group(const FiniteGroup& g);

using ElementSet = std::vector<uint16_t>; // sorted, duplicate-free

struct SubgroupInfo {
    ElementSet elements;
    uint32_t order = 0;
    bool is_nilpotent = false;
    bool is_cyclic = false;
};

struct SubgroupLattice {
    uint32_t group_order = 0;
    std::string group_label;
    std::vector<SubgroupInfo> subgroups;

    std::size_t count() const { return subgroups.size(); }
    std::size_t nilpotent_count() const;
    std::size_t cyclic_count() const;
};

/// Complete subgroup lattice: all cyclic subgroups <x>, then closure of the
/// collection under pairwise join until fixpoint. Every subgroup of a finite
/// group is a join of cyclic subgroups, so the fixpoint is the full lattice.
SubgroupLattice enumerate_subgroups(const FiniteGroup& g);

/// Lower-central-series nilpotency test for a subgroup given by its members:
/// iterate K <- <[h,k] : h in H, k in K> until stable; nilpotent iff the
/// series reaches the trivial subgroup. Throws std::invalid_argument when
/// `members` is not closed under the group product.
bool is_nilpotent_subgroup(const FiniteGroup& g, const ElementSet& members);

ElementSet center(const FiniteGroup& g);

/// Nilpotent subgroups / total subgroups, reduced.
Rational j_oracle(const FiniteGroup& g);
Rational j_oracle(const SubgroupLattice& lattice);

/// Cyclic subgroups / total subgroups, reduced. Always <= j_oracle.
Rational cyclicity_degree(const FiniteGroup& g);
Rational cyclicity_degree(const SubgroupLattice& lattice);

/// Standalone group on the given subgroup's elements (indices remapped).
FiniteGroup subgroup_as_group(const FiniteGroup& g, const ElementSet& members,
                              const std::string& label = "");

/// Debug dump: {"group": ..., "order": ..., "subgroups": [{"elements": [...],
/// "order": ..., "nilpotent": ..., "cyclic": ...}, ...]}.
std::string lattice_to_json(const SubgroupLattice& lattice);

} // namespace nilprop
