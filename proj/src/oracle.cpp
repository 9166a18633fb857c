#include "nilprop/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <set>
#include <stdexcept>

#include "json.hpp"

#include "nilprop/errors.hpp"

namespace nilprop {

namespace {

std::atomic<uint32_t> g_order_cap{0};

uint32_t read_cap_from_env() {
    if (const char* env = std::getenv("NILPROP_ORACLE_CAP")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end && *end == '\0' && v >= 1 && v <= 65535) return uint32_t(v);
    }
    return 400;
}

} // namespace

uint32_t oracle_order_cap() {
    uint32_t cap = g_order_cap.load(std::memory_order_relaxed);
    if (cap == 0) {
        cap = read_cap_from_env();
        g_order_cap.store(cap, std::memory_order_relaxed);
    }
    return cap;
}

void set_oracle_order_cap(uint32_t cap) {
    if (cap < 1 || cap > 65535)
        throw std::invalid_argument("oracle order cap must be in [1, 65535]");
    g_order_cap.store(cap, std::memory_order_relaxed);
}

namespace {

void check_cap(uint64_t order, const std::string& what) {
    uint32_t cap = oracle_order_cap();
    if (order > cap)
        throw ResourceLimitError(what + ": group order " + std::to_string(order) +
                                 " exceeds oracle order cap " + std::to_string(cap));
}

uint64_t splitmix64_next(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Dense membership mask over element indices.
struct Bits {
    std::vector<uint64_t> words;

    explicit Bits(uint32_t n) : words((n + 63) / 64, 0) {}
    void set(uint32_t i) { words[i >> 6] |= uint64_t(1) << (i & 63); }
    bool test(uint32_t i) const { return (words[i >> 6] >> (i & 63)) & 1; }

    bool subset_of(const Bits& o) const {
        for (std::size_t w = 0; w < words.size(); ++w)
            if (words[w] & ~o.words[w]) return false;
        return true;
    }
    uint32_t intersection_size(const Bits& o) const {
        uint32_t c = 0;
        for (std::size_t w = 0; w < words.size(); ++w)
            c += uint32_t(std::popcount(words[w] & o.words[w]));
        return c;
    }
};

Bits mask_of(const FiniteGroup& g, const ElementSet& elems) {
    Bits b(g.order);
    for (uint16_t e : elems) b.set(e);
    return b;
}

// Closure of a non-empty element set under the group product. In a finite
// group that already yields a subgroup (powers supply identity and inverses).
ElementSet closure(const FiniteGroup& g, const ElementSet& seed) {
    Bits in(g.order);
    std::vector<uint16_t> work;
    work.reserve(g.order);
    for (uint16_t e : seed) {
        if (!in.test(e)) {
            in.set(e);
            work.push_back(e);
        }
    }
    for (std::size_t i = 0; i < work.size(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            uint16_t a = g.mul(work[i], work[j]);
            if (!in.test(a)) {
                in.set(a);
                work.push_back(a);
            }
            uint16_t b = g.mul(work[j], work[i]);
            if (!in.test(b)) {
                in.set(b);
                work.push_back(b);
            }
        }
    }
    std::sort(work.begin(), work.end());
    return work;
}

bool is_closed(const FiniteGroup& g, const ElementSet& members) {
    if (members.empty()) return false;
    Bits in = mask_of(g, members);
    if (!in.test(g.identity)) return false;
    for (uint16_t a : members)
        for (uint16_t b : members)
            if (!in.test(g.mul(a, b))) return false;
    return true;
}

std::vector<uint32_t> element_orders(const FiniteGroup& g) {
    std::vector<uint32_t> ord(g.order, 0);
    for (uint32_t x = 0; x < g.order; ++x) {
        uint16_t cur = uint16_t(x);
        uint32_t k = 1;
        while (cur != g.identity) {
            cur = g.mul(cur, uint16_t(x));
            ++k;
        }
        ord[x] = k;
    }
    return ord;
}

void finalize(FiniteGroup& g) {
    g.inverses.assign(g.order, 0);
    for (uint32_t a = 0; a < g.order; ++a) {
        bool found = false;
        for (uint32_t b = 0; b < g.order; ++b) {
            if (g.mul(uint16_t(a), uint16_t(b)) == g.identity &&
                g.mul(uint16_t(b), uint16_t(a)) == g.identity) {
                g.inverses[a] = uint16_t(b);
                found = true;
                break;
            }
        }
        if (!found) throw std::logic_error(g.label + ": element without two-sided inverse");
    }
    validate_group(g);
}

} // namespace

void validate_group(const FiniteGroup& g) {
    if (g.order == 0) throw std::logic_error("group of order 0");
    if (g.table.size() != std::size_t(g.order) * g.order)
        throw std::logic_error(g.label + ": table size mismatch");
    if (g.identity >= g.order) throw std::logic_error(g.label + ": identity out of range");

    // Latin square + identity row/column
    for (uint32_t i = 0; i < g.order; ++i) {
        Bits row(g.order), col(g.order);
        for (uint32_t j = 0; j < g.order; ++j) {
            uint16_t r = g.mul(uint16_t(i), uint16_t(j));
            uint16_t c = g.mul(uint16_t(j), uint16_t(i));
            if (r >= g.order || c >= g.order)
                throw std::logic_error(g.label + ": product out of range");
            if (row.test(r) || col.test(c))
                throw std::logic_error(g.label + ": table is not a Latin square");
            row.set(r);
            col.set(c);
        }
        if (g.mul(g.identity, uint16_t(i)) != i || g.mul(uint16_t(i), g.identity) != i)
            throw std::logic_error(g.label + ": identity does not act trivially");
    }

    if (g.inverses.size() == g.order) {
        for (uint32_t a = 0; a < g.order; ++a) {
            if (g.mul(uint16_t(a), g.inverses[a]) != g.identity ||
                g.mul(g.inverses[a], uint16_t(a)) != g.identity)
                throw std::logic_error(g.label + ": bad inverse table");
        }
    }

    // associativity: exhaustive up to order 128, sampled above
    auto check_triple = [&](uint16_t a, uint16_t b, uint16_t c) {
        if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
            throw std::logic_error(g.label + ": product is not associative");
    };
    if (g.order <= 128) {
        for (uint32_t a = 0; a < g.order; ++a)
            for (uint32_t b = 0; b < g.order; ++b)
                for (uint32_t c = 0; c < g.order; ++c)
                    check_triple(uint16_t(a), uint16_t(b), uint16_t(c));
    } else {
        uint64_t state = 0x243F6A8885A308D3ULL;
        for (int i = 0; i < 100'000; ++i) {
            uint16_t a = uint16_t(splitmix64_next(state) % g.order);
            uint16_t b = uint16_t(splitmix64_next(state) % g.order);
            uint16_t c = uint16_t(splitmix64_next(state) % g.order);
            check_triple(a, b, c);
        }
    }
}

FiniteGroup build_cyclic(uint64_t n) {
    if (n == 0) throw std::invalid_argument("cyclic: n must be >= 1");
    check_cap(n, "cyclic");
    FiniteGroup g;
    g.order = uint32_t(n);
    g.label = "C" + std::to_string(n);
    g.table.resize(n * n);
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = 0; j < n; ++j) g.table[std::size_t(i) * n + j] = uint16_t((i + j) % n);
    finalize(g);
    return g;
}

FiniteGroup build_dihedral(uint64_t n) {
    if (n == 0) throw std::invalid_argument("dihedral: n must be >= 1");
    check_cap(2 * n, "dihedral");
    // indices 0..n-1: rotations r^k; n..2n-1: reflections s r^k
    FiniteGroup g;
    uint32_t nn = uint32_t(n);
    g.order = 2 * nn;
    g.label = "D" + std::to_string(2 * n);
    g.table.resize(std::size_t(g.order) * g.order);
    auto idx = [nn](bool refl, uint32_t k) { return uint16_t((refl ? nn : 0) + k); };
    for (uint32_t a = 0; a < g.order; ++a) {
        bool ar = a >= nn;
        uint32_t ak = ar ? a - nn : a;
        for (uint32_t b = 0; b < g.order; ++b) {
            bool br = b >= nn;
            uint32_t bk = br ? b - nn : b;
            uint16_t prod;
            if (!ar && !br) prod = idx(false, (ak + bk) % nn);                 // r^a r^b
            else if (!ar && br) prod = idx(true, (bk + nn - ak % nn) % nn);    // r^a (s r^b) = s r^(b-a)
            else if (ar && !br) prod = idx(true, (ak + bk) % nn);              // (s r^a) r^b = s r^(a+b)
            else prod = idx(false, (bk + nn - ak % nn) % nn);                  // (s r^a)(s r^b) = r^(b-a)
            g.table[std::size_t(a) * g.order + b] = prod;
        }
    }
    finalize(g);
    return g;
}

FiniteGroup build_dicyclic(uint64_t n) {
    if (n == 0) throw std::invalid_argument("dicyclic: n must be >= 1");
    check_cap(4 * n, "dicyclic");
    // indices 0..2n-1: a^i; 2n..4n-1: a^i b, with b^2 = a^n, b a b^-1 = a^-1
    FiniteGroup g;
    uint32_t m = uint32_t(2 * n); // order of <a>
    g.order = uint32_t(4 * n);
    g.label = "Dic" + std::to_string(n);
    g.table.resize(std::size_t(g.order) * g.order);
    auto idx = [m](bool hasb, uint32_t i) { return uint16_t((hasb ? m : 0) + i); };
    for (uint32_t x = 0; x < g.order; ++x) {
        bool xb = x >= m;
        uint32_t xi = xb ? x - m : x;
        for (uint32_t y = 0; y < g.order; ++y) {
            bool yb = y >= m;
            uint32_t yi = yb ? y - m : y;
            uint16_t prod;
            if (!xb && !yb) prod = idx(false, (xi + yi) % m);                    // a^i a^j
            else if (!xb && yb) prod = idx(true, (xi + yi) % m);                 // a^i (a^j b)
            else if (xb && !yb) prod = idx(true, (xi + m - yi % m) % m);         // (a^i b) a^j = a^(i-j) b
            else prod = idx(false, (xi + m - yi % m + n) % m);                   // (a^i b)(a^j b) = a^(i-j+n)
            g.table[std::size_t(x) * g.order + y] = prod;
        }
    }
    finalize(g);
    return g;
}

namespace {

uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t mod) {
    uint64_t r = 1 % mod;
    base %= mod;
    while (exp) {
        if (exp & 1) r = r * base % mod;
        base = base * base % mod;
        exp >>= 1;
    }
    return r;
}

bool is_prime_small(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

} // namespace

FiniteGroup build_semidirect_cp_cqn(uint64_t p, uint64_t q, uint32_t n) {
    if (!is_prime_small(p) || !is_prime_small(q))
        throw std::invalid_argument("semidirect: p and q must be prime");
    if (n < 2) throw std::invalid_argument("semidirect: n must be >= 2");
    if ((p - 1) % q != 0)
        throw std::invalid_argument("semidirect: no order-q action (q does not divide p-1)");
    uint64_t qn = 1;
    for (uint32_t i = 0; i < n; ++i) {
        qn *= q;
        if (qn > 65535) throw ResourceLimitError("semidirect: q^n too large");
    }
    uint64_t order = p * qn;
    check_cap(order, "semidirect");

    // generator of the order-q subgroup of (Z/p)^*
    uint64_t act = 1;
    for (uint64_t h = 2; h < p; ++h) {
        uint64_t cand = pow_mod(h, (p - 1) / q, p);
        if (cand != 1) {
            act = cand;
            break;
        }
    }

    // powers of the acting automorphism: t^j sends x -> x^(act^j)
    std::vector<uint64_t> act_pow(qn);
    act_pow[0] = 1;
    for (uint64_t j = 1; j < qn; ++j) act_pow[j] = act_pow[j - 1] * act % p;

    // element (i, j) = x^i t^j at index j*p + i; (i1,j1)(i2,j2) = (i1 + i2*act^j1, j1+j2)
    FiniteGroup g;
    g.order = uint32_t(order);
    g.label = "C" + std::to_string(p) + ":C" + std::to_string(qn);
    g.table.resize(order * order);
    for (uint64_t j1 = 0; j1 < qn; ++j1)
        for (uint64_t i1 = 0; i1 < p; ++i1) {
            std::size_t row = (j1 * p + i1) * order;
            for (uint64_t j2 = 0; j2 < qn; ++j2)
                for (uint64_t i2 = 0; i2 < p; ++i2) {
                    uint64_t i = (i1 + i2 * act_pow[j1]) % p;
                    uint64_t j = (j1 + j2) % qn;
                    g.table[row + j2 * p + i2] = uint16_t(j * p + i);
                }
        }
    finalize(g);
    return g;
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
    uint64_t order = uint64_t(a.order) * b.order;
    check_cap(order, "direct product");
    FiniteGroup g;
    g.order = uint32_t(order);
    g.label = a.label + "x" + b.label;
    g.table.resize(order * order);
    for (uint32_t i1 = 0; i1 < a.order; ++i1)
        for (uint32_t j1 = 0; j1 < b.order; ++j1) {
            std::size_t row = (std::size_t(i1) * b.order + j1) * order;
            for (uint32_t i2 = 0; i2 < a.order; ++i2)
                for (uint32_t j2 = 0; j2 < b.order; ++j2)
                    g.table[row + std::size_t(i2) * b.order + j2] =
                        uint16_t(uint32_t(a.mul(uint16_t(i1), uint16_t(i2))) * b.order +
                                 b.mul(uint16_t(j1), uint16_t(j2)));
        }
    finalize(g);
    return g;
}

// --- lattice enumeration ------------------------------------------------------

namespace {

bool nilpotent_members(const FiniteGroup& g, const ElementSet& h) {
    // lower central series: K <- <[x,k] : x in H, k in K>
    ElementSet k = h;
    while (k.size() > 1) {
        ElementSet comms{g.identity};
        for (uint16_t x : h) {
            uint16_t xi = g.inv(x);
            for (uint16_t y : k) {
                // [x,y] = x^-1 y^-1 x y
                uint16_t c = g.mul(g.mul(xi, g.inv(y)), g.mul(x, y));
                comms.push_back(c);
            }
        }
        std::sort(comms.begin(), comms.end());
        comms.erase(std::unique(comms.begin(), comms.end()), comms.end());
        ElementSet next = closure(g, comms);
        if (next == k) return false; // stabilized above the trivial subgroup
        k = std::move(next);
    }
    return true;
}

} // namespace

bool is_nilpotent_subgroup(const FiniteGroup& g, const ElementSet& members) {
    if (!is_closed(g, members))
        throw std::invalid_argument("is_nilpotent_subgroup: member set is not a subgroup");
    return nilpotent_members(g, members);
}

SubgroupLattice enumerate_subgroups(const FiniteGroup& g) {
    check_cap(g.order, "subgroup enumeration");

    std::vector<ElementSet> list;
    std::set<ElementSet> seen;
    auto add = [&](ElementSet s) {
        if (seen.insert(s).second) list.push_back(std::move(s));
    };

    // all cyclic subgroups <x>
    for (uint32_t x = 0; x < g.order; ++x) {
        ElementSet cyc;
        uint16_t cur = g.identity;
        do {
            cyc.push_back(cur);
            cur = g.mul(cur, uint16_t(x));
        } while (cur != g.identity);
        std::sort(cyc.begin(), cyc.end());
        add(std::move(cyc));
    }

    // close under pairwise join until fixpoint
    std::vector<Bits> masks;
    masks.reserve(list.size());
    for (const auto& s : list) masks.push_back(mask_of(g, s));

    ElementSet whole(g.order);
    for (uint32_t i = 0; i < g.order; ++i) whole[i] = uint16_t(i);

    for (std::size_t i = 1; i < list.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const Bits& mi = masks[i];
            const Bits& mj = masks[j];
            if (mi.subset_of(mj) || mj.subset_of(mi)) continue;
            // |<A,B>| >= |A||B|/|A inter B|; above |G|/2 the join is G itself
            uint64_t lb = uint64_t(list[i].size()) * list[j].size() /
                          std::max<uint32_t>(1, mi.intersection_size(mj));
            ElementSet joined;
            if (lb > g.order / 2) {
                joined = whole;
            } else {
                ElementSet seed = list[i];
                seed.insert(seed.end(), list[j].begin(), list[j].end());
                joined = closure(g, seed);
            }
            if (seen.insert(joined).second) {
                masks.push_back(mask_of(g, joined));
                list.push_back(std::move(joined));
            }
        }
    }

    std::sort(list.begin(), list.end(), [](const ElementSet& a, const ElementSet& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });

    auto orders = element_orders(g);

    SubgroupLattice lattice;
    lattice.group_order = g.order;
    lattice.group_label = g.label;
    lattice.subgroups.reserve(list.size());
    for (auto& s : list) {
        SubgroupInfo info;
        info.order = uint32_t(s.size());
        uint32_t max_ord = 0;
        for (uint16_t e : s) max_ord = std::max(max_ord, orders[e]);
        info.is_cyclic = (max_ord == info.order);
        info.is_nilpotent = info.is_cyclic || nilpotent_members(g, s);
        info.elements = std::move(s);
        lattice.subgroups.push_back(std::move(info));
    }
    return lattice;
}

std::size_t SubgroupLattice::nilpotent_count() const {
    std::size_t c = 0;
    for (const auto& s : subgroups) c += s.is_nilpotent;
    return c;
}

std::size_t SubgroupLattice::cyclic_count() const {
    std::size_t c = 0;
    for (const auto& s : subgroups) c += s.is_cyclic;
    return c;
}

ElementSet center(const FiniteGroup& g) {
    ElementSet z;
    for (uint32_t x = 0; x < g.order; ++x) {
        bool central = true;
        for (uint32_t y = 0; y < g.order && central; ++y)
            central = g.mul(uint16_t(x), uint16_t(y)) == g.mul(uint16_t(y), uint16_t(x));
        if (central) z.push_back(uint16_t(x));
    }
    return z;
}

Rational j_oracle(const SubgroupLattice& lattice) {
    return Rational(lattice.nilpotent_count(), lattice.count());
}

Rational j_oracle(const FiniteGroup& g) { return j_oracle(enumerate_subgroups(g)); }

Rational cyclicity_degree(const SubgroupLattice& lattice) {
    return Rational(lattice.cyclic_count(), lattice.count());
}

Rational cyclicity_degree(const FiniteGroup& g) {
    return cyclicity_degree(enumerate_subgroups(g));
}

FiniteGroup subgroup_as_group(const FiniteGroup& g, const ElementSet& members,
                              const std::string& label) {
    if (!is_closed(g, members))
        throw std::invalid_argument("subgroup_as_group: member set is not a subgroup");
    std::vector<uint16_t> order_of(g.order, 0);
    ElementSet sorted = members;
    std::sort(sorted.begin(), sorted.end());
    // identity must land at index 0
    auto it = std::find(sorted.begin(), sorted.end(), g.identity);
    std::rotate(sorted.begin(), it, it + 1);
    std::sort(sorted.begin() + 1, sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) order_of[sorted[i]] = uint16_t(i);

    FiniteGroup h;
    h.order = uint32_t(sorted.size());
    h.label = label.empty() ? g.label + "-sub" + std::to_string(sorted.size()) : label;
    h.table.resize(std::size_t(h.order) * h.order);
    for (std::size_t i = 0; i < sorted.size(); ++i)
        for (std::size_t j = 0; j < sorted.size(); ++j)
            h.table[i * h.order + j] = order_of[g.mul(sorted[i], sorted[j])];
    finalize(h);
    return h;
}

std::string lattice_to_json(const SubgroupLattice& lattice) {
    nlohmann::json subs = nlohmann::json::array();
    for (const auto& s : lattice.subgroups) {
        subs.push_back({{"elements", s.elements},
                        {"order", s.order},
                        {"nilpotent", s.is_nilpotent},
                        {"cyclic", s.is_cyclic}});
    }
    nlohmann::json j{{"group", lattice.group_label},
                     {"order", lattice.group_order},
                     {"subgroup_count", lattice.count()},
                     {"nilpotent_count", lattice.nilpotent_count()},
                     {"cyclic_count", lattice.cyclic_count()},
                     {"subgroups", std::move(subs)}};
    return j.dump(2);
}

} // namespace nilprop
