#include "nilprop/families.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include "nilprop/arith.hpp"

namespace nilprop {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

void require_odd_prime(uint64_t p, const char* name) {
    require(p != 2 && is_prime(p),
            std::string(name) + " must be an odd prime, got " + std::to_string(p));
}

uint64_t pow2_u64(uint32_t e) {
    require(e < 64, "2-power exponent too large");
    return uint64_t(1) << e;
}

} // namespace

void validate(const GroupSpec& spec) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DihedralSpec>) {
                require(s.n >= 1, "dihedral: n must be >= 1");
            } else if constexpr (std::is_same_v<T, DihedralOrderSpec>) {
                require(s.order >= 2 && s.order % 2 == 0,
                        "dihedral-order: N must be even and >= 2");
            } else if constexpr (std::is_same_v<T, DicyclicSpec>) {
                require(s.n >= 1, "dicyclic: n must be >= 1");
            } else if constexpr (std::is_same_v<T, CpC4Spec>) {
                require_odd_prime(s.p, "cpc4: p");
            } else if constexpr (std::is_same_v<T, CpQ2nSpec>) {
                require_odd_prime(s.p, "cpq2n: p");
                require(s.n >= 3, "cpq2n: n must be >= 3");
                require(s.n < 50, "cpq2n: n too large");
            } else if constexpr (std::is_same_v<T, Cp2C4Spec>) {
                require_odd_prime(s.p, "cp2c4: p");
            } else if constexpr (std::is_same_v<T, Cp2Q8Spec>) {
                require_odd_prime(s.p, "cp2q8: p");
            } else if constexpr (std::is_same_v<T, CqCpC4Spec>) {
                require_odd_prime(s.q, "cqcpc4: q");
                require_odd_prime(s.p, "cqcpc4: p");
                require(s.q != s.p, "cqcpc4: q and p must be distinct primes");
            } else if constexpr (std::is_same_v<T, CpCqnSpec>) {
                require(is_prime(s.p), "cpcqn: p must be prime");
                require(is_prime(s.q), "cpcqn: q must be prime");
                require(s.p != s.q, "cpcqn: p and q must be distinct primes");
                require(s.n >= 2, "cpcqn: n must be >= 2");
                require(s.n < 50, "cpcqn: n too large");
            }
        },
        spec);
}

uint64_t group_order(const GroupSpec& spec) {
    return std::visit(
        [](const auto& s) -> uint64_t {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DihedralSpec>) return 2 * s.n;
            else if constexpr (std::is_same_v<T, DihedralOrderSpec>) return s.order;
            else if constexpr (std::is_same_v<T, DicyclicSpec>) return 4 * s.n;
            else if constexpr (std::is_same_v<T, CpC4Spec>) return 4 * s.p;
            else if constexpr (std::is_same_v<T, CpQ2nSpec>) return pow2_u64(s.n) * s.p;
            else if constexpr (std::is_same_v<T, Cp2C4Spec>) return 4 * s.p * s.p;
            else if constexpr (std::is_same_v<T, Cp2Q8Spec>) return 8 * s.p * s.p;
            else if constexpr (std::is_same_v<T, CqCpC4Spec>) return 4 * s.p * s.q;
            else {
                uint64_t qn = 1;
                for (uint32_t i = 0; i < s.n; ++i) qn = uint64_t(checked_mul(qn, s.q));
                return uint64_t(checked_mul(qn, s.p));
            }
        },
        spec);
}

std::string family_name(const GroupSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DihedralSpec>) return "dihedral";
            else if constexpr (std::is_same_v<T, DihedralOrderSpec>) return "dihedral-order";
            else if constexpr (std::is_same_v<T, DicyclicSpec>) return "dicyclic";
            else if constexpr (std::is_same_v<T, CpC4Spec>) return "cpc4";
            else if constexpr (std::is_same_v<T, CpQ2nSpec>) return "cpq2n";
            else if constexpr (std::is_same_v<T, Cp2C4Spec>) return "cp2c4";
            else if constexpr (std::is_same_v<T, Cp2Q8Spec>) return "cp2q8";
            else if constexpr (std::is_same_v<T, CqCpC4Spec>) return "cqcpc4";
            else return "cpcqn";
        },
        spec);
}

std::string spec_to_string(const GroupSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DihedralSpec>)
                return "dihedral:n=" + std::to_string(s.n);
            else if constexpr (std::is_same_v<T, DihedralOrderSpec>)
                return "dihedral-order:N=" + std::to_string(s.order);
            else if constexpr (std::is_same_v<T, DicyclicSpec>)
                return "dicyclic:n=" + std::to_string(s.n);
            else if constexpr (std::is_same_v<T, CpC4Spec>)
                return "cpc4:p=" + std::to_string(s.p);
            else if constexpr (std::is_same_v<T, CpQ2nSpec>)
                return "cpq2n:p=" + std::to_string(s.p) + ",n=" + std::to_string(s.n);
            else if constexpr (std::is_same_v<T, Cp2C4Spec>)
                return "cp2c4:p=" + std::to_string(s.p);
            else if constexpr (std::is_same_v<T, Cp2Q8Spec>)
                return "cp2q8:p=" + std::to_string(s.p);
            else if constexpr (std::is_same_v<T, CqCpC4Spec>)
                return "cqcpc4:q=" + std::to_string(s.q) + ",p=" + std::to_string(s.p);
            else
                return "cpcqn:p=" + std::to_string(s.p) + ",q=" + std::to_string(s.q) +
                       ",n=" + std::to_string(s.n);
        },
        spec);
}

namespace {

std::map<std::string, uint64_t, std::less<>> parse_params(std::string_view text) {
    std::map<std::string, uint64_t, std::less<>> params;
    while (!text.empty()) {
        auto comma = text.find(',');
        std::string_view item = text.substr(0, comma);
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
        auto eq = item.find('=');
        if (eq == std::string_view::npos || eq == 0 || eq + 1 == item.size())
            throw SpecParseError("expected key=value, got '" + std::string(item) + "'");
        std::string key(item.substr(0, eq));
        std::string_view value = item.substr(eq + 1);
        uint64_t parsed = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
        if (ec != std::errc{} || ptr != value.data() + value.size())
            throw SpecParseError("bad integer value '" + std::string(value) + "'");
        if (!params.emplace(std::move(key), parsed).second)
            throw SpecParseError("duplicate key in '" + std::string(item) + "'");
    }
    return params;
}

uint64_t take(std::map<std::string, uint64_t, std::less<>>& params, std::string_view key,
              std::string_view family) {
    auto it = params.find(key);
    if (it == params.end())
        throw SpecParseError(std::string(family) + " requires parameter '" +
                             std::string(key) + "'");
    uint64_t v = it->second;
    params.erase(it);
    return v;
}

} // namespace

GroupSpec parse_group_spec(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos || colon == 0)
        throw SpecParseError("expected family:key=value[,...], got '" + std::string(text) + "'");
    std::string_view family = text.substr(0, colon);
    auto params = parse_params(text.substr(colon + 1));

    GroupSpec spec;
    if (family == "dihedral") {
        spec = DihedralSpec{take(params, "n", family)};
    } else if (family == "dihedral-order") {
        spec = DihedralOrderSpec{take(params, "N", family)};
    } else if (family == "dicyclic") {
        spec = DicyclicSpec{take(params, "n", family)};
    } else if (family == "cpc4") {
        spec = CpC4Spec{take(params, "p", family)};
    } else if (family == "cpq2n") {
        uint64_t p = take(params, "p", family);
        spec = CpQ2nSpec{p, uint32_t(take(params, "n", family))};
    } else if (family == "cp2c4") {
        spec = Cp2C4Spec{take(params, "p", family)};
    } else if (family == "cp2q8") {
        spec = Cp2Q8Spec{take(params, "p", family)};
    } else if (family == "cqcpc4") {
        uint64_t q = take(params, "q", family);
        spec = CqCpC4Spec{q, take(params, "p", family)};
    } else if (family == "cpcqn") {
        uint64_t p = take(params, "p", family);
        uint64_t q = take(params, "q", family);
        spec = CpCqnSpec{p, q, uint32_t(take(params, "n", family))};
    } else {
        throw SpecParseError("unknown family '" + std::string(family) + "'");
    }
    if (!params.empty())
        throw SpecParseError("unexpected parameter '" + params.begin()->first + "'");
    validate(spec);
    return spec;
}

// --- closed forms -----------------------------------------------------------

uint64_t l_dihedral(uint64_t n) { return tau(n) + sigma(n); }

uint64_t nil_dihedral(uint64_t n) { return tau(n) + s2(n); }

Rational j_dihedral(uint64_t n) { return Rational(nil_dihedral(n), l_dihedral(n)); }

Rational j_dihedral_by_order(uint64_t order) {
    if (order < 2 || order % 2 != 0)
        throw std::invalid_argument("j_dihedral_by_order: N must be even and >= 2");
    return Rational(tau(order) + s2(order), tau(order) + sigma(order));
}

uint64_t l_dicyclic(uint64_t n) { return tau(2 * n) + sigma(n); }

namespace {

bool is_pow2(uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

uint64_t nil_dicyclic(uint64_t n) {
    if (is_pow2(n)) return l_dicyclic(n); // 2-group: every subgroup is nilpotent
    if (n % 2 == 1 && is_prime(n)) return n + 4; // Dic_p = C_p x| C_4
    throw std::invalid_argument(
        "dicyclic: no closed-form nilpotent count for n = " + std::to_string(n) +
        " (supported: 2-powers and odd primes); use the oracle");
}

} // namespace

uint64_t nil_family(const GroupSpec& spec) {
    validate(spec);
    return std::visit(
        [](const auto& s) -> uint64_t {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DihedralSpec>) return nil_dihedral(s.n);
            else if constexpr (std::is_same_v<T, DihedralOrderSpec>)
                return tau(s.order) + s2(s.order);
            else if constexpr (std::is_same_v<T, DicyclicSpec>) return nil_dicyclic(s.n);
            else if constexpr (std::is_same_v<T, CpC4Spec>) return s.p + 4;
            else if constexpr (std::is_same_v<T, CpQ2nSpec>)
                return (pow2_u64(s.n - 1) - 1) * s.p + 2 * s.n;
            else if constexpr (std::is_same_v<T, Cp2C4Spec>) return s.p * s.p + 6;
            else if constexpr (std::is_same_v<T, Cp2Q8Spec>) return 3 * s.p * s.p + 9;
            else if constexpr (std::is_same_v<T, CqCpC4Spec>) return s.q * s.p + 8;
            else return 2 * (uint64_t(s.n) + 1) + s.p - 2;
        },
        spec);
}

uint64_t l_family(const GroupSpec& spec) {
    validate(spec);
    return std::visit(
        [](const auto& s) -> uint64_t {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DihedralSpec>) return l_dihedral(s.n);
            else if constexpr (std::is_same_v<T, DihedralOrderSpec>)
                return tau(s.order) + sigma(s.order);
            else if constexpr (std::is_same_v<T, DicyclicSpec>) return l_dicyclic(s.n);
            else if constexpr (std::is_same_v<T, CpC4Spec>) return l_dicyclic(s.p);
            else if constexpr (std::is_same_v<T, CpQ2nSpec>)
                return l_dicyclic(pow2_u64(s.n - 2) * s.p);
            else if constexpr (std::is_same_v<T, Cp2C4Spec>) return l_dicyclic(s.p * s.p);
            else if constexpr (std::is_same_v<T, Cp2Q8Spec>) return l_dicyclic(2 * s.p * s.p);
            else if constexpr (std::is_same_v<T, CqCpC4Spec>) return l_dicyclic(s.p * s.q);
            else return 2 * (uint64_t(s.n) + 1) + s.p - 1;
        },
        spec);
}

Rational j_family(const GroupSpec& spec) {
    return Rational(nil_family(spec), l_family(spec));
}

// --- analytic limits ---------------------------------------------------------

LimitFamilyRef parse_limit_family(std::string_view text) {
    auto colon = text.find(':');
    std::string_view name = text.substr(0, colon);
    std::map<std::string, uint64_t, std::less<>> params;
    if (colon != std::string_view::npos) params = parse_params(text.substr(colon + 1));

    LimitFamilyRef ref;
    if (name == "dihedral-3p") ref.family = LimitFamily::Dihedral3p;
    else if (name == "dihedral-6p") ref.family = LimitFamily::Dihedral6p;
    else if (name == "dihedral-p") ref.family = LimitFamily::DihedralP;
    else if (name == "dihedral-4p") ref.family = LimitFamily::Dihedral4p;
    else if (name == "cpc4") ref.family = LimitFamily::CpC4;
    else if (name == "cpq2n") ref.family = LimitFamily::CpQ2n;
    else if (name == "cp2c4") ref.family = LimitFamily::Cp2C4;
    else if (name == "cp2q8") ref.family = LimitFamily::Cp2Q8;
    else if (name == "cqcpc4") ref.family = LimitFamily::CqCpC4;
    else throw std::invalid_argument("unknown limit family '" + std::string(name) + "'");

    if (ref.family == LimitFamily::CpQ2n) {
        ref.fixed = take(params, "n", name);
        require(ref.fixed >= 3, "cpq2n: n must be >= 3");
    } else if (ref.family == LimitFamily::CqCpC4) {
        ref.fixed = take(params, "q", name);
        require_odd_prime(ref.fixed, "cqcpc4: q");
    }
    if (!params.empty())
        throw std::invalid_argument("unexpected parameter '" + params.begin()->first + "'");
    return ref;
}

std::string limit_family_name(const LimitFamilyRef& ref) {
    switch (ref.family) {
        case LimitFamily::Dihedral3p: return "dihedral-3p";
        case LimitFamily::Dihedral6p: return "dihedral-6p";
        case LimitFamily::DihedralP: return "dihedral-p";
        case LimitFamily::Dihedral4p: return "dihedral-4p";
        case LimitFamily::CpC4: return "cpc4";
        case LimitFamily::CpQ2n: return "cpq2n:n=" + std::to_string(ref.fixed);
        case LimitFamily::Cp2C4: return "cp2c4";
        case LimitFamily::Cp2Q8: return "cp2q8";
        case LimitFamily::CqCpC4: return "cqcpc4:q=" + std::to_string(ref.fixed);
    }
    return "?";
}

Rational limit_value(const LimitFamilyRef& ref) {
    switch (ref.family) {
        case LimitFamily::Dihedral3p:
        case LimitFamily::Dihedral6p:
            return Rational(3, 4);
        case LimitFamily::DihedralP:
        case LimitFamily::Dihedral4p:
        case LimitFamily::CpC4:
        case LimitFamily::Cp2C4:
        case LimitFamily::Cp2Q8:
            return Rational(1, 1);
        case LimitFamily::CpQ2n:
            require(ref.fixed >= 3, "cpq2n: fixed n must be >= 3");
            return Rational(1, 1);
        case LimitFamily::CqCpC4:
            require_odd_prime(ref.fixed, "cqcpc4: q");
            return Rational(ref.fixed, ref.fixed + 1);
    }
    throw std::invalid_argument("unknown limit family tag");
}

namespace {

void require_admissible(bool ok, const LimitFamilyRef& ref, uint64_t p,
                        const char* constraint) {
    require(ok, limit_family_name(ref) + ": prime " + std::to_string(p) +
                    " is inadmissible (" + constraint + ")");
}

} // namespace

Rational j_limit_family_member(const LimitFamilyRef& ref, uint64_t p) {
    require(is_prime(p), limit_family_name(ref) + ": " + std::to_string(p) + " is not prime");
    switch (ref.family) {
        case LimitFamily::Dihedral3p:
            require_admissible(p >= 5, ref, p, "needs p >= 5, coprime to 6");
            return j_dihedral(3 * p);
        case LimitFamily::Dihedral6p:
            require_admissible(p >= 5, ref, p, "needs p >= 5, coprime to 6");
            return j_dihedral(6 * p);
        case LimitFamily::DihedralP:
            require_admissible(p % 2 == 1, ref, p, "needs an odd prime");
            return j_dihedral(p);
        case LimitFamily::Dihedral4p:
            require_admissible(p % 2 == 1, ref, p, "needs an odd prime");
            return j_dihedral(2 * p); // group order 4p
        case LimitFamily::CpC4:
            require_admissible(p % 2 == 1, ref, p, "needs an odd prime");
            return j_family(CpC4Spec{p});
        case LimitFamily::CpQ2n:
            require_admissible(p % 2 == 1, ref, p, "needs an odd prime");
            return j_family(CpQ2nSpec{p, uint32_t(ref.fixed)});
        case LimitFamily::Cp2C4:
            require_admissible(p % 2 == 1, ref, p, "needs an odd prime");
            return j_family(Cp2C4Spec{p});
        case LimitFamily::Cp2Q8:
            require_admissible(p % 2 == 1, ref, p, "needs an odd prime");
            return j_family(Cp2Q8Spec{p});
        case LimitFamily::CqCpC4:
            require_admissible(p % 2 == 1 && p != ref.fixed, ref, p,
                               "needs an odd prime distinct from q");
            return j_family(CqCpC4Spec{ref.fixed, p});
    }
    throw std::invalid_argument("unknown limit family tag");
}

std::vector<LimitTableRow> limit_table(const LimitFamilyRef& ref,
                                       std::span<const uint64_t> primes) {
    Rational lim = limit_value(ref);
    std::vector<LimitTableRow> rows;
    rows.reserve(primes.size());
    for (uint64_t p : primes) {
        Rational j = j_limit_family_member(ref, p);
        rows.push_back({p, j, lim, j.abs_diff(lim)});
    }
    return rows;
}

std::vector<uint64_t> admissible_primes(const LimitFamilyRef& ref, std::size_t count) {
    std::vector<uint64_t> out;
    PrimeStream stream;
    while (out.size() < count) {
        uint64_t p = stream.next();
        bool ok = p % 2 == 1;
        switch (ref.family) {
            case LimitFamily::Dihedral3p:
            case LimitFamily::Dihedral6p: ok = p >= 5; break;
            case LimitFamily::CqCpC4: ok = ok && p != ref.fixed; break;
            default: break;
        }
        if (ok) out.push_back(p);
    }
    return out;
}

std::optional<Rational> limit_for_spec(const GroupSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::optional<Rational> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CpC4Spec> || std::is_same_v<T, Cp2C4Spec> ||
                          std::is_same_v<T, Cp2Q8Spec>)
                return Rational(1, 1);
            else if constexpr (std::is_same_v<T, CpQ2nSpec>)
                return Rational(1, 1);
            else if constexpr (std::is_same_v<T, CqCpC4Spec>)
                return Rational(s.q, s.q + 1);
            else
                return std::nullopt;
        },
        spec);
}

} // namespace nilprop
