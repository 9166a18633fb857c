#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nilprop/arith.hpp"
#include "nilprop/density.hpp"
#include "nilprop/errors.hpp"
#include "nilprop/families.hpp"
#include "nilprop/oracle.hpp"
#include "nilprop/report_io.hpp"
#include "nilprop/stats.hpp"

namespace py = pybind11;
using namespace nilprop;

namespace {

py::object u128_to_pyint(uint128 v) {
    return py::reinterpret_steal<py::object>(
        PyLong_FromString(to_string(v).c_str(), nullptr, 10));
}

DihedralIndexing indexing_from(const std::string& name) {
    if (name == "order") return DihedralIndexing::Order;
    if (name == "half-order") return DihedralIndexing::HalfOrder;
    throw std::invalid_argument("indexing must be 'order' or 'half-order'");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Nilpotent-subgroup proportions of finite groups: closed-form family "
              "formulas, a brute-force subgroup-lattice oracle, greedy density "
              "approximation in (0,1], and the CLT sampling experiment.";

    py::register_exception<ResourceLimitError>(m, "ResourceLimitExceeded");
    py::register_exception<DegeneratePopulationError>(m, "DegeneratePopulation");
    py::register_exception<BudgetExceededError>(m, "BudgetExceeded");
    py::register_exception<SpecParseError>(m, "SpecParseError");

    py::class_<Rational>(m, "Rational")
        .def(py::init([](uint64_t num, uint64_t den) { return Rational(num, den); }),
             py::arg("num"), py::arg("den"))
        .def_property_readonly("num", [](const Rational& r) { return u128_to_pyint(r.num()); })
        .def_property_readonly("den", [](const Rational& r) { return u128_to_pyint(r.den()); })
        .def("__float__", &Rational::to_double)
        .def("__str__", &Rational::str)
        .def("__repr__", [](const Rational& r) { return "Rational(" + r.str() + ")"; })
        .def("__eq__", [](const Rational& a, const Rational& b) { return a == b; })
        .def("__mul__", &Rational::operator*)
        .def("abs_diff", &Rational::abs_diff);

    // arithmetic
    m.def("factorize", [](uint64_t n) {
        std::vector<std::pair<uint64_t, uint32_t>> out;
        for (const auto& [p, e] : factorize(n)) out.emplace_back(p, e);
        return out;
    });
    m.def("is_prime", &is_prime);
    m.def("tau", &tau);
    m.def("sigma", &sigma);
    m.def("s2", &s2);
    m.def("nth_prime", &nth_prime);

    py::class_<DivisorSieve>(m, "DivisorSieve")
        .def(py::init<uint64_t, uint64_t>(), py::arg("limit"),
             py::arg("memory_cap") = DivisorSieve::kDefaultCap)
        .def_property_readonly("limit", &DivisorSieve::limit)
        .def("tau", &DivisorSieve::tau)
        .def("sigma", &DivisorSieve::sigma);

    // family closed forms (specs given in the "family:key=value" grammar)
    m.def("l_dihedral", &l_dihedral);
    m.def("nil_dihedral", &nil_dihedral);
    m.def("j_dihedral", &j_dihedral);
    m.def("j_dihedral_by_order", &j_dihedral_by_order);
    m.def("l_dicyclic", &l_dicyclic);
    m.def("l_family", [](const std::string& s) { return l_family(parse_group_spec(s)); });
    m.def("nil_family", [](const std::string& s) { return nil_family(parse_group_spec(s)); });
    m.def("j_family", [](const std::string& s) { return j_family(parse_group_spec(s)); });
    m.def("group_order", [](const std::string& s) { return group_order(parse_group_spec(s)); });
    m.def("limit_value",
          [](const std::string& s) { return limit_value(parse_limit_family(s)); });
    m.def("limit_table", [](const std::string& s, const std::vector<uint64_t>& primes) {
        auto rows = limit_table(parse_limit_family(s), primes);
        py::list out;
        for (const auto& r : rows) {
            py::dict d;
            d["prime"] = r.prime;
            d["j"] = r.j;
            d["limit"] = r.limit;
            d["gap"] = r.gap;
            out.append(std::move(d));
        }
        return out;
    });
    m.def("admissible_primes", [](const std::string& s, std::size_t count) {
        return admissible_primes(parse_limit_family(s), count);
    });

    // oracle
    py::class_<FiniteGroup>(m, "FiniteGroup")
        .def_readonly("order", &FiniteGroup::order)
        .def_readonly("label", &FiniteGroup::label)
        .def("mul", &FiniteGroup::mul)
        .def("__repr__",
             [](const FiniteGroup& g) {
                 return "FiniteGroup(" + g.label + ", order=" + std::to_string(g.order) + ")";
             });

    py::class_<SubgroupInfo>(m, "SubgroupInfo")
        .def_readonly("elements", &SubgroupInfo::elements)
        .def_readonly("order", &SubgroupInfo::order)
        .def_readonly("is_nilpotent", &SubgroupInfo::is_nilpotent)
        .def_readonly("is_cyclic", &SubgroupInfo::is_cyclic);

    py::class_<SubgroupLattice>(m, "SubgroupLattice")
        .def_readonly("group_order", &SubgroupLattice::group_order)
        .def_readonly("group_label", &SubgroupLattice::group_label)
        .def_readonly("subgroups", &SubgroupLattice::subgroups)
        .def("count", &SubgroupLattice::count)
        .def("nilpotent_count", &SubgroupLattice::nilpotent_count)
        .def("cyclic_count", &SubgroupLattice::cyclic_count)
        .def("to_json", [](const SubgroupLattice& l) { return lattice_to_json(l); });

    m.def("oracle_order_cap", &oracle_order_cap);
    m.def("set_oracle_order_cap", &set_oracle_order_cap);
    m.def("build_cyclic", &build_cyclic);
    m.def("build_dihedral", &build_dihedral);
    m.def("build_dicyclic", &build_dicyclic);
    m.def("build_semidirect_cp_cqn", &build_semidirect_cp_cqn, py::arg("p"), py::arg("q"),
          py::arg("n"));
    m.def("direct_product", &direct_product);
    m.def("enumerate_subgroups", &enumerate_subgroups);
    m.def("is_nilpotent_subgroup", [](const FiniteGroup& g, std::vector<uint16_t> members) {
        std::sort(members.begin(), members.end());
        return is_nilpotent_subgroup(g, members);
    });
    m.def("center", &center);
    m.def("j_oracle", py::overload_cast<const FiniteGroup&>(&j_oracle));
    m.def("cyclicity_degree", py::overload_cast<const FiniteGroup&>(&cyclicity_degree));
    m.def("subgroup_as_group", [](const FiniteGroup& g, std::vector<uint16_t> members) {
        std::sort(members.begin(), members.end());
        return subgroup_as_group(g, members);
    });

    // density
    py::class_<DensityResult>(m, "DensityResult")
        .def_readonly("chosen", &DensityResult::chosen)
        .def_readonly("chosen_primes", &DensityResult::chosen_primes)
        .def_readonly("product", &DensityResult::product)
        .def_readonly("log_error", &DensityResult::log_error)
        .def_readonly("terms_scanned", &DensityResult::terms_scanned);

    m.def("j_closed_form", &j_closed_form, py::arg("m"), py::arg("p"));
    m.def("x_term", &x_term, py::arg("m"), py::arg("n"));
    m.def(
        "approximate_target",
        [](double target, uint32_t m, double epsilon, uint64_t max_terms) {
            return approximate_target({target, m, epsilon, max_terms});
        },
        py::arg("target"), py::arg("m") = 2, py::arg("epsilon") = 1e-6,
        py::arg("max_terms") = 1'000'000);
    m.def("divergence_diagnostic", [](uint32_t m, uint64_t count) {
        std::vector<std::tuple<uint64_t, double, double>> out;
        for (const auto& p : divergence_diagnostic(m, count))
            out.emplace_back(p.n, p.partial_sum, p.reference_sum);
        return out;
    });

    // statistics
    py::class_<Population>(m, "Population")
        .def_readonly("max_order", &Population::max_order)
        .def_readonly("values", &Population::values)
        .def_readonly("mu", &Population::mu)
        .def_readonly("sigma_pop", &Population::sigma_pop);

    m.def(
        "build_population",
        [](uint64_t max_order, const std::string& indexing) {
            return build_population(max_order, indexing_from(indexing));
        },
        py::arg("max_order"), py::arg("indexing") = "order");
    m.def(
        "standardized_means",
        [](const Population& pop, uint64_t k, uint32_t reps, uint64_t seed, uint32_t threads) {
            return standardized_means(pop, k, reps, seed, threads);
        },
        py::arg("population"), py::arg("k"), py::arg("reps"), py::arg("seed"),
        py::arg("threads") = 1);
    m.def("normal_pdf", &normal_pdf);
    m.def("normal_cdf", &normal_cdf);
    m.def("normal_quantile", &normal_quantile);
    m.def("ks_p_value", &ks_p_value, py::arg("d"), py::arg("sample_size"));
    m.def("ks_test", [](std::vector<double> sample) {
        auto r = ks_test(std::move(sample));
        return std::make_pair(r.statistic, r.p_value);
    });
    m.def(
        "histogram_data",
        [](const std::vector<double>& sample, uint32_t bins) {
            auto h = histogram_data(sample, bins);
            py::dict d;
            d["edges"] = h.edges;
            d["density"] = h.density;
            d["overlay"] = h.overlay;
            return d;
        },
        py::arg("sample"), py::arg("bins"));
    m.def("qq_data",
          [](const std::vector<double>& sample) { return qq_data(sample); });

    py::class_<SizeReport>(m, "SizeReport")
        .def_readonly("size", &SizeReport::size)
        .def_readonly("z_values", &SizeReport::z_values)
        .def_readonly("ks_statistic", &SizeReport::ks_statistic)
        .def_readonly("p_value", &SizeReport::p_value)
        .def_readonly("qq", &SizeReport::qq);

    py::class_<SimulationReport>(m, "SimulationReport")
        .def_readonly("mu", &SimulationReport::mu)
        .def_readonly("sigma_pop", &SimulationReport::sigma_pop)
        .def_readonly("per_size", &SimulationReport::per_size);

    m.def(
        "run_experiment",
        [](uint64_t max_order, const std::vector<uint64_t>& sizes, uint32_t replications,
           uint64_t seed, uint32_t bins, const std::string& indexing, uint32_t threads) {
            SimulationConfig config;
            config.max_order = max_order;
            config.sizes = sizes;
            config.replications = replications;
            config.seed = seed;
            config.bins = bins;
            config.indexing = indexing_from(indexing);
            config.threads = threads;
            return run_experiment(config);
        },
        py::arg("max_order"), py::arg("sizes"), py::arg("replications") = 1000,
        py::arg("seed") = 0, py::arg("bins") = 40, py::arg("indexing") = "order",
        py::arg("threads") = 1);
    m.def(
        "write_simulation_outputs",
        [](const SimulationReport& report, const std::string& dir, bool svg) {
            std::vector<std::string> out;
            for (const auto& p : write_simulation_outputs(report, dir, svg))
                out.push_back(p.string());
            return out;
        },
        py::arg("report"), py::arg("dir"), py::arg("svg") = true);
}
