#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "conglab/bernoulli.hpp"
#include "conglab/claims.hpp"
#include "conglab/identities.hpp"
#include "conglab/miner.hpp"
#include "conglab/sums.hpp"

namespace py = pybind11;

namespace {

// GMP integers cross the boundary as strings so arbitrary sizes survive.
py::object to_pyint(const mpz_class& z) {
    return py::module_::import("builtins").attr("int")(z.get_str());
}

mpz_class to_mpz(const py::object& obj) {
    return mpz_class(py::str(obj).cast<std::string>());
}

conglab::SumRange range_from(const std::string& name) {
    if (name == "p") return conglab::SumRange::upto_p_minus_1;
    if (name == "2p") return conglab::SumRange::upto_2p_coprime;
    throw conglab::Error("range must be 'p' or '2p'");
}

py::dict report_to_dict(const conglab::VerificationReport& rep) {
    py::dict d;
    d["claim_id"] = rep.claim_id;
    d["p"] = to_pyint(rep.p);
    d["r"] = rep.r;
    d["m"] = rep.m;
    d["alphas"] = rep.alphas;
    d["modulus"] = rep.modulus == 0 ? py::object(py::none()) : to_pyint(rep.modulus);
    d["lhs"] = rep.lhs ? to_pyint(*rep.lhs) : py::object(py::none());
    d["rhs"] = rep.rhs ? to_pyint(*rep.rhs) : py::object(py::none());
    d["verified"] = rep.verified ? py::object(py::bool_(*rep.verified)) : py::object(py::none());
    d["engine"] = rep.engine;
    d["detail"] = rep.detail;
    return d;
}

}  // namespace

PYBIND11_MODULE(conglab, m) {
    m.doc() = "exact verification of alternating harmonic sum congruences modulo prime powers";

    py::register_exception<conglab::Error>(m, "CongruenceError");

    m.def(
        "bernoulli_exact", [](unsigned k) { return conglab::bernoulli_exact(k).get_str(); },
        py::arg("k"), "exact Bernoulli number B_k as a fraction string");

    m.def(
        "bernoulli_mod",
        [](unsigned k, const py::object& p, int prec) {
            auto ring = conglab::make_ring(to_mpz(p), prec);
            return to_pyint(conglab::bernoulli_residue(k, ring).value());
        },
        py::arg("k"), py::arg("p"), py::arg("prec") = 1, "B_k reduced into Z/p^prec");

    m.def(
        "signed_sum",
        [](int parts, long target, const py::object& p, const std::vector<int>& negated, int prec,
           const std::string& engine) {
            auto ring = conglab::make_ring(to_mpz(p), prec);
            conglab::SumSpec spec{parts, target, conglab::make_pattern(parts, negated), ring};
            conglab::EngineLimits limits;
            bool naive;
            if (engine == "naive") {
                naive = true;
            } else if (engine == "series") {
                naive = false;
            } else if (engine == "auto") {
                naive = conglab::composition_count(parts, target) <= limits.auto_naive_threshold;
            } else {
                throw conglab::Error("engine must be auto, naive or series");
            }
            auto v = naive ? conglab::signed_sum_naive(spec, limits)
                           : conglab::signed_sum_series(spec, limits);
            return to_pyint(v.value());
        },
        py::arg("parts"), py::arg("target"), py::arg("p"),
        py::arg("negated") = std::vector<int>{}, py::arg("prec") = 1, py::arg("engine") = "auto",
        "signed composition sum reduced into Z/p^prec");

    m.def(
        "signed_sum_exact",
        [](int parts, long target, const py::object& p, const std::vector<int>& negated) {
            return conglab::signed_sum_exact(parts, target, to_mpz(p),
                                             conglab::make_pattern(parts, negated))
                .get_str();
        },
        py::arg("parts"), py::arg("target"), py::arg("p"), py::arg("negated") = std::vector<int>{},
        "exact rational value of the signed composition sum");

    m.def(
        "chain_sum_exact",
        [](int depth, long bound, const py::object& p) {
            return conglab::chain_sum_exact(depth, bound, to_mpz(p)).get_str();
        },
        py::arg("depth"), py::arg("bound"), py::arg("p"),
        "exact increasing-chain sum with coprime endpoints and gaps");

    m.def(
        "distinct_sum",
        [](const std::vector<int>& alphas, const py::object& p, const std::string& range,
           int prec) {
            conglab::DistinctSumSpec spec{alphas, range_from(range),
                                          conglab::make_ring(to_mpz(p), prec)};
            return to_pyint(conglab::distinct_sum(spec).value());
        },
        py::arg("alphas"), py::arg("p"), py::arg("range") = "p", py::arg("prec") = 1,
        "sum over pairwise distinct indices of the inverse power product");

    m.def("catalog_ids", [] {
        std::vector<std::string> ids;
        for (const auto& claim : conglab::catalog()) ids.push_back(claim.id);
        return ids;
    });

    m.def(
        "evaluate",
        [](const std::string& claim_id, const py::object& p, long r, long m) {
            return report_to_dict(conglab::evaluate_claim(claim_id, to_mpz(p), r, m));
        },
        py::arg("claim_id"), py::arg("p"), py::arg("r"), py::arg("m") = 1,
        "check one instance of one cataloged congruence");

    m.def(
        "verify",
        [](const std::vector<std::string>& claims, long pmax, long rmax,
           const std::vector<long>& m, int jobs) {
            conglab::SuiteConfig cfg;
            cfg.claim_ids = claims;
            cfg.p_max = pmax;
            cfg.r_max = rmax;
            if (!m.empty()) cfg.m_values = m;
            cfg.jobs = jobs;
            py::list rows;
            for (const auto& rep : conglab::run_suite(cfg)) rows.append(report_to_dict(rep));
            return rows;
        },
        py::arg("claims") = std::vector<std::string>{}, py::arg("pmax") = 13, py::arg("rmax") = 2,
        py::arg("m") = std::vector<long>{}, py::arg("jobs") = 1,
        "sweep a grid of instances; skips are reported, never dropped");

    m.def(
        "mine",
        [](const std::string& claim_id, const std::vector<long>& primes) {
            auto outcome =
                conglab::mine(conglab::hypothesis_for_claim(conglab::find_claim(claim_id)), 4,
                              primes);
            py::dict d;
            py::list samples;
            for (const auto& s : outcome.samples)
                samples.append(py::make_tuple(to_pyint(s.p), to_pyint(s.c_p)));
            d["samples"] = samples;
            py::list skipped;
            for (const auto& s : outcome.skipped)
                skipped.append(py::make_tuple(to_pyint(s.first), s.second));
            d["skipped"] = skipped;
            d["value"] = outcome.value ? py::object(py::str(outcome.value->get_str()))
                                       : py::object(py::none());
            d["held_out_prime"] =
                outcome.held_out_prime == 0 ? py::object(py::none()) : to_pyint(outcome.held_out_prime);
            d["held_out_ok"] = outcome.held_out_ok ? py::object(py::bool_(*outcome.held_out_ok))
                                                   : py::object(py::none());
            d["extended"] = outcome.extended;
            d["log"] = outcome.log;
            return d;
        },
        py::arg("claim_id"), py::arg("primes") = std::vector<long>{},
        "recover the rational constant of a first-power congruence from residues");

    m.def(
        "identities",
        [](const std::string& suite) {
            conglab::IdentityConfig cfg;
            std::vector<conglab::IdentityCheck> checks;
            if (suite == "chain") {
                checks = conglab::chain_identity_suite(cfg);
            } else if (suite == "parity") {
                checks = conglab::parity_identity_suite(cfg);
            } else if (suite == "oracle") {
                checks = conglab::oracle_equivalence_suite(cfg);
            } else {
                throw conglab::Error("suite must be chain, parity or oracle");
            }
            py::list out;
            for (const auto& c : checks) out.append(py::make_tuple(c.suite, c.name, c.ok));
            return out;
        },
        py::arg("suite"), "run one structural identity suite; (suite, name, ok) triples");
}
