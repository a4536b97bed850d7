#include "conglab/cli.hpp"

#include "conglab/bernoulli.hpp"
#include "conglab/claims.hpp"
#include "conglab/errors.hpp"
#include "conglab/identities.hpp"
#include "conglab/miner.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace conglab::cli {

namespace {

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

long parse_long(const std::string& text, const char* what) {
    try {
        size_t used = 0;
        long v = std::stol(text, &used);
        if (used == text.size()) return v;
    } catch (...) {
    }
    throw Error(std::string("bad ") + what + ": " + text);
}

std::vector<long> parse_long_list(const std::string& text, const char* what) {
    std::vector<long> out;
    for (const auto& piece : split_list(text)) out.push_back(parse_long(piece, what));
    return out;
}

// factors separated by '*', each a nonnegative integer, p, or p^K
mpz_class parse_target_expr(const std::string& expr, const mpz_class& p) {
    std::string normalized = expr;
    std::replace(normalized.begin(), normalized.end(), '*', ',');
    mpz_class product = 1;
    bool any = false;
    for (const auto& tok : split_list(normalized)) {
        if (tok.empty()) throw Error("empty factor in target expression");
        any = true;
        if (tok == "p") {
            product *= p;
        } else if (tok.rfind("p^", 0) == 0) {
            long e = parse_long(tok.substr(2), "exponent");
            if (e < 0) throw Error("negative exponent in target expression");
            mpz_class power;
            mpz_pow_ui(power.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e));
            product *= power;
        } else if (std::all_of(tok.begin(), tok.end(),
                               [](char c) { return c >= '0' && c <= '9'; })) {
            product *= mpz_class(tok);
        } else {
            throw Error("bad factor in target expression: " + tok);
        }
    }
    if (!any) throw Error("empty target expression");
    return product;
}

EngineChoice engine_from(const std::string& name) {
    if (name == "naive") return EngineChoice::naive;
    if (name == "series") return EngineChoice::series;
    return EngineChoice::automatic;
}

int resolve_jobs(int flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("CONGRUENCE_LAB_JOBS")) {
        try {
            int v = std::stoi(env);
            if (v > 0) return v;
        } catch (...) {
        }
    }
    return 1;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

long row_elapsed(const VerificationReport& r, bool timing) {
    return timing ? std::llround(r.elapsed_ms) : 0;
}

std::string row_note(const VerificationReport& r) {
    std::string note;
    if (!r.alphas.empty()) note = "alphas=" + join_ints(r.alphas);
    if (!r.detail.empty()) {
        if (!note.empty()) note += "; ";
        note += r.detail;
    }
    return note;
}

void emit_json(const std::vector<VerificationReport>& rows, bool timing, std::ostream& out) {
    for (const auto& r : rows) {
        out << "{\"claim_id\":\"" << json_escape(r.claim_id) << "\",\"p\":" << r.p.get_str()
            << ",\"r\":" << r.r << ",\"m\":" << r.m << ",\"modulus\":\""
            << (r.modulus == 0 ? std::string() : r.modulus.get_str()) << "\",\"lhs\":\""
            << (r.lhs ? r.lhs->get_str() : std::string()) << "\",\"rhs\":\""
            << (r.rhs ? r.rhs->get_str() : std::string()) << "\",\"verified\":"
            << (r.verified ? (*r.verified ? "true" : "false") : "null") << ",\"engine\":\""
            << json_escape(r.engine) << "\",\"elapsed_ms\":" << row_elapsed(r, timing) << "}\n";
    }
}

void emit_csv(const std::vector<VerificationReport>& rows, bool timing, std::ostream& out) {
    out << "claim_id,p,r,m,modulus,lhs,rhs,verified,engine,elapsed_ms\n";
    for (const auto& r : rows) {
        out << csv_field(r.claim_id) << ',' << r.p.get_str() << ',' << r.r << ',' << r.m << ','
            << (r.modulus == 0 ? std::string() : r.modulus.get_str()) << ','
            << (r.lhs ? r.lhs->get_str() : std::string()) << ','
            << (r.rhs ? r.rhs->get_str() : std::string()) << ','
            << (r.verified ? (*r.verified ? "true" : "false") : std::string()) << ','
            << csv_field(r.engine) << ',' << row_elapsed(r, timing) << '\n';
    }
}

void emit_human(const std::vector<VerificationReport>& rows, bool timing, std::ostream& out) {
    const std::vector<std::string> heads = {"claim", "p",  "r",      "m",  "modulus", "lhs",
                                            "rhs",   "ok", "engine", "ms", "note"};
    std::vector<std::vector<std::string>> table;
    table.push_back(heads);
    size_t verified = 0, failed = 0, skipped = 0;
    for (const auto& r : rows) {
        std::string ok = "-";
        if (r.verified) ok = *r.verified ? "yes" : "NO";
        if (!r.verified)
            ++skipped;
        else if (*r.verified)
            ++verified;
        else
            ++failed;
        table.push_back({r.claim_id, r.p.get_str(), std::to_string(r.r), std::to_string(r.m),
                         r.modulus == 0 ? "-" : r.modulus.get_str(),
                         r.lhs ? r.lhs->get_str() : "-", r.rhs ? r.rhs->get_str() : "-", ok,
                         r.engine, std::to_string(row_elapsed(r, timing)), row_note(r)});
    }
    std::vector<size_t> width(heads.size(), 0);
    for (const auto& row : table)
        for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    for (const auto& row : table) {
        std::string line;
        for (size_t c = 0; c < row.size(); ++c) {
            std::string cell = row[c];
            cell.resize(width[c], ' ');
            if (c) line += "  ";
            line += cell;
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << '\n';
    }
    out << rows.size() << " instance(s): " << verified << " verified, " << failed << " failed, "
        << skipped << " skipped\n";
}

void emit_reports(const std::vector<VerificationReport>& rows, const std::string& format,
                  bool timing, std::ostream& out) {
    if (format == "json")
        emit_json(rows, timing, out);
    else if (format == "csv")
        emit_csv(rows, timing, out);
    else
        emit_human(rows, timing, out);
}

int exit_code_for(const std::vector<VerificationReport>& rows) {
    bool any_eval = false;
    bool any_fail = false;
    for (const auto& r : rows) {
        if (!r.verified) continue;
        any_eval = true;
        if (!*r.verified) any_fail = true;
    }
    if (any_fail) return 1;
    if (!any_eval) return 3;
    return 0;
}

struct VerifyArgs {
    std::vector<std::string> claims;
    long p_max = 13;
    long r_max = 2;
    std::string m_list = "1";
    std::string engine = "auto";
    std::string format = "human";
    std::string output;
    double budget = EngineLimits{}.enumeration_budget;
    int jobs = 0;
    bool no_timing = false;
};

int do_verify(const VerifyArgs& a, std::ostream& out) {
    SuiteConfig cfg;
    cfg.claim_ids = a.claims;
    cfg.p_max = a.p_max;
    cfg.r_max = a.r_max;
    cfg.m_values = parse_long_list(a.m_list, "multiplier");
    for (long m : cfg.m_values)
        if (m < 1) throw Error("multipliers must be positive");
    cfg.engine = engine_from(a.engine);
    cfg.limits.enumeration_budget = a.budget;
    cfg.jobs = resolve_jobs(a.jobs);
    auto rows = run_suite(cfg);

    if (!a.output.empty()) {
        std::ofstream file(a.output);
        if (!file) throw Error("cannot open output file: " + a.output);
        emit_reports(rows, a.format, !a.no_timing, file);
        if (!file.good()) throw Error("write failed: " + a.output);
    } else {
        emit_reports(rows, a.format, !a.no_timing, out);
    }
    return exit_code_for(rows);
}

struct SumArgs {
    int parts = 0;
    std::string target;
    std::string prime;
    std::string negated;
    int precision = 1;
    std::string engine = "auto";
    double budget = EngineLimits{}.enumeration_budget;
};

int do_sum(const SumArgs& a, std::ostream& out) {
    mpz_class p(a.prime);
    mpz_class target_z = parse_target_expr(a.target, p);
    if (!target_z.fits_slong_p()) throw TargetTooLargeError("target does not fit the engine");
    long target = target_z.get_si();

    std::vector<int> negated;
    if (!a.negated.empty())
        for (long v : parse_long_list(a.negated, "slot")) negated.push_back(static_cast<int>(v));

    RingPtr ring = make_ring(p, a.precision);
    SumSpec spec{a.parts, target, make_pattern(a.parts, negated), ring};
    EngineLimits limits;
    limits.enumeration_budget = a.budget;

    EngineChoice choice = engine_from(a.engine);
    bool naive = choice == EngineChoice::naive ||
                 (choice == EngineChoice::automatic &&
                  composition_count(a.parts, target) <= limits.auto_naive_threshold);
    Residue v = naive ? signed_sum_naive(spec, limits) : signed_sum_series(spec, limits);
    out << v.value().get_str() << " (mod " << ring->modulus.get_str() << ")\n";
    return 0;
}

struct BernoulliArgs {
    long k = 0;
    std::string prime;
    int precision = 1;
    bool exact = false;
};

int do_bernoulli(const BernoulliArgs& a, std::ostream& out) {
    if (a.exact) {
        out << bernoulli_exact(a.k).get_str() << "\n";
        return 0;
    }
    if (a.prime.empty()) throw Error("either --exact or --p is required");
    RingPtr ring = make_ring(mpz_class(a.prime), a.precision);
    Residue v = bernoulli_residue(a.k, ring);
    out << v.value().get_str() << " (mod " << ring->modulus.get_str() << ")\n";
    return 0;
}

struct MineArgs {
    std::string claim;
    long k = 0;
    std::string primes;
};

int do_mine(const MineArgs& a, std::ostream& out) {
    MiningHypothesis hyp = hypothesis_for_claim(find_claim(a.claim));
    if (a.k > 0) hyp.bernoulli_offset = static_cast<int>(a.k);
    std::vector<long> primes;
    if (!a.primes.empty()) primes = parse_long_list(a.primes, "prime");

    MiningOutcome res = mine(hyp, 4, primes);

    for (const auto& skip : res.skipped)
        out << "skip p=" << skip.first.get_str() << ": " << skip.second << "\n";
    for (const auto& s : res.samples)
        out << "sample p=" << s.p.get_str() << ": " << s.c_p.get_str() << "\n";
    for (const auto& line : res.log) out << "note: " << line << "\n";
    if (res.value)
        out << "reconstructed coefficient: " << res.value->get_str() << " (conjectural)\n";
    else
        out << "no fraction found within the reconstruction bound\n";
    if (res.held_out_prime != 0)
        out << "held-out check at p=" << res.held_out_prime.get_str() << ": "
            << (res.held_out_ok && *res.held_out_ok ? "ok" : "MISMATCH") << "\n";
    else
        out << "held-out check: not reached\n";

    bool good = res.value && res.held_out_ok && *res.held_out_ok;
    return good ? 0 : 1;
}

struct IdentitiesArgs {
    std::vector<std::string> suites;
    int parts_max = 5;
    long target_max = 60;
};

int do_identities(const IdentitiesArgs& a, std::ostream& out) {
    IdentityConfig cfg;
    cfg.parts_max = a.parts_max;
    cfg.oracle_target_max = a.target_max;
    if (cfg.parts_max < 3 || cfg.parts_max > 6) throw Error("--nmax must lie in 3..6");
    if (cfg.oracle_target_max < cfg.parts_max) throw Error("--Nmax below the length bound");

    std::vector<std::string> wanted = a.suites;
    if (wanted.empty()) wanted = {"chain", "parity", "oracle"};

    std::vector<IdentityCheck> checks;
    for (const auto& name : wanted) {
        std::vector<IdentityCheck> part;
        if (name == "chain")
            part = chain_identity_suite(cfg);
        else if (name == "parity")
            part = parity_identity_suite(cfg);
        else
            part = oracle_equivalence_suite(cfg);
        checks.insert(checks.end(), part.begin(), part.end());
    }

    size_t bad = 0;
    for (const auto& c : checks) {
        if (!c.ok) ++bad;
        out << (c.ok ? "ok   " : "FAIL ") << c.suite << " " << c.name << "\n";
    }
    out << checks.size() << " identity check(s), " << bad << " failed\n";
    return bad == 0 ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact checks for alternating harmonic sum congruences"};
    app.require_subcommand(1);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "evaluate cataloged congruences over a grid");
    verify->add_option("--claim", va.claims, "claim id, repeatable; default is the whole catalog");
    verify->add_option("--pmax", va.p_max, "largest prime in the grid");
    verify->add_option("--rmax", va.r_max, "largest power of p in the target");
    verify->add_option("--m", va.m_list, "comma separated multipliers");
    verify->add_option("--engine", va.engine, "left side engine")
        ->check(CLI::IsMember({"auto", "naive", "series"}));
    verify->add_option("--format", va.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "human"}));
    verify->add_option("--output", va.output, "write the report here instead of stdout");
    verify->add_option("--budget", va.budget, "enumeration budget for the naive engine");
    verify->add_option("--jobs", va.jobs, "worker threads; CONGRUENCE_LAB_JOBS is the fallback");
    verify->add_flag("--no-timing", va.no_timing, "zero out elapsed times for stable output");

    SumArgs sa;
    auto* sum = app.add_subcommand("sum", "one signed composition sum");
    sum->add_option("--n", sa.parts, "composition length")->required();
    sum->add_option("--target", sa.target, "target, e.g. 50 or 2*p^2")->required();
    sum->add_option("--p", sa.prime, "odd prime")->required();
    sum->add_option("--neg", sa.negated, "comma separated negated slots");
    sum->add_option("--prec", sa.precision, "power of p in the modulus");
    sum->add_option("--engine", sa.engine, "engine")
        ->check(CLI::IsMember({"auto", "naive", "series"}));
    sum->add_option("--budget", sa.budget, "enumeration budget for the naive engine");

    BernoulliArgs ba;
    auto* bern = app.add_subcommand("bernoulli", "Bernoulli numbers, exact or reduced");
    bern->add_option("--k", ba.k, "index")->required();
    bern->add_option("--p", ba.prime, "odd prime for the reduced form");
    bern->add_option("--prec", ba.precision, "power of p in the modulus");
    bern->add_flag("--exact", ba.exact, "print the exact rational");

    MineArgs ma;
    auto* mine_cmd = app.add_subcommand("mine", "rediscover a first-power coefficient");
    mine_cmd->add_option("--claim", ma.claim, "claim id supplying the shape")->required();
    mine_cmd->add_option("--k", ma.k, "override the Bernoulli offset");
    mine_cmd->add_option("--primes", ma.primes, "comma separated primes to sample");

    IdentitiesArgs ia;
    auto* ident = app.add_subcommand("identities", "structural cross checks");
    ident->add_option("--suite", ia.suites, "chain, parity, or oracle; repeatable")
        ->check(CLI::IsMember({"chain", "parity", "oracle"}));
    ident->add_option("--nmax", ia.parts_max, "largest composition length");
    ident->add_option("--Nmax", ia.target_max, "largest target in the engine cross check");

    std::vector<const char*> argv;
    argv.push_back("conglab");
    for (const auto& s : args) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) return do_verify(va, out);
        if (sum->parsed()) return do_sum(sa, out);
        if (bern->parsed()) return do_bernoulli(ba, out);
        if (mine_cmd->parsed()) return do_mine(ma, out);
        if (ident->parsed()) return do_identities(ia, out);
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return 2;
    }
    err << "error: no subcommand\n";
    return 2;
}

}
