#pragma once

// Command-line surface: computing closures, comparing topologies, ultrafilter
// limits and witnesses, building regular hulls, and running the verification
// suites. Reports carry the same payload in JSON and human-readable form.

#include <algorithm>
#include <chrono>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spectopo/verify.hpp"

namespace spectopo {

inline constexpr const char* kVersion = "0.1.0";

struct Report {
    json inputs = json::object();
    json result = json::object();
    json certificates = json::object();
    double seconds = 0.0;

    json to_json() const {
        json j;
        j["inputs"] = inputs;
        j["result"] = result;
        if (!certificates.empty()) j["certificates"] = certificates;
        j["timing_seconds"] = seconds;
        j["version"] = kVersion;
        return j;
    }

    std::string to_text() const {
        std::ostringstream os;
        auto emit = [&](const std::string& title, const json& j) {
            if (j.empty()) return;
            os << title << "\n";
            for (auto& [key, value] : j.items()) {
                if (value.is_string())
                    os << "  " << key << ": " << value.get<std::string>() << "\n";
                else if (value.is_primitive())
                    os << "  " << key << ": " << value.dump() << "\n";
                else
                    os << "  " << key << ": " << value.dump(2) << "\n";
            }
        };
        emit("inputs", inputs);
        emit("result", result);
        emit("certificates", certificates);
        os << "timing: " << seconds << " s  (spectopo " << kVersion << ")\n";
        return os.str();
    }
};

namespace cli_detail {

/// Wraps grammar-level parsing: failures are usage errors (exit code 2).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline RingSpec ring_arg(const std::string& text) {
    try {
        return parse_ring(text);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

inline SpectrumSubset set_arg(const RingSpec& ring, const std::string& text) {
    try {
        return parse_set(ring, text);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

inline SelectionRule rule_arg(const std::string& name) {
    if (name == "lex-min") return lex_min_rule();
    if (name == "lex-max") return lex_max_rule();
    if (name.rfind("hash-", 0) == 0) {
        try {
            return hashed_rule(std::stoull(name.substr(5)));
        } catch (const std::exception&) {
        }
    }
    throw UsageError("unknown selection rule: " + name +
                     " (expected lex-min, lex-max, or hash-<k>)");
}

inline json closure_for(const SpectrumSubset& set, const std::string& topology) {
    if (topology == "zariski") return zariski_closure(set).to_json();
    if (topology == "patch") return patch_closure(set).to_json();
    if (topology == "ultrafilter") return ultrafilter_closure(set).to_json();
    throw UsageError("unknown topology: " + topology);
}

} // namespace cli_detail

/// Runs one command; writes the report to `out`, errors to `err`.
/// Exit codes: 0 success, 1 domain error, 2 usage error.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Zariski, patch, and ultrafilter topologies on prime spectra", "spectopo"};
    app.require_subcommand(1);

    std::string ring_text, set_text = "all";
    std::string topology = "patch";
    std::string format = "text";
    std::string principal_text, rule_name = "lex-min";
    uint64_t seed = 0;
    uint64_t max_n = 1000;
    uint64_t samples = 1000;
    uint64_t verdict_samples = 8;
    uint64_t families = 500;

    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--seed", seed, "Seed for sampled checks");

    auto* spec_cmd = app.add_subcommand("spec", "Enumerate the prime spectrum");
    spec_cmd->add_option("--ring", ring_text, "Ring: Z, Z/<n>, GF(<p>)[x]")->required();

    auto* closure_cmd = app.add_subcommand("closure", "Closure of a set of primes");
    closure_cmd->add_option("--ring", ring_text)->required();
    closure_cmd->add_option("--set", set_text,
                            "Set grammar: {2,3}, cofinite~{2}, progression(1,4), all, "
                            "V(12), D(6); optional +generic suffix")
        ->required();
    closure_cmd->add_option("--topology", topology, "zariski | patch | ultrafilter");

    auto* compare_cmd = app.add_subcommand("compare", "Patch vs ultrafilter closure");
    compare_cmd->add_option("--ring", ring_text)->required();
    compare_cmd->add_option("--set", set_text)->required();

    auto* limit_cmd = app.add_subcommand("limit", "Ultrafilter limit point of a carrier");
    limit_cmd->add_option("--ring", ring_text)->required();
    limit_cmd->add_option("--set", set_text, "Carrier of the ultrafilter")->required();
    limit_cmd->add_option("--principal", principal_text,
                          "Generator of the principal point (omit for nonprincipal)");
    limit_cmd->add_option("--samples", verdict_samples, "Membership verdicts to sample");
    limit_cmd->add_option("--rule", rule_name, "Selection rule for nonprincipal descriptors");

    auto* witness_cmd = app.add_subcommand("witness", "Witness ultrafilter for a non-closed set");
    witness_cmd->add_option("--ring", ring_text)->required();
    witness_cmd->add_option("--set", set_text)->required();
    witness_cmd->add_option("--rule", rule_name, "Selection rule");

    auto* hull_cmd = app.add_subcommand("hull", "Von Neumann regular hull of Z/n");
    hull_cmd->add_option("--ring", ring_text, "Z/<n>")->required();
    hull_cmd->add_option("--max-n", max_n, "Exhaustive law-check bound");

    auto* verify_cmd = app.add_subcommand("verify", "Run the theorem-verification suites");
    verify_cmd->add_option("--max-n", max_n, "Exhaustive hull sweep bound");
    verify_cmd->add_option("--samples", samples, "Sampled pairs per descriptor class");
    verify_cmd->add_option("--families", families, "Families for the closure comparison");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    Report report;
    auto t0 = std::chrono::steady_clock::now();
    try {
        if (spec_cmd->parsed()) {
            RingSpec ring = cli_detail::ring_arg(ring_text);
            report.inputs["ring"] = ring.to_string();
            auto en = spec_enumerate(ring);
            report.result["spectrum"] = en.full.to_json();
            if (en.points) {
                json pts = json::array();
                for (auto& p : *en.points) pts.push_back(p.to_string());
                report.result["points"] = pts;
            } else {
                json pts = json::array();
                ClosedPrimeStream stream(ring);
                for (int i = 0; i < 10; ++i)
                    if (auto g = stream.next()) pts.push_back("(" + prime_gen_str(*g) + ")");
                report.result["first_closed_points"] = pts;
                report.result["generic_point"] = "(0)";
            }
        } else if (closure_cmd->parsed()) {
            RingSpec ring = cli_detail::ring_arg(ring_text);
            SpectrumSubset set = cli_detail::set_arg(ring, set_text);
            report.inputs = {{"ring", ring.to_string()},
                             {"set", set.to_string()},
                             {"topology", topology}};
            json cl = cli_detail::closure_for(set, topology);
            report.result["closure"] = cl;
            report.result["already_closed"] = (cl == set.to_json());
        } else if (compare_cmd->parsed()) {
            RingSpec ring = cli_detail::ring_arg(ring_text);
            SpectrumSubset set = cli_detail::set_arg(ring, set_text);
            report.inputs = {{"ring", ring.to_string()}, {"set", set.to_string()}};
            SpectrumSubset patch = patch_closure(set);
            SpectrumSubset ultra = ultrafilter_closure(set);
            bool equal = patch == ultra;
            report.result["patch_closure"] = patch.to_json();
            report.result["ultrafilter_closure"] = ultra.to_json();
            report.result["equal"] = equal;
            report.result["note"] =
                equal ? "the two closures agree on this input"
                      : "MISMATCH: the patch and ultrafilter closures must coincide; "
                        "this indicates an implementation bug";
        } else if (limit_cmd->parsed()) {
            RingSpec ring = cli_detail::ring_arg(ring_text);
            SpectrumSubset carrier = cli_detail::set_arg(ring, set_text);
            report.inputs = {{"ring", ring.to_string()}, {"set", carrier.to_string()}};
            UltrafilterDescriptor u = [&] {
                if (!principal_text.empty()) {
                    report.inputs["principal"] = principal_text;
                    PrimeIdeal pt = principal_text == "0"
                                        ? PrimeIdeal::generic(ring)
                                        : PrimeIdeal::closed(
                                              ring, parse_prime_gen(ring, principal_text));
                    return UltrafilterDescriptor::principal(carrier, pt);
                }
                report.inputs["rule"] = rule_name;
                return UltrafilterDescriptor::nonprincipal(carrier,
                                                           cli_detail::rule_arg(rule_name));
            }();
            report.result["limit"] = u.limit().to_string();
            std::mt19937_64 rng(seed);
            json verdicts = json::array();
            size_t count = std::min<uint64_t>(verdict_samples, 32);
            verdicts.push_back(u.limit_contains(RingElement::zero(ring)).to_json());
            for (size_t i = 0; i + 1 < count; ++i)
                verdicts.push_back(u.limit_contains(random_element(ring, rng)).to_json());
            report.result["sampled_verdicts"] = verdicts;
            report.result["descriptor"] = u.to_json();
        } else if (witness_cmd->parsed()) {
            RingSpec ring = cli_detail::ring_arg(ring_text);
            SpectrumSubset set = cli_detail::set_arg(ring, set_text);
            report.inputs = {{"ring", ring.to_string()},
                             {"set", set.to_string()},
                             {"rule", rule_name}};
            WitnessResult w = witness_ultrafilter(set, cli_detail::rule_arg(rule_name));
            report.result["witness"] = w.witness.to_string();
            report.result["ultrafilter"] = w.ultrafilter.to_json();
            report.result["log"] = w.log;
        } else if (hull_cmd->parsed()) {
            RingSpec ring = cli_detail::ring_arg(ring_text);
            if (ring.kind() != RingKind::Modular)
                throw cli_detail::UsageError("hull expects a ring of the form Z/<n>");
            report.inputs = {{"ring", ring.to_string()}};
            Hull hull = regular_hull(ring, Int(1000000), max_n);
            report.result["t"] = hull.t.to_json();
            if (ring.modulus() <= 50) {
                json table = json::array();
                for (Int x = 0; x < ring.modulus(); ++x)
                    table.push_back(json{{"x", x.str()},
                                         {"iota", hull.iota.apply(x).to_string()}});
                report.result["iota_table"] = table;
            }
            report.certificates["hull"] = hull.certificate.to_json();
            report.certificates["contraction"] = contraction_map(hull.iota).to_json();
        } else if (verify_cmd->parsed()) {
            VerifyConfig cfg;
            cfg.seed = seed;
            cfg.vnr_max_n = max_n;
            cfg.primality_samples = samples;
            cfg.theorem_families = families;
            report.inputs = {{"seed", seed},
                             {"max_n", max_n},
                             {"samples", samples},
                             {"families", families}};
            auto results = run_all_criteria(cfg);
            bool all = true;
            json arr = json::array();
            for (auto& r : results) {
                arr.push_back(r.to_json());
                all = all && r.pass;
                if (format == "text")
                    out << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << ": "
                        << r.name << " -- " << r.detail << " (" << r.seconds << " s)\n";
            }
            report.result["criteria"] = arr;
            report.result["all_pass"] = all;
            report.seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (format == "json") out << report.to_json().dump(2) << "\n";
            else out << (all ? "all criteria passed\n" : "SOME CRITERIA FAILED\n");
            return all ? 0 : 1;
        }
    } catch (const cli_detail::UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (format == "json")
        out << report.to_json().dump(2) << "\n";
    else
        out << report.to_text();
    return 0;
}

} // namespace spectopo
