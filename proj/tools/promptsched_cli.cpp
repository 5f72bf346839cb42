// promptsched: run mechanisms against baselines, verify invariant suites,
// drive adversaries, and generate streams.

#include "promptsched/harness.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace promptsched;

namespace {

struct RunOpts {
    std::string mechanism = "dynamic";
    std::string baseline = "srpt";
    std::string stream;
    std::string gen;
    std::vector<std::string> params;
    int machines = 1;
    std::uint64_t seed = 1;
    std::string out = "out";
    bool feedback = false;
    std::uint64_t bmax = 0;
};

struct VerifyOpts {
    std::string suite = "all";
    std::uint64_t seed = 1;
    std::uint64_t configs = 10000;
};

struct AdversaryOpts {
    std::string kind = "lengths";
    std::string mechanism = "dynamic";
    std::vector<std::string> params;
    int machines = 1;
    std::uint64_t bmax = 0;
    std::string out;
};

struct GenOpts {
    std::string gen = "random";
    std::vector<std::string> params;
    int machines = 1;
    std::uint64_t seed = 1;
    std::string out;
};

MechanismId resolve_mechanism(const std::string& name, bool feedback) {
    MechanismId m = parse_mechanism(name);
    if (feedback) {
        if (m != MechanismId::Static) throw HarnessError(ExitCode::Usage, "--feedback applies to the static mechanism only");
        m = MechanismId::StaticFeedback;
    }
    return m;
}

int cmd_run(const RunOpts& o) {
    ExperimentSpec spec;
    spec.mechanism = resolve_mechanism(o.mechanism, o.feedback);
    spec.baseline = parse_baseline(o.baseline);
    if (!o.stream.empty() && !o.gen.empty()) throw HarnessError(ExitCode::Usage, "--stream and --gen are exclusive");
    if (!o.stream.empty()) spec.stream_file = o.stream;
    spec.generator = o.gen;
    spec.params = parse_params(o.params);
    if (o.bmax && spec.mechanism != MechanismId::Combined)
        throw HarnessError(ExitCode::Usage, "--bmax applies to the combined mechanism only");
    spec.machines = o.machines;
    spec.seed = o.seed;
    spec.bmax = o.bmax;
    spec.out_dir = o.out;
    ExperimentResult res = run_experiment(spec);
    write_artifacts(res, spec.out_dir);
    std::cout << to_json(res.report).dump() << '\n';
    return 0;
}

int cmd_verify(const VerifyOpts& o) {
    bool all = true;
    for (const PropertyResult& r : verify_suite(o.suite, o.seed, o.configs)) {
        std::cout << to_json(r).dump() << '\n';
        all = all && r.passed;
    }
    return all ? 0 : static_cast<int>(ExitCode::VerifyFailed);
}

template <class F>
nlohmann::json with_mechanism(MechanismId id, int machines, std::uint64_t bmax, F&& f) {
    switch (id) {
        case MechanismId::Dynamic: {
            DynamicMenu m(machines, false);
            return f(m);
        }
        case MechanismId::Pricing: {
            SlotPricing m(machines, false);
            return f(m);
        }
        case MechanismId::Combined: {
            CombinedMenu m(machines, bmax);
            return f(m);
        }
        case MechanismId::Static:
        case MechanismId::StaticFeedback: {
            StaticMenu m(machines, id == MechanismId::StaticFeedback);
            return f(m);
        }
    }
    return {};
}

nlohmann::json check(bool ok, const std::string& what) { return {{"check", what}, {"holds", ok}}; }

int cmd_adversary(const AdversaryOpts& o) {
    Params params = parse_params(o.params);
    ParamReader rd(params);
    nlohmann::json report;
    JobStream stream;
    bool holds = true;
    auto note = [&](bool ok, const std::string& what) {
        report["checks"].push_back(check(ok, what));
        holds = holds && ok;
    };
    if (o.kind == "lengths" || o.kind == "weights") {
        MechanismId id = parse_mechanism(o.mechanism);
        if (o.kind == "lengths") {
            auto c = static_cast<unsigned>(rd.u64("c", 1));
            auto logp = static_cast<unsigned>(rd.u64("logP", 16 * c));
            rd.finish("lengths");
            if (logp > 40) throw HarnessError(ExitCode::Usage, "logP must be <= 40");
            report = with_mechanism(id, o.machines, o.bmax, [&](auto& mech) {
                LengthsRun r = gen_lengths_lb(mech, c, Time{1} << logp);
                stream = r.stream;
                nlohmann::json j{{"kind", "lengths"}, {"c", c}, {"P", r.P}, {"late", r.late},
                                 {"cost_alg", big_to_json(r.cost_alg)}, {"cost_opt", big_to_json(r.cost_opt)}};
                j["stop"] = r.stop ? nlohmann::json(*r.stop) : nlohmann::json(nullptr);
                if (r.stop) {
                    BigInt n = r.n_stop();
                    j["term_i"] = big_to_json(r.term_i);
                    j["term_ii"] = big_to_json(r.term_ii);
                    j["term_iii"] = big_to_json(r.term_iii);
                    j["checks"].push_back(check(r.cost_opt <= 4 * BigInt(r.P) * n, "Cost(OPT) <= 4 P n_j"));
                    j["checks"].push_back(check(r.cost_alg > 4 * BigInt(c) * r.P * n, "Cost(ALG) > 4 c P n_j"));
                } else {
                    j["checks"].push_back(check(false, "adversary stopped"));
                }
                return j;
            });
        } else {
            auto k = static_cast<unsigned>(rd.u64("k", 8));
            rd.finish("weights");
            report = with_mechanism(id, o.machines, o.bmax, [&](auto& mech) {
                WeightsRun r = gen_weights_lb(mech, k);
                stream = r.stream;
                nlohmann::json j{{"kind", "weights"}, {"k", k}, {"completions", r.completion},
                                 {"cost_alg", big_to_json(r.cost_alg)}, {"cost_opt", big_to_json(r.cost_opt)},
                                 {"ratio", rational_string(Rational(r.cost_alg, r.cost_opt))},
                                 {"ratio_decimal", decimal_string(Rational(r.cost_alg, r.cost_opt))}};
                j["stop"] = r.stop ? nlohmann::json(*r.stop) : nlohmann::json(nullptr);
                if (r.stop)
                    j["checks"].push_back(
                        check(r.cost_opt < big_pow2(k + *r.stop + 2), "Cost(OPT) < 2^{k+j*+2}"));
                else
                    j["checks"].push_back(check(false, "adversary stopped"));
                return j;
            });
        }
        for (const auto& c : report["checks"]) holds = holds && c["holds"].get<bool>();
    } else if (o.kind == "warmup") {
        std::string v = rd.str("variant", "ascending");
        auto d = static_cast<unsigned>(rd.u64("d", 4));
        auto n = rd.u64("n", 16);
        rd.finish("warmup");
        if (v != "ascending" && v != "descending") throw HarnessError(ExitCode::Usage, "variant must be ascending|descending");
        WarmupInstance w = gen_warmup(v == "ascending" ? WarmupVariant::Ascending : WarmupVariant::Descending, d, n,
                                      o.machines);
        stream = w.stream;
        Schedule s;
        s.machines = o.machines;
        for (const Job& j : stream.jobs) s.assignments.push_back(w.scheduler.submit(j));
        BigInt alg = weighted_completion_sum(s, stream), opt = weighted_completion_sum(spt_offline(stream, o.machines), stream);
        report = {{"kind", "warmup"}, {"variant", v}, {"d", d}, {"n", n}, {"pattern", w.scheduler.pattern()},
                  {"cost_alg", big_to_json(alg)}, {"cost_opt", big_to_json(opt)},
                  {"ratio", rational_string(Rational(alg, opt))}, {"ratio_decimal", decimal_string(Rational(alg, opt))}};
        note(validate(s, stream).empty(), "schedule valid");
    } else if (o.kind == "static-lb") {
        auto n = static_cast<unsigned>(rd.u64("n", 16));
        auto k = static_cast<unsigned>(rd.u64("k", 8));
        rd.finish("static-lb");
        if (k >= n) throw HarnessError(ExitCode::Usage, "static-lb requires k < n");
        if (n > 20) throw HarnessError(ExitCode::Usage, "static-lb supports n <= 20");
        StaticLbReport r = static_lb_ratio(n, k);
        stream = gen_static_lb(n, k);
        BigInt scale = big_pow2(2 * n);
        report = {{"kind", "static-lb"}, {"n", n}, {"k", k}, {"jobs", r.jobs},
                  {"cost_alg", big_to_json(r.cost_alg)}, {"cost_opt", big_to_json(r.cost_opt)},
                  {"ratio", rational_string(r.ratio)}, {"ratio_decimal", decimal_string(r.ratio)}};
        note(r.cost_alg >= n * scale, "Cost(ALG) >= n 2^{2n}");
        note(r.ratio >= Rational(n, 8), "ratio >= n/8");
    } else {
        throw HarnessError(ExitCode::Usage, "unknown adversary kind '" + o.kind + "'");
    }
    report["holds"] = holds;
    if (!o.out.empty()) {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(o.out, ec);
        if (ec) throw HarnessError(ExitCode::Io, "cannot create " + o.out);
        auto os = open_out(fs::path(o.out) / "adversary.json");
        os << report.dump(2) << '\n';
        auto ss = open_out(fs::path(o.out) / "stream.jsonl");
        write_stream(ss, stream);
    }
    std::cout << report.dump() << '\n';
    return holds ? 0 : static_cast<int>(ExitCode::VerifyFailed);
}

int cmd_gen(const GenOpts& o) {
    JobStream s = generate_stream(o.gen, parse_params(o.params), o.seed, o.machines);
    if (o.out.empty()) {
        write_stream(std::cout, s);
        return 0;
    }
    auto os = open_out(o.out);
    write_stream(os, s);
    if (!os) throw HarnessError(ExitCode::Io, "write failed: " + o.out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prompt online scheduling simulator"};
    app.set_config("--config", "", "TOML config file; command-line flags take precedence");
    app.require_subcommand(1);

    RunOpts run;
    auto* r = app.add_subcommand("run", "run a mechanism against a baseline");
    r->add_option("--mechanism", run.mechanism, "dynamic|pricing|combined|static|static-feedback")->capture_default_str();
    r->add_option("--baseline", run.baseline, "srpt|wsrpt|spt|fifo|brute")->capture_default_str();
    r->add_option("--stream", run.stream, "job stream file (JSON lines)");
    r->add_option("--gen", run.gen, "generator: random|gapfree|intro|intro-weighted|warmup|static-lb");
    r->add_option("--params", run.params, "generator parameters K=V");
    r->add_option("--machines", run.machines, "machine count")->capture_default_str();
    r->add_option("--seed", run.seed, "generator seed")->capture_default_str();
    r->add_option("--out", run.out, "output directory")->capture_default_str();
    r->add_flag("--feedback", run.feedback, "static mechanism re-offers unused interval tails");
    r->add_option("--bmax", run.bmax, "weight bound for the combined mechanism (power of 2)");

    VerifyOpts ver;
    auto* v = app.add_subcommand("verify", "run invariant suites");
    v->add_option("--suite", ver.suite, "sequences|menus|pricing|bounds|oracles|all")->capture_default_str();
    v->add_option("--seed", ver.seed, "seed")->capture_default_str();
    v->add_option("--configs", ver.configs, "random configurations for the pricing suite")->capture_default_str();

    AdversaryOpts adv;
    auto* a = app.add_subcommand("adversary", "run an adversarial instance");
    a->add_option("--kind", adv.kind, "lengths|weights|warmup|static-lb")->capture_default_str();
    a->add_option("--mechanism", adv.mechanism, "mechanism for adaptive adversaries")->capture_default_str();
    a->add_option("--params", adv.params, "parameters K=V");
    a->add_option("--machines", adv.machines, "machine count")->capture_default_str();
    a->add_option("--bmax", adv.bmax, "weight bound for the combined mechanism");
    a->add_option("--out", adv.out, "output directory");

    GenOpts gen;
    auto* g = app.add_subcommand("gen", "write a generated stream");
    g->add_option("--gen", gen.gen, "generator name")->capture_default_str();
    g->add_option("--params", gen.params, "generator parameters K=V");
    g->add_option("--machines", gen.machines, "machine count (gapfree only)")->capture_default_str();
    g->add_option("--seed", gen.seed, "seed")->capture_default_str();
    g->add_option("--out", gen.out, "output file (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(ExitCode::Usage);
    }

    try {
        if (*r) return cmd_run(run);
        if (*v) return cmd_verify(ver);
        if (*a) return cmd_adversary(adv);
        return cmd_gen(gen);
    } catch (const HarnessError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(e.code());
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Usage);
    } catch (const std::overflow_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Usage);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Invariant);
    }
}
