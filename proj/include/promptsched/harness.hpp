#pragma once

// Experiment plumbing: stream generators, mechanism/baseline dispatch, ratio
// reports, on-disk artifacts, and the invariant suites behind `verify`.

#include "promptsched/adversary.hpp"
#include "promptsched/baselines.hpp"
#include "promptsched/bounded_weight_menu.hpp"
#include "promptsched/core_model.hpp"
#include "promptsched/dynamic_menu.hpp"
#include "promptsched/slot_pricing.hpp"
#include "promptsched/static_menu.hpp"
#include "promptsched/stream_io.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace promptsched {

enum class ExitCode : int { Ok = 0, VerifyFailed = 1, Usage = 2, Io = 3, Invariant = 4 };

class HarnessError : public std::runtime_error {
public:
    HarnessError(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ExitCode code() const { return code_; }

private:
    ExitCode code_;
};

enum class MechanismId { Dynamic, Pricing, Combined, Static, StaticFeedback };
enum class BaselineId { SRPT, WSRPT, SPT, FIFO, Brute };

inline const char* to_string(MechanismId m) {
    switch (m) {
        case MechanismId::Dynamic: return "dynamic";
        case MechanismId::Pricing: return "pricing";
        case MechanismId::Combined: return "combined";
        case MechanismId::Static: return "static";
        case MechanismId::StaticFeedback: return "static-feedback";
    }
    return "?";
}

inline const char* to_string(BaselineId b) {
    switch (b) {
        case BaselineId::SRPT: return "srpt";
        case BaselineId::WSRPT: return "wsrpt";
        case BaselineId::SPT: return "spt";
        case BaselineId::FIFO: return "fifo";
        case BaselineId::Brute: return "brute";
    }
    return "?";
}

inline MechanismId parse_mechanism(const std::string& s) {
    for (auto m : {MechanismId::Dynamic, MechanismId::Pricing, MechanismId::Combined, MechanismId::Static,
                   MechanismId::StaticFeedback})
        if (s == to_string(m)) return m;
    throw HarnessError(ExitCode::Usage, "unknown mechanism '" + s + "'");
}

inline BaselineId parse_baseline(const std::string& s) {
    for (auto b : {BaselineId::SRPT, BaselineId::WSRPT, BaselineId::SPT, BaselineId::FIFO, BaselineId::Brute})
        if (s == to_string(b)) return b;
    throw HarnessError(ExitCode::Usage, "unknown baseline '" + s + "'");
}

// ---------------------------------------------------------------- generators

using Params = std::map<std::string, std::string>;

inline Params parse_params(const std::vector<std::string>& kvs) {
    Params p;
    for (const std::string& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw HarnessError(ExitCode::Usage, "parameter '" + kv + "' is not K=V");
        p[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return p;
}

class ParamReader {
public:
    explicit ParamReader(const Params& p) : p_(p) {}

    std::uint64_t u64(const std::string& key, std::uint64_t fallback) {
        used_.push_back(key);
        auto it = p_.find(key);
        if (it == p_.end()) return fallback;
        try {
            std::size_t pos = 0;
            unsigned long long v = std::stoull(it->second, &pos);
            if (pos != it->second.size() || it->second.front() == '-') throw std::invalid_argument(key);
            return v;
        } catch (const std::exception&) {
            throw HarnessError(ExitCode::Usage, "parameter " + key + " must be a non-negative integer");
        }
    }

    std::string str(const std::string& key, const std::string& fallback) {
        used_.push_back(key);
        auto it = p_.find(key);
        return it == p_.end() ? fallback : it->second;
    }

    void finish(const std::string& gen) const {
        for (const auto& [k, v] : p_)
            if (std::find(used_.begin(), used_.end(), k) == used_.end())
                throw HarnessError(ExitCode::Usage, "generator '" + gen + "' has no parameter '" + k + "'");
    }

private:
    const Params& p_;
    std::vector<std::string> used_;
};

struct RandomStreamParams {
    std::uint64_t n = 100;
    unsigned p_exp = 4;     // p = 2^U, U uniform on {0..p_exp}
    unsigned w_exp = 0;     // w = 2^U, U uniform on {0..w_exp}
    Time horizon = -1;      // releases sampled from {0..horizon}; -1 means n
};

/// Boost distributions are used because their output is fixed across standard libraries.
inline JobStream random_stream(const RandomStreamParams& prm, std::uint64_t seed) {
    if (prm.n < 1) throw HarnessError(ExitCode::Usage, "random stream needs n >= 1");
    if (prm.p_exp > 40 || prm.w_exp > 62) throw HarnessError(ExitCode::Usage, "random stream exponent too large");
    boost::random::mt19937_64 rng(seed);
    Time horizon = prm.horizon < 0 ? static_cast<Time>(prm.n) : prm.horizon;
    boost::random::uniform_int_distribution<Time> rel(0, horizon);
    boost::random::uniform_int_distribution<unsigned> pe(0, prm.p_exp), we(0, prm.w_exp);
    std::vector<Time> releases(prm.n);
    for (Time& r : releases) r = rel(rng);
    std::sort(releases.begin(), releases.end());
    std::vector<Job> jobs;
    jobs.reserve(prm.n);
    for (std::uint64_t i = 0; i < prm.n; ++i) {
        Time p = Time{1} << pe(rng);
        BigInt w = big_pow2(we(rng));
        jobs.push_back({static_cast<std::int64_t>(i + 1), releases[i], w, p});
    }
    return JobStream::from_jobs(std::move(jobs));
}

/// One job of length L, then ceil(sqrt L) unit jobs, all at time 0.
inline JobStream intro_stream(Time L) {
    if (L < 1) throw HarnessError(ExitCode::Usage, "intro needs L >= 1");
    Time k = 0;
    while (k * k < L) ++k;
    std::vector<Job> jobs{{1, 0, 1, L}};
    for (Time i = 0; i < k; ++i) jobs.push_back({i + 2, 0, 1, 1});
    return JobStream::from_jobs(std::move(jobs));
}

/// L unit jobs of weight 1, then one unit job of weight W, all at time 0.
inline JobStream intro_weighted_stream(Time L, const BigInt& W) {
    std::vector<Job> jobs;
    for (Time i = 0; i < L; ++i) jobs.push_back({i + 1, 0, 1, 1});
    jobs.push_back({L + 1, 0, W, 1});
    return JobStream::from_jobs(std::move(jobs));
}

inline JobStream generate_stream(const std::string& name, const Params& params, std::uint64_t seed, int machines) {
    ParamReader rd(params);
    JobStream out;
    if (name == "random" || name == "gapfree") {
        RandomStreamParams prm;
        prm.n = rd.u64("n", 100);
        prm.p_exp = static_cast<unsigned>(rd.u64("pexp", 4));
        prm.w_exp = static_cast<unsigned>(rd.u64("wexp", 0));
        prm.horizon = static_cast<Time>(rd.u64("horizon", prm.n));
        out = random_stream(prm, seed);
        if (name == "gapfree") out = eliminate_gaps(out, machines);
    } else if (name == "intro") {
        out = intro_stream(static_cast<Time>(rd.u64("L", 64)));
    } else if (name == "intro-weighted") {
        out = intro_weighted_stream(static_cast<Time>(rd.u64("L", 4)), BigInt(rd.u64("W", 64)));
    } else if (name == "warmup") {
        std::string v = rd.str("variant", "ascending");
        if (v != "ascending" && v != "descending") throw HarnessError(ExitCode::Usage, "warmup variant must be ascending|descending");
        auto d = static_cast<unsigned>(rd.u64("d", 4));
        auto n = rd.u64("n", 16);
        out = gen_warmup(v == "ascending" ? WarmupVariant::Ascending : WarmupVariant::Descending, d, n).stream;
    } else if (name == "static-lb") {
        auto n = static_cast<unsigned>(rd.u64("n", 16));
        auto k = static_cast<unsigned>(rd.u64("k", 8));
        if (k >= n) throw HarnessError(ExitCode::Usage, "static-lb requires k < n");
        out = gen_static_lb(n, k);
    } else {
        throw HarnessError(ExitCode::Usage, "unknown generator '" + name + "'");
    }
    rd.finish(name);
    return out;
}

// ------------------------------------------------------------- experiments

struct ExperimentSpec {
    MechanismId mechanism = MechanismId::Dynamic;
    BaselineId baseline = BaselineId::SRPT;
    std::optional<std::string> stream_file;
    std::string generator;
    Params params;
    int machines = 1;
    std::uint64_t seed = 1;
    std::uint64_t bmax = 0;  // combined only; 0 means the rounded W_max of the stream
    std::string out_dir;
};

struct RatioReport {
    std::string mechanism;
    std::string baseline;
    std::uint64_t n = 0;
    int machines = 1;
    Time p_max = 0;
    BigInt w_max = 0;
    BigInt cost_alg = 0;
    BigInt cost_base = 0;
    Rational ratio = 0;
    Rational max_perjob_ratio = 0;
    std::int64_t max_perjob_job = 0;
    std::uint64_t seed = 0;
    bool processing_rounded = false;
    bool weight_rounded = false;
};

inline nlohmann::json to_json(const RatioReport& r) {
    return {{"mechanism", r.mechanism},
            {"baseline", r.baseline},
            {"n", r.n},
            {"m", r.machines},
            {"P_max", r.p_max},
            {"W_max", big_to_json(r.w_max)},
            {"cost_alg", big_to_json(r.cost_alg)},
            {"cost_base", big_to_json(r.cost_base)},
            {"ratio", rational_string(r.ratio)},
            {"ratio_decimal", decimal_string(r.ratio)},
            {"max_perjob_ratio", rational_string(r.max_perjob_ratio)},
            {"max_perjob_ratio_decimal", decimal_string(r.max_perjob_ratio)},
            {"max_perjob_job", r.max_perjob_job},
            {"seed", r.seed},
            {"processing_rounded", r.processing_rounded},
            {"weight_rounded", r.weight_rounded}};
}

inline const char* csv_header() {
    return "mechanism,baseline,n,m,P_max,W_max,cost_alg,cost_base,ratio,max_perjob_ratio,seed";
}

inline std::string csv_row(const RatioReport& r) {
    std::ostringstream os;
    os << r.mechanism << ',' << r.baseline << ',' << r.n << ',' << r.machines << ',' << r.p_max << ',' << r.w_max << ','
       << r.cost_alg << ',' << r.cost_base << ',' << rational_string(r.ratio) << ','
       << rational_string(r.max_perjob_ratio) << ',' << r.seed;
    return os.str();
}

struct MechanismRun {
    Schedule schedule;
    std::vector<nlohmann::json> trace;
};

inline bool needs_unit_weights(MechanismId m) {
    return m == MechanismId::Dynamic || m == MechanismId::Static || m == MechanismId::StaticFeedback;
}

/// Throws HarnessError(Usage) when the stream cannot be served by the mechanism.
inline void check_compatible(MechanismId m, const JobStream& s, std::uint64_t bmax) {
    for (const Job& j : s.jobs) {
        if (needs_unit_weights(m) && j.weight != 1)
            throw HarnessError(ExitCode::Usage, std::string(to_string(m)) + " needs unit weights; job " +
                                                    std::to_string(j.index) + " has weight " + j.weight.str());
        if (m == MechanismId::Pricing && j.processing != 1)
            throw HarnessError(ExitCode::Usage, "pricing needs unit processing times; job " + std::to_string(j.index) +
                                                    " has p=" + std::to_string(j.processing));
        if (m == MechanismId::Combined && j.weight > bmax)
            throw HarnessError(ExitCode::Usage, "combined: job " + std::to_string(j.index) + " has weight above B_max");
    }
    if (m == MechanismId::Combined && !is_pow2(bmax))
        throw HarnessError(ExitCode::Usage, "combined: B_max must be a power of 2");
}

inline MechanismRun run_mechanism(MechanismId m, const JobStream& s, int machines, std::uint64_t bmax,
                                  bool trace_frontier = true) {
    check_compatible(m, s, bmax);
    MechanismRun out;
    auto intervals = [&](const std::vector<IntervalTraceRecord>& tr) {
        for (const auto& r : tr) out.trace.push_back(to_json(r));
    };
    switch (m) {
        case MechanismId::Dynamic: {
            auto r = run_dynamic(s, machines, trace_frontier);
            out.schedule = std::move(r.schedule);
            intervals(r.trace);
            break;
        }
        case MechanismId::Static:
        case MechanismId::StaticFeedback: {
            auto r = run_static(s, machines, m == MechanismId::StaticFeedback, trace_frontier);
            out.schedule = std::move(r.schedule);
            intervals(r.trace);
            break;
        }
        case MechanismId::Pricing: {
            auto r = run_pricing(s, machines);
            out.schedule = std::move(r.schedule);
            for (const auto& t : r.trace) out.trace.push_back(to_json(t));
            break;
        }
        case MechanismId::Combined: {
            auto r = run_combined(s, machines, bmax);
            out.schedule = std::move(r.schedule);
            intervals(r.trace);
            break;
        }
    }
    return out;
}

/// Baseline completion times in stream order, after validating the baseline schedule.
inline std::vector<Time> run_baseline(BaselineId b, const JobStream& s, int machines) {
    auto check = [&](const std::vector<Violation>& v) {
        if (!v.empty())
            throw HarnessError(ExitCode::Invariant, std::string("baseline ") + to_string(b) + " produced an invalid schedule: " +
                                                        v.front().detail);
    };
    try {
        switch (b) {
            case BaselineId::SRPT: {
                auto ps = srpt(s, machines);
                check(validate_preemptive(ps, s));
                return ps.completion;
            }
            case BaselineId::WSRPT: {
                auto ps = wsrpt(s, machines);
                check(validate_preemptive(ps, s));
                return ps.completion;
            }
            case BaselineId::Brute: {
                auto ps = brute_force_opt_preemptive(s, machines);
                check(validate_preemptive(ps, s));
                return ps.completion;
            }
            case BaselineId::SPT: {
                auto sc = spt_offline(s, machines);
                check(validate(sc, s));
                return completions(sc, s);
            }
            case BaselineId::FIFO: {
                auto sc = fifo(s, machines);
                check(validate(sc, s));
                return completions(sc, s);
            }
        }
    } catch (const std::invalid_argument& e) {
        throw HarnessError(ExitCode::Usage, e.what());
    }
    return {};
}

inline BigInt weighted_sum(const JobStream& s, const std::vector<Time>& c) {
    BigInt total = 0;
    for (std::size_t i = 0; i < s.jobs.size(); ++i) total += s.jobs[i].weight * c[i];
    return total;
}

struct ExperimentResult {
    RatioReport report;
    JobStream stream;
    MechanismRun run;
    std::vector<Time> c_alg;
    std::vector<Time> c_base;
};

inline JobStream load_stream(const ExperimentSpec& spec) {
    if (spec.stream_file) {
        try {
            return read_stream_file(*spec.stream_file);
        } catch (const std::ios_base::failure& e) {
            throw HarnessError(ExitCode::Io, e.what());
        } catch (const std::exception& e) {
            throw HarnessError(ExitCode::Io, *spec.stream_file + ": " + e.what());
        }
    }
    if (spec.generator.empty()) throw HarnessError(ExitCode::Usage, "need --stream FILE or --gen NAME");
    return generate_stream(spec.generator, spec.params, spec.seed, spec.machines);
}

inline ExperimentResult run_experiment(const ExperimentSpec& spec) {
    if (spec.machines < 1 || spec.machines > 64) throw HarnessError(ExitCode::Usage, "machines must be in [1, 64]");
    ExperimentResult res;
    JobStream raw = load_stream(spec);
    if (raw.jobs.empty()) throw HarnessError(ExitCode::Usage, "stream is empty");
    bool weighted = spec.mechanism == MechanismId::Pricing || spec.mechanism == MechanismId::Combined;
    res.stream = normalize(raw, {true, weighted});
    std::uint64_t bmax = spec.bmax;
    if (spec.mechanism == MechanismId::Combined && bmax == 0) {
        if (res.stream.w_max > BigInt(std::uint64_t{1} << 62)) throw HarnessError(ExitCode::Usage, "combined: W_max too large");
        bmax = static_cast<std::uint64_t>(res.stream.w_max);
    }
    try {
        res.run = run_mechanism(spec.mechanism, res.stream, spec.machines, bmax);
    } catch (const HarnessError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw HarnessError(ExitCode::Usage, e.what());
    } catch (const std::logic_error& e) {
        throw HarnessError(ExitCode::Invariant, e.what());
    }
    auto violations = validate(res.run.schedule, res.stream);
    if (!violations.empty()) {
        std::string msg = "schedule invalid (" + std::to_string(violations.size()) + " violations): job " +
                          std::to_string(violations.front().job) + " " + to_string(violations.front().kind) + ": " +
                          violations.front().detail;
        throw HarnessError(ExitCode::Invariant, msg);
    }
    res.c_alg = completions(res.run.schedule, res.stream);
    res.c_base = run_baseline(spec.baseline, res.stream, spec.machines);

    RatioReport& r = res.report;
    r.mechanism = to_string(spec.mechanism);
    r.baseline = to_string(spec.baseline);
    r.n = res.stream.n();
    r.machines = spec.machines;
    r.p_max = res.stream.p_max;
    r.w_max = res.stream.w_max;
    r.cost_alg = weighted_sum(res.stream, res.c_alg);
    r.cost_base = weighted_sum(res.stream, res.c_base);
    r.ratio = Rational(r.cost_alg, r.cost_base);
    for (std::size_t i = 0; i < res.c_alg.size(); ++i) {
        Rational q(res.c_alg[i], res.c_base[i]);
        if (i == 0 || q > r.max_perjob_ratio) {
            r.max_perjob_ratio = q;
            r.max_perjob_job = res.stream.jobs[i].index;
        }
    }
    r.seed = spec.seed;
    r.processing_rounded = res.stream.processing_rounded;
    r.weight_rounded = res.stream.weight_rounded;
    return res;
}

inline std::ofstream open_out(const std::filesystem::path& p, std::ios::openmode mode = std::ios::trunc) {
    std::ofstream os(p, std::ios::out | mode);
    if (!os) throw HarnessError(ExitCode::Io, "cannot write " + p.string());
    return os;
}

/// trace.jsonl, report.json, completions.csv and stream.jsonl are rewritten;
/// summary.csv gets one appended row.
inline void write_artifacts(const ExperimentResult& res, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw HarnessError(ExitCode::Io, "cannot create " + out_dir + ": " + ec.message());
    fs::path dir(out_dir);
    {
        auto os = open_out(dir / "trace.jsonl");
        for (const auto& rec : res.run.trace) os << rec.dump() << '\n';
    }
    {
        auto os = open_out(dir / "report.json");
        os << to_json(res.report).dump(2) << '\n';
    }
    {
        auto os = open_out(dir / "stream.jsonl");
        write_stream(os, res.stream);
    }
    {
        auto os = open_out(dir / "completions.csv");
        os << "index,release,weight,processing,c_alg,c_base\n";
        for (std::size_t i = 0; i < res.stream.jobs.size(); ++i) {
            const Job& j = res.stream.jobs[i];
            os << j.index << ',' << j.release << ',' << j.weight << ',' << j.processing << ',' << res.c_alg[i] << ','
               << res.c_base[i] << '\n';
        }
    }
    fs::path csv = dir / "summary.csv";
    bool fresh = !fs::exists(csv) || fs::file_size(csv) == 0;
    auto os = open_out(csv, std::ios::app);
    if (fresh) os << csv_header() << '\n';
    os << csv_row(res.report) << '\n';
    if (!os) throw HarnessError(ExitCode::Io, "write failed under " + out_dir);
}

// ------------------------------------------------------------ verify suites

struct PropertyResult {
    std::string suite;
    std::string property;
    bool passed = false;
    std::string detail;
};

inline nlohmann::json to_json(const PropertyResult& p) {
    return {{"suite", p.suite}, {"property", p.property}, {"pass", p.passed}, {"detail", p.detail}};
}

namespace detail {

struct SuiteLog {
    std::string suite;
    std::vector<PropertyResult> out;

    void add(const std::string& property, bool ok, std::string detail = {}) {
        out.push_back({suite, property, ok, std::move(detail)});
    }
};

inline void verify_sequences(SuiteLog& log) {
    bool ok = true;
    std::string why;
    for (unsigned d = 0; d <= 16 && ok; ++d) {
        auto vals = s_values(d);
        std::map<std::uint64_t, std::uint64_t> per_len;
        std::uint64_t total = 0;
        for (auto v : vals) {
            per_len[v] += v;
            total += v;
        }
        for (unsigned k = 0; k <= d; ++k)
            if (per_len[pow2(k)] != pow2(d)) {
                ok = false;
                why = "S_" + std::to_string(d) + " length 2^" + std::to_string(k);
            }
        if (total != (d + 1) * pow2(d)) {
            ok = false;
            why = "total length of S_" + std::to_string(d);
        }
        if (vals.size() != s_length(d)) {
            ok = false;
            why = "|S_" + std::to_string(d) + "|";
        }
    }
    log.add("S_d: each length class sums to 2^d and the total is (d+1)2^d, d<=16", ok, why);

    ok = true;
    why.clear();
    for (unsigned i = 0; i <= 12 && ok; ++i) {
        auto ex = r_exponents(i);
        std::uint64_t expect_len = i == 0 ? 1 : (i + 2) * pow2(i - 1);
        if (ex.size() != expect_len || r_length(i) != expect_len) {
            ok = false;
            why = "|R_" + std::to_string(i) + "|";
            break;
        }
        std::map<std::uint64_t, std::uint64_t> cnt;
        for (auto e : ex) ++cnt[e];
        for (auto& [k, c] : cnt) {
            std::uint64_t closed = 0;
            try {
                closed = count_weight_in_r(k, i);
            } catch (const std::invalid_argument&) {
            }
            if (closed != c) {
                ok = false;
                why = "count of 2^" + std::to_string(k) + " in R_" + std::to_string(i);
            }
        }
    }
    log.add("R_i: length (i+2)2^{i-1} and per-weight counts match the closed form, i<=12", ok, why);

    auto s22 = realize_s(2, 2);
    std::vector<Interval> want{{2, 3}, {3, 4}, {4, 6}, {6, 7}, {7, 8}, {8, 10}, {10, 14}};
    log.add("realize_s(2,2) interval list", s22.intervals == want);
    std::vector<std::uint64_t> r2;
    for (auto e : r_exponents(2)) r2.push_back(pow2(static_cast<unsigned>(e)));
    log.add("R_2 = <1,1,2,1,1,2,4,8>", r2 == std::vector<std::uint64_t>{1, 1, 2, 1, 1, 2, 4, 8});

    ok = s_prefix_sum(1) == s_element(1);
    for (std::uint64_t i = 2; i <= 5000 && ok; ++i) ok = s_prefix_sum(i) == s_prefix_sum(i - 1) + s_element(i);
    log.add("S_inf prefix sums agree with element-wise accumulation, i<=5000", ok);
}

inline bool prefix_replay_ok(MechanismId m, const JobStream& s, int machines, std::uint64_t bmax) {
    auto full = run_mechanism(m, s, machines, bmax, false).schedule;
    for (std::size_t k : {s.jobs.size() / 3, s.jobs.size() / 2, s.jobs.size() - 1}) {
        if (k == 0) continue;
        JobStream pre = JobStream::from_jobs({s.jobs.begin(), s.jobs.begin() + static_cast<std::ptrdiff_t>(k)});
        auto part = run_mechanism(m, pre, machines, bmax, false).schedule;
        for (std::size_t i = 0; i < k; ++i) {
            const Assignment& a = part.assignments[i];
            const Assignment& b = full.assignments[i];
            if (a.machine != b.machine || a.interval != b.interval || a.start != b.start || a.price != b.price) return false;
        }
    }
    return true;
}

inline void verify_menus(SuiteLog& log, std::uint64_t seed) {
    JobStream intro = intro_stream(64);
    auto dyn = run_dynamic(intro, 1);
    BigInt cd = weighted_completion_sum(dyn.schedule, intro);
    BigInt cf = weighted_completion_sum(fifo(intro, 1), intro);
    log.add("dynamic beats FIFO on the L=64 intro instance", cd < cf, cd.str() + " vs " + cf.str());

    JobStream rows = JobStream::from_jobs({{1, 0, 1, 2}, {2, 0, 1, 1}, {3, 1, 1, 2}, {4, 1, 1, 4}, {5, 20, 1, 1}});
    auto rr = run_dynamic(rows, 1);
    std::vector<int> seen;
    for (const auto& t : rr.trace) seen.push_back(t.row);
    log.add("dynamic state updates walk rows 2,1,3,4,2", seen == std::vector<int>{2, 1, 3, 4, 2});

    auto st = run_static(JobStream::from_jobs({{1, 0, 1, 4}}), 1, false);
    log.add("static: lone p=4 job takes [8,12]", st.schedule.assignments[0].interval == Interval{8, 12});

    auto fb = run_static(JobStream::from_jobs({{1, 2, 1, 1}, {2, 3, 1, 1}}), 1, true);
    log.add("static feedback: remainder [3,4] is reused",
            fb.schedule.assignments[0].interval == Interval{2, 4} && fb.schedule.assignments[1].interval == Interval{3, 4});

    bool valid = true, replay = true, partition = true, gaps = true;
    std::string why;
    for (std::uint64_t r = 0; r < 12; ++r) {
        int m = 1 << (r % 3);
        RandomStreamParams prm;
        prm.n = 150 + 25 * r;
        prm.p_exp = 6;
        JobStream s = random_stream(prm, seed + r);
        for (MechanismId id : {MechanismId::Dynamic, MechanismId::Static, MechanismId::StaticFeedback}) {
            auto run = run_mechanism(id, s, m, 1, false);
            if (!validate(run.schedule, s).empty()) {
                valid = false;
                why = std::string(to_string(id)) + " seed " + std::to_string(seed + r);
            }
            if (!prefix_replay_ok(id, s, m, 1)) replay = false;
            if (id == MechanismId::Static)
                for (const auto& a : run.schedule.assignments)
                    if (!ordinal_in_segment(Segment{0, std::nullopt}, a.interval)) partition = false;
        }
        JobStream g = eliminate_gaps(s, m);
        if (!gap_free(run_dynamic(g, m, false).final_state)) gaps = false;
    }
    log.add("dynamic/static schedules validate on random streams", valid, why);
    log.add("replaying a prefix reproduces the prefix of assignments", replay);
    log.add("static intervals always belong to the fixed S_inf(0) partition", partition);
    log.add("gap elimination leaves a gap-free state", gaps);
}

inline void verify_pricing(SuiteLog& log, std::uint64_t seed, std::uint64_t configs) {
    {
        SlotOccupancy occ(1);
        auto lad = compute_prices(occ, 2);
        bool ok = lad.price_of(2) == 2 && lad.price_of(3) == 0 &&
                  choose_weighted(occ, lad, 4).slot == 2 && choose_weighted(occ, lad, 1).slot == 3;
        auto lad6 = compute_prices(occ, 6);
        ok = ok && lad6.price_of(6) == 8 && lad6.price_of(7) == 8 && lad6.price_of(8) == 0;
        log.add("empty-timeline ladders at t=2 and t=6", ok);
    }
    boost::random::mt19937_64 rng(seed);
    bool equal = true, monotone = true, shape = true;
    std::string why;
    for (std::uint64_t c = 0; c < configs; ++c) {
        int m = 1 + static_cast<int>(rng() % 3);
        Time horizon = Time{1} << (4 + rng() % 9);
        SlotOccupancy occ(m);
        std::uint64_t fills = rng() % static_cast<std::uint64_t>(horizon * m);
        for (std::uint64_t f = 0; f < fills; ++f) {
            Time x = static_cast<Time>(rng() % static_cast<std::uint64_t>(horizon));
            int q = occ.lowest_free_machine(x);
            if (q) occ.occupy(x, q);
        }
        Time t = static_cast<Time>(rng() % static_cast<std::uint64_t>(horizon));
        auto lad = compute_prices(occ, t);
        for (std::size_t i = 1; i < lad.steps.size(); ++i)
            if (!(lad.steps[i].v_exponent > lad.steps[i - 1].v_exponent && lad.steps[i].b < lad.steps[i - 1].b &&
                  lad.steps[i].price >= lad.steps[i - 1].price))
                shape = false;
        Time prev = -1;
        for (unsigned e = 14; e-- > 0;) {
            BigInt w = big_pow2(e);
            Time got = choose_weighted(occ, lad, w).slot;
            Time rule = threshold_rule_slot(occ, t, w);
            if (got != rule && equal) {
                equal = false;
                why = "config " + std::to_string(c) + " t=" + std::to_string(t) + " w=2^" + std::to_string(e);
            }
            if (prev >= 0 && got < prev) monotone = false;
            prev = got;
        }
    }
    log.add("argmin of agent cost equals the threshold rule on " + std::to_string(configs) + " random configurations",
            equal, why);
    log.add("ladder steps: thresholds increase, breakpoints decrease, prices do not decrease", shape);
    log.add("a heavier agent never picks a later slot", monotone);
}

inline long double log2l_of(const BigInt& v) {
    unsigned f = floor_log2(v);
    long double top = static_cast<long double>(v >> (f > 60 ? f - 60 : 0));
    return std::log2(top) + (f > 60 ? f - 60 : 0);
}

inline void verify_bounds(SuiteLog& log, std::uint64_t seed) {
    // dynamic, gap-free: c_j <= (6 log2 P_max + 12) c*_j
    bool ok = true;
    std::string why;
    Rational worst = 0;
    for (std::uint64_t r = 0; r < 50; ++r) {
        int m = std::array<int, 3>{1, 2, 4}[r % 3];
        boost::random::mt19937_64 rng(seed * 7919 + r);
        RandomStreamParams prm;
        prm.n = 50 + rng() % 1951;
        prm.p_exp = static_cast<unsigned>(rng() % 11);
        JobStream s = eliminate_gaps(random_stream(prm, rng()), m);
        auto run = run_dynamic(s, m, false);
        auto ca = completions(run.schedule, s);
        auto cb = srpt(s, m).completion;
        Time factor = 6 * floor_log2(static_cast<std::uint64_t>(s.p_max)) + 12;
        for (std::size_t i = 0; i < ca.size(); ++i) {
            worst = std::max(worst, Rational(ca[i], cb[i]) / factor);
            if (ca[i] > factor * cb[i] && ok) {
                ok = false;
                why = "stream " + std::to_string(r) + " job " + std::to_string(s.jobs[i].index);
            }
        }
    }
    log.add("dynamic per-job bound c_j <= (6 log2 P_max + 12) c*_j on 50 gap-free streams", ok,
            why.empty() ? "max c_j/(factor c*_j) = " + decimal_string(worst) : why);

    // static: c_j <= 16 max(1, log2 P_max + log2 n_max) c*_j
    ok = true;
    why.clear();
    for (std::uint64_t r = 0; r < 20; ++r) {
        int m = 1 + static_cast<int>(r % 4);
        boost::random::mt19937_64 rng(seed * 104729 + r);
        RandomStreamParams prm;
        prm.n = 50 + rng() % 1951;
        prm.p_exp = static_cast<unsigned>(rng() % 9);
        JobStream s = random_stream(prm, rng());
        auto run = run_static(s, m, false);
        auto ca = completions(run.schedule, s);
        auto cb = srpt(s, m).completion;
        long double factor = 16.0L * std::max<long double>(1, floor_log2(static_cast<std::uint64_t>(s.p_max)) +
                                                                  std::log2(static_cast<long double>(n_max(s))));
        for (std::size_t i = 0; i < ca.size(); ++i)
            if (static_cast<long double>(ca[i]) > factor * static_cast<long double>(cb[i]) && ok) {
                ok = false;
                why = "stream " + std::to_string(r) + " job " + std::to_string(s.jobs[i].index);
            }
    }
    log.add("static per-job bound c_j <= 16 (log2 P_max + log2 n_max) c*_j on 20 streams", ok, why);

    // pricing: c_j <= 32 log2 W (log2 log2 W + log2 n) c*_j against WSRPT
    ok = true;
    why.clear();
    for (std::uint64_t r = 0; r < 20; ++r) {
        int m = 1 + static_cast<int>(r % 2);
        boost::random::mt19937_64 rng(seed * 15485863 + r);
        RandomStreamParams prm;
        prm.n = 50 + rng() % 1951;
        prm.p_exp = 0;
        prm.w_exp = static_cast<unsigned>(rng() % 9);
        JobStream s = random_stream(prm, rng());
        auto run = run_pricing(s, m, false);
        auto ca = completions(run.schedule, s);
        auto cb = wsrpt(s, m).completion;
        long double lw = std::max<long double>(1, log2l_of(s.w_max));
        long double factor = 32.0L * lw * (std::log2(lw) + std::max<long double>(1, std::log2(static_cast<long double>(s.n()))));
        for (std::size_t i = 0; i < ca.size(); ++i)
            if (static_cast<long double>(ca[i]) > factor * static_cast<long double>(cb[i]) && ok) {
                ok = false;
                why = "stream " + std::to_string(r) + " job " + std::to_string(s.jobs[i].index);
            }
    }
    log.add("pricing per-job bound c_j <= 32 log2 W_max (log2 log2 W_max + log2 n) c*_j on 20 streams", ok, why);

    // combined: Cost(ALG) <= 16 (log2 P_max + log2 n)(log2 B_max + 1) Cost(WSRPT)
    ok = true;
    why.clear();
    for (std::uint64_t r = 0; r < 10; ++r) {
        int m = 1 + static_cast<int>(r % 2);
        boost::random::mt19937_64 rng(seed * 32452843 + r);
        RandomStreamParams prm;
        prm.n = 50 + rng() % 951;
        prm.p_exp = static_cast<unsigned>(rng() % 9);
        prm.w_exp = static_cast<unsigned>(rng() % 7);
        JobStream s = random_stream(prm, rng());
        std::uint64_t bmax = std::uint64_t{1} << prm.w_exp;
        auto run = run_combined(s, m, bmax);
        BigInt ca = weighted_completion_sum(run.schedule, s);
        BigInt cb = preemptive_cost(wsrpt(s, m), s);
        long double factor = 16.0L *
                             std::max<long double>(1, floor_log2(static_cast<std::uint64_t>(s.p_max)) +
                                                          std::log2(static_cast<long double>(s.n()))) *
                             (floor_log2(bmax) + 1);
        if (static_cast<long double>(ca) > factor * static_cast<long double>(cb) && ok) {
            ok = false;
            why = "stream " + std::to_string(r);
        }
        if (!validate(run.schedule, s).empty()) {
            ok = false;
            why = "invalid schedule, stream " + std::to_string(r);
        }
    }
    log.add("combined cost <= 16 (log2 P_max + log2 n)(log2 B_max + 1) Cost(WSRPT) on 10 streams", ok, why);
}

inline JobStream tiny_stream(boost::random::mt19937_64& rng, bool weighted) {
    std::size_t n = 1 + rng() % 5;
    std::vector<Time> rel(n);
    for (Time& r : rel) r = static_cast<Time>(rng() % 5);
    std::sort(rel.begin(), rel.end());
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < n; ++i)
        jobs.push_back({static_cast<std::int64_t>(i + 1), rel[i], weighted ? BigInt(1 + rng() % 8) : BigInt(1),
                        static_cast<Time>(1 + rng() % 4)});
    return JobStream::from_jobs(std::move(jobs));
}

inline void verify_oracles(SuiteLog& log, std::uint64_t seed) {
    boost::random::mt19937_64 rng(seed);
    bool ok = true;
    std::string why;
    for (int c = 0; c < 200; ++c) {
        JobStream s = tiny_stream(rng, false);
        BigInt a = preemptive_cost(srpt(s, 1), s), b = preemptive_cost(brute_force_opt_preemptive(s, 1), s);
        if (a != b && ok) {
            ok = false;
            why = "instance " + std::to_string(c) + ": " + a.str() + " vs " + b.str();
        }
    }
    log.add("SRPT equals the brute-force preemptive optimum on 200 tiny instances", ok, why);

    ok = true;
    why.clear();
    for (int c = 0; c < 200; ++c) {
        JobStream s = tiny_stream(rng, true);
        BigInt a = preemptive_cost(wsrpt(s, 1), s), b = preemptive_cost(brute_force_opt_preemptive(s, 1), s);
        if (a > 2 * b && ok) {
            ok = false;
            why = "instance " + std::to_string(c);
        }
    }
    log.add("WSRPT is within 2x of the brute-force optimum on 200 tiny weighted instances", ok, why);

    JobStream intro = intro_stream(64);
    BigInt ff = weighted_completion_sum(fifo(intro, 1), intro);
    log.add("FIFO on the L=64 intro instance costs 612", ff == 612, ff.str());

    JobStream iw = intro_weighted_stream(4, 64);
    BigInt ws = preemptive_cost(wsrpt(iw, 1), iw);
    log.add("WSRPT on the weighted intro instance costs 78", ws == 78, ws.str());

    ok = true;
    for (int c = 0; c < 100; ++c) {
        JobStream s = tiny_stream(rng, false);
        for (Job& j : s.jobs) j.release = 0;
        s.refresh();
        if (weighted_completion_sum(spt_offline(s, 1), s) != preemptive_cost(srpt(s, 1), s)) ok = false;
    }
    log.add("Smith's rule matches SRPT at a common release on one machine", ok);
}

} // namespace detail

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"sequences", "menus", "pricing", "bounds", "oracles"};
    return names;
}

inline std::vector<PropertyResult> verify_suite(const std::string& suite, std::uint64_t seed = 1,
                                                std::uint64_t pricing_configs = 10000) {
    std::vector<PropertyResult> out;
    for (const std::string& name : suite_names()) {
        if (suite != "all" && suite != name) continue;
        detail::SuiteLog log{name, {}};
        if (name == "sequences") detail::verify_sequences(log);
        else if (name == "menus") detail::verify_menus(log, seed);
        else if (name == "pricing") detail::verify_pricing(log, seed, pricing_configs);
        else if (name == "bounds") detail::verify_bounds(log, seed);
        else detail::verify_oracles(log, seed);
        out.insert(out.end(), log.out.begin(), log.out.end());
    }
    if (out.empty()) throw HarnessError(ExitCode::Usage, "unknown suite '" + suite + "'");
    return out;
}

} // namespace promptsched
