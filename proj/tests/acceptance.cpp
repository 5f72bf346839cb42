// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "promptsched/adversary.hpp"
#include "promptsched/baselines.hpp"
#include "promptsched/bounded_weight_menu.hpp"
#include "promptsched/dynamic_menu.hpp"
#include "promptsched/harness.hpp"
#include "promptsched/slot_pricing.hpp"
#include "promptsched/static_menu.hpp"
#include "support/oracles.hpp"

#include <boost/random/mersenne_twister.hpp>

#include <chrono>
#include <iostream>
#include <set>
#include <sstream>

using namespace promptsched;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << " (" << name << "): " << detail << std::endl;
    if (!ok) ++failures;
}

// 1 -----------------------------------------------------------------------
void sequence_identities() {
    auto t0 = Clock::now();
    bool ok = true;
    std::string why = "all identities hold";
    for (unsigned d = 0; d <= 16; ++d) {
        auto sd = oracle::s_seq(d);
        std::map<std::uint64_t, std::uint64_t> sum;
        std::uint64_t total = 0;
        for (auto v : sd) {
            sum[v] += v;
            total += v;
        }
        for (unsigned k = 0; k <= d; ++k)
            if (sum[std::uint64_t{1} << k] != std::uint64_t{1} << d) {
                ok = false;
                why = "length class 2^" + std::to_string(k) + " of S_" + std::to_string(d);
            }
        if (total != (d + 1) * (std::uint64_t{1} << d) || s_end(d, 0) != static_cast<Time>(total) || s_values(d) != sd) {
            ok = false;
            why = "total length of S_" + std::to_string(d);
        }
    }
    for (unsigned i = 0; i <= 12; ++i) {
        auto r = oracle::r_seq_exponents(i);
        // (i+2) 2^{i-1}, written to stay integral at i = 0
        std::uint64_t want = ((i + 2) << i) / 2;
        if (r.size() != want || r_length(i) != want || r_exponents(i) != r) {
            ok = false;
            why = "|R_" + std::to_string(i) + "|";
        }
        std::map<std::uint64_t, std::uint64_t> cnt;
        for (auto e : r) ++cnt[e];
        for (auto [k, c] : cnt) {
            std::uint64_t closed = k == 0 ? std::uint64_t{1} << i : std::uint64_t{1} << (i - 1 - floor_log2(k));
            if (c != closed || count_weight_in_r(k, i) != c) {
                ok = false;
                why = "count of 2^" + std::to_string(k) + " in R_" + std::to_string(i);
            }
        }
    }
    double secs = seconds_since(t0);
    if (secs >= 1.0) {
        ok = false;
        why = "took " + std::to_string(secs) + " s";
    }
    report(1, "sequence identities", ok, why + ", " + std::to_string(secs) + " s");
}

// 2 -----------------------------------------------------------------------
void worked_examples() {
    auto s = realize_s(2, 2);
    std::vector<Interval> want{{2, 3}, {3, 4}, {4, 6}, {6, 7}, {7, 8}, {8, 10}, {10, 14}};
    std::vector<std::uint64_t> r2;
    for (std::uint64_t i = 1; i <= r_length(2); ++i) r2.push_back(r_element(i));
    bool ok = s.intervals == want && r2 == std::vector<std::uint64_t>{1, 1, 2, 1, 1, 2, 4, 8};
    std::ostringstream os;
    for (const auto& iv : s.intervals) os << '[' << iv.begin << ',' << iv.end << ']';
    os << " R_2 =";
    for (auto v : r2) os << ' ' << v;
    report(2, "worked examples", ok, os.str());
}

// 3 -----------------------------------------------------------------------
struct PricingConfig {
    int m = 1;
    std::vector<std::pair<Time, int>> taken;
    Time t = 0;
    unsigned w_exp = 0;
};

bool pricing_agrees(const PricingConfig& c, Time* got = nullptr, Time* rule = nullptr) {
    SlotOccupancy occ(c.m);
    for (auto [x, q] : c.taken) occ.occupy(x, q);
    Time a = choose_weighted(occ, compute_prices(occ, c.t), big_pow2(c.w_exp)).slot;
    Time b = oracle::threshold_slot({c.taken.begin(), c.taken.end()}, c.m, c.t, c.w_exp);
    if (got) *got = a;
    if (rule) *rule = b;
    return a == b;
}

PricingConfig minimize(PricingConfig c) {
    for (bool shrunk = true; shrunk;) {
        shrunk = false;
        for (std::size_t i = 0; i < c.taken.size(); ++i) {
            PricingConfig d = c;
            d.taken.erase(d.taken.begin() + static_cast<std::ptrdiff_t>(i));
            if (!pricing_agrees(d)) {
                c = std::move(d);
                shrunk = true;
                break;
            }
        }
    }
    return c;
}

void rational_choice_oracle() {
    boost::random::mt19937_64 rng(20240601);
    const int configs = 10000;
    for (int n = 0; n < configs; ++n) {
        PricingConfig c;
        c.m = 1 + static_cast<int>(rng() % 4);
        Time horizon = Time{1} << (1 + rng() % 12);
        std::set<std::pair<Time, int>> taken;
        std::uint64_t fills = rng() % static_cast<std::uint64_t>(horizon * c.m + 1);
        for (std::uint64_t f = 0; f < fills; ++f) {
            Time x = static_cast<Time>(rng() % static_cast<std::uint64_t>(horizon));
            int q = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(c.m));
            if (taken.insert({x, q}).second) c.taken.push_back({x, q});
        }
        c.t = static_cast<Time>(rng() % static_cast<std::uint64_t>(horizon));
        c.w_exp = static_cast<unsigned>(rng() % 14);
        Time got = 0, rule = 0;
        if (!pricing_agrees(c, &got, &rule)) {
            PricingConfig small = minimize(c);
            pricing_agrees(small, &got, &rule);
            nlohmann::json repro{{"machines", small.m}, {"t", small.t}, {"w", big_to_json(big_pow2(small.w_exp))},
                                 {"occupied", small.taken}, {"argmin_slot", got}, {"threshold_rule_slot", rule}};
            report(3, "rational-choice oracle", false, "configuration " + std::to_string(n) + ", minimized reproducer " + repro.dump());
            return;
        }
    }
    report(3, "rational-choice oracle", true, std::to_string(configs) + " configurations, argmin equals threshold rule");
}

// 4 -----------------------------------------------------------------------
void dynamic_upper_bound() {
    auto t0 = Clock::now();
    boost::random::mt19937_64 rng(4444);
    bool ok = true;
    std::string why;
    Rational worst = 0;
    std::uint64_t jobs = 0;
    const int ms[3] = {1, 2, 4};
    for (int r = 0; r < 50; ++r) {
        int m = ms[r % 3];
        RandomStreamParams prm;
        prm.n = 1 + rng() % 2000;
        prm.p_exp = static_cast<unsigned>(rng() % 11);
        prm.horizon = static_cast<Time>(rng() % (4 * prm.n + 1));
        JobStream s = eliminate_gaps(random_stream(prm, rng()), m);
        auto run = run_dynamic(s, m, false);
        if (!gap_free(run.final_state) || !validate(run.schedule, s).empty()) {
            ok = false;
            why = "stream " + std::to_string(r) + " not gap-free or invalid";
            continue;
        }
        auto cb = srpt(s, m).completion;
        Time factor = 6 * floor_log2(static_cast<std::uint64_t>(s.p_max)) + 12;
        for (std::size_t i = 0; i < s.jobs.size(); ++i) {
            ++jobs;
            Time c = run.schedule.assignments[i].completion;
            worst = std::max(worst, Rational(c, factor * cb[i]));
            if (c > factor * cb[i] && ok) {
                ok = false;
                why = "stream " + std::to_string(r) + " job " + std::to_string(s.jobs[i].index) + ": c=" +
                      std::to_string(c) + " c*=" + std::to_string(cb[i]);
            }
        }
    }
    std::string detail = std::to_string(jobs) + " jobs on 50 gap-free streams, max c_j/((6 log2 P_max + 12) c*_j) = " +
                         decimal_string(worst, 4) + ", " + std::to_string(seconds_since(t0)) + " s";
    report(4, "dynamic per-job bound", ok, ok ? detail : why);
}

// 5 -----------------------------------------------------------------------
void lengths_lower_bound() {
    DynamicMenu dm(1, false);
    const Time P = Time{1} << 24;
    const unsigned c = 1;
    LengthsRun r = gen_lengths_lb(dm, c, P);
    if (!r.stop) {
        report(5, "lengths lower bound", false, "adversary never stopped");
        return;
    }
    BigInt n = r.n_stop();
    BigInt opt_oracle = oracle::smith_cost(r.stream);
    bool ok = *r.stop <= 16 && r.cost_opt == opt_oracle && r.cost_opt <= 4 * BigInt(P) * n &&
              r.cost_alg > 4 * BigInt(c) * P * n;
    std::ostringstream os;
    os << "stop j=" << *r.stop << ", n_j=" << n << ", Cost(OPT)=" << r.cost_opt << " <= 4P n_j=" << 4 * BigInt(P) * n
       << ", Cost(ALG)=" << r.cost_alg << " > 4cP n_j=" << 4 * BigInt(c) * P * n;
    report(5, "lengths lower bound", ok, os.str());
}

// 6 -----------------------------------------------------------------------
void weights_lower_bound() {
    auto t0 = Clock::now();
    bool ok = true;
    std::ostringstream os;
    std::map<unsigned, Rational> ratio;
    for (unsigned k : {4u, 8u, 16u}) {
        SlotPricing sp(1, false);
        WeightsRun r = gen_weights_lb(sp, k);
        if (!r.stop || r.cost_opt != oracle::smith_cost(r.stream)) {
            ok = false;
            os << "k=" << k << " did not stop or OPT mismatch; ";
            continue;
        }
        ratio[k] = Rational(r.cost_alg, r.cost_opt);
        if (k == 8) {
            bool k8 = *r.stop <= 64 && r.cost_opt < big_pow2(k + *r.stop + 2) && ratio[k] > 1;
            ok = ok && k8;
            os << "k=8: j*=" << *r.stop << ", Cost(OPT)=" << r.cost_opt << " < 2^" << k + *r.stop + 2 << ", ";
        }
        ok = ok && ratio[k] > k;
        os << "ratio(" << k << ")=" << decimal_string(ratio[k], 3) << "; ";
    }
    if (ratio.size() == 3) ok = ok && ratio[4] < ratio[8] && ratio[8] < ratio[16];
    double secs = seconds_since(t0);
    ok = ok && secs < 1.0;
    os << std::to_string(secs) << " s";
    report(6, "weights lower bound", ok, os.str());
}

// 7 -----------------------------------------------------------------------
void static_lower_bound() {
    const unsigned n = 16, k = 8;
    StaticLbReport r = static_lb_ratio(n, k);
    JobStream s = gen_static_lb(n, k);
    auto run = run_static(s, 1, true);
    bool valid = validate(run.schedule, s).empty();
    BigInt scale = big_pow2(2 * n);
    bool ok = valid && r.cost_opt == oracle::smith_cost(s) && r.cost_alg >= n * scale && r.cost_opt <= 8 * scale &&
              r.ratio >= Rational(n, 8);
    std::ostringstream os;
    os << r.jobs << " jobs, Cost(ALG)=" << r.cost_alg << " >= n 2^{2n}=" << n * scale << ", Cost(OPT)=" << r.cost_opt
       << " <= 8 2^{2n}=" << 8 * scale << ", ratio=" << decimal_string(r.ratio, 4);
    report(7, "static lower bound", ok, os.str());
}

// 8 -----------------------------------------------------------------------
JobStream tiny(boost::random::mt19937_64& rng, bool weighted) {
    std::size_t n = 1 + rng() % 5;
    std::vector<Time> rel(n);
    for (Time& r : rel) r = static_cast<Time>(rng() % 6);
    std::sort(rel.begin(), rel.end());
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < n; ++i)
        jobs.push_back({static_cast<std::int64_t>(i + 1), rel[i], weighted ? BigInt(1 + rng() % 10) : BigInt(1),
                        static_cast<Time>(1 + rng() % 4)});
    return JobStream::from_jobs(std::move(jobs));
}

void baseline_oracles() {
    boost::random::mt19937_64 rng(8888);
    int srpt_ok = 0, wsrpt_ok = 0, brute_ok = 0;
    for (int c = 0; c < 200; ++c) {
        JobStream s = tiny(rng, false);
        BigInt opt = preemptive_cost(brute_force_opt_preemptive(s, 1), s);
        brute_ok += opt == oracle::preemptive_opt_1m(s);
        srpt_ok += preemptive_cost(srpt(s, 1), s) == opt;
    }
    for (int c = 0; c < 200; ++c) {
        JobStream s = tiny(rng, true);
        BigInt opt = preemptive_cost(brute_force_opt_preemptive(s, 1), s);
        brute_ok += opt == oracle::preemptive_opt_1m(s);
        wsrpt_ok += preemptive_cost(wsrpt(s, 1), s) <= 2 * opt;
    }
    bool ok = srpt_ok == 200 && wsrpt_ok == 200 && brute_ok == 400;
    report(8, "baseline oracles", ok,
           "SRPT = OPT on " + std::to_string(srpt_ok) + "/200, WSRPT <= 2 OPT on " + std::to_string(wsrpt_ok) +
               "/200, brute force = exhaustive oracle on " + std::to_string(brute_ok) + "/400");
}

// 9 -----------------------------------------------------------------------
template <class Mech, class Make>
std::string check_prompt(const std::string& name, const JobStream& s, Make make) {
    Mech mech = make();
    Schedule sched;
    sched.machines = mech.machines();
    std::vector<Assignment> handed;
    for (const Job& j : s.jobs) {
        handed.push_back(mech.submit(j));
        sched.assignments.push_back(handed.back());
    }
    if constexpr (std::is_same_v<Mech, StaticMenu>) sched.whole_interval = !mech.feedback();
    auto v = validate(sched, s);
    if (!v.empty()) return name + ": " + v.front().detail;
    // the final occupancy still holds every handed-out assignment
    for (std::size_t i = 0; i < handed.size(); ++i) {
        const Assignment& a = handed[i];
        if (!mech.occupancy().is_free(a.interval.begin, a.machine)) continue;
        // a feedback job may sit in the unused tail of an earlier interval
        bool in_tail = std::any_of(handed.begin(), handed.begin() + static_cast<std::ptrdiff_t>(i), [&](const Assignment& b) {
            return b.machine == a.machine && b.completion <= a.start && a.interval.end <= b.interval.end;
        });
        if (!in_tail) return name + ": job " + std::to_string(a.job) + " no longer holds its slot";
    }
    for (std::size_t k : {s.jobs.size() / 4, s.jobs.size() / 2, s.jobs.size() - 1}) {
        Mech replay = make();
        for (std::size_t i = 0; i < k; ++i) {
            Assignment a = replay.submit(s.jobs[i]);
            const Assignment& b = handed[i];
            if (a.machine != b.machine || a.interval != b.interval || a.start != b.start || a.price != b.price)
                return name + ": prefix replay differs at job " + std::to_string(i + 1);
        }
    }
    return {};
}

void promptness_and_validity() {
    boost::random::mt19937_64 rng(9999);
    std::string err;
    int runs = 0;
    for (int r = 0; r < 10 && err.empty(); ++r) {
        int m = 1 + static_cast<int>(rng() % 4);
        RandomStreamParams prm;
        prm.n = 100 + rng() % 400;
        prm.p_exp = static_cast<unsigned>(rng() % 8);
        JobStream unit = random_stream(prm, rng());
        prm.w_exp = 5;
        JobStream weighted = random_stream(prm, rng());
        prm.p_exp = 0;
        JobStream slots = random_stream(prm, rng());
        std::vector<std::string> errs{
            check_prompt<DynamicMenu>("dynamic", unit, [&] { return DynamicMenu(m, false); }),
            check_prompt<StaticMenu>("static", unit, [&] { return StaticMenu(m, false); }),
            check_prompt<StaticMenu>("static-feedback", unit, [&] { return StaticMenu(m, true); }),
            check_prompt<SlotPricing>("pricing", slots, [&] { return SlotPricing(m, false); }),
            check_prompt<CombinedMenu>("combined", weighted, [&] { return CombinedMenu(m, 32); })};
        for (const auto& e : errs)
            if (!e.empty() && err.empty()) err = "stream " + std::to_string(r) + " " + e;
        runs += 5;
    }
    report(9, "promptness and validity", err.empty(),
           err.empty() ? std::to_string(runs) + " mechanism runs valid, prefixes replay, no assignment revised" : err);
}

// 10 ----------------------------------------------------------------------
JobStream delay_job(const JobStream& s, std::size_t idx, Time delta, bool before_equal) {
    std::vector<Job> rest;
    for (std::size_t i = 0; i < s.jobs.size(); ++i)
        if (i != idx) rest.push_back(s.jobs[i]);
    Job j = s.jobs[idx];
    j.release += delta;
    auto pos = std::find_if(rest.begin(), rest.end(), [&](const Job& o) {
        return before_equal ? o.release >= j.release : o.release > j.release;
    });
    rest.insert(pos, j);
    return JobStream::from_jobs(std::move(rest));
}

void no_delay_benefit() {
    boost::random::mt19937_64 rng(1010);
    std::vector<std::string> counter;
    int checks = 0;
    for (int inst = 0; inst < 100; ++inst) {
        int m = 1 + static_cast<int>(rng() % 3);
        RandomStreamParams prm;
        prm.n = 5 + rng() % 80;
        prm.p_exp = static_cast<unsigned>(rng() % 6);
        prm.horizon = static_cast<Time>(rng() % (2 * prm.n + 1));
        JobStream s = random_stream(prm, rng());
        std::size_t idx = rng() % s.jobs.size();
        std::int64_t id = s.jobs[idx].index;
        Time base = run_dynamic(s, m, false).schedule.of(id).completion;
        for (Time delta : {1, 2, 4})
            for (bool before : {true, false}) {
                ++checks;
                Time c = run_dynamic(delay_job(s, idx, delta, before), m, false).schedule.of(id).completion;
                if (c < base)
                    counter.push_back("instance " + std::to_string(inst) + " job " + std::to_string(id) + " delta " +
                                      std::to_string(delta) + (before ? " (first among ties)" : " (last among ties)") +
                                      ": " + std::to_string(base) + " -> " + std::to_string(c));
            }
    }
    std::string detail = std::to_string(checks) + " delayed re-runs, " + std::to_string(counter.size()) + " counterexamples";
    for (std::size_t i = 0; i < counter.size() && i < 5; ++i) detail += "; " + counter[i];
    report(10, "no delay benefit", counter.empty(), detail);
}

} // namespace

int main() {
    sequence_identities();
    worked_examples();
    rational_choice_oracle();
    dynamic_upper_bound();
    lengths_lower_bound();
    weights_lower_bound();
    static_lower_bound();
    baseline_oracles();
    promptness_and_validity();
    no_delay_benefit();
    std::cout << (failures ? "FAILED " : "ALL PASSED ") << 10 - failures << "/10" << std::endl;
    return failures ? 1 : 0;
}
