// Schedules a small stream with the dynamic menu and compares against SRPT.

#include "promptsched/baselines.hpp"
#include "promptsched/dynamic_menu.hpp"

#include <iostream>

using namespace promptsched;

int main() {
    JobStream s = JobStream::from_jobs({{1, 0, 1, 4}, {2, 0, 1, 1}, {3, 1, 1, 1}, {4, 2, 1, 2}, {5, 3, 1, 1}});
    DynamicRun run = run_dynamic(s, 1);
    for (const Assignment& a : run.schedule.assignments)
        std::cout << "job " << a.job << " -> [" << a.interval.begin << ", " << a.interval.end << ") on machine "
                  << a.machine << ", done at " << a.completion << '\n';
    BigInt alg = weighted_completion_sum(run.schedule, s);
    BigInt opt = preemptive_cost(srpt(s, 1), s);
    std::cout << "cost " << alg << ", SRPT " << opt << ", ratio " << decimal_string(Rational(alg, opt), 3) << '\n';
}
