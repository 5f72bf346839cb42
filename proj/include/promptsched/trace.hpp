#pragma once

#include "promptsched/core_model.hpp"
#include "promptsched/stream_io.hpp"

#include <json.hpp>

#include <cstdint>
#include <vector>

namespace promptsched {

struct FrontierEntry {
    Interval interval;
    std::vector<int> machines;
};

/// Per-job record shared by the interval mechanisms (dynamic, static, combined).
struct IntervalTraceRecord {
    std::int64_t job = 0;
    Time release = 0;
    Time processing = 0;
    BigInt weight = 1;
    std::vector<FrontierEntry> frontier;
    Interval chosen;
    int machine = 1;
    int row = 0;             // state-update case of the dynamic mechanism, 0 elsewhere
    std::size_t state_length = 0;
    int copy_class = -1;     // combined mechanism only
    BigInt price = 0;
};

inline nlohmann::json interval_json(const Interval& iv) { return nlohmann::json::array({iv.begin, iv.end}); }

inline nlohmann::json to_json(const IntervalTraceRecord& r) {
    nlohmann::json f = nlohmann::json::array();
    for (const auto& e : r.frontier) f.push_back({{"interval", interval_json(e.interval)}, {"machines", e.machines}});
    nlohmann::json o{{"job", r.job},           {"release", r.release},
                     {"p", r.processing},      {"frontier", f},
                     {"chosen", interval_json(r.chosen)}, {"machine", r.machine}};
    if (r.row) {
        o["row"] = r.row;
        o["state_length"] = r.state_length;
    }
    if (r.copy_class >= 0) {
        o["w"] = big_to_json(r.weight);
        o["copy_class"] = r.copy_class;
        o["price"] = big_to_json(r.price);
    }
    return o;
}

} // namespace promptsched
