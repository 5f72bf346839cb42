#pragma once

// Job streams as JSON Lines: {"index":1,"release":0,"weight":1,"processing":4}
// Weights beyond 64 bits are written as decimal strings.

#include "promptsched/core_model.hpp"

#include <json.hpp>

#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace promptsched {

inline nlohmann::json big_to_json(const BigInt& v) {
    if (v >= 0 && v <= std::numeric_limits<std::uint64_t>::max()) return static_cast<std::uint64_t>(v);
    return v.str();
}

inline BigInt big_from_json(const nlohmann::json& j) {
    if (j.is_number_unsigned()) return BigInt(j.get<std::uint64_t>());
    if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("not a decimal integer: " + s);
        return BigInt(s);
    }
    throw std::invalid_argument("expected an integer field");
}

inline nlohmann::json job_to_json(const Job& j) {
    return {{"index", j.index}, {"release", j.release}, {"weight", big_to_json(j.weight)}, {"processing", j.processing}};
}

inline Job job_from_json(const nlohmann::json& o) {
    Job j;
    j.index = o.at("index").get<std::int64_t>();
    j.release = o.at("release").get<Time>();
    j.weight = big_from_json(o.at("weight"));
    j.processing = o.at("processing").get<Time>();
    return j;
}

inline void write_stream(std::ostream& os, const JobStream& s) {
    for (const Job& j : s.jobs) os << job_to_json(j).dump() << '\n';
}

inline JobStream read_stream(std::istream& is) {
    std::vector<Job> jobs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            jobs.push_back(job_from_json(nlohmann::json::parse(line)));
        } catch (const std::exception& e) {
            throw std::invalid_argument("stream line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return JobStream::from_jobs(std::move(jobs));
}

inline JobStream read_stream_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open stream file " + path);
    return read_stream(in);
}

inline void write_stream_file(const std::string& path, const JobStream& s) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write stream file " + path);
    write_stream(out, s);
}

} // namespace promptsched
