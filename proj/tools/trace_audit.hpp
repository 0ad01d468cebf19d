#pragma once

// Offline checker for solver traces. Deliberately self-contained: it parses
// the TSV text and re-implements the size-tuple comparison on its own, so it
// shares no code with the solver's progress bookkeeping.

#include <algorithm>
#include <cstddef>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace trace_audit {

struct Result {
    bool ok = false;
    std::size_t steps = 0;
    std::string message;
};

namespace detail {

// Size entries keyed by level; -1 stands for the infinity level, which is
// the most significant, followed by priorities in descending order.
using Tuple = std::map<long, long>;

inline bool lex_greater(const Tuple& next, const Tuple& prev) {
    auto count = [](const Tuple& t, long level) {
        auto it = t.find(level);
        return it == t.end() ? 0L : it->second;
    };
    std::vector<long> levels;
    for (auto& [lvl, _] : next) levels.push_back(lvl);
    for (auto& [lvl, _] : prev) levels.push_back(lvl);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    // -1 (infinity) first, then high priorities down to low.
    if (count(next, -1) != count(prev, -1)) return count(next, -1) > count(prev, -1);
    for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
        if (*it == -1) continue;
        if (count(next, *it) != count(prev, *it)) return count(next, *it) > count(prev, *it);
    }
    return false;  // equal
}

inline bool parse_tuple(const std::string& field, Tuple& out, std::string& error) {
    out.clear();
    std::stringstream ss(field);
    std::string part;
    while (std::getline(ss, part, ';')) {
        auto eq = part.find('=');
        if (eq == std::string::npos) {
            error = "malformed size entry '" + part + "'";
            return false;
        }
        std::string key = part.substr(0, eq);
        long level, count;
        try {
            level = key == "inf" ? -1 : std::stol(key);
            count = std::stol(part.substr(eq + 1));
        } catch (...) {
            error = "malformed size entry '" + part + "'";
            return false;
        }
        if (count < 0 || (level < 0 && key != "inf")) {
            error = "negative value in size entry '" + part + "'";
            return false;
        }
        out[level] = count;
    }
    return !out.empty() || (error = "empty size tuple", false);
}

inline std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == '\t') {
            fields.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(current);
    return fields;
}

}  // namespace detail

inline Result audit(std::istream& in) {
    Result r;
    long nodes = -1;
    detail::Tuple previous;  // the empty justification: all levels zero
    std::string line;
    std::size_t line_no = 0;
    long expected_step = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto pos = line.find("nodes=");
            if (pos != std::string::npos) nodes = std::stol(line.substr(pos + 6));
            continue;
        }
        std::vector<std::string> fields = detail::split_tabs(line);
        if (fields.size() != 6) {
            r.message = "line " + std::to_string(line_no) + ": expected 6 tab-separated fields";
            return r;
        }
        long step;
        try {
            step = std::stol(fields[0]);
        } catch (...) {
            r.message = "line " + std::to_string(line_no) + ": bad step number";
            return r;
        }
        if (step != expected_step++) {
            r.message = "line " + std::to_string(line_no) + ": steps are not consecutive";
            return r;
        }
        if (fields[3] != "0" && fields[3] != "1") {
            r.message = "line " + std::to_string(line_no) + ": winner must be 0 or 1";
            return r;
        }
        detail::Tuple tuple;
        std::string error;
        if (!detail::parse_tuple(fields[5], tuple, error)) {
            r.message = "line " + std::to_string(line_no) + ": " + error;
            return r;
        }
        long total = 0;
        for (auto& [_, count] : tuple) total += count;
        if (nodes >= 0 && total > nodes) {
            r.message = "line " + std::to_string(line_no) + ": size tuple exceeds the node count";
            return r;
        }
        if (!detail::lex_greater(tuple, previous)) {
            r.message = "line " + std::to_string(line_no) + ": size did not strictly increase";
            return r;
        }
        previous = std::move(tuple);
        ++r.steps;
    }
    r.ok = true;
    return r;
}

}  // namespace trace_audit
