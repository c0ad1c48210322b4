#pragma once

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "core_model.hpp"

namespace selfenc {

inline constexpr int trace_schema_version = 1;

enum class EventKind {
    requires_attention,
    acts,
    injured,
    witness_assigned,
    enumerated,
    removed,
    restrained,
    released,
    finalize,
};

inline const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::requires_attention: return "requires-attention";
        case EventKind::acts: return "acts";
        case EventKind::injured: return "injured";
        case EventKind::witness_assigned: return "witness-assigned";
        case EventKind::enumerated: return "enumerated";
        case EventKind::removed: return "removed";
        case EventKind::restrained: return "restrained";
        case EventKind::released: return "released";
        case EventKind::finalize: return "finalize";
    }
    return "?";
}

inline EventKind event_kind_from(const std::string& s) {
    for (int k = 0; k <= static_cast<int>(EventKind::finalize); ++k)
        if (s == to_string(static_cast<EventKind>(k))) return static_cast<EventKind>(k);
    throw std::runtime_error("unknown trace event kind: " + s);
}

// `req` names a requirement ("P3", "Nhat1") or "stage" for bookkeeping. `detail` carries the
// acted case, the injuring requirement, or the restraint type, depending on kind.
struct TraceEvent {
    nat stage = 0;
    std::string req;
    EventKind kind = EventKind::finalize;
    std::optional<nat> value;
    std::string detail;
    bool operator==(const TraceEvent&) const = default;
};

inline nlohmann::json to_json(const TraceEvent& e) {
    nlohmann::json j{{"stage", e.stage}, {"req", e.req}, {"event", to_string(e.kind)}};
    if (e.value) j["value"] = *e.value;
    if (!e.detail.empty()) j["detail"] = e.detail;
    return j;
}

inline TraceEvent event_from_json(const nlohmann::json& j) {
    TraceEvent e;
    e.stage = j.at("stage").get<nat>();
    e.req = j.at("req").get<std::string>();
    e.kind = event_kind_from(j.at("event").get<std::string>());
    if (j.contains("value")) e.value = j["value"].get<nat>();
    if (j.contains("detail")) e.detail = j["detail"].get<std::string>();
    return e;
}

// 64-bit FNV-1a; stable across platforms, which std::hash is not.
struct Fnv1a {
    nat h = 1469598103934665603ull;
    void add(std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    }
    void add(nat x) {
        for (int i = 0; i < 8; ++i) {
            h ^= (x >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    }
};

struct Trace {
    std::string construction;
    std::vector<TraceEvent> events;

    void emit(nat stage, std::string req, EventKind kind, std::optional<nat> value = {}, std::string detail = {}) {
        events.push_back({stage, std::move(req), kind, value, std::move(detail)});
    }

    std::vector<std::string> canonical_lines() const {
        std::vector<std::string> out;
        out.push_back(nlohmann::json{{"schema", "selfenc-trace"}, {"version", trace_schema_version},
                                     {"construction", construction}}
                          .dump());
        for (auto& e : events) out.push_back(to_json(e).dump());
        return out;
    }

    std::string jsonl() const {
        std::string s;
        for (auto& l : canonical_lines()) s += l + "\n";
        return s;
    }

    nat hash() const {
        Fnv1a f;
        for (auto& l : canonical_lines()) {
            f.add(l);
            f.add("\n");
        }
        return f.h;
    }

    void write(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write trace to " + path);
        out << jsonl();
    }

    static Trace parse(std::istream& in) {
        Trace t;
        std::string line;
        nat lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& ex) {
                throw std::runtime_error("trace line " + std::to_string(lineno) + ": " + ex.what());
            }
            if (lineno == 1) {
                if (j.value("schema", "") != "selfenc-trace" || j.value("version", 0) != trace_schema_version)
                    throw std::runtime_error("trace line 1: missing or unsupported schema record");
                t.construction = j.value("construction", "");
                continue;
            }
            try {
                t.events.push_back(event_from_json(j));
            } catch (const std::exception& ex) {
                throw std::runtime_error("trace line " + std::to_string(lineno) + ": " + ex.what());
            }
        }
        return t;
    }

    static Trace read(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot read trace " + path);
        return parse(in);
    }
};

}  // namespace selfenc
