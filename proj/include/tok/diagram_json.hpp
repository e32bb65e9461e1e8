#pragma once

#include "tok/diagram.hpp"

#include <json.hpp>

#include <string>

namespace tok {

/// Reads the diagram JSON format:
///   {"crossings":[{"ends":[e,e,e,e],"over":0|1,"arrow":0|1}, ...],
///    "marks":[{"id":"x1","edge":e}, ...], "basepoint":e|null, "free_loops":k}
/// Optional "signs":[+1|-1, ...] overrides the inferred crossing signs.
inline MarkedDiagram parse_diagram(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("malformed diagram JSON: ") + e.what());
    }
    if (!j.is_object()) throw InputError("diagram JSON must be an object");

    auto need_int = [](const nlohmann::json& v, const std::string& where) {
        if (!v.is_number_integer()) throw InputError(where + ": expected an integer");
        return v.get<int>();
    };

    std::vector<Crossing> crossings;
    if (j.contains("crossings")) {
        const auto& arr = j.at("crossings");
        if (!arr.is_array()) throw InputError("crossings: expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string where = "crossings[" + std::to_string(i) + "]";
            const auto& c = arr[i];
            if (!c.is_object() || !c.contains("ends")) throw InputError(where + ": missing \"ends\"");
            const auto& ends = c.at("ends");
            if (!ends.is_array() || ends.size() != 4) throw InputError(where + ".ends: expected four edge ids");
            Crossing x;
            for (int p = 0; p < 4; ++p) x.ends[p] = need_int(ends[p], where + ".ends[" + std::to_string(p) + "]");
            if (!c.contains("over")) throw InputError(where + ": missing \"over\"");
            if (!c.contains("arrow")) throw InputError(where + ": missing \"arrow\"");
            x.over = need_int(c.at("over"), where + ".over");
            x.arrow = need_int(c.at("arrow"), where + ".arrow");
            crossings.push_back(x);
        }
    }

    std::vector<Mark> marks;
    if (j.contains("marks")) {
        const auto& arr = j.at("marks");
        if (!arr.is_array()) throw InputError("marks: expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string where = "marks[" + std::to_string(i) + "]";
            const auto& m = arr[i];
            if (!m.is_object() || !m.contains("id") || !m.at("id").is_string() || !m.contains("edge"))
                throw InputError(where + ": expected {\"id\": string, \"edge\": int}");
            marks.push_back({m.at("id").get<std::string>(), need_int(m.at("edge"), where + ".edge")});
        }
    }

    std::optional<int> basepoint;
    if (j.contains("basepoint") && !j.at("basepoint").is_null()) basepoint = need_int(j.at("basepoint"), "basepoint");

    int free_loops = 0;
    if (j.contains("free_loops")) free_loops = need_int(j.at("free_loops"), "free_loops");

    std::optional<std::vector<int>> signs;
    if (j.contains("signs")) {
        const auto& arr = j.at("signs");
        if (!arr.is_array()) throw InputError("signs: expected an array");
        signs.emplace();
        for (std::size_t i = 0; i < arr.size(); ++i) signs->push_back(need_int(arr[i], "signs[" + std::to_string(i) + "]"));
    }
    return MarkedDiagram(std::move(crossings), std::move(marks), basepoint, free_loops, signs);
}

inline nlohmann::json diagram_to_json(const MarkedDiagram& d)
{
    nlohmann::json j;
    j["crossings"] = nlohmann::json::array();
    for (const auto& c : d.crossings())
        j["crossings"].push_back({{"ends", c.ends}, {"over", c.over}, {"arrow", c.arrow}});
    j["marks"] = nlohmann::json::array();
    for (const auto& m : d.marks()) j["marks"].push_back({{"id", m.id}, {"edge", m.edge}});
    j["basepoint"] = d.basepoint() ? nlohmann::json(*d.basepoint()) : nlohmann::json(nullptr);
    j["free_loops"] = d.free_loops();
    if (auto s = d.signs_if_explicit()) j["signs"] = *s;
    return j;
}

}  // namespace tok
