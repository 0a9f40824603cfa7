#pragma once

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace tmon {

enum class Verdict { pass, fail, skipped };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "PASS";
        case Verdict::fail: return "FAIL";
        case Verdict::skipped: return "SKIP";
    }
    return "?";
}

/// One verified statement. A failing check carries a witness naming the
/// object, element and violated equation.
struct Check {
    std::string name;
    Verdict verdict = Verdict::pass;
    std::string witness;
    std::string detail;
};

struct Report {
    std::string title;
    std::vector<Check> checks;
    nlohmann::json data = nlohmann::json::object();
    std::vector<std::string> notes;

    Check& add(std::string name, bool ok, std::string witness = {}, std::string detail = {}) {
        checks.push_back({std::move(name), ok ? Verdict::pass : Verdict::fail, ok ? std::string{} : std::move(witness),
                          std::move(detail)});
        return checks.back();
    }
    Check& skip(std::string name, std::string reason) {
        checks.push_back({std::move(name), Verdict::skipped, {}, std::move(reason)});
        return checks.back();
    }
    void note(std::string n) { notes.push_back(std::move(n)); }

    void merge(const Report& other, const std::string& prefix = {}) {
        for (auto c : other.checks) {
            if (!prefix.empty()) c.name = prefix + ": " + c.name;
            checks.push_back(std::move(c));
        }
        notes.insert(notes.end(), other.notes.begin(), other.notes.end());
    }

    bool ok() const {
        return std::none_of(checks.begin(), checks.end(), [](const Check& c) { return c.verdict == Verdict::fail; });
    }
    std::size_t count(Verdict v) const {
        return static_cast<std::size_t>(
            std::count_if(checks.begin(), checks.end(), [v](const Check& c) { return c.verdict == v; }));
    }
    const Check* find(const std::string& name) const {
        auto it = std::find_if(checks.begin(), checks.end(), [&](const Check& c) { return c.name == name; });
        return it == checks.end() ? nullptr : &*it;
    }
};

inline void to_json(nlohmann::json& j, const Check& c) {
    j = {{"name", c.name}, {"verdict", to_string(c.verdict)}};
    if (!c.witness.empty()) j["witness"] = c.witness;
    if (!c.detail.empty()) j["detail"] = c.detail;
}

inline void from_json(const nlohmann::json& j, Check& c) {
    c.name = j.at("name").get<std::string>();
    const auto v = j.at("verdict").get<std::string>();
    c.verdict = v == "PASS" ? Verdict::pass : v == "FAIL" ? Verdict::fail : Verdict::skipped;
    c.witness = j.value("witness", "");
    c.detail = j.value("detail", "");
}

inline void to_json(nlohmann::json& j, const Report& r) {
    j = {{"title", r.title}, {"ok", r.ok()}, {"checks", r.checks}, {"data", r.data}};
    if (!r.notes.empty()) j["notes"] = r.notes;
}

inline void from_json(const nlohmann::json& j, Report& r) {
    r.title = j.at("title").get<std::string>();
    r.checks = j.at("checks").get<std::vector<Check>>();
    r.data = j.value("data", nlohmann::json::object());
    r.notes = j.value("notes", std::vector<std::string>{});
}

inline void print_text(std::ostream& os, const Report& r) {
    os << "== " << r.title << " ==\n";
    for (const auto& c : r.checks) {
        os << "  [" << to_string(c.verdict) << "] " << c.name;
        if (!c.detail.empty()) os << " (" << c.detail << ")";
        os << '\n';
        if (!c.witness.empty()) os << "         witness: " << c.witness << '\n';
    }
    for (const auto& n : r.notes) os << "  note: " << n << '\n';
    os << "  => " << (r.ok() ? "PASS" : "FAIL") << " (" << r.count(Verdict::pass) << " passed, "
       << r.count(Verdict::fail) << " failed, " << r.count(Verdict::skipped) << " skipped)\n";
}

}  // namespace tmon
