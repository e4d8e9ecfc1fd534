#include <cmath>
#include <cstdlib>
#include <map>

#include "fracspec/error.hpp"
#include "fracspec/report.hpp"

namespace fracspec {

namespace {

std::string family(const std::string& kind) {
    return kind == "GAP_TRIPLE" || kind == "PAIR_TRIPLE" ? "TRIPLE" : kind;
}

// Reports write non-finite numbers as strings.
std::optional<double> as_number(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
        if (s == "nan") return std::nan("");
    }
    return std::nullopt;
}

bool is_estimate(const Json& j) {
    return j.is_object() && j.size() == 3 && j.contains("value") && j.contains("lo") && j.contains("hi");
}

std::string result_key(const Json& r, std::map<std::string, int>& seen) {
    std::string key = r.value("op", std::string());
    const Json& p = r.value("params", Json::object());
    if (p.contains("label") && p.at("label").is_string()) return key + "[" + p.at("label").get<std::string>() + "]";
    return key + "#" + std::to_string(seen[key]++);
}

void diff_values(const std::string& path, const Json& a, const Json& b, Json& out) {
    auto record = [&](Json d, bool significant) {
        d["path"] = path;
        d["significant"] = significant;
        out.push_back(std::move(d));
    };
    if (is_estimate(a) && is_estimate(b)) {
        Estimate ea{*as_number(a.at("value")), *as_number(a.at("lo")), *as_number(a.at("hi"))};
        Estimate eb{*as_number(b.at("value")), *as_number(b.at("lo")), *as_number(b.at("hi"))};
        if (ea.value == eb.value && ea.lo == eb.lo && ea.hi == eb.hi) return;
        Json d;
        d["a"] = a;
        d["b"] = b;
        d["difference"] = eb.value - ea.value;
        // zero-width intervals would otherwise flag last-bit rounding
        const double scale = std::max(std::abs(ea.value), std::abs(eb.value));
        const double slack = std::isfinite(scale) ? 1e-12 * scale : 0.0;
        const bool apart = ea.lo > eb.hi + slack || eb.lo > ea.hi + slack;
        record(std::move(d), !overlaps(ea, eb) && apart);
        return;
    }
    if (a.is_object() && b.is_object()) {
        for (auto it = a.begin(); it != a.end(); ++it) {
            if (b.contains(it.key())) {
                diff_values(path + "." + it.key(), it.value(), b.at(it.key()), out);
            } else {
                Json d;
                d["a"] = it.value();
                d["b"] = nullptr;
                d["path"] = path + "." + it.key();
                d["significant"] = true;
                out.push_back(std::move(d));
            }
        }
        for (auto it = b.begin(); it != b.end(); ++it)
            if (!a.contains(it.key())) {
                Json d;
                d["a"] = nullptr;
                d["b"] = it.value();
                d["path"] = path + "." + it.key();
                d["significant"] = true;
                out.push_back(std::move(d));
            }
        return;
    }
    if (a == b) return;
    const auto na = as_number(a);
    const auto nb = as_number(b);
    if (na && nb) {
        // Plain numbers (counts, exact values) differ significantly only beyond rounding.
        const double scale = std::max({std::abs(*na), std::abs(*nb), 1e-300});
        const bool sig = !(std::abs(*na - *nb) <= 1e-12 * scale);
        record({{"a", a}, {"b", b}, {"difference", *nb - *na}}, sig);
        return;
    }
    record({{"a", a}, {"b", b}}, true);
}

}  // namespace

Json compare_reports(const Json& a, const Json& b) {
    const std::string ka = a.value("kind", std::string());
    const std::string kb = b.value("kind", std::string());
    require(!ka.empty() && family(ka) == family(kb), ErrorCode::KindMismatch,
            "cannot compare a " + ka + " report with a " + kb + " report");

    const Json empty = Json::array();
    const Json& results_a = a.contains("results") ? a.at("results") : empty;
    const Json& results_b = b.contains("results") ? b.at("results") : empty;
    std::map<std::string, const Json*> index_a, index_b;
    std::vector<std::string> order;
    std::map<std::string, int> seen;
    for (const auto& r : results_a) {
        auto key = result_key(r, seen);
        index_a[key] = &r;
        order.push_back(key);
    }
    seen.clear();
    for (const auto& r : results_b) {
        auto key = result_key(r, seen);
        if (!index_a.count(key)) order.push_back(key);
        index_b[key] = &r;
    }

    Json diffs = Json::array();
    for (const auto& key : order) {
        auto ia = index_a.find(key);
        auto ib = index_b.find(key);
        if (ia == index_a.end() || ib == index_b.end()) {
            Json d;
            d["path"] = key;
            d["a"] = ia == index_a.end() ? Json(nullptr) : Json("present");
            d["b"] = ib == index_b.end() ? Json(nullptr) : Json("present");
            d["significant"] = true;
            diffs.push_back(std::move(d));
            continue;
        }
        diff_values(key, ia->second->value("values", Json::object()), ib->second->value("values", Json::object()),
                    diffs);
    }
    std::size_t significant = 0;
    for (const auto& d : diffs) significant += d.at("significant").get<bool>() ? 1 : 0;

    Json out = Json::object();
    out["kind_a"] = ka;
    out["kind_b"] = kb;
    out["name_a"] = a.value("name", std::string());
    out["name_b"] = b.value("name", std::string());
    out["config_identical"] = a.value("config", Json()) == b.value("config", Json());
    out["differences"] = std::move(diffs);
    out["significant"] = significant;
    return out;
}

}  // namespace fracspec
