#include "fracspec/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "fracspec/error.hpp"

namespace fracspec {

std::string experiment_kind_name(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::SequenceAnalysis: return "SEQUENCE_ANALYSIS";
    case ExperimentKind::Exemplar: return "EXEMPLAR";
    case ExperimentKind::IfsClassical: return "IFS_CLASSICAL";
    case ExperimentKind::GapTriple: return "GAP_TRIPLE";
    case ExperimentKind::PairTriple: return "PAIR_TRIPLE";
    case ExperimentKind::LinkCheck: return "LINK_CHECK";
    }
    return "UNKNOWN";
}

namespace {

std::string join_issues(const std::vector<ValidationIssue>& issues) {
    std::string s;
    for (const auto& i : issues) s += (s.empty() ? "" : "\n") + i.path + ": " + i.message;
    return s;
}

std::optional<ExperimentKind> kind_from(const std::string& s) {
    for (auto k : {ExperimentKind::SequenceAnalysis, ExperimentKind::Exemplar, ExperimentKind::IfsClassical,
                   ExperimentKind::GapTriple, ExperimentKind::PairTriple, ExperimentKind::LinkCheck})
        if (experiment_kind_name(k) == s) return k;
    return std::nullopt;
}

// Collects issues instead of stopping at the first one.
class Checker {
public:
    std::vector<ValidationIssue> issues;

    void add(const std::string& path, const std::string& msg) { issues.push_back({path, msg}); }

    bool object(const Json& j, const std::string& path) {
        if (j.is_object()) return true;
        add(path, "must be an object");
        return false;
    }

    void allowed(const Json& j, const std::string& path, std::initializer_list<const char*> keys) {
        std::set<std::string> ok(keys.begin(), keys.end());
        for (auto it = j.begin(); it != j.end(); ++it)
            if (!ok.count(it.key())) add(path + "." + it.key(), "unknown field");
    }

    const Json* field(const Json& j, const std::string& path, const char* key, bool required) {
        if (j.is_object() && j.contains(key)) return &j.at(key);
        if (required) add(path + "." + key, "required field missing");
        return nullptr;
    }

    std::optional<double> number(const Json& j, const std::string& path, const char* key, bool required,
                                 double lo = -kInf, double hi = kInf, bool open_lo = false, bool open_hi = false) {
        const Json* v = field(j, path, key, required);
        if (!v) return std::nullopt;
        return number_at(*v, path + "." + key, lo, hi, open_lo, open_hi);
    }

    std::optional<double> number_at(const Json& v, const std::string& path, double lo = -kInf, double hi = kInf,
                                    bool open_lo = false, bool open_hi = false) {
        if (!v.is_number()) {
            add(path, "must be a number");
            return std::nullopt;
        }
        double x = v.get<double>();
        bool bad_lo = open_lo ? !(x > lo) : !(x >= lo);
        bool bad_hi = open_hi ? !(x < hi) : !(x <= hi);
        if (!std::isfinite(x) || bad_lo || bad_hi) {
            std::ostringstream m;
            m << "must lie in " << (open_lo ? "(" : "[") << format_double(lo) << ", " << format_double(hi)
              << (open_hi ? ")" : "]");
            add(path, m.str());
            return std::nullopt;
        }
        return x;
    }

    std::optional<std::uint64_t> integer(const Json& j, const std::string& path, const char* key, bool required,
                                         std::uint64_t lo = 0, std::uint64_t hi = UINT64_MAX) {
        const Json* v = field(j, path, key, required);
        if (!v) return std::nullopt;
        return integer_at(*v, path + "." + key, lo, hi);
    }

    std::optional<std::uint64_t> integer_at(const Json& v, const std::string& path, std::uint64_t lo = 0,
                                            std::uint64_t hi = UINT64_MAX) {
        double x = v.is_number() ? v.get<double>() : NAN;
        if (!v.is_number() || !std::isfinite(x) || x != std::floor(x) || x < 0) {
            add(path, "must be a nonnegative integer");
            return std::nullopt;
        }
        auto n = static_cast<std::uint64_t>(x);
        if (n < lo || n > hi) {
            add(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
            return std::nullopt;
        }
        return n;
    }

    std::optional<bool> boolean(const Json& j, const std::string& path, const char* key) {
        const Json* v = field(j, path, key, false);
        if (!v) return std::nullopt;
        if (!v->is_boolean()) {
            add(path + "." + key, "must be a boolean");
            return std::nullopt;
        }
        return v->get<bool>();
    }

    std::optional<std::string> choice(const Json& j, const std::string& path, const char* key, bool required,
                                      std::initializer_list<const char*> options) {
        const Json* v = field(j, path, key, required);
        if (!v) return std::nullopt;
        std::string all;
        for (auto o : options) all += (all.empty() ? "" : ", ") + std::string(o);
        if (v->is_string())
            for (auto o : options)
                if (v->get<std::string>() == o) return std::string(o);
        add(path + "." + key, "must be one of " + all);
        return std::nullopt;
    }

    std::optional<std::vector<double>> numbers(const Json& j, const std::string& path, const char* key, bool required,
                                               double lo = -kInf, double hi = kInf, bool open_lo = false,
                                               std::size_t min_size = 1) {
        const Json* v = field(j, path, key, required);
        if (!v) return std::nullopt;
        return numbers_at(*v, path + "." + key, lo, hi, open_lo, min_size);
    }

    std::optional<std::vector<double>> numbers_at(const Json& v, const std::string& path, double lo = -kInf,
                                                  double hi = kInf, bool open_lo = false, std::size_t min_size = 1) {
        if (!v.is_array() || v.size() < min_size) {
            add(path, "must be an array with at least " + std::to_string(min_size) + " number(s)");
            return std::nullopt;
        }
        std::vector<double> out;
        bool ok = true;
        for (std::size_t i = 0; i < v.size(); ++i) {
            auto x = number_at(v[i], path + "[" + std::to_string(i) + "]", lo, hi, open_lo);
            if (x) out.push_back(*x);
            else ok = false;
        }
        if (!ok) return std::nullopt;
        return out;
    }
};

// Returns the ambient dimension when the IFS is well formed.
std::optional<std::size_t> check_ifs(Checker& c, const Json& j, const std::string& path, const Budget&) {
    if (!c.object(j, path)) return std::nullopt;
    c.allowed(j, path, {"generation", "levels", "maps", "interval", "osc_box"});
    auto gen = c.choice(j, path, "generation", false, {"STATIONARY", "PERIODIC", "EXPLICIT"});
    const bool has_levels = j.contains("levels"), has_maps = j.contains("maps");
    if (has_levels == has_maps) {
        c.add(path, "exactly one of 'levels' or 'maps' is required");
        return std::nullopt;
    }
    Json levels;
    std::string lpath;
    if (has_maps) {
        if (gen && *gen != "STATIONARY") c.add(path + ".maps", "'maps' describes a stationary system");
        levels = Json::array({j.at("maps")});
        lpath = path + ".maps";
    } else {
        levels = j.at("levels");
        lpath = path + ".levels";
        if (!levels.is_array() || levels.empty()) {
            c.add(lpath, "must be a nonempty array of levels");
            return std::nullopt;
        }
        if ((!gen || *gen == "STATIONARY") && levels.size() != 1)
            c.add(lpath, "a stationary system has exactly one level");
    }
    std::optional<std::size_t> dim;
    bool ok = true;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const std::string kp = has_maps ? lpath : lpath + "[" + std::to_string(k) + "]";
        const Json& level = levels[k];
        if (!level.is_array() || level.empty()) {
            c.add(kp, "must be a nonempty array of maps");
            ok = false;
            continue;
        }
        for (std::size_t m = 0; m < level.size(); ++m) {
            const std::string mp = kp + "[" + std::to_string(m) + "]";
            const Json& map = level[m];
            if (!c.object(map, mp)) {
                ok = false;
                continue;
            }
            c.allowed(map, mp, {"ratio", "translation", "matrix"});
            if (!c.number(map, mp, "ratio", true, 0.0, 1.0, true, true)) ok = false;
            auto t = c.numbers(map, mp, "translation", true);
            if (!t) {
                ok = false;
                continue;
            }
            if (!dim) dim = t->size();
            else if (*dim != t->size()) {
                c.add(mp + ".translation", "dimension differs from the first map");
                ok = false;
            }
            if (map.contains("matrix")) {
                const Json& o = map.at("matrix");
                const std::string op = mp + ".matrix";
                if (!o.is_array() || o.size() != t->size()) {
                    c.add(op, "must be an N x N array of rows");
                    ok = false;
                    continue;
                }
                std::vector<double> flat;
                for (std::size_t r = 0; r < o.size(); ++r) {
                    auto row = c.numbers_at(o[r], op + "[" + std::to_string(r) + "]", -kInf, kInf, false, t->size());
                    if (!row || row->size() != t->size()) {
                        if (row) c.add(op + "[" + std::to_string(r) + "]", "row length must equal the dimension");
                        ok = false;
                        break;
                    }
                    flat.insert(flat.end(), row->begin(), row->end());
                }
                if (flat.size() == t->size() * t->size()) {
                    const std::size_t n = t->size();
                    for (std::size_t a = 0; a < n; ++a)
                        for (std::size_t b = 0; b < n; ++b) {
                            double d = 0.0;
                            for (std::size_t r = 0; r < n; ++r) d += flat[r * n + a] * flat[r * n + b];
                            if (std::abs(d - (a == b ? 1.0 : 0.0)) > 1e-12) {
                                c.add(op, "matrix is not orthogonal");
                                a = b = n;
                                ok = false;
                            }
                        }
                }
            }
        }
    }
    if (j.contains("interval")) {
        auto iv = c.numbers(j, path, "interval", false, -kInf, kInf, false, 2);
        if (iv && (iv->size() != 2 || !((*iv)[0] < (*iv)[1]))) c.add(path + ".interval", "must be [a, b] with a < b");
        if (dim && *dim != 1) c.add(path + ".interval", "only for systems on the line");
    }
    if (j.contains("osc_box")) {
        const Json& box = j.at("osc_box");
        const std::string bp = path + ".osc_box";
        if (c.object(box, bp)) {
            c.allowed(box, bp, {"lo", "hi"});
            auto lo = c.numbers(box, bp, "lo", true);
            auto hi = c.numbers(box, bp, "hi", true);
            if (lo && hi) {
                if (lo->size() != hi->size() || (dim && lo->size() != *dim)) c.add(bp, "corners must match the dimension");
                else
                    for (std::size_t i = 0; i < lo->size(); ++i)
                        if (!((*lo)[i] < (*hi)[i])) c.add(bp, "lo must be below hi in every coordinate");
            }
        }
    }
    if (!ok) return std::nullopt;
    return dim;
}

void check_functionals(Checker& c, const Json& j, const std::string& path, std::optional<std::size_t> dim) {
    const Json* fs = c.field(j, path, "functionals", false);
    if (!fs) return;
    const std::string fp = path + ".functionals";
    if (!fs->is_array()) {
        c.add(fp, "must be an array");
        return;
    }
    for (std::size_t i = 0; i < fs->size(); ++i) {
        const std::string p = fp + "[" + std::to_string(i) + "]";
        const Json& f = (*fs)[i];
        if (!c.object(f, p)) continue;
        auto type = c.choice(f, p, "type", true, {"CONSTANT", "AFFINE", "CYLINDER", "TABULATED"});
        if (!type) continue;
        if (*type == "CONSTANT") {
            c.allowed(f, p, {"type", "label", "value"});
            c.number(f, p, "value", true);
        } else if (*type == "AFFINE") {
            c.allowed(f, p, {"type", "label", "offset", "gradient"});
            c.number(f, p, "offset", false);
            auto g = c.numbers(f, p, "gradient", true);
            if (g && dim && g->size() != *dim) c.add(p + ".gradient", "length must equal the dimension");
        } else if (*type == "CYLINDER") {
            c.allowed(f, p, {"type", "label", "word", "width"});
            const Json* w = c.field(f, p, "word", true);
            if (w) {
                if (!w->is_array() || w->empty()) c.add(p + ".word", "must be a nonempty array of 1-based digits");
                else
                    for (std::size_t k = 0; k < w->size(); ++k)
                        c.integer_at((*w)[k], p + ".word[" + std::to_string(k) + "]", 1);
            }
            c.number(f, p, "width", false, 0.0, kInf, true);
        } else {
            c.allowed(f, p, {"type", "label", "points", "values", "tolerance"});
            auto values = c.numbers(f, p, "values", true);
            c.number(f, p, "tolerance", true, 0.0, kInf, true);
            const Json* pts = c.field(f, p, "points", true);
            if (pts) {
                if (!pts->is_array() || (values && pts->size() != values->size()))
                    c.add(p + ".points", "must be an array with one point per value");
                else
                    for (std::size_t k = 0; k < pts->size(); ++k) {
                        auto pt = c.numbers_at((*pts)[k], p + ".points[" + std::to_string(k) + "]");
                        if (pt && dim && pt->size() != *dim)
                            c.add(p + ".points[" + std::to_string(k) + "]", "length must equal the dimension");
                    }
            }
        }
        if (f.contains("label") && !f.at("label").is_string()) c.add(p + ".label", "must be a string");
    }
}

void check_sequence(Checker& c, const Json& j, const std::string& path, const Budget& budget) {
    if (!c.object(j, path)) return;
    c.allowed(j, path, {"values", "exhausted", "formula", "csv"});
    int sources = j.contains("values") + j.contains("formula") + j.contains("csv");
    if (sources != 1) c.add(path, "exactly one of 'values', 'formula' or 'csv' is required");
    if (j.contains("values")) {
        auto v = c.numbers(j, path, "values", true, 0.0, kInf, true);
        if (v && v->size() > budget.entries) c.add(path + ".values", "longer than the entry budget");
    }
    c.boolean(j, path, "exhausted");
    if (j.contains("csv") && !j.at("csv").is_string()) c.add(path + ".csv", "must be a file path");
    if (j.contains("formula")) {
        const Json& f = j.at("formula");
        const std::string fp = path + ".formula";
        if (c.object(f, fp)) {
            c.allowed(f, fp, {"type", "exponent", "log_exponent", "scale", "cap"});
            c.choice(f, fp, "type", true, {"POWER", "LOG_POWER"});
            c.number(f, fp, "exponent", true, 0.0, kInf, true);
            c.number(f, fp, "log_exponent", false);
            c.number(f, fp, "scale", false, 0.0, kInf, true);
            c.integer(f, fp, "cap", true, 64, budget.entries);
        }
    }
}

void check_params(Checker& c, ExperimentKind kind, const Json& p, const Budget& budget) {
    const std::string path = "$.params";
    auto check_ifs_field = [&](bool required) -> std::optional<std::size_t> {
        const Json* ifs = c.field(p, path, "ifs", required);
        return ifs ? check_ifs(c, *ifs, path + ".ifs", budget) : std::nullopt;
    };
    auto line_only = [&](std::optional<std::size_t> dim) {
        if (dim && *dim != 1) c.add(path + ".ifs", "this experiment needs a system on the line");
    };
    switch (kind) {
    case ExperimentKind::SequenceAnalysis: {
        c.allowed(p, path, {"sequence", "tolerance", "alphas", "dt"});
        if (const Json* s = c.field(p, path, "sequence", true)) check_sequence(c, *s, path + ".sequence", budget);
        c.number(p, path, "tolerance", false, 0.0, kInf, true);
        c.numbers(p, path, "alphas", false, 0.0, kInf, true);
        c.number(p, path, "dt", false, 0.0, 1.0, true);
        break;
    }
    case ExperimentKind::Exemplar: {
        c.allowed(p, path, {"exemplar", "alpha", "beta", "gaps", "q", "custom_x", "cap", "gammas", "tolerance", "dt"});
        auto ex = c.choice(p, path, "exemplar", true, {"TWO_SLOPE", "STEP"});
        c.integer(p, path, "cap", true, 64, budget.entries);
        c.numbers(p, path, "gammas", false, 0.0, kInf, true);
        c.number(p, path, "tolerance", false, 0.0, kInf, true);
        c.number(p, path, "dt", false, 0.0, 1.0, true);
        if (ex && *ex == "TWO_SLOPE") {
            c.number(p, path, "alpha", false, 0.0, kInf, true);
            c.number(p, path, "beta", false, 0.0, kInf, true);
            if (const Json* g = c.field(p, path, "gaps", false)) {
                const std::string gp = path + ".gaps";
                if (c.object(*g, gp)) {
                    c.allowed(*g, gp, {"rule", "value", "values"});
                    auto rule = c.choice(*g, gp, "rule", true, {"CONSTANT", "LINEAR", "CUSTOM"});
                    if (rule && *rule == "CONSTANT") c.number(*g, gp, "value", true, 0.0, kInf, true);
                    if (rule && *rule == "CUSTOM") c.numbers(*g, gp, "values", true, 0.0, kInf, true);
                }
            }
            for (const char* k : {"q", "custom_x"})
                if (p.contains(k)) c.add(path + "." + k, "only for STEP exemplars");
        } else if (ex) {
            c.number(p, path, "q", false, 0.0, kInf, true);
            if (auto xs = c.numbers(p, path, "custom_x", false, 1.0, kInf, true)) {
                for (std::size_t i = 1; i < xs->size(); ++i)
                    if (!((*xs)[i] > (*xs)[i - 1])) {
                        c.add(path + ".custom_x[" + std::to_string(i) + "]", "must increase strictly");
                        break;
                    }
            }
            for (const char* k : {"alpha", "beta", "gaps"})
                if (p.contains(k)) c.add(path + "." + k, "only for TWO_SLOPE exemplars");
        }
        break;
    }
    case ExperimentKind::IfsClassical: {
        c.allowed(p, path, {"ifs", "depth", "seed_point", "box_resolution", "cylinder_s", "cylinder_depth",
                            "translation_depth", "contraction_depth", "osc_depth", "minkowski"});
        auto dim = check_ifs_field(true);
        c.integer(p, path, "depth", false, 0, 64);
        if (auto sp = c.numbers(p, path, "seed_point", false); sp && dim && sp->size() != *dim)
            c.add(path + ".seed_point", "length must equal the dimension");
        c.number(p, path, "box_resolution", false, 0.0, kInf, true);
        c.number(p, path, "cylinder_s", false, 0.0, kInf, true);
        c.integer(p, path, "cylinder_depth", false, 0, 64);
        c.integer(p, path, "translation_depth", false, 1, 100000);
        c.integer(p, path, "contraction_depth", false, 0, 64);
        c.integer(p, path, "osc_depth", false, 0, 16);
        if (const Json* m = c.field(p, path, "minkowski", false)) {
            const std::string mp = path + ".minkowski";
            line_only(dim);
            if (c.object(*m, mp)) {
                c.allowed(*m, mp, {"gap_target", "d"});
                c.integer(*m, mp, "gap_target", false, 1, budget.entries / 2);
                c.number(*m, mp, "d", false, 0.0, 1.0, true);
            }
        }
        break;
    }
    case ExperimentKind::GapTriple: {
        c.allowed(p, path, {"ifs", "gap_target", "depth", "entry_cap", "zeta_s", "exponent", "functionals"});
        auto dim = check_ifs_field(true);
        line_only(dim);
        if (p.contains("gap_target") && p.contains("depth")) c.add(path, "give either 'gap_target' or 'depth'");
        c.integer(p, path, "gap_target", false, 1, budget.entries / 2);
        c.integer(p, path, "depth", false, 0, 64);
        c.integer(p, path, "entry_cap", false, 2, budget.entries);
        c.numbers(p, path, "zeta_s", false, 0.0, kInf, true);
        c.number(p, path, "exponent", false, 0.0, kInf, true);
        check_functionals(c, p, path, 1);
        break;
    }
    case ExperimentKind::PairTriple: {
        c.allowed(p, path, {"ifs", "seeds", "depth_cap", "entry_cap", "zeta_s", "exponent", "functionals",
                            "exponent_offsets"});
        auto dim = check_ifs_field(true);
        if (const Json* s = c.field(p, path, "seeds", false)) {
            const std::string sp = path + ".seeds";
            if (!s->is_array() || s->size() != 2) c.add(sp, "must be [x, y]");
            else
                for (std::size_t i = 0; i < 2; ++i) {
                    auto pt = c.numbers_at((*s)[i], sp + "[" + std::to_string(i) + "]");
                    if (pt && dim && pt->size() != *dim)
                        c.add(sp + "[" + std::to_string(i) + "]", "length must equal the dimension");
                }
        }
        c.integer(p, path, "depth_cap", false, 0, 10000);
        c.integer(p, path, "entry_cap", false, 2, budget.entries);
        c.numbers(p, path, "zeta_s", false, 0.0, kInf, true);
        c.number(p, path, "exponent", false, 0.0, kInf, true);
        c.numbers(p, path, "exponent_offsets", false, -kInf, kInf, false, 0);
        check_functionals(c, p, path, dim);
        break;
    }
    case ExperimentKind::LinkCheck: {
        c.allowed(p, path, {"ifs", "gap_target", "entry_cap", "d"});
        auto dim = check_ifs_field(true);
        line_only(dim);
        c.integer(p, path, "gap_target", false, 1, budget.entries / 2);
        c.integer(p, path, "entry_cap", false, 2, budget.entries);
        c.number(p, path, "d", false, 0.0, 1.0, true);
        break;
    }
    }
}

}  // namespace

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

ExperimentConfig parse_config(const Json& j, const Budget& budget) {
    Checker c;
    ExperimentConfig cfg;
    cfg.raw = j;
    if (!c.object(j, "$")) throw ValidationError(c.issues);
    c.allowed(j, "$", {"kind", "name", "seed", "output", "params"});
    auto kind = c.choice(j, "$", "kind", true,
                         {"SEQUENCE_ANALYSIS", "EXEMPLAR", "IFS_CLASSICAL", "GAP_TRIPLE", "PAIR_TRIPLE", "LINK_CHECK"});
    if (j.contains("name")) {
        if (j.at("name").is_string()) cfg.name = j.at("name").get<std::string>();
        else c.add("$.name", "must be a string");
    }
    if (auto s = c.integer(j, "$", "seed", false)) cfg.seed = *s;
    if (const Json* o = c.field(j, "$", "output", false)) {
        if (c.object(*o, "$.output")) {
            c.allowed(*o, "$.output", {"csv", "max_rows"});
            if (auto b = c.boolean(*o, "$.output", "csv")) cfg.output.csv = *b;
            if (auto r = c.integer(*o, "$.output", "max_rows", false, 1)) cfg.output.max_rows = *r;
        }
    }
    const Json* params = c.field(j, "$", "params", true);
    if (params && c.object(*params, "$.params") && kind) {
        cfg.kind = *kind_from(*kind);
        check_params(c, cfg.kind, *params, budget);
        cfg.params = *params;
        if (c.issues.empty() && cfg.kind == ExperimentKind::IfsClassical) {
            const auto depth = params->value("depth", std::uint64_t{10});
            if (!word_count(build_ifs(params->at("ifs")), depth, budget.words))
                c.add("$.params.depth", "number of words exceeds the word budget of " + std::to_string(budget.words));
        }
    }
    if (!c.issues.empty()) throw ValidationError(c.issues);
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, const Budget& budget) {
    std::ifstream in(path);
    if (!in) throw ValidationError({{"$", "cannot read " + path.string()}});
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ValidationError({{"$", std::string("malformed JSON: ") + e.what()}});
    }
    return parse_config(j, budget);
}

// ---------------------------------------------------------------- builders

LimitIfs build_ifs(const Json& j) {
    auto map_of = [](const Json& m) {
        Similarity s;
        s.ratio = m.at("ratio").get<double>();
        s.translation = m.at("translation").get<std::vector<double>>();
        if (m.contains("matrix"))
            for (const auto& row : m.at("matrix"))
                for (const auto& x : row) s.orthogonal.push_back(x.get<double>());
        return s;
    };
    std::vector<std::vector<Similarity>> levels;
    const Json& src = j.contains("maps") ? Json::array({j.at("maps")}) : j.at("levels");
    for (const auto& level : src) {
        std::vector<Similarity> maps;
        for (const auto& m : level) maps.push_back(map_of(m));
        levels.push_back(std::move(maps));
    }
    std::string gen = j.value("generation", std::string("STATIONARY"));
    LimitIfs ifs = gen == "PERIODIC" ? LimitIfs::periodic(std::move(levels))
                   : gen == "EXPLICIT" ? LimitIfs::explicit_levels(std::move(levels))
                                       : LimitIfs::stationary(std::move(levels.front()));
    if (j.contains("interval")) {
        auto iv = j.at("interval").get<std::vector<double>>();
        ifs.interval = std::make_pair(iv[0], iv[1]);
    }
    if (j.contains("osc_box"))
        ifs.osc_box = Box{j.at("osc_box").at("lo").get<std::vector<double>>(), j.at("osc_box").at("hi").get<std::vector<double>>()};
    return ifs;
}

namespace {

EigenvalueSequence read_sequence_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError({{"$.params.sequence.csv", "cannot read " + path}});
    std::string line;
    std::vector<double> values;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (row == 1 && line.find_first_not_of("0123456789.-+eE, \t\r") != std::string::npos) continue;  // header
        if (line.empty()) continue;
        auto comma = line.find(',');
        try {
            values.push_back(std::stod(comma == std::string::npos ? line : line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw ValidationError({{"$.params.sequence.csv", "row " + std::to_string(row) + " is not numeric"}});
        }
    }
    return EigenvalueSequence::from_values(std::move(values), false);
}

}  // namespace

EigenvalueSequence build_sequence(const Json& j) {
    if (j.contains("values"))
        return EigenvalueSequence::from_values(j.at("values").get<std::vector<double>>(), j.value("exhausted", false));
    if (j.contains("csv")) return read_sequence_csv(j.at("csv").get<std::string>());
    const Json& f = j.at("formula");
    const double p = f.at("exponent").get<double>();
    const double q = f.value("log_exponent", 0.0);
    const double scale = f.value("scale", 1.0);
    const auto cap = f.at("cap").get<std::uint64_t>();
    if (f.at("type").get<std::string>() == "POWER")
        return EigenvalueSequence::from_generator([p, scale](std::uint64_t n) { return scale * std::pow(double(n), -p); }, cap);
    // n^-p (log(n + 2))^-q keeps the sequence positive and nonincreasing for q >= 0
    return EigenvalueSequence::from_generator(
        [p, q, scale](std::uint64_t n) { return scale * std::pow(double(n), -p) * std::pow(std::log(double(n) + 2.0), -q); },
        cap);
}

TwoSlopeSpec build_two_slope(const Json& j) {
    TwoSlopeSpec s;
    s.alpha = j.value("alpha", 2.0);
    s.beta = j.value("beta", 1.0);
    if (j.contains("gaps")) {
        const Json& g = j.at("gaps");
        std::string rule = g.at("rule").get<std::string>();
        if (rule == "CONSTANT") {
            s.gaps.kind = GapRule::Kind::Constant;
            s.gaps.constant = g.at("value").get<double>();
        } else if (rule == "LINEAR") {
            s.gaps.kind = GapRule::Kind::Linear;
        } else {
            s.gaps.kind = GapRule::Kind::Custom;
            s.gaps.custom = g.at("values").get<std::vector<double>>();
        }
    }
    return s;
}

StepSpec build_step(const Json& j) {
    StepSpec s;
    s.q = j.value("q", 2.0);
    if (j.contains("custom_x")) s.custom_x = j.at("custom_x").get<std::vector<double>>();
    return s;
}

Functional build_functional(const Json& j, const LimitIfs* ifs) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "CONSTANT") return Functional::constant(j.at("value").get<double>());
    if (type == "AFFINE") return Functional::affine(j.value("offset", 0.0), j.at("gradient").get<std::vector<double>>());
    if (type == "CYLINDER") {
        require(ifs != nullptr, ErrorCode::InvalidArgument, "cylinder functionals need a system");
        Word w;
        for (const auto& d : j.at("word")) w.digits.push_back(static_cast<std::uint32_t>(d.get<std::uint64_t>() - 1));
        return Functional::smoothed_cylinder(*ifs, w, j.value("width", 0.0));
    }
    std::vector<double> points;
    std::size_t dim = 1;
    for (const auto& pt : j.at("points")) {
        dim = pt.size();
        for (const auto& x : pt) points.push_back(x.get<double>());
    }
    return Functional::tabulated(dim, std::move(points), j.at("values").get<std::vector<double>>(),
                                 j.at("tolerance").get<double>());
}

// ---------------------------------------------------------------- schema

Json config_schema() {
    Json number = {{"type", "number"}};
    Json positive = {{"type", "number"}, {"exclusiveMinimum", 0}};
    Json integer = {{"type", "integer"}, {"minimum", 0}};
    Json numbers = {{"type", "array"}, {"items", number}, {"minItems", 1}};
    Json positives = {{"type", "array"}, {"items", positive}, {"minItems", 1}};
    Json map = {{"type", "object"},
                {"required", {"ratio", "translation"}},
                {"additionalProperties", false},
                {"properties",
                 {{"ratio", {{"type", "number"}, {"exclusiveMinimum", 0}, {"exclusiveMaximum", 1}}},
                  {"translation", numbers},
                  {"matrix", {{"type", "array"}, {"items", numbers}, {"description", "N x N orthogonal matrix, row by row"}}}}}};
    Json level = {{"type", "array"}, {"items", map}, {"minItems", 1}};
    Json ifs = {{"type", "object"},
                {"additionalProperties", false},
                {"description", "exactly one of 'levels' or 'maps'"},
                {"properties",
                 {{"generation", {{"enum", {"STATIONARY", "PERIODIC", "EXPLICIT"}}}},
                  {"levels", {{"type", "array"}, {"items", level}, {"minItems", 1}}},
                  {"maps", level},
                  {"interval", {{"type", "array"}, {"items", number}, {"minItems", 2}, {"maxItems", 2}}},
                  {"osc_box", {{"type", "object"}, {"properties", {{"lo", numbers}, {"hi", numbers}}}}}}}};
    Json functional = {
        {"type", "object"},
        {"required", {"type"}},
        {"properties",
         {{"type", {{"enum", {"CONSTANT", "AFFINE", "CYLINDER", "TABULATED"}}}},
          {"label", {{"type", "string"}}},
          {"value", number},
          {"offset", number},
          {"gradient", numbers},
          {"word", {{"type", "array"}, {"items", {{"type", "integer"}, {"minimum", 1}}}, {"minItems", 1}}},
          {"width", positive},
          {"points", {{"type", "array"}, {"items", numbers}}},
          {"values", numbers},
          {"tolerance", positive}}}};
    Json functionals = {{"type", "array"}, {"items", functional}};
    Json sequence = {{"type", "object"},
                     {"description", "exactly one of 'values', 'formula', 'csv'"},
                     {"properties",
                      {{"values", positives},
                       {"exhausted", {{"type", "boolean"}}},
                       {"csv", {{"type", "string"}}},
                       {"formula",
                        {{"type", "object"},
                         {"required", {"type", "exponent", "cap"}},
                         {"properties",
                          {{"type", {{"enum", {"POWER", "LOG_POWER"}}}},
                           {"exponent", positive},
                           {"log_exponent", number},
                           {"scale", positive},
                           {"cap", {{"type", "integer"}, {"minimum", 64}}}}}}}}}};
    Json params = {
        {"SEQUENCE_ANALYSIS",
         {{"type", "object"},
          {"required", {"sequence"}},
          {"properties", {{"sequence", sequence}, {"tolerance", positive}, {"alphas", positives}, {"dt", positive}}}}},
        {"EXEMPLAR",
         {{"type", "object"},
          {"required", {"exemplar", "cap"}},
          {"properties",
           {{"exemplar", {{"enum", {"TWO_SLOPE", "STEP"}}}},
            {"alpha", positive},
            {"beta", positive},
            {"gaps",
             {{"type", "object"},
              {"properties",
               {{"rule", {{"enum", {"CONSTANT", "LINEAR", "CUSTOM"}}}}, {"value", positive}, {"values", positives}}}}},
            {"q", positive},
            {"custom_x", positives},
            {"cap", {{"type", "integer"}, {"minimum", 64}}},
            {"gammas", positives},
            {"tolerance", positive},
            {"dt", positive}}}}},
        {"IFS_CLASSICAL",
         {{"type", "object"},
          {"required", {"ifs"}},
          {"properties",
           {{"ifs", ifs},
            {"depth", integer},
            {"seed_point", numbers},
            {"box_resolution", positive},
            {"cylinder_s", positive},
            {"cylinder_depth", integer},
            {"translation_depth", integer},
            {"contraction_depth", integer},
            {"osc_depth", integer},
            {"minkowski", {{"type", "object"}, {"properties", {{"gap_target", integer}, {"d", positive}}}}}}}}},
        {"GAP_TRIPLE",
         {{"type", "object"},
          {"required", {"ifs"}},
          {"properties",
           {{"ifs", ifs},
            {"gap_target", integer},
            {"depth", integer},
            {"entry_cap", integer},
            {"zeta_s", positives},
            {"exponent", positive},
            {"functionals", functionals}}}}},
        {"PAIR_TRIPLE",
         {{"type", "object"},
          {"required", {"ifs"}},
          {"properties",
           {{"ifs", ifs},
            {"seeds", {{"type", "array"}, {"items", numbers}, {"minItems", 2}, {"maxItems", 2}}},
            {"depth_cap", integer},
            {"entry_cap", integer},
            {"zeta_s", positives},
            {"exponent", positive},
            {"exponent_offsets", {{"type", "array"}, {"items", number}}},
            {"functionals", functionals}}}}},
        {"LINK_CHECK",
         {{"type", "object"},
          {"required", {"ifs"}},
          {"properties", {{"ifs", ifs}, {"gap_target", integer}, {"entry_cap", integer}, {"d", positive}}}}}};
    return {{"$schema", "https://json-schema.org/draft/2020-12/schema"},
            {"title", "fracspec experiment"},
            {"type", "object"},
            {"required", {"kind", "params"}},
            {"additionalProperties", false},
            {"properties",
             {{"kind", {{"enum", {"SEQUENCE_ANALYSIS", "EXEMPLAR", "IFS_CLASSICAL", "GAP_TRIPLE", "PAIR_TRIPLE", "LINK_CHECK"}}}},
              {"name", {{"type", "string"}}},
              {"seed", integer},
              {"output",
               {{"type", "object"},
                {"properties", {{"csv", {{"type", "boolean"}}}, {"max_rows", {{"type", "integer"}, {"minimum", 1}}}}}}},
              {"params", {{"type", "object"}, {"description", "shape depends on kind, see params_by_kind"}}}}},
            {"params_by_kind", params},
            {"budget_defaults", {{"entries", 2000000}, {"words", 10000000}}}};
}

}  // namespace fracspec
