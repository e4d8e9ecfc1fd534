#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>

#include "fracspec/asymptotics.hpp"
#include "fracspec/error.hpp"
#include "fracspec/exemplars.hpp"
#include "fracspec/fractal_geometry.hpp"
#include "fracspec/report.hpp"
#include "fracspec/spectral_triples.hpp"

namespace fracspec {

namespace fs = std::filesystem;

Json estimate_json(const Estimate& e) {
    Json j = Json::object();
    j["value"] = e.value;
    j["lo"] = e.lo;
    j["hi"] = e.hi;
    return j;
}

namespace {

Json exact(double v) { return estimate_json(Estimate::exact(v)); }

void dump_rec(const Json& j, int indent, int level, std::string& out) {
    auto pad = [&](int l) {
        if (indent >= 0) out += '\n' + std::string(static_cast<std::size_t>(indent * l), ' ');
    };
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ',';
            first = false;
            pad(level + 1);
            out += Json(it.key()).dump();
            out += indent >= 0 ? ": " : ":";
            dump_rec(it.value(), indent, level + 1, out);
        }
        pad(level);
        out += '}';
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += '[';
        bool first = true;
        for (const auto& v : j) {
            if (!first) out += ',';
            first = false;
            pad(level + 1);
            dump_rec(v, indent, level + 1, out);
        }
        pad(level);
        out += ']';
        return;
    }
    case Json::value_t::number_float: {
        const double x = j.get<double>();
        if (std::isfinite(x)) out += format_double(x);
        else out += '"' + format_double(x) + '"';
        return;
    }
    default: out += j.dump();
    }
}

struct Context {
    const ExperimentConfig& config;
    const Budget& budget;
    fs::path out_dir;
    Json results = Json::array();
    Json series = Json::array();
    std::vector<fs::path> files;
    std::uint64_t entries_used = 0;
    std::uint64_t words_used = 0;

    void op(const std::string& name, Json params, Json values) {
        Json r = Json::object();
        r["op"] = name;
        r["params"] = std::move(params);
        r["values"] = std::move(values);
        results.push_back(std::move(r));
    }

    // Writes rows through `row(i, out)` for i in [0, total), truncated to max_rows.
    void csv(const std::string& file, const std::string& op_name, const std::string& header, std::uint64_t total,
             const std::function<void(std::uint64_t, std::ostream&)>& row) {
        if (!config.output.csv) return;
        const std::uint64_t written = std::min(total, config.output.max_rows);
        const fs::path path = out_dir / file;
        std::ofstream out(path);
        if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + path.string());
        out << header << '\n';
        for (std::uint64_t i = 0; i < written; ++i) {
            row(i, out);
            out << '\n';
        }
        files.push_back(path);
        Json s = Json::object();
        s["file"] = file;
        s["op"] = op_name;
        s["columns"] = header;
        s["rows"] = written;
        s["rows_total"] = total;
        series.push_back(std::move(s));
    }
};

std::string f17(double x) { return format_double(x); }

// Indices thinned to roughly `count` points on a geometric grid over [1, n].
std::vector<std::uint64_t> thin(std::uint64_t n, std::uint64_t count) {
    std::vector<std::uint64_t> out;
    if (n <= count) {
        for (std::uint64_t i = 1; i <= n; ++i) out.push_back(i);
        return out;
    }
    const double ratio = std::pow(static_cast<double>(n), 1.0 / static_cast<double>(count - 1));
    double g = 1.0;
    for (std::uint64_t i = 0; i < count; ++i, g *= ratio) {
        auto idx = std::min<std::uint64_t>(n, static_cast<std::uint64_t>(std::llround(g)));
        if (out.empty() || idx > out.back()) out.push_back(idx);
    }
    if (out.back() != n) out.push_back(n);
    return out;
}

void analyze_sequence(Context& ctx, const EigenvalueSequence& seq, const std::vector<double>& alphas, double tol,
                      double dt) {
    seq.validate();
    ctx.entries_used = std::max(ctx.entries_used, seq.size());

    auto order = order_of_infinitesimal(seq);
    const Estimate dim = reciprocal(order.ord);
    {
        Json v;
        v["ord"] = estimate_json(order.ord);
        v["inverse_ord"] = estimate_json(dim);
        v["corners"] = exact(static_cast<double>(order.corners));
        ctx.op("asymptotics.order_of_infinitesimal", {{"cap", seq.size()}}, std::move(v));
    }
    auto profile = log_profile(seq, dt);
    auto cb = c_bounds(profile);
    {
        Json v;
        v["c_lower"] = estimate_json(cb.lower);
        v["c_upper"] = estimate_json(cb.upper);
        v["lower_unresolved"] = cb.lower_unresolved;
        v["upper_unresolved"] = cb.upper_unresolved;
        v["h_sup"] = exact(cb.h_sup);
        v["h_inf"] = exact(cb.h_inf);
        v["h_grid_max"] = exact(cb.h_grid_max);
        v["sandwich_holds"] = cb.lower.lo <= dim.hi && dim.lo <= cb.upper.hi;
        ctx.op("asymptotics.c_bounds", {{"dt", dt}}, std::move(v));
    }
    ctx.csv("c_bounds.csv", "asymptotics.c_bounds", "h,sup_quotient,inf_quotient", cb.h_grid.size(),
            [&](std::uint64_t i, std::ostream& o) {
                o << f17(cb.h_grid[i]) << ',' << f17(cb.sup_quotient[i]) << ',' << f17(cb.inf_quotient[i]);
            });
    {
        auto idx = thin(seq.size(), ctx.config.output.max_rows);
        ctx.csv("sequence.csv", "asymptotics.order_of_infinitesimal", "n,mu_n", idx.size(),
                [&](std::uint64_t i, std::ostream& o) { o << idx[i] << ',' << f17(seq(idx[i])); });
    }

    bool first = true;
    for (double alpha : alphas) {
        auto cls = classify_ideal(seq, alpha);
        Json v;
        v["classification"] = std::string(ideal_class_name(cls.classification));
        v["exponent"] = estimate_json(cls.exponent);
        v["log_decay"] = estimate_json(cls.log_decay);
        if (cls.convergent) v["analytically_convergent"] = *cls.convergent;
        ctx.op("asymptotics.classify_ideal", {{"alpha", alpha}}, std::move(v));

        const auto powered = seq.power(alpha);
        const SumKind kind = cls.classification == IdealClass::L1 ? SumKind::TraceClass : SumKind::NonTraceClass;
        auto scan = eccentricity_scan(powered, kind, tol);
        Json s;
        s["sum_kind"] = std::string(sum_kind_name(kind));
        s["accepted"] = exact(static_cast<double>(scan.accepted.size()));
        s["grid_points"] = exact(static_cast<double>(scan.grid.size()));
        s["min_gap"] = exact(scan.min_gap);
        s["argmin"] = exact(static_cast<double>(scan.argmin));
        s["eccentric"] = !scan.accepted.empty();
        ctx.op("asymptotics.eccentricity_scan", {{"alpha", alpha}, {"tolerance", tol}}, std::move(s));
        if (first) {
            auto sums = partial_sums(powered, kind, scan.grid);
            ctx.csv("partial_sums.csv", "asymptotics.partial_sums", "n,S_n", scan.grid.size(),
                    [&](std::uint64_t i, std::ostream& o) { o << scan.grid[i] << ',' << f17(sums.values[i]); });
            ctx.csv("ratios.csv", "asymptotics.eccentricity_scan", "n,ratio_gap", scan.grid.size(),
                    [&](std::uint64_t i, std::ostream& o) { o << scan.grid[i] << ',' << f17(scan.gaps[i]); });
            first = false;
        }
        if (cls.classification == IdealClass::L1Weak) {
            auto dx = dixmier_trace_estimate(powered);
            Json d;
            d["dixmier"] = estimate_json(dx.value);
            d["measurable"] = dx.measurable;
            ctx.op("asymptotics.dixmier_trace_estimate", {{"alpha", alpha}}, std::move(d));
        }
    }
}

void run_sequence(Context& ctx) {
    const Json& p = ctx.config.params;
    auto seq = build_sequence(p.at("sequence"));
    analyze_sequence(ctx, seq, p.value("alphas", std::vector<double>{1.0}), p.value("tolerance", 0.02),
                     p.value("dt", 0.01));
}

void run_exemplar(Context& ctx) {
    const Json& p = ctx.config.params;
    const auto cap = p.at("cap").get<std::uint64_t>();
    EigenvalueSequence seq;
    if (p.at("exemplar") == "TWO_SLOPE") {
        auto spec = build_two_slope(p);
        seq = two_slope_sequence(spec, cap);
        ctx.op("exemplars.two_slope_sequence", {{"alpha", spec.alpha}, {"beta", spec.beta}, {"cap", cap}},
               {{"analytic_tail", seq.has_analytic_tail()}});
    } else {
        auto spec = build_step(p);
        seq = step_sequence(spec, cap);
        StepProfile profile(spec);
        auto ratios = step_jump_ratios(profile, cap);
        Json v;
        v["analytic_tail"] = seq.has_analytic_tail();
        if (!ratios.empty()) {
            auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
            v["jump_ratio"] = estimate_json({ratios.back(), *lo, *hi});
        }
        ctx.op("exemplars.step_sequence", {{"q", spec.q}, {"cap", cap}}, std::move(v));
    }
    analyze_sequence(ctx, seq, p.value("gammas", std::vector<double>{1.0}), p.value("tolerance", 0.02),
                     p.value("dt", 0.01));
}

std::optional<double> natural_exponent(const LimitIfs& ifs) {
    if (ifs.generation() == Generation::Stationary) {
        auto d = similarity_dimension(ifs);
        if (!d.degenerate) return d.value;
    }
    if (ifs.translation_flag() && ifs.generation() == Generation::Periodic)
        return translation_dimension_formula(ifs, ifs.block().size()).closed_form;
    return std::nullopt;
}

double resolution_of(const LimitIfs& ifs, std::size_t depth) {
    double r = 1.0;
    for (std::size_t k = 1; k <= depth; ++k) r *= ifs.max_ratio(k);
    Box b = attractor_box(ifs);
    double diag = 0.0;
    for (std::size_t i = 0; i < b.lo.size(); ++i) diag += (b.hi[i] - b.lo[i]) * (b.hi[i] - b.lo[i]);
    return r * std::sqrt(diag);
}

void run_ifs(Context& ctx) {
    const Json& p = ctx.config.params;
    LimitIfs ifs = build_ifs(p.at("ifs"));
    const std::size_t depth = p.value("depth", std::size_t{10});

    if (ifs.generation() == Generation::Stationary) {
        auto sd = similarity_dimension(ifs);
        ctx.op("fractal_geometry.similarity_dimension", Json::object(),
               {{"dimension", exact(sd.value)}, {"degenerate", sd.degenerate}, {"lattice", is_lattice(
                   [&] { std::vector<double> r; for (auto& w : ifs.level(1)) r.push_back(w.ratio); return r; }())}});
    }
    {
        auto ev = osc_evidence(ifs, p.value("osc_depth", std::size_t{3}));
        ctx.op("fractal_geometry.osc_evidence", {{"depth", ev.levels_checked}},
               {{"asserted", ev.asserted}, {"images_inside", ev.images_inside}, {"images_disjoint", ev.images_disjoint}});
    }
    std::vector<double> seed = p.contains("seed_point") ? p.at("seed_point").get<std::vector<double>>()
                                                         : std::vector<double>(ifs.dim(), 0.0);
    auto cloud = attractor_cloud(ifs, depth, seed, ctx.budget.words);
    ctx.words_used = std::max<std::uint64_t>(ctx.words_used, cloud.points.size());
    ctx.csv("cloud.csv", "fractal_geometry.attractor_cloud", [&] {
        std::string h = "word";
        for (std::size_t i = 1; i <= ifs.dim(); ++i) h += ",x" + std::to_string(i);
        return h;
    }(), cloud.points.size(), [&](std::uint64_t i, std::ostream& o) {
        o << word_at(ifs, depth, i).to_string();
        for (std::size_t k = 0; k < ifs.dim(); ++k) o << ',' << f17(cloud.points.point(i)[k]);
    });
    ctx.op("fractal_geometry.attractor_cloud", {{"depth", depth}},
           {{"points", exact(static_cast<double>(cloud.points.size()))}, {"diameter", exact(cloud.points.diameter())}});

    const double resolution = p.contains("box_resolution") ? p.at("box_resolution").get<double>() : resolution_of(ifs, depth);
    auto box = box_dimension_estimate(cloud.points, resolution);
    ctx.op("fractal_geometry.box_dimension_estimate", {{"resolution", resolution}},
           {{"dimension", estimate_json(box.dimension)}, {"window_lower", exact(box.lower)}, {"window_upper", exact(box.upper)}});
    ctx.csv("box_counts.csv", "fractal_geometry.box_dimension_estimate", "eps,count", box.eps.size(),
            [&](std::uint64_t i, std::ostream& o) { o << f17(box.eps[i]) << ',' << f17(box.counts[i]); });

    std::optional<double> s = p.contains("cylinder_s") ? std::optional<double>(p.at("cylinder_s").get<double>())
                                                        : natural_exponent(ifs);
    if (s) {
        const std::size_t cdepth = p.value("cylinder_depth", std::min<std::size_t>(depth, 8));
        auto cm = cylinder_measure(ifs, *s, cdepth, ctx.budget.words);
        double total = 0.0;
        for (double w : cm.weights) total += w;
        auto [lo, hi] = std::minmax_element(cm.weights.begin(), cm.weights.end());
        ctx.op("fractal_geometry.cylinder_measure", {{"s", *s}, {"depth", cdepth}},
               {{"total_weight", exact(total)}, {"min_weight", exact(*lo)}, {"max_weight", exact(*hi)},
                {"cylinders", exact(static_cast<double>(cm.weights.size()))}});
    }
    if (ifs.translation_flag()) {
        const std::size_t tdepth = p.value("translation_depth", std::size_t{40});
        auto tf = translation_dimension_formula(ifs, tdepth);
        Json v;
        v["limsup"] = estimate_json(tf.limsup);
        v["liminf"] = estimate_json(tf.liminf);
        if (tf.closed_form) v["closed_form"] = exact(*tf.closed_form);
        ctx.op("fractal_geometry.translation_dimension_formula", {{"depth", tdepth}}, std::move(v));
        ctx.csv("partial_ratios.csv", "fractal_geometry.translation_dimension_formula", "n,R_n", tf.partial_ratios.size(),
                [&](std::uint64_t i, std::ostream& o) { o << (i + 1) << ',' << f17(tf.partial_ratios[i]); });
    }
    if (const auto cdepth = p.value("contraction_depth", std::size_t{0}); cdepth > 0) {
        PointCloud k;
        k.dim = ifs.dim();
        k.push(seed);
        auto cr = contraction_limit(ifs, k, cdepth);
        ctx.op("fractal_geometry.contraction_limit", {{"depth", cdepth}},
               {{"m_constant", exact(cr.m_constant)}, {"dominated", cr.dominated}});
        ctx.csv("contraction.csv", "fractal_geometry.contraction_limit", "n,step,bound", cr.steps.size(),
                [&](std::uint64_t i, std::ostream& o) { o << i << ',' << f17(cr.steps[i]) << ',' << f17(cr.bounds[i]); });
    }
    if (p.contains("minkowski")) {
        const Json& m = p.at("minkowski");
        auto gaps = gaps_by_count(ifs, m.value("gap_target", std::size_t{100000}));
        std::optional<double> d = m.contains("d") ? std::optional<double>(m.at("d").get<double>()) : natural_exponent(ifs);
        require(d.has_value(), ErrorCode::InvalidArgument, "no exponent for the Minkowski content; set minkowski.d");
        auto me = minkowski_content_estimate(gaps, *d);
        ctx.op("fractal_geometry.minkowski_content_estimate", {{"d", *d}, {"gaps", gaps.gaps.size()}},
               {{"content", estimate_json(me.content)}, {"measurable", me.measurable}});
        ctx.csv("minkowski.csv", "fractal_geometry.minkowski_content_estimate", "eps,normalized_volume", me.eps.size(),
                [&](std::uint64_t i, std::ostream& o) { o << f17(me.eps[i]) << ',' << f17(me.normalized[i]); });
    }
}

void report_gaps(Context& ctx, const GapList& gaps) {
    Json v;
    v["gaps"] = exact(static_cast<double>(gaps.gaps.size()));
    v["complete_above"] = exact(gaps.complete_above);
    v["residual_total"] = exact(gaps.residual_total);
    v["exact_arithmetic"] = gaps.exact;
    if (gaps.exact) v["exact_conserved"] = gaps.exact_conserved;
    ctx.op("fractal_geometry.gaps", {{"a", gaps.a}, {"b", gaps.b}}, std::move(v));
}

void report_model(Context& ctx, const TripleModel& model, const std::string& op, Json params) {
    ctx.entries_used = std::max(ctx.entries_used, model.eigen.size());
    Json v;
    v["entries"] = exact(static_cast<double>(model.eigen.size()));
    v["exhausted"] = model.eigen.exhausted();
    v["closed_form_zeta"] = model.zeta.has_value();
    ctx.op(op, std::move(params), std::move(v));
    const std::uint64_t rows = model.eigen.size();
    std::string header = "k,mu_k";
    for (std::size_t i = 1; i <= model.dim; ++i) header += ",tag_x" + std::to_string(i);
    for (std::size_t i = 1; i <= model.dim; ++i) header += ",tag_y" + std::to_string(i);
    ctx.csv("model.csv", op, header, rows, [&](std::uint64_t i, std::ostream& o) {
        const std::uint64_t k = i + 1;
        o << k << ',' << f17(model.eigen(k));
        for (std::size_t c = 0; c < model.dim; ++c) o << ',' << f17(model.x_of_entry(k)[c]);
        for (std::size_t c = 0; c < model.dim; ++c) o << ',' << f17(model.y_of_entry(k)[c]);
    });
}

template <class Model>
double analyze_model(Context& ctx, const Model& model, const LimitIfs& ifs) {
    const Json& p = ctx.config.params;
    auto sd = spectral_dimension(model);
    Json v;
    v["dimension"] = estimate_json(sd.dimension);
    v["ord"] = estimate_json(sd.order.ord);
    if (sd.linear) v["linear_estimate"] = estimate_json(*sd.linear);
    if (model.exact_dimension) v["closed_form_dimension"] = exact(*model.exact_dimension);
    ctx.op("spectral_triples.spectral_dimension", Json::object(), std::move(v));

    for (double s : p.value("zeta_s", std::vector<double>{})) {
        auto z = zeta_partial(model, s);
        Json zv;
        zv["zeta"] = estimate_json(z.value);
        zv["partial"] = exact(z.partial);
        zv["tail_kind"] = z.tail_kind;
        if (z.closed_form) zv["closed_form"] = exact(*z.closed_form);
        ctx.op("spectral_triples.zeta_partial", {{"s", s}}, std::move(zv));
    }
    if (model.zeta) {
        auto r = zeta_residue(model);
        ctx.op("spectral_triples.zeta_residue", {{"d", r.d}},
               {{"analytic", exact(r.analytic)}, {"numeric", estimate_json(r.numeric)},
                {"log_normalized", exact(r.log_normalized)}});
        ctx.csv("zeta_residue.csv", "spectral_triples.zeta_residue", "s,scaled_zeta", r.s_grid.size(),
                [&](std::uint64_t i, std::ostream& o) { o << f17(r.s_grid[i]) << ',' << f17(r.scaled[i]); });
    }
    const double exponent = p.contains("exponent") ? p.at("exponent").get<double>()
                            : model.exact_dimension ? *model.exact_dimension
                                                    : sd.dimension.value;
    if (p.contains("functionals")) {
        for (std::size_t i = 0; i < p.at("functionals").size(); ++i) {
            const Json& fj = p.at("functionals")[i];
            Functional f = build_functional(fj, &ifs);
            auto hv = hausdorff_functional(model, f, exponent);
            Json fv;
            fv["value"] = estimate_json(hv.trace.value);
            fv["measurable"] = hv.trace.measurable;
            fv["subsequence"] = hv.subsequence_source;
            fv["lipschitz"] = exact(f.lipschitz());
            if (fj.value("type", std::string()) == "CYLINDER") {
                Word w;
                for (const auto& d : fj.at("word")) w.digits.push_back(static_cast<std::uint32_t>(d.get<std::uint64_t>() - 1));
                fv["cylinder_weight"] = exact(cylinder_weight(ifs, exponent, w));
            }
            ctx.op("spectral_triples.hausdorff_functional",
                   {{"label", fj.value("label", f.describe())}, {"exponent", exponent}}, std::move(fv));
        }
    }
    return exponent;
}

EigenvalueSequence capped(const EigenvalueSequence& s, std::uint64_t cap) {
    return s.size() > cap ? s.truncated(cap) : s;
}

void run_gap_triple(Context& ctx) {
    const Json& p = ctx.config.params;
    LimitIfs ifs = build_ifs(p.at("ifs"));
    const std::uint64_t entry_cap = p.value("entry_cap", ctx.budget.entries);
    GapList gaps = p.contains("depth") ? gaps_from_interval_ifs(ifs, p.at("depth").get<std::size_t>())
                                       : gaps_by_count(ifs, p.value("gap_target", std::min<std::uint64_t>(1'000'000, entry_cap / 2)));
    report_gaps(ctx, gaps);
    GapTripleModel model = gap_triple(gaps, &ifs);
    model.eigen = capped(model.eigen, entry_cap);
    report_model(ctx, model, "spectral_triples.gap_triple", {{"entry_cap", entry_cap}});
    analyze_model(ctx, model, ifs);
}

void run_pair_triple(Context& ctx) {
    const Json& p = ctx.config.params;
    LimitIfs ifs = build_ifs(p.at("ifs"));
    const std::uint64_t entry_cap = p.value("entry_cap", ctx.budget.entries);
    const std::size_t depth_cap = p.value("depth_cap", std::size_t{1000});
    std::optional<std::pair<std::vector<double>, std::vector<double>>> seeds;
    if (p.contains("seeds"))
        seeds = std::make_pair(p.at("seeds")[0].get<std::vector<double>>(), p.at("seeds")[1].get<std::vector<double>>());
    PairTripleModel model = pair_triple(ifs, seeds, depth_cap, entry_cap);
    ctx.words_used = std::max<std::uint64_t>(ctx.words_used, model.blocks());
    Json params = {{"depth_cap", depth_cap}, {"entry_cap", entry_cap}};
    params["seed_x"] = model.seed_x;
    params["seed_y"] = model.seed_y;
    report_model(ctx, model, "spectral_triples.pair_triple", std::move(params));
    const double exponent = analyze_model(ctx, model, ifs);
    for (double off : p.value("exponent_offsets", std::vector<double>{})) {
        const double a = exponent + off;
        if (!(a > 0.0)) continue;
        auto cls = classify_ideal(model.eigen, a);
        const SumKind kind = cls.classification == IdealClass::L1 ? SumKind::TraceClass : SumKind::NonTraceClass;
        auto scan = eccentricity_scan(model.eigen.power(a), kind);
        ctx.op("asymptotics.eccentricity_scan", {{"alpha", a}, {"offset", off}, {"tolerance", scan.tolerance}},
               {{"classification", std::string(ideal_class_name(cls.classification))},
                {"accepted", exact(static_cast<double>(scan.accepted.size()))},
                {"min_gap", exact(scan.min_gap)}});
    }
}

void run_link_check(Context& ctx) {
    const Json& p = ctx.config.params;
    LimitIfs ifs = build_ifs(p.at("ifs"));
    const std::uint64_t entry_cap = p.value("entry_cap", ctx.budget.entries);
    GapList gaps = gaps_by_count(ifs, p.value("gap_target", std::min<std::uint64_t>(1'000'000, entry_cap / 2)));
    report_gaps(ctx, gaps);
    GapTripleModel model = gap_triple(gaps, &ifs);
    model.eigen = capped(model.eigen, entry_cap);
    report_model(ctx, model, "spectral_triples.gap_triple", {{"entry_cap", entry_cap}});
    double d = p.contains("d") ? p.at("d").get<double>()
               : model.exact_dimension ? *model.exact_dimension
                                       : spectral_dimension(model).dimension.value;
    auto link = minkowski_link_check(model, d);
    ctx.op("spectral_triples.minkowski_link_check", {{"d", d}},
           {{"dixmier", estimate_json(link.dixmier.value)},
            {"scaled_content", estimate_json(link.scaled_content)},
            {"minkowski_content", estimate_json(link.minkowski.content)},
            {"lattice", link.lattice},
            {"equality_asserted", link.equality_asserted},
            {"overlap", link.overlap}});
    ctx.csv("minkowski.csv", "fractal_geometry.minkowski_content_estimate", "eps,normalized_volume",
            link.minkowski.eps.size(), [&](std::uint64_t i, std::ostream& o) {
                o << f17(link.minkowski.eps[i]) << ',' << f17(link.minkowski.normalized[i]);
            });
    ctx.csv("dixmier_windows.csv", "asymptotics.dixmier_trace_estimate", "n,slope", link.dixmier.ratios.size(),
            [&](std::uint64_t i, std::ostream& o) { o << link.dixmier.indices[i] << ',' << f17(link.dixmier.ratios[i]); });
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
    std::string out;
    dump_rec(j, indent, 0, out);
    out += '\n';
    return out;
}

RunResult run_experiment(const ExperimentConfig& config, const Budget& budget, const fs::path& out_dir) {
    const auto start = std::chrono::steady_clock::now();
    fs::create_directories(out_dir);
    Context ctx{config, budget, out_dir, Json::array(), Json::array(), {}, 0, 0};
    switch (config.kind) {
    case ExperimentKind::SequenceAnalysis: run_sequence(ctx); break;
    case ExperimentKind::Exemplar: run_exemplar(ctx); break;
    case ExperimentKind::IfsClassical: run_ifs(ctx); break;
    case ExperimentKind::GapTriple: run_gap_triple(ctx); break;
    case ExperimentKind::PairTriple: run_pair_triple(ctx); break;
    case ExperimentKind::LinkCheck: run_link_check(ctx); break;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    Json report = Json::object();
    report["format"] = "fracspec-report/1";
    report["kind"] = experiment_kind_name(config.kind);
    report["name"] = config.name;
    report["config"] = config.raw;
    report["budget"] = {{"entries", budget.entries}, {"words", budget.words}};
    report["cap_usage"] = {{"entries", ctx.entries_used}, {"words", ctx.words_used}};
    report["results"] = std::move(ctx.results);
    report["series"] = std::move(ctx.series);
    report["metadata"] = {{"wall_time_seconds", seconds}};

    const fs::path path = out_dir / "report.json";
    std::ofstream out(path);
    if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + path.string());
    out << dump_json(report);
    RunResult r;
    r.report = std::move(report);
    r.files.push_back(path);
    r.files.insert(r.files.end(), ctx.files.begin(), ctx.files.end());
    return r;
}

}  // namespace fracspec
