#include "cli.hpp"

#include "rse/cayley.hpp"
#include "rse/energy.hpp"
#include "rse/expectation.hpp"
#include "rse/experiments.hpp"
#include "rse/group.hpp"
#include "rse/invariants.hpp"
#include "rse/parallel.hpp"
#include "rse/sampler.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace rse::cli {

using Json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Opts {
    std::string group, subset, model, a_set, delta_set, phi_set, chain;
    std::string variant = "AA", method = "BINOMIAL_Q", statistic = "ENERGY_AA", pairing = "AA";
    std::string h_fn, epsilon = "1/10", c = "9/10", format, out;
    std::vector<std::string> deltas;
    std::uint64_t k = 2, h = 0, trials = 1000, seed = 0, radius = 0, radius_max = 5, budget = 10000, m = 6, n = 0;
    std::uint64_t pair_samples = 1'000'000;
    unsigned threads = default_threads();
    bool histogram = false, no_prefilter = false;
    Caps caps;
};

Json rat(const Rational& q) {
    return to_string(q);
}

Json estimate_json(const McEstimate& e, bool with_histogram) {
    Json j;
    j["mean"] = e.mean;
    j["stderr"] = e.stderr_;
    j["trials"] = e.trials;
    j["min"] = e.min;
    j["max"] = e.max;
    j["raw_moments"] = Json::array({e.raw_moments[0], e.raw_moments[1], e.raw_moments[2], e.raw_moments[3]});
    if (with_histogram) {
        Json h = Json::array();
        for (auto& [v, c] : e.histogram) h.push_back(Json::array({v, c}));
        j["histogram"] = h;
    }
    return j;
}

Json q_json(const QPartitionCounts& q) {
    Json arr = Json::array();
    for (auto& c : q.classes) {
        Json e;
        e["class"] = c.name;
        e["distinct"] = c.distinct;
        e["count"] = c.count.str();
        e["completed"] = c.completed.str();
        arr.push_back(e);
    }
    return arr;
}

GroupPtr need_group(const Opts& o) {
    if (o.group.empty()) throw UsageError("--group is required");
    return make_group(o.group, o.caps.group_order);
}

Subset subset_or_full(const std::string& text, const FiniteGroup& g) {
    return text.empty() ? full_subset(g) : parse_subset(text, g.order());
}

// --group [--subset] or --model --radius
std::shared_ptr<const SubsetUniverse> make_universe(const Opts& o, GroupPtr* group_out = nullptr) {
    if (!o.group.empty() && !o.model.empty()) throw UsageError("give either --group or --model, not both");
    if (!o.group.empty()) {
        GroupPtr g = need_group(o);
        if (group_out) *group_out = g;
        if (o.subset.empty()) return std::make_shared<GroupUniverse>(g);
        return std::make_shared<GroupUniverse>(g, parse_subset(o.subset, g->order()));
    }
    if (!o.model.empty()) return make_ball_universe(parse_model(o.model), o.radius, o.caps);
    throw UsageError("a universe is required: --group or --model with --radius");
}

Method parse_method(const std::string& s) {
    if (s == "BINOMIAL_Q") return Method::BINOMIAL_Q;
    if (s == "PAPER_CLOSED_FORM") return Method::PAPER_CLOSED_FORM;
    if (s == "CORRECTED_CLOSED_FORM") return Method::CORRECTED_CLOSED_FORM;
    throw SpecError("unknown method '" + s + "'");
}

// ---- subcommands ----

Json cmd_group_info(const Opts& o) {
    GroupPtr g = need_group(o);
    GroupInvariants inv = compute_invariants(*g);
    Json p;
    p["group"] = g->tag();
    p["order"] = g->order();
    p["abelian"] = g->is_abelian();
    p["kappa"] = inv.kappa;
    p["epsilon"] = inv.epsilon;
    p["iota"] = inv.iota;
    p["cp"] = rat(inv.cp);
    p["sq"] = rat(inv.sq);
    p["max_centralizer_nontrivial"] = inv.max_centralizer_nontrivial;
    std::map<std::uint32_t, std::uint64_t> roots;
    for (auto r : inv.r_profile) ++roots[r];
    Json rp = Json::array();
    for (auto& [r, c] : roots) rp.push_back(Json::array({r, c}));
    p["square_root_profile"] = rp;
    auto violations = check_group_axioms(*g, o.seed);
    p["axioms_ok"] = violations.empty();
    p["axiom_violations"] = violations;
    if (!violations.empty()) throw InvariantViolation("group axioms failed: " + violations.front());
    p["q_partition"] = {{"AA", q_json(q_partition_closed_form(inv, Pairing::AA))},
                        {"AAINV", q_json(q_partition_closed_form(inv, Pairing::AAINV))}};
    return p;
}

Json cmd_energy(const Opts& o) {
    GroupPtr g = need_group(o);
    if (o.a_set.empty()) throw UsageError("--a is required");
    Subset a = parse_subset(o.a_set, g->order());
    Subset d = a;
    if (!o.delta_set.empty())
        d = parse_subset(o.delta_set, g->order());
    else if (parse_pairing(o.pairing) == Pairing::AAINV)
        d = inverse_set(a, *g);
    EnergyReport r = multiplicative_energy(a, d, *g);
    Json p;
    p["group"] = g->tag();
    p["pairing"] = o.delta_set.empty() ? o.pairing : "ACTION";
    p["a_size"] = r.a_size;
    p["delta_size"] = r.delta_size;
    p["energy"] = r.energy;
    p["image_size"] = r.image_size;
    p["cs_lower_bound"] = rat(r.cs_lower_bound);
    p["normalized_local"] = rat(Rational(r.energy, BigInt(r.a_size) * r.a_size * r.delta_size));
    if (o.histogram) {
        Json h = Json::array();
        for (auto& [w, c] : r.histogram) h.push_back(Json::array({g->label(w), c}));
        p["histogram"] = h;
    }
    return p;
}

Json cmd_exact_expectation(const Opts& o) {
    Json p;
    if (!o.model.empty()) {
        if (o.variant == "ACTION") throw UsageError("ACTION needs a finite group");
        AnyModel m = parse_model(o.model);
        auto r = finite_filtration_expectation(m, o.radius, o.k, parse_pairing(o.variant), o.caps);
        p["model"] = model_name(m);
        p["radius"] = o.radius;
        p["universe_size"] = r.universe_size;
        p["k"] = r.k;
        p["variant"] = o.variant;
        p["method"] = "BINOMIAL_Q";
        p["value"] = rat(r.value);
        p["value_approx"] = to_double(r.value);
        return p;
    }
    GroupPtr g = need_group(o);
    p["group"] = g->tag();
    if (o.variant == "ACTION") {
        if (o.h == 0) throw UsageError("ACTION needs --h");
        GroupAction act = GroupAction::regular(g);
        Subset f = subset_or_full(o.subset, *g);
        Subset phi = subset_or_full(o.phi_set, *g);
        auto r = independent_action_expectation(act, f, phi, o.k, o.h, o.caps);
        p["k"] = o.k;
        p["h"] = o.h;
        p["variant"] = "ACTION";
        p["value"] = rat(r.value);
        p["value_approx"] = to_double(r.value);
        if (phi.size() >= 2) {
            Json b;
            for (auto mode : {ConstantMode::ORDERED_CORRECTED, ConstantMode::AS_PRINTED}) {
                auto bp = action_expectation_bounds(o.k, o.h, phi.size(), mode);
                b[std::string(constant_mode_name(mode))] = {{"lower", rat(bp.lower)}, {"upper", rat(bp.upper)}};
            }
            p["bounds"] = b;
        }
        return p;
    }
    Pairing pr = parse_pairing(o.variant);
    Method method = parse_method(o.method);
    ExpectationResult r;
    if (!o.subset.empty()) {
        if (method != Method::BINOMIAL_Q) throw UsageError("closed forms need the full group");
        r = expected_energy(*g, parse_subset(o.subset, g->order()), o.k, pr, o.caps);
    } else {
        GroupInvariants inv = compute_invariants(*g);
        if (method == Method::BINOMIAL_Q)
            r = expected_energy(q_partition_closed_form(inv, pr), o.k);
        else if (method == Method::PAPER_CLOSED_FORM)
            r = paper_closed_form(inv, o.k, pr);
        else
            r = corrected_closed_form(inv, o.k, pr);
        if (g->order() >= 5) {
            auto b = multiplicative_bounds(o.k, g->order(), inv.max_centralizer_nontrivial, pr);
            p["bounds"] = {{"lower", rat(b.lower)}, {"upper", rat(b.upper)}};
        }
    }
    p["universe_size"] = r.universe_size;
    p["k"] = r.k;
    p["variant"] = o.variant;
    p["method"] = method_name(r.method);
    p["value"] = rat(r.value);
    p["value_approx"] = to_double(r.value);
    return p;
}

Json cmd_mc_estimate(const Opts& o) {
    auto u = make_universe(o);
    Statistic stat = make_statistic(o.statistic, u, o.h);
    SamplingConfig cfg{o.seed, o.trials, o.k, o.threads, o.histogram};
    McEstimate e = mc_expected(*u, cfg, stat);
    Json p;
    p["universe"] = u->describe();
    p["universe_size"] = u->size();
    p["statistic"] = stat.name;
    p["k"] = o.k;
    if (stat.delta_size) p["h"] = stat.delta_size;
    p["seed"] = o.seed;
    p.update(estimate_json(e, o.histogram));
    return p;
}

Json cmd_brute_force(const Opts& o) {
    auto u = make_universe(o);
    Statistic stat = make_statistic(o.statistic, u, o.h);
    Rational v = brute_force_expected(*u, o.k, stat, o.caps);
    Json p;
    p["universe"] = u->describe();
    p["universe_size"] = u->size();
    p["statistic"] = stat.name;
    p["k"] = o.k;
    if (stat.delta_size) p["h"] = stat.delta_size;
    p["value"] = rat(v);
    p["value_approx"] = to_double(v);
    return p;
}

Json cmd_ball_densities(const Opts& o) {
    if (o.model.empty()) throw UsageError("--model is required");
    AnyModel m = parse_model(o.model);
    ProfileOptions opt;
    opt.exact_pair_cap = o.caps.exact_pairs;
    opt.pair_samples = o.pair_samples;
    opt.seed = o.seed;
    opt.threads = o.threads;
    opt.ball_cap = o.caps.ball;
    DensityProfile prof = density_profile(m, o.radius_max, opt);
    Json rows = Json::array();
    for (auto& r : prof.rows) {
        Json j;
        j["n"] = r.n;
        j["ball"] = r.ball;
        j["cp_exact"] = r.cp_exact;
        j["cp"] = r.cp_exact ? rat(r.cp) : Json(nullptr);
        j["cp_estimate"] = r.cp_estimate;
        j["cp_stderr"] = r.cp_stderr;
        j["sq"] = rat(r.sq);
        j["iota"] = rat(r.iota);
        j["growth_ratio"] = r.growth_ratio;
        rows.push_back(j);
    }
    Json p;
    p["model"] = prof.model;
    p["seed"] = o.seed;
    p["rows"] = rows;
    return p;
}

Json cmd_dominance(const Opts& o) {
    GroupPtr g;
    auto u = make_universe(o, &g);
    DominanceConfig cfg;
    cfg.k = o.k;
    cfg.trials = o.trials;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    cfg.c = parse_rational(o.c);
    if (!o.deltas.empty()) {
        cfg.deltas.clear();
        for (auto& d : o.deltas) cfg.deltas.push_back(parse_rational(d));
    }
    std::optional<GroupInvariants> inv;
    if (g && o.subset.empty()) inv = compute_invariants(*g);
    DominanceReport r = dominance_experiment(*u, cfg, inv ? &*inv : nullptr);
    Json p;
    p["universe"] = r.universe;
    p["k"] = r.k;
    p["trials"] = r.trials;
    p["seed"] = r.seed;
    p["c"] = rat(cfg.c);
    Json rows = Json::array();
    for (auto& row : r.rows) {
        Json j;
        j["source"] = row.source;
        j["delta"] = rat(row.delta);
        j["diff_threshold"] = rat(row.diff_threshold);
        j["sum_threshold"] = rat(row.sum_threshold);
        j["p_diff_over_sum_le"] = row.p_diff_over_sum;
        j["p_sum_over_diff_le"] = row.p_sum_over_diff;
        j["lower_bound"] = rat(row.lower_bound);
        rows.push_back(j);
    }
    p["rows"] = rows;
    p["max_diff_over_sum"] = r.max_diff_over_sum;
    p["max_sum_over_diff"] = r.max_sum_over_diff;
    p["energy_aa"] = estimate_json(r.energy_aa, false);
    p["energy_aainv"] = estimate_json(r.energy_aainv, false);
    p["sum_sizes"] = r.sum_sizes;
    p["diff_sizes"] = r.diff_sizes;
    return p;
}

Json cmd_basis_search(const Opts& o) {
    GroupPtr g = need_group(o);
    BasisSearchConfig cfg;
    cfg.h = parse_h_function(o.h_fn.empty() ? "log2" : o.h_fn);
    cfg.epsilon = parse_rational(o.epsilon);
    cfg.budget = o.budget;
    cfg.seed = o.seed;
    cfg.prefilter = !o.no_prefilter;
    BasisSearchResult r = basis_search(*g, cfg);
    Json p;
    p["group"] = r.group;
    p["h"] = h_function_name(r.h);
    p["epsilon"] = rat(r.epsilon);
    p["k"] = r.k;
    p["seed"] = r.seed;
    p["budget"] = r.budget;
    p["found"] = r.found.has_value();
    p["found_set"] = r.found ? Json(r.found->members) : Json(nullptr);
    p["achieved_cover"] = rat(r.achieved_cover);
    p["candidates_tried"] = r.candidates_tried;
    p["prefilter_rejected"] = r.prefilter_rejected;
    return p;
}

Json cmd_power_cover(const Opts& o) {
    GroupPtr g = need_group(o);
    if (o.a_set.empty()) throw UsageError("--a is required");
    Subset a = parse_subset(o.a_set, g->order());
    PowerCover pc = power_cover(*g, a, std::uint32_t(o.m));
    Json p;
    p["group"] = g->tag();
    p["order"] = g->order();
    p["m"] = o.m;
    p["sizes"] = pc.sizes;
    p["covers"] = pc.covers;
    p["first_cover"] = pc.first_cover ? Json(*pc.first_cover) : Json(nullptr);
    p["stable_from"] = pc.stable_from ? Json(*pc.stable_from) : Json(nullptr);
    return p;
}

Json cmd_thin_basis(const Opts& o) {
    ThinBasisReport r = thin_basis_demo(o.n);
    Json p;
    p["n"] = r.n;
    p["a_count"] = r.a_count;
    p["sum_count"] = r.sum_count;
    p["residue_count"] = r.residue_count;
    p["two_squares_extra"] = r.two_squares_extra;
    p["a_density"] = rat(r.a_density);
    p["sum_density"] = rat(r.sum_density);
    p["residue_density"] = rat(r.residue_density);
    p["a_density_approx"] = to_double(r.a_density);
    p["sum_density_approx"] = to_double(r.sum_density);
    p["residue_density_approx"] = to_double(r.residue_density);
    return p;
}

Json cmd_locally_finite(const Opts& o) {
    if (o.chain.empty()) throw UsageError("--chain is required");
    ChainConfig cfg;
    cfg.h = parse_h_function(o.h_fn.empty() ? "const" : o.h_fn);
    cfg.budget = o.budget;
    cfg.seed = o.seed;
    ChainReport r = locally_finite_thin_set(o.chain, cfg);
    Json rows = Json::array();
    for (auto& s : r.stages) {
        Json j;
        j["stage"] = s.index;
        j["group_size"] = s.group_size;
        j["layer_size"] = s.layer_size;
        j["layer_k"] = s.layer_k;
        j["layer_found"] = s.layer_found;
        j["layer_candidates"] = s.layer_candidates;
        j["layer_products"] = s.layer_products;
        j["a_count"] = s.a_count;
        j["square_count"] = s.square_count;
        j["a_density"] = s.a_density;
        j["square_density"] = s.square_density;
        rows.push_back(j);
    }
    Json p;
    p["chain"] = r.chain;
    p["h"] = h_function_name(cfg.h);
    p["seed"] = cfg.seed;
    p["rows"] = rows;
    return p;
}

// ---- validate: the exact oracle battery ----

struct Battery {
    Json checks = Json::array();
    int failed = 0;

    void check(const std::string& name, bool ok, const std::string& detail = "") {
        Json c;
        c["check"] = name;
        c["passed"] = ok;
        if (!detail.empty()) c["detail"] = detail;
        checks.push_back(c);
        failed += !ok;
    }
};

const std::vector<std::string>& battery_groups() {
    static const std::vector<std::string> groups = {
        "cyclic:2", "cyclic:3", "cyclic:4", "cyclic:5", "cyclic:6", "cyclic:7", "cyclic:8",
        "ea2:2",    "ea2:3",    "ea2:4",    "sym:3",    "sym:4",    "dihedral:4", "dihedral:5",
        "gl2:2",    "gl2:3"};
    return groups;
}

Json cmd_validate(const Opts& o, int& status) {
    Battery b;
    for (const auto& spec : battery_groups()) {
        GroupPtr g = make_group(spec);
        const std::uint32_t n = g->order();
        auto violations = check_group_axioms(*g, o.seed);
        b.check(spec + " axioms", violations.empty(), violations.empty() ? "" : violations.front());

        GroupInvariants inv = compute_invariants(*g);
        b.check(spec + " commuting pairs = kappa |G|", commuting_pairs(*g) == inv.kappa * n);
        std::uint64_t sq_pairs = 0;
        for (Element x = 0; x < n; ++x)
            for (Element y = 0; y < n; ++y) sq_pairs += g->mul(x, x) == g->mul(y, y);
        b.check(spec + " square pairs = epsilon |G|", sq_pairs == inv.epsilon * n);

        Subset full = full_subset(*g);
        for (Pairing p : {Pairing::AA, Pairing::AAINV}) {
            const std::string tag = spec + " " + std::string(pairing_name(p));
            QPartitionCounts counted = q_partition(*g, full, p, o.caps);
            QPartitionCounts closed = q_partition_closed_form(inv, p);
            bool same = counted.classes.size() == closed.classes.size();
            for (std::size_t i = 0; same && i < counted.classes.size(); ++i)
                same = counted.classes[i].count == closed.classes[i].count;
            b.check(tag + " Q counts closed form", same);

            auto u = std::make_shared<GroupUniverse>(g);
            Statistic stat = make_statistic(p == Pairing::AA ? "ENERGY_AA" : "ENERGY_AAINV", u);
            for (std::uint64_t k = 1; k <= std::min<std::uint64_t>(n, 6); ++k) {
                if (binomial(n, std::int64_t(k)) > o.caps.subsets) continue;
                Rational exact = expected_energy(counted, k).value;
                Rational brute = brute_force_expected(*u, k, stat, o.caps);
                b.check(tag + " k=" + std::to_string(k) + " binomial Q = brute force", exact == brute,
                        to_string(exact) + " vs " + to_string(brute));
                if (n < 4) continue;
                if (p == Pairing::AAINV) {
                    Rational printed = paper_closed_form(inv, k, p).value;
                    b.check(tag + " k=" + std::to_string(k) + " printed closed form", printed == exact,
                            to_string(printed));
                } else {
                    Rational corrected = corrected_closed_form(inv, k, p).value;
                    Rational printed = paper_closed_form(inv, k, p).value;
                    b.check(tag + " k=" + std::to_string(k) + " corrected closed form", corrected == exact,
                            to_string(corrected));
                    b.check(tag + " k=" + std::to_string(k) + " printed - corrected = diagonal term",
                            printed - corrected == diagonal_term(n, k), to_string(printed - corrected));
                }
            }
        }
    }

    const std::uint64_t gl_expected[3][4] = {{2, 3, 3, 4}, {3, 8, 6, 14}, {5, 24, 8, 32}};
    for (auto& row : gl_expected) {
        GroupInvariants inv = compute_invariants(parse_group("gl2:" + std::to_string(row[0])));
        b.check("gl2:" + std::to_string(row[0]) + " (kappa, epsilon, iota)",
                inv.kappa == row[1] && inv.epsilon == row[2] && inv.iota == row[3],
                std::to_string(inv.kappa) + "," + std::to_string(inv.epsilon) + "," + std::to_string(inv.iota));
    }

    {
        GroupPtr c6 = make_group("cyclic:6");
        Subset full = full_subset(*c6);
        auto r = independent_action_expectation(GroupAction::regular(c6), full, full, 2, 2, o.caps);
        auto upper = action_expectation_bounds(2, 2, 6, ConstantMode::ORDERED_CORRECTED).upper;
        auto printed = action_expectation_bounds(2, 2, 6, ConstantMode::AS_PRINTED).upper;
        b.check("cyclic:6 k=h=2 action expectation = 24/5", r.value == Rational(24, 5), to_string(r.value));
        b.check("cyclic:6 action expectation attains the ordered bound", r.value == upper, to_string(upper));
        b.check("cyclic:6 action expectation exceeds the printed bound", r.value > printed, to_string(printed));
    }
    {
        GroupPtr c = make_group("cyclic:100");
        Subset a = parse_subset("0,1,3,7", 100);
        auto rep = multiplicative_energy(a, a, *c);
        b.check("Sidon set {0,1,3,7} energy = 2k^2 - k", rep.energy == 28, std::to_string(rep.energy));
    }

    status = b.failed ? kValidationFailed : kOk;
    Json p;
    p["groups"] = battery_groups();
    p["checks"] = b.checks;
    p["passed"] = b.checks.size() - std::size_t(b.failed);
    p["failed"] = b.failed;
    return p;
}

// ---- output ----

std::string csv_cell(const Json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : v.is_null() ? "" : v.dump();
    if (s.find_first_of(",\"\n") != std::string::npos) {
        std::string q = "\"";
        for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    }
    return s;
}

std::string to_csv(const Json& payload) {
    std::ostringstream os;
    if (payload.contains("rows") && payload["rows"].is_array() && !payload["rows"].empty()) {
        const Json& rows = payload["rows"];
        std::vector<std::string> keys;
        for (auto it = rows[0].begin(); it != rows[0].end(); ++it) keys.push_back(it.key());
        for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << keys[i];
        os << "\n";
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << csv_cell(r.value(keys[i], Json()));
            os << "\n";
        }
        return os.str();
    }
    os << "key,value\n";
    for (auto it = payload.begin(); it != payload.end(); ++it) os << it.key() << "," << csv_cell(it.value()) << "\n";
    return os.str();
}

void emit(const std::string& text, const Opts& o, std::ostream& out) {
    if (o.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw std::runtime_error("cannot open '" + o.out + "' for writing");
    f << text;
}

int report_error(std::ostream& err, const std::string& kind, const std::string& message, int code) {
    Json e;
    e["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
    err << e.dump() << "\n";
    return code;
}

Json config_echo(CLI::App* sub) {
    Json c;
    for (const CLI::Option* opt : sub->get_options()) {
        std::string name = opt->get_single_name();
        if (name == "help" || name == "h,help" || name.empty()) continue;
        if (opt->get_expected_min() == 0) {
            c[name] = opt->count() > 0;
        } else if (opt->count() > 0) {
            auto res = opt->results();
            if (res.size() == 1) {
                c[name] = res[0];
            } else {
                c[name] = res;
            }
        } else if (!opt->get_default_str().empty()) {
            c[name] = opt->get_default_str();
        }
    }
    return c;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Opts o;
    CLI::App app{"Random subset energy toolkit"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::map<CLI::App*, std::function<Json(int&)>> handlers;
    std::map<CLI::App*, std::string> default_format;

    auto add = [&](const std::string& name, const std::string& help, std::function<Json(int&)> fn,
                   const std::string& fmt = "json") {
        CLI::App* s = app.add_subcommand(name, help);
        s->option_defaults()->always_capture_default();
        s->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        s->add_option("--out", o.out, "write output to this path");
        s->add_option("--threads", o.threads, "worker threads (default RSE_THREADS or all cores)");
        handlers[s] = std::move(fn);
        default_format[s] = fmt;
        return s;
    };
    auto caps = [&](CLI::App* s) {
        s->add_option("--cap-triples", o.caps.triples, "triple enumeration cap");
        s->add_option("--cap-subsets", o.caps.subsets, "brute-force subset cap");
        s->add_option("--cap-ball", o.caps.ball, "ball size cap");
        s->add_option("--cap-exact-pairs", o.caps.exact_pairs, "exact commuting-pair cap");
        s->add_option("--cap-action-triples", o.caps.action_triples, "action enumeration cap");
        s->add_option("--cap-group-order", o.caps.group_order, "group order cap");
    };
    auto universe = [&](CLI::App* s) {
        s->add_option("--group", o.group, "group spec, e.g. sym:4 or prod(cyclic:2,gl2:3)");
        s->add_option("--subset", o.subset, "restrict to these element indices");
        s->add_option("--model", o.model, "free:r, lattice:d, heisenberg, lamplighter");
        s->add_option("--radius", o.radius, "word-metric ball radius");
    };
    auto wrap = [](std::function<Json(const Opts&)> f, const Opts& o) {
        return [f, &o](int&) { return f(o); };
    };

    CLI::App* s;
    s = add("group-info", "invariants, square-root profile and Q counts", wrap(cmd_group_info, o));
    s->add_option("--group", o.group)->required();
    s->add_option("--seed", o.seed, "seed for sampled axiom checks");
    caps(s);

    s = add("energy", "energy of explicit sets", wrap(cmd_energy, o));
    s->add_option("--group", o.group)->required();
    s->add_option("--a", o.a_set, "comma-separated element indices")->required();
    s->add_option("--delta", o.delta_set, "acting set; defaults to A or A^-1");
    s->add_option("--pairing", o.pairing, "AA or AAINV");
    s->add_flag("--histogram", o.histogram, "include r(w) per point");
    caps(s);

    s = add("exact-expectation", "exact expected energy of a random k-subset", wrap(cmd_exact_expectation, o));
    universe(s);
    s->add_option("--k", o.k)->required();
    s->add_option("--variant", o.variant, "AA, AAINV or ACTION");
    s->add_option("--method", o.method, "BINOMIAL_Q, PAPER_CLOSED_FORM or CORRECTED_CLOSED_FORM");
    s->add_option("--h", o.h, "size of the random acting set (ACTION)");
    s->add_option("--phi", o.phi_set, "acting-set universe (ACTION); default the whole group");
    caps(s);

    s = add("mc-estimate", "Monte Carlo mean of a subset statistic", wrap(cmd_mc_estimate, o));
    universe(s);
    s->add_option("--k", o.k)->required();
    s->add_option("--statistic", o.statistic, "ENERGY_AA, ENERGY_AAINV, ENERGY_ACTION, SIZE_A2, ...");
    s->add_option("--h", o.h, "acting-set size for ENERGY_ACTION");
    s->add_option("--trials", o.trials);
    s->add_option("--seed", o.seed);
    s->add_flag("--histogram", o.histogram);
    caps(s);

    s = add("brute-force", "exact mean of a statistic over all k-subsets", wrap(cmd_brute_force, o));
    universe(s);
    s->add_option("--k", o.k)->required();
    s->add_option("--statistic", o.statistic);
    s->add_option("--h", o.h);
    caps(s);

    s = add("ball-densities", "cp, sq and involution density of word-metric balls", wrap(cmd_ball_densities, o),
            "csv");
    s->add_option("--model", o.model)->required();
    s->add_option("--radius-max", o.radius_max);
    s->add_option("--pair-samples", o.pair_samples, "sampled pairs when the ball exceeds the exact cap");
    s->add_option("--seed", o.seed);
    caps(s);

    s = add("dominance", "sum versus difference set ratios", wrap(cmd_dominance, o));
    universe(s);
    s->add_option("--k", o.k)->required();
    s->add_option("--trials", o.trials);
    s->add_option("--seed", o.seed);
    s->add_option("--delta", o.deltas, "threshold offsets (repeatable)");
    s->add_option("--c", o.c, "constant multiplying delta in the reported lower bound");
    caps(s);

    s = add("basis-search", "randomized search for an almost-basis", wrap(cmd_basis_search, o));
    s->add_option("--group", o.group)->required();
    s->add_option("--h-fn", o.h_fn, "log2, sqrt_log or const");
    s->add_option("--epsilon", o.epsilon);
    s->add_option("--budget", o.budget);
    s->add_option("--seed", o.seed);
    s->add_flag("--no-prefilter", o.no_prefilter, "skip the energy prefilter");
    caps(s);

    s = add("power-cover", "iterated product sets", wrap(cmd_power_cover, o));
    s->add_option("--group", o.group)->required();
    s->add_option("--a", o.a_set)->required();
    s->add_option("--m", o.m, "largest power, at most 8");
    caps(s);

    s = add("thin-basis", "squares in [-n, n] and their sumset", wrap(cmd_thin_basis, o));
    s->add_option("--n", o.n)->required();

    s = add("locally-finite", "thin set with large square along a chain", wrap(cmd_locally_finite, o));
    s->add_option("--chain", o.chain, "ea2:m or sym:n")->required();
    s->add_option("--h-fn", o.h_fn, "log2, sqrt_log or const");
    s->add_option("--budget", o.budget);
    s->add_option("--seed", o.seed);

    s = add("validate", "exact oracle battery", [&](int& status) { return cmd_validate(o, status); });
    s->add_option("--seed", o.seed);
    caps(s);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << (dynamic_cast<const CLI::CallForVersion*>(&e) ? std::string(kVersion) + "\n" : app.help());
            return kOk;
        }
        return report_error(err, "usage", e.what(), kUsage);
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        if (o.threads == 0) throw UsageError("--threads must be positive");
        auto start = std::chrono::steady_clock::now();
        int status = kOk;
        Json payload = handlers.at(sub)(status);
        auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        const std::string fmt = o.format.empty() ? default_format.at(sub) : o.format;
        if (fmt == "csv") {
            emit(to_csv(payload), o, out);
        } else {
            Json record;
            record["subcommand"] = sub->get_name();
            record["version"] = kVersion;
            record["config"] = config_echo(sub);
            record["payload"] = payload;
            record["wall_time_ms"] = ms;
            emit(record.dump(2) + "\n", o, out);
        }
        if (status == kValidationFailed) report_error(err, "validation_failed", "oracle battery has failures", status);
        return status;
    } catch (const UsageError& e) {
        return report_error(err, "usage", e.what(), kUsage);
    } catch (const SpecError& e) {
        return report_error(err, e.kind(), e.what(), kMalformedSpec);
    } catch (const CapExceeded& e) {
        return report_error(err, e.kind(), e.what(), kCapExceeded);
    } catch (const InvariantViolation& e) {
        return report_error(err, e.kind(), e.what(), kInvariantViolation);
    } catch (const DomainError& e) {
        return report_error(err, e.kind(), e.what(), kDomain);
    } catch (const std::exception& e) {
        return report_error(err, "error", e.what(), kOther);
    }
}

}  // namespace rse::cli
