#include "cmendo/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <regex>
#include <sstream>

#include "cmendo/endoring.hpp"
#include "cmendo/errors.hpp"
#include "cmendo/serialize.hpp"

namespace cmendo {

namespace {

bool is_decimal(const std::string& s) {
    static const std::regex re("-?(0|[1-9][0-9]*)");
    return std::regex_match(s, re) && s != "-0";
}

Int parse_int_arg(const std::string& s, const std::string& what) {
    if (!is_decimal(s)) throw UsageError(what + ": '" + s + "' is not a decimal integer");
    return Int(s);
}

std::uint64_t parse_u64_arg(const std::string& s, const std::string& what) {
    Int x = parse_int_arg(s, what);
    if (x < 0 || !x.fits_ulong_p()) throw UsageError(what + " out of range");
    return x.get_ui();
}

int parse_small_arg(const std::string& s, const std::string& what, long lo, long hi) {
    Int x = parse_int_arg(s, what);
    if (x < lo || x > hi) throw UsageError(what + " must lie in " + std::to_string(lo) + ".." + std::to_string(hi));
    return static_cast<int>(x.get_si());
}

double parse_mu_arg(const std::string& s, const std::string& what) {
    static const std::regex re("(0|[1-9][0-9]*)(\\.[0-9]+)?");
    if (!std::regex_match(s, re)) throw UsageError(what + ": '" + s + "' is not a positive decimal");
    double x = std::stod(s);
    if (x <= 0) throw UsageError(what + " must be positive");
    return x;
}

bool parse_bool_arg(const std::string& s, const std::string& what) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw UsageError(what + " must be true or false");
}

// Runs a value parser on a job-file leaf, reporting failures at its position.
template <class F>
auto job_value(const TextNode& n, F parse) {
    n.expect_count(1);
    try {
        return parse(n.values[0], n.key);
    } catch (const UsageError& e) {
        throw ParseError(n.line, n.col, e.what());
    }
}

std::string as_string(const std::string& s, const std::string&) { return s; }

}  // namespace

// ---------------------------------------------------------------- job files

JobSpec read_job(const std::string& text) {
    TextNode root = parse_text(text);
    if (root.children.empty() || root.children[0].key != kJobTag || !root.children[0].values.empty())
        throw ParseError(root.children.empty() ? 1 : root.children[0].line, 1,
                         std::string("expected version tag '") + kJobTag + "'");
    root.children.erase(root.children.begin());
    root.expect_keys({"command", "field_desc", "config", "simulator", "inputs", "paths"});
    JobSpec j;
    if (auto n = root.find("command")) j.command = job_value(*n, as_string);
    if (auto n = root.find("field_desc")) {
        n->expect_count(3);
        j.q = n->int_at(0);
        j.a1 = n->int_at(1);
        j.a2 = n->int_at(2);
    }
    if (auto c = root.find("config")) {
        c->expect_keys({"seed", "mu", "k0", "B", "max_trials", "C_bound", "fb_bound", "force"});
        if (auto n = c->find("seed")) j.seed = job_value(*n, parse_u64_arg);
        if (auto n = c->find("mu")) j.mu = job_value(*n, parse_mu_arg);
        if (auto n = c->find("k0")) j.k0 = job_value(*n, [](auto& s, auto& w) { return parse_small_arg(s, w, 1, 100000); });
        if (auto n = c->find("B")) j.B = job_value(*n, parse_int_arg);
        if (auto n = c->find("max_trials")) j.max_trials = job_value(*n, parse_u64_arg);
        if (auto n = c->find("C_bound")) j.C_bound = job_value(*n, parse_int_arg);
        if (auto n = c->find("fb_bound")) j.fb_bound = job_value(*n, parse_int_arg);
        if (auto n = c->find("force")) j.force = job_value(*n, parse_bool_arg);
    }
    if (auto s = root.find("simulator")) {
        s->expect_keys({"v", "hidden", "seed"});
        if (auto n = s->find("v")) j.sim_v = job_value(*n, as_string);
        if (auto n = s->find("hidden")) j.sim_hidden = job_value(*n, as_string);
        if (auto n = s->find("seed")) j.sim_seed = job_value(*n, parse_u64_arg);
    }
    if (auto in = root.find("inputs")) {
        in->expect_keys({"u", "v", "f1", "f2", "prime", "k", "order"});
        if (auto n = in->find("u")) j.u = job_value(*n, as_string);
        if (auto n = in->find("v")) j.v = job_value(*n, as_string);
        if (auto n = in->find("f1")) j.f1 = job_value(*n, as_string);
        if (auto n = in->find("f2")) j.f2 = job_value(*n, as_string);
        if (auto n = in->find("prime")) j.prime = job_value(*n, as_string);
        if (auto n = in->find("order")) j.order = job_value(*n, as_string);
        if (auto n = in->find("k")) j.k = job_value(*n, [](auto& s, auto& w) { return parse_small_arg(s, w, 1, 1000); });
    }
    if (auto p = root.find("paths")) {
        p->expect_keys({"cert", "out", "cache_dir"});
        if (auto n = p->find("cert")) j.cert = job_value(*n, as_string);
        if (auto n = p->find("out")) j.out = job_value(*n, as_string);
        if (auto n = p->find("cache_dir")) j.cache_dir = job_value(*n, as_string);
    }
    return j;
}

JobSpec merge_jobs(JobSpec b, const JobSpec& o) {
    auto take = [](auto& dst, const auto& src) {
        if (src) dst = src;
    };
    take(b.command, o.command);
    take(b.q, o.q);
    take(b.a1, o.a1);
    take(b.a2, o.a2);
    take(b.seed, o.seed);
    take(b.mu, o.mu);
    take(b.k0, o.k0);
    take(b.B, o.B);
    take(b.max_trials, o.max_trials);
    take(b.C_bound, o.C_bound);
    take(b.fb_bound, o.fb_bound);
    take(b.force, o.force);
    take(b.sim_v, o.sim_v);
    take(b.sim_hidden, o.sim_hidden);
    take(b.sim_seed, o.sim_seed);
    take(b.u, o.u);
    take(b.v, o.v);
    take(b.f1, o.f1);
    take(b.f2, o.f2);
    take(b.prime, o.prime);
    take(b.order, o.order);
    take(b.k, o.k);
    take(b.cert, o.cert);
    take(b.out, o.out);
    take(b.cache_dir, o.cache_dir);
    return b;
}

// ---------------------------------------------------------------- ideal expressions

namespace {

std::vector<RealPrime> primes_of_norm(const CMField& cm, const Int& N) {
    Int ell = N, r;
    if (!is_prime(ell)) {
        if (!is_square(N, &r) || !is_prime(r)) return {};
        ell = r;
    }
    std::vector<RealPrime> out;
    for (auto& p : real_primes_over(*cm.OF, ell))
        if (p.norm() == N) out.push_back(p);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::string prime_label(const CMField& cm, const RealPrime& p) {
    auto ps = primes_of_norm(cm, p.norm());
    auto it = std::find(ps.begin(), ps.end(), p);
    check(it != ps.end(), Errc::Internal, "prime missing from its norm class");
    return to_string(p.norm()) + "#" + std::to_string(it - ps.begin() + 1);
}

std::string ideal_expr(const CMField& cm, const OFIdeal& a) {
    if (a.is_unit()) return "1";
    std::string s;
    for (const auto& [p, e] : of_factor(*cm.OF, a)) {
        if (!s.empty()) s += "*";
        s += prime_label(cm, p);
        if (e > 1) s += "^" + std::to_string(e);
    }
    return s;
}

OFIdeal parse_ideal_expr(const CMField& cm, const std::string& expr) {
    const RealOrder& OF = *cm.OF;
    if (expr == "1") return OFIdeal::unit();
    if (expr == "v") return cm.v;
    static const std::regex hnf_re("hnf:([0-9]+),([0-9]+),([0-9]+)");
    std::smatch m;
    if (std::regex_match(expr, m, hnf_re)) {
        Int a = parse_int_arg(m[1], "hnf"), b = parse_int_arg(m[2], "hnf"), c = parse_int_arg(m[3], "hnf");
        if (a <= 0 || c <= 0 || b >= c) throw UsageError("'" + expr + "' is not a Hermite normal form");
        OFIdeal I = OFIdeal::from_hnf(a, b, c);
        if (OFIdeal::from_generators(OF, {{a, b}, {Int(0), c}}) != I)
            throw UsageError("'" + expr + "' is not an ideal of O_F");
        return I;
    }
    static const std::regex tok_re("([1-9][0-9]*)(#([1-9][0-9]*))?(\\^([1-9][0-9]*))?");
    OFIdeal I = OFIdeal::unit();
    std::stringstream ss(expr);
    std::string tok;
    bool any = false;
    while (std::getline(ss, tok, '*')) {
        any = true;
        if (!std::regex_match(tok, m, tok_re)) throw UsageError("cannot parse ideal factor '" + tok + "'");
        Int N = parse_int_arg(m[1], "norm");
        auto ps = primes_of_norm(cm, N);
        if (ps.empty()) throw UsageError("no prime of O_F has norm " + to_string(N));
        const RealPrime* p = nullptr;
        if (m[3].matched) {
            std::size_t i = parse_u64_arg(m[3], "prime index");
            if (i > ps.size()) throw UsageError("only " + std::to_string(ps.size()) + " primes of norm " + to_string(N));
            p = &ps[i - 1];
        } else if (ps.size() == 1) {
            p = &ps[0];
        } else {
            std::vector<const RealPrime*> in_v;
            for (const auto& q : ps)
                if (of_valuation(OF, cm.v, q) > 0) in_v.push_back(&q);
            if (in_v.size() != 1) throw UsageError("norm " + to_string(N) + " is ambiguous; write " + to_string(N) + "#i");
            p = in_v[0];
        }
        int e = m[5].matched ? parse_small_arg(m[5], "exponent", 1, 1000) : 1;
        I = of_mul(OF, I, of_pow(OF, p->ideal, e));
    }
    if (!any) throw UsageError("empty ideal expression");
    return I;
}

// ---------------------------------------------------------------- commands

namespace {

struct Session {
    JobSpec job;
    std::ostream& out;
    std::ostream& err;
    Ctx ctx;
    CMFieldPtr cm;

    std::uint64_t seed() const { return job.seed.value_or(1); }

    ClassGroupParams group_params() const {
        ClassGroupParams p;
        p.bound = job.fb_bound.value_or(0);
        p.seed = seed();
        return p;
    }

    RelationParams relation_params() const {
        RelationParams p;
        if (job.mu) p.mu = *job.mu;
        if (job.k0) p.k0 = *job.k0;
        if (job.B) p.B_override = *job.B;
        if (job.max_trials) p.max_trials = *job.max_trials;
        p.seed = seed();
        return p;
    }

    DriverConfig driver_config() const {
        DriverConfig c;
        c.C_bound = job.C_bound.value_or(3);
        if (c.C_bound < 3) throw UsageError("--C must be at least 3");
        c.relation = relation_params();
        c.walk_seed = seed();
        c.force = job.force.value_or(false);
        return c;
    }

    std::shared_ptr<ClassGroupCache> groups() const {
        std::optional<std::filesystem::path> dir;
        if (job.cache_dir) {
            dir = *job.cache_dir;
        } else if (const char* env = std::getenv("CMENDO_CACHE_DIR"); env && *env) {
            dir = env;
        }
        return std::make_shared<ClassGroupCache>(cm, group_params(), dir);
    }

    OFIdeal ideal(const std::optional<std::string>& expr, const char* what, const char* fallback = nullptr) const {
        if (!expr && !fallback) throw UsageError(std::string("missing ") + what);
        return parse_ideal_expr(*cm, expr ? *expr : fallback);
    }

    // Exit code 3 unless the requirements hold or --force is given.
    bool requirements_ok() {
        RequirementsReport rep = validate_requirements(ctx, cm->OK);
        if (rep.all()) return true;
        if (job.force.value_or(false)) {
            err << "warning: requirements (R) do not hold; continuing because of --force\n";
            for (const auto& m : rep.messages) err << "  " << m << "\n";
            return true;
        }
        err << "requirements (R) do not hold (use --force to override):\n" << write_requirements(rep);
        return false;
    }

    void assume_simple() { err << "warning: absolute simplicity of the variety is assumed, not checked\n"; }

    void emit(const std::string& text) {
        if (job.out) {
            std::ofstream f(*job.out, std::ios::binary);
            if (!f) throw UsageError("cannot write " + *job.out);
            f << text;
        } else {
            out << text;
        }
    }

    std::pair<std::shared_ptr<SimWorld>, VarietyId> world(const std::shared_ptr<ClassGroupCache>& g) const {
        if (!job.sim_hidden) throw UsageError("this command needs --simulate hidden=<ideal>");
        OFIdeal v = ideal(job.sim_v, "simulator v", "v");
        OFIdeal hidden = ideal(job.sim_hidden, "simulator hidden ideal");
        return SimWorld::build(g, v, hidden, job.sim_seed.value_or(seed()));
    }

    TextNode header(const char* tag) const {
        TextNode root = TextNode::section("");
        root.add_leaf(tag, {});
        root.add_leaf("field_desc", {to_string(ctx->q), to_string(ctx->a1), to_string(ctx->a2)});
        return root;
    }

    TextNode factored(const OFIdeal& a) const {
        TextNode n = TextNode::section("factors");
        for (const auto& [p, e] : of_factor(*cm->OF, a)) {
            TextNode f = TextNode::section("factor");
            f.add_leaf("label", {prime_label(*cm, p)});
            f.add_leaf("norm", {to_string(p.norm())});
            f.add_leaf("exponent", {std::to_string(e)});
            f.add(ideal_node("hnf", p.ideal));
            n.add(std::move(f));
        }
        return n;
    }

    TextNode cost_node(const SimWorld& w) const {
        SimCost c = w.cost();
        TextNode n = TextNode::section("cost");
        n.add_leaf("apply_calls", {std::to_string(c.apply_calls)});
        n.add_leaf("neighbor_calls", {std::to_string(c.neighbor_calls)});
        n.add_leaf("isogeny_steps", {to_string(c.isogeny_steps)});
        n.add_leaf("weighted_steps", {to_string(c.weighted_steps)});
        return n;
    }
};

int cmd_validate(Session& s) {
    s.emit(write_requirements(validate_requirements(s.ctx, s.cm->OK)));
    return 0;
}

int cmd_ideal_id(Session& s) {
    std::string which = s.job.order.value_or("OFpi");
    OrderPtr O;
    if (which == "OFpi") O = s.cm->OFpi;
    else if (which == "OK") O = s.cm->OK;
    else throw UsageError("--order must be OFpi or OK");
    OFIdeal f = identifying_ideal(*O, *s.cm->OK, *s.cm->OF);
    TextNode root = s.header("cmendo-ideal-id/1");
    root.add_leaf("order", {which});
    root.add(ideal_node("fplus", f));
    root.add_leaf("norm", {to_string(f.norm())});
    root.add_leaf("expr", {ideal_expr(*s.cm, f)});
    root.add(s.factored(f));
    s.emit(write_text(root));
    return 0;
}

int cmd_classgroup(Session& s) {
    OFIdeal f = s.ideal(s.job.f1, "--f", "v");
    auto g = s.groups();
    s.emit(write_class_group(*g->get(f), *s.ctx));
    return 0;
}

int cmd_find_relation(Session& s) {
    auto g = s.groups();
    OFIdeal f1, f2;
    if (s.job.prime) {
        if (s.job.f1 || s.job.f2) throw UsageError("give either --prime/--k or --f1/--f2");
        OFIdeal v = s.ideal(s.job.v, "--v", "v");
        auto fac = of_factor(*s.cm->OF, s.ideal(s.job.prime, "--prime"));
        if (fac.size() != 1 || fac[0].e != 1) throw UsageError("--prime must name a single prime");
        std::tie(f1, f2) = prime_power_test_orders(*s.cm, v, fac[0].prime, s.job.k.value_or(1));
    } else {
        f1 = s.ideal(s.job.f1, "--f1");
        f2 = s.ideal(s.job.f2, "--f2");
    }
    auto G1 = g->get(f1), G2 = g->get(f2);
    Relation R = find_relation(*s.cm, *G1, *G2, s.relation_params());
    TextNode root = s.header("cmendo-relation/1");
    root.add(ideal_node("f1", f1));
    root.add(ideal_node("f2", f2));
    root.add_leaf("holds_in_f1", {relation_holds_in_order(*G1, R) ? "true" : "false"});
    root.add_leaf("holds_in_f2", {relation_holds_in_order(*G2, R) ? "true" : "false"});
    root.add(relation_node(R));
    s.emit(write_text(root));
    return 0;
}

int cmd_compute_endo(Session& s) {
    s.assume_simple();
    if (!s.requirements_ok()) return 3;
    auto g = s.groups();
    auto [w, A] = s.world(g);
    DriverConfig cfg = s.driver_config();
    cfg.force = true;
    EndoringResult r = compute_endoring(*g, *w, A, cfg);
    TextNode root = s.header("cmendo-endo/1");
    root.add(ideal_node("fplus", r.u));
    root.add_leaf("expr", {ideal_expr(*s.cm, r.u)});
    root.add(s.factored(r.u));
    TextNode& steps = root.add(TextNode::section("steps"));
    for (const auto& st : r.steps) {
        TextNode n = TextNode::section(st.relation ? "relation_test" : "climb");
        n.add_leaf("prime", {prime_label(*s.cm, st.prime)});
        if (st.relation) {
            n.add_leaf("k", {std::to_string(st.k)});
            n.add_leaf("terms", {std::to_string(st.relation->terms.size())});
        }
        n.add_leaf("divides", {st.divides ? "true" : "false"});
        steps.add(std::move(n));
    }
    OFIdeal hidden = w->hidden_fplus(A);
    TextNode& sim = root.add(TextNode::section("simulator"));
    sim.add(ideal_node("hidden", hidden));
    sim.add_leaf("matches", {hidden == r.u ? "true" : "false"});
    root.add(s.cost_node(*w));
    s.emit(write_text(root));
    return 0;
}

int cmd_certify(Session& s) {
    s.assume_simple();
    if (!s.requirements_ok()) return 3;
    auto g = s.groups();
    OFIdeal u = s.ideal(s.job.u, "--u");
    OFIdeal v = s.ideal(s.job.v, "--v", "v");
    s.emit(write_certificate(certify(*g, u, v, s.driver_config())));
    return 0;
}

int cmd_verify(Session& s) {
    s.assume_simple();
    if (!s.job.cert) throw UsageError("verify needs --cert");
    std::ifstream f(*s.job.cert, std::ios::binary);
    if (!f) throw UsageError("cannot read certificate " + *s.job.cert);
    std::stringstream text;
    text << f.rdbuf();
    Certificate cert = read_certificate(text.str());
    if (!s.requirements_ok()) return 3;
    auto g = s.groups();
    auto [w, A] = s.world(g);
    VerifyResult r = verify(*s.cm, *w, A, cert, s.seed());
    TextNode root = s.header("cmendo-verify/1");
    root.add_leaf("result", {r.ok ? "true" : "false"});
    std::vector<std::string> words;
    std::istringstream rs(r.reason);
    for (std::string t; rs >> t;) words.push_back(t);
    root.add_leaf("reason", words);
    root.add(s.cost_node(*w));
    s.emit(write_text(root));
    return r.ok ? 0 : 1;
}

int cmd_simulate(Session& s) {
    s.assume_simple();
    auto g = s.groups();
    auto [w, A] = s.world(g);
    SimState st = w->hidden_state(A);
    ClassGroupPtr G = w->group_at(st.levels);
    TextNode root = s.header("cmendo-sim/1");
    root.add(ideal_node("v", w->v()));
    root.add(ideal_node("hidden", w->hidden_fplus(A)));
    root.add_leaf("variety", {id_hex(A)});
    TextNode& cg = root.add(TextNode::section("class_group"));
    cg.add_leaf("h", {to_string(G->h)});
    std::vector<std::string> inv;
    for (const auto& d : G->invariants) inv.push_back(to_string(d));
    cg.add_leaf("invariants", inv);
    for (std::size_t i = 0; i < w->volcano_primes().size(); ++i) {
        const auto& [p, d] = w->volcano_primes()[i];
        TextNode n = TextNode::section("volcano");
        n.add_leaf("prime", {prime_label(*s.cm, p)});
        n.add_leaf("depth", {std::to_string(d)});
        n.add_leaf("level", {std::to_string(st.levels[i])});
        n.add_leaf("split_symbol", {std::to_string(split_symbol(*s.cm, p))});
        n.add_leaf("neighbors", {std::to_string(w->list_l_neighbors(A, p).size())});
        root.add(std::move(n));
    }
    s.emit(write_text(root));
    return 0;
}

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case Errc::ParseError:
        case Errc::NotPrimePower:
        case Errc::ReduciblePolynomial:
        case Errc::NotWeil:
        case Errc::NotOrdinary:
            return 2;
        case Errc::RequirementsViolated:
            return 3;
        default:
            return 1;
    }
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Endomorphism rings of ordinary abelian surfaces with maximal real multiplication", "cmendo"};
    app.fallthrough();
    app.require_subcommand(0, 1);
    JobSpec flags;
    std::vector<std::function<void()>> apply;

    auto str_opt = [&](CLI::App* a, const std::string& name, std::optional<std::string>& dst, const std::string& help) {
        auto holder = std::make_shared<std::string>();
        CLI::Option* o = a->add_option(name, *holder, help);
        apply.push_back([o, holder, &dst] {
            if (o->count()) dst = *holder;
        });
        return o;
    };
    auto parsed_opt = [&](CLI::App* a, const std::string& name, auto& dst, auto parse, const std::string& help) {
        auto holder = std::make_shared<std::string>();
        CLI::Option* o = a->add_option(name, *holder, help);
        apply.push_back([o, holder, &dst, parse, name] {
            if (o->count()) dst = parse(*holder, name);
        });
        return o;
    };

    std::string job_path;
    app.add_option("--job", job_path, "job file (cmendo-job/1); flags override its values");
    parsed_opt(&app, "--q", flags.q, parse_int_arg, "field size q");
    parsed_opt(&app, "--a1", flags.a1, parse_int_arg, "Weil polynomial coefficient a1");
    parsed_opt(&app, "--a2", flags.a2, parse_int_arg, "Weil polynomial coefficient a2");
    parsed_opt(&app, "--seed", flags.seed, parse_u64_arg, "random seed (default 1)");
    parsed_opt(&app, "--mu", flags.mu, parse_mu_arg, "smoothness parameter mu (default 0.7071...)");
    parsed_opt(&app, "--k0", flags.k0, [](auto& s, auto& w) { return parse_small_arg(s, w, 1, 100000); },
               "primes drawn per relation attempt (default 16)");
    parsed_opt(&app, "--B", flags.B, parse_int_arg, "override the relation smoothness bound");
    parsed_opt(&app, "--max-trials", flags.max_trials, parse_u64_arg, "relation attempts before giving up");
    parsed_opt(&app, "--C", flags.C_bound, parse_int_arg, "primes of norm below C are climbed (default 3)");
    parsed_opt(&app, "--fb-bound", flags.fb_bound, parse_int_arg, "class-group factor-base bound (0 = default)");
    str_opt(&app, "--out", flags.out, "write the result here instead of stdout");
    str_opt(&app, "--cache-dir", flags.cache_dir, "class-group cache (default $CMENDO_CACHE_DIR)");
    bool force = false;
    CLI::Option* force_opt = app.add_flag("--force", force, "proceed although requirements (R) fail");
    std::string simulate;
    CLI::Option* sim_opt =
        app.add_option("--simulate", simulate, "simulated oracle: hidden=<ideal>[;v=<ideal>][;seed=<n>]");

    app.add_subcommand("validate", "check requirements (R)");
    CLI::App* ideal_id = app.add_subcommand("ideal-id", "identifying ideal of an order");
    str_opt(ideal_id, "--order", flags.order, "OFpi (default) or OK");
    CLI::App* classgroup = app.add_subcommand("classgroup", "class group of O(f)");
    str_opt(classgroup, "--f", flags.f1, "identifying ideal (default v)");
    CLI::App* find_rel = app.add_subcommand("find-relation", "relation holding in O(f1) but not O(f2)");
    str_opt(find_rel, "--f1", flags.f1, "order where the relation must hold");
    str_opt(find_rel, "--f2", flags.f2, "order where the relation must fail");
    str_opt(find_rel, "--prime", flags.prime, "decide p^k | f instead of giving f1, f2");
    parsed_opt(find_rel, "--k", flags.k, [](auto& s, auto& w) { return parse_small_arg(s, w, 1, 1000); }, "exponent k");
    str_opt(find_rel, "--v", flags.v, "ideal bounding f (default v)");
    app.add_subcommand("compute-endo", "identifying ideal of End A");
    CLI::App* cert_cmd = app.add_subcommand("certify", "certificate for f(A) = u");
    str_opt(cert_cmd, "--u", flags.u, "claimed identifying ideal");
    str_opt(cert_cmd, "--v", flags.v, "ideal bounding f (default v)");
    CLI::App* verify_cmd = app.add_subcommand("verify", "check a certificate against a variety");
    str_opt(verify_cmd, "--cert", flags.cert, "certificate file")->check(CLI::ExistingFile);
    app.add_subcommand("simulate", "describe a simulated variety");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 2;
    }

    try {
        for (auto& f : apply) f();
        if (force_opt->count()) flags.force = force;
        if (sim_opt->count()) {
            std::stringstream ss(simulate);
            std::string part;
            while (std::getline(ss, part, ';')) {
                auto eq = part.find('=');
                if (eq == std::string::npos) throw UsageError("--simulate entries are key=value");
                std::string k = part.substr(0, eq), val = part.substr(eq + 1);
                if (k == "hidden") flags.sim_hidden = val;
                else if (k == "v") flags.sim_v = val;
                else if (k == "seed") flags.sim_seed = parse_u64_arg(val, "simulator seed");
                else throw UsageError("unknown --simulate key '" + k + "'");
            }
        }
        for (CLI::App* sub : app.get_subcommands()) flags.command = sub->get_name();

        JobSpec job;
        if (!job_path.empty()) {
            std::ifstream f(job_path, std::ios::binary);
            if (!f) throw UsageError("cannot read job file " + job_path);
            std::stringstream text;
            text << f.rdbuf();
            job = read_job(text.str());
            if (job.command && flags.command && *job.command != *flags.command)
                throw UsageError("job file is for '" + *job.command + "', not '" + *flags.command + "'");
        }
        job = merge_jobs(job, flags);
        if (!job.command) throw UsageError("no command given\n" + app.help());
        if (!job.q || !job.a1 || !job.a2) throw UsageError("the field needs --q, --a1 and --a2");

        Session s{job, out, err, nullptr, nullptr};
        s.ctx = build_weil_context(*job.q, *job.a1, *job.a2);
        s.cm = CMField::create(s.ctx);
        const std::string& c = *job.command;
        if (c == "validate") return cmd_validate(s);
        if (c == "ideal-id") return cmd_ideal_id(s);
        if (c == "classgroup") return cmd_classgroup(s);
        if (c == "find-relation") return cmd_find_relation(s);
        if (c == "compute-endo") return cmd_compute_endo(s);
        if (c == "certify") return cmd_certify(s);
        if (c == "verify") return cmd_verify(s);
        if (c == "simulate") return cmd_simulate(s);
        throw UsageError("unknown command '" + c + "'");
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace cmendo
