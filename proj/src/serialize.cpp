#include "cmendo/serialize.hpp"

#include <algorithm>

#include "cmendo/errors.hpp"

namespace cmendo {

std::size_t Certificate::term_count() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.relation.terms.size();
    return n;
}

namespace {

std::vector<std::string> strs(std::initializer_list<Int> xs) {
    std::vector<std::string> out;
    for (const auto& x : xs) out.push_back(to_string(x));
    return out;
}

std::vector<std::string> strs(const std::vector<Int>& xs) {
    std::vector<std::string> out;
    for (const auto& x : xs) out.push_back(to_string(x));
    return out;
}

std::uint64_t u64_at(const TextNode& n, std::size_t i) {
    Int x = n.int_at(i);
    if (x < 0 || !x.fits_ulong_p()) throw ParseError(n.line, n.col, "'" + n.key + "' out of range");
    return x.get_ui();
}

int small_int(const TextNode& n, long lo, long hi) {
    n.expect_count(1);
    Int x = n.int_at(0);
    if (x < lo || x > hi) throw ParseError(n.line, n.col, "'" + n.key + "' outside " + std::to_string(lo) + ".." + std::to_string(hi));
    return static_cast<int>(x.get_si());
}

bool flag(const TextNode& n) {
    n.expect_count(1);
    if (n.values[0] == "true") return true;
    if (n.values[0] == "false") return false;
    throw ParseError(n.line, n.col, "'" + n.key + "' must be true or false");
}

TextNode flag_leaf(const std::string& key, bool b) { return TextNode::leaf(key, {b ? "true" : "false"}); }

TextNode int_leaf(const std::string& key, const Int& x) { return TextNode::leaf(key, {to_string(x)}); }

// Parses the document and checks the version tag on the first line.
TextNode parse_tagged(const std::string& text, const char* tag) {
    TextNode root = parse_text(text);
    if (root.children.empty()) throw ParseError(1, 1, std::string("empty document, expected '") + tag + "'");
    const TextNode& first = root.children.front();
    if (first.key != tag || !first.values.empty() || first.block)
        throw ParseError(first.line, first.col, "unsupported version tag '" + first.key + "', expected '" + tag + "'");
    root.children.erase(root.children.begin());
    return root;
}

TextNode tagged_root(const char* tag) {
    TextNode root = TextNode::section("");
    root.add_leaf(tag, {});
    return root;
}

PrimeOverL prime_over_from(const TextNode& n, const TextNode& ell_node, const TextNode& rpoly_node) {
    PrimeOverL P;
    ell_node.expect_count(1);
    P.ell = ell_node.int_at(0);
    P.rpoly = rpoly_node.ints();
    if (P.ell < 2 || P.rpoly.size() < 2 || P.rpoly.back() != 1)
        throw ParseError(n.line, n.col, "malformed prime descriptor");
    for (const auto& c : P.rpoly)
        if (c < 0 || c >= P.ell) throw ParseError(rpoly_node.line, rpoly_node.col, "rpoly coefficient outside [0, ell)");
    return P;
}

RealPrime real_prime_from(const TextNode& n) {
    n.expect_count(4);
    RealPrime p;
    p.ell = n.int_at(0);
    Int a = n.int_at(1), b = n.int_at(2), c = n.int_at(3);
    if (a <= 0 || c <= 0 || b < 0 || b >= c) throw ParseError(n.line, n.col, "prime ideal is not in Hermite form");
    p.ideal = OFIdeal::from_hnf(a, b, c);
    p.residue_degree = p.ideal.norm() == p.ell ? 1 : 2;
    if (p.ideal.norm() != p.ell && p.ideal.norm() != p.ell * p.ell)
        throw ParseError(n.line, n.col, "prime ideal norm is not a power of ell");
    return p;
}

TextNode real_prime_leaf(const RealPrime& p) {
    return TextNode::leaf("prime", strs({p.ell, p.ideal.a(), p.ideal.b(), p.ideal.c()}));
}

}  // namespace

// ---------------------------------------------------------------- ideals

TextNode ideal_node(const std::string& key, const OFIdeal& a) { return TextNode::leaf(key, strs({a.a(), a.b(), a.c()})); }

OFIdeal ideal_from_node(const TextNode& n, const RealOrder* OF) {
    n.expect_count(3);
    Int a = n.int_at(0), b = n.int_at(1), c = n.int_at(2);
    if (a <= 0 || c <= 0 || b < 0 || b >= c) throw ParseError(n.line, n.col, "'" + n.key + "' is not in Hermite form");
    OFIdeal I = OFIdeal::from_hnf(a, b, c);
    if (OF && OFIdeal::from_generators(*OF, {{a, b}, {Int(0), c}}) != I)
        throw ParseError(n.line, n.col, "'" + n.key + "' is not an ideal of O_F");
    return I;
}

std::string write_ideal(const OFIdeal& a) {
    TextNode root = tagged_root(kIdealTag);
    root.add(ideal_node("hnf", a));
    return write_text(root);
}

OFIdeal read_ideal(const std::string& text, const RealOrder* OF) {
    TextNode root = parse_tagged(text, kIdealTag);
    root.expect_keys({"hnf"});
    return ideal_from_node(root.child("hnf"), OF);
}

// ---------------------------------------------------------------- relations

TextNode relation_node(const Relation& R) {
    TextNode n = TextNode::section("relation");
    TextNode meta = TextNode::section("meta");
    meta.add(int_leaf("B", R.meta.B));
    meta.add_leaf("seed", {std::to_string(R.meta.seed)});
    meta.add_leaf("trials", {std::to_string(R.meta.trials)});
    meta.add(int_leaf("exponent_bound", R.meta.exponent_bound));
    meta.add(int_leaf("prime_count_bound", R.meta.prime_count_bound));
    n.add(std::move(meta));
    for (const auto& t : R.terms) {
        TextNode term = TextNode::section("term");
        term.add(int_leaf("ell", t.prime.ell));
        term.add_leaf("rpoly", strs(t.prime.rpoly));
        term.add(flag_leaf("conjugate", t.conjugate));
        term.add(int_leaf("exponent", t.exponent));
        n.add(std::move(term));
    }
    return n;
}

Relation relation_from_node(const TextNode& n) {
    n.expect_keys({"meta", "term"});
    Relation R;
    const TextNode& meta = n.child("meta");
    meta.expect_keys({"B", "seed", "trials", "exponent_bound", "prime_count_bound"});
    meta.child("B").expect_count(1);
    R.meta.B = meta.child("B").int_at(0);
    meta.child("seed").expect_count(1);
    R.meta.seed = u64_at(meta.child("seed"), 0);
    meta.child("trials").expect_count(1);
    R.meta.trials = u64_at(meta.child("trials"), 0);
    meta.child("exponent_bound").expect_count(1);
    R.meta.exponent_bound = meta.child("exponent_bound").int_at(0);
    meta.child("prime_count_bound").expect_count(1);
    R.meta.prime_count_bound = meta.child("prime_count_bound").int_at(0);
    for (const TextNode* t : n.all("term")) {
        t->expect_keys({"ell", "rpoly", "conjugate", "exponent"});
        RelationTerm term;
        term.prime = prime_over_from(*t, t->child("ell"), t->child("rpoly"));
        term.conjugate = flag(t->child("conjugate"));
        t->child("exponent").expect_count(1);
        term.exponent = t->child("exponent").int_at(0);
        if (term.exponent < 1) throw ParseError(t->line, t->col, "relation exponent must be positive");
        if (!R.terms.empty() && !(R.terms.back().prime < term.prime))
            throw ParseError(t->line, t->col, "relation terms must be sorted and distinct");
        R.terms.push_back(std::move(term));
    }
    return R;
}

std::string write_relation(const Relation& R) {
    TextNode root = TextNode::section("");
    root.add(relation_node(R));
    return write_text(root);
}

Relation read_relation(const std::string& text) {
    TextNode root = parse_text(text);
    root.expect_keys({"relation"});
    return relation_from_node(root.child("relation"));
}

// ---------------------------------------------------------------- certificates

std::string write_certificate(const Certificate& c) {
    TextNode root = tagged_root(kCertificateTag);
    root.add(ideal_node("u", c.u));
    root.add(ideal_node("v", c.v));
    root.add_leaf("field_desc", strs({c.q, c.a1, c.a2}));
    TextNode& rel = root.add(TextNode::section("relations"));
    for (const auto& e : c.entries) {
        TextNode entry = TextNode::section("entry");
        entry.add(real_prime_leaf(e.prime));
        entry.add_leaf("k", {std::to_string(e.k)});
        entry.add_leaf("loop", {std::to_string(e.loop)});
        entry.add(relation_node(e.relation));
        rel.add(std::move(entry));
    }
    return write_text(root);
}

Certificate read_certificate(const std::string& text) {
    TextNode root = parse_tagged(text, kCertificateTag);
    root.expect_keys({"u", "v", "field_desc", "relations"});
    Certificate c;
    c.u = ideal_from_node(root.child("u"));
    c.v = ideal_from_node(root.child("v"));
    const TextNode& fd = root.child("field_desc");
    fd.expect_count(3);
    c.q = fd.int_at(0);
    c.a1 = fd.int_at(1);
    c.a2 = fd.int_at(2);
    const TextNode& rel = root.child("relations");
    rel.expect_keys({"entry"});
    for (const TextNode* e : rel.all("entry")) {
        e->expect_keys({"prime", "k", "loop", "relation"});
        CertificateEntry entry;
        entry.prime = real_prime_from(e->child("prime"));
        entry.k = small_int(e->child("k"), 1, 1000);
        entry.loop = small_int(e->child("loop"), 1, 2);
        entry.relation = relation_from_node(e->child("relation"));
        c.entries.push_back(std::move(entry));
    }
    return c;
}

// ---------------------------------------------------------------- class groups

std::string write_class_group(const ClassGroupData& G, const WeilContext& ctx) {
    TextNode root = tagged_root(kClassGroupTag);
    root.add_leaf("field_desc", strs({ctx.q, ctx.a1, ctx.a2}));
    root.add(ideal_node("fplus", G.fplus));
    root.add(int_leaf("bound", G.bound));
    root.add_leaf("seed", {std::to_string(G.seed)});
    root.add(int_leaf("h", G.h));
    root.add_leaf("relations_used", {std::to_string(G.relations_used)});
    root.add_leaf("invariants", strs(G.invariants));
    TextNode& fb = root.add(TextNode::section("factor_base"));
    for (const auto& P : G.fb) {
        std::vector<std::string> vals{to_string(P.ell)};
        for (const auto& c : P.rpoly) vals.push_back(to_string(c));
        fb.add_leaf("prime", vals);
    }
    TextNode& W = root.add(TextNode::section("W"));
    for (std::size_t i = 0; i < G.W.rows(); ++i) {
        std::vector<Int> row;
        for (std::size_t j = 0; j < G.W.cols(); ++j) row.push_back(G.W(i, j));
        W.add_leaf("row", strs(row));
    }
    TextNode& gens = root.add(TextNode::section("generators"));
    for (const auto& g : G.generators) gens.add_leaf("row", strs(g));
    return write_text(root);
}

ClassGroupPtr read_class_group(const std::string& text, const CMField& cm) {
    TextNode root = parse_tagged(text, kClassGroupTag);
    root.expect_keys({"field_desc", "fplus", "bound", "seed", "h", "relations_used", "invariants", "factor_base", "W",
                      "generators"});
    const TextNode& fd = root.child("field_desc");
    fd.expect_count(3);
    if (fd.int_at(0) != cm.ctx->q || fd.int_at(1) != cm.ctx->a1 || fd.int_at(2) != cm.ctx->a2)
        throw ParseError(fd.line, fd.col, "class group belongs to a different Weil polynomial");
    auto G = std::make_shared<ClassGroupData>();
    G->fplus = ideal_from_node(root.child("fplus"), cm.OF.get());
    G->order = cm.order_of(G->fplus);
    root.child("bound").expect_count(1);
    G->bound = root.child("bound").int_at(0);
    root.child("seed").expect_count(1);
    G->seed = u64_at(root.child("seed"), 0);
    root.child("h").expect_count(1);
    G->h = root.child("h").int_at(0);
    root.child("relations_used").expect_count(1);
    G->relations_used = u64_at(root.child("relations_used"), 0);
    G->invariants = root.child("invariants").ints();
    Int prod = 1;
    for (std::size_t i = 0; i < G->invariants.size(); ++i) {
        const Int& d = G->invariants[i];
        if (d <= 1 || (i > 0 && d % G->invariants[i - 1] != 0))
            throw ParseError(root.child("invariants").line, 1, "invariants must be > 1 and form a divisor chain");
        prod *= d;
    }
    if (prod != G->h) throw ParseError(root.child("h").line, 1, "h differs from the product of the invariants");

    const TextNode& fb = root.child("factor_base");
    fb.expect_keys({"prime"});
    for (const TextNode* p : fb.all("prime")) {
        if (p->values.size() < 3) throw ParseError(p->line, p->col, "factor-base prime needs ell and rpoly");
        TextNode ell = TextNode::leaf("ell", {p->values[0]});
        TextNode rp = TextNode::leaf("rpoly", std::vector<std::string>(p->values.begin() + 1, p->values.end()));
        ell.line = rp.line = p->line;
        G->fb.push_back(prime_over_from(*p, ell, rp));
    }
    std::size_t n = G->fb.size(), r = G->invariants.size();
    const TextNode& W = root.child("W");
    W.expect_keys({"row"});
    auto wrows = W.all("row");
    if (wrows.size() != n) throw ParseError(W.line, W.col, "W needs one row per factor-base prime");
    G->W = IntMatrix(n, r);
    for (std::size_t i = 0; i < n; ++i) {
        wrows[i]->expect_count(r);
        for (std::size_t j = 0; j < r; ++j) G->W(i, j) = wrows[i]->int_at(j);
    }
    const TextNode& gens = root.child("generators");
    gens.expect_keys({"row"});
    auto grows = gens.all("row");
    if (grows.size() != r) throw ParseError(gens.line, gens.col, "one generator row per invariant expected");
    for (const TextNode* g : grows) {
        g->expect_count(n);
        G->generators.push_back(g->ints());
    }
    G->cache = std::make_shared<PrimeCache>(G->order, G->fb);
    return G;
}

// ---------------------------------------------------------------- requirements

std::string write_requirements(const RequirementsReport& r) {
    TextNode root = tagged_root(kRequirementsTag);
    root.add(flag_leaf("ordinary", r.ordinary));
    root.add(flag_leaf("irreducible", r.irreducible));
    root.add(flag_leaf("units_equal", r.units_equal));
    root.add(flag_leaf("narrow_class_one", r.narrow_class_one));
    root.add(flag_leaf("odd_conductor_gap", r.odd_conductor_gap));
    root.add(flag_leaf("all", r.all()));
    for (const auto& m : r.messages) {
        std::vector<std::string> words;
        std::string w;
        for (char ch : m + " ") {
            if (ch == ' ' || ch == '\t' || ch == '\n') {
                if (!w.empty()) words.push_back(w);
                w.clear();
            } else {
                w += ch == '#' ? '_' : ch;
            }
        }
        if (!words.empty() && words.back() == "{") words.back() = "(";
        root.add_leaf("message", words);
    }
    return write_text(root);
}

RequirementsReport read_requirements(const std::string& text) {
    TextNode root = parse_tagged(text, kRequirementsTag);
    root.expect_keys({"ordinary", "irreducible", "units_equal", "narrow_class_one", "odd_conductor_gap", "all", "message"});
    RequirementsReport r;
    r.ordinary = flag(root.child("ordinary"));
    r.irreducible = flag(root.child("irreducible"));
    r.units_equal = flag(root.child("units_equal"));
    r.narrow_class_one = flag(root.child("narrow_class_one"));
    r.odd_conductor_gap = flag(root.child("odd_conductor_gap"));
    if (flag(root.child("all")) != r.all()) throw ParseError(root.child("all").line, 1, "'all' disagrees with the individual flags");
    for (const TextNode* m : root.all("message")) {
        std::string s;
        for (const auto& w : m->values) s += (s.empty() ? "" : " ") + w;
        r.messages.push_back(s);
    }
    return r;
}

}  // namespace cmendo
