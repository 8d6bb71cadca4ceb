#include <filesystem>
#include <fstream>
#include <sstream>

#include "cmendo/cli.hpp"
#include "cmendo/endoring.hpp"
#include "cmendo/errors.hpp"
#include "cmendo/serialize.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"

using namespace cmendo;

namespace {

struct Run {
    int rc;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int rc = run_command(args, out, err);
    return {rc, out.str(), err.str()};
}

std::string job(const char* name) { return (fx::dir() / "jobs" / name).string(); }
std::string golden(const char* name) { return (fx::dir() / "golden" / name).string(); }

Errc parse_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::Internal;
}

}  // namespace

TEST_CASE("golden certificates re-serialize byte for byte") {
    for (const char* name : {"q61_p13.cert", "q82307_v.cert"}) {
        std::string text = fx::slurp(golden(name));
        Certificate c = read_certificate(text);
        CHECK(write_certificate(c) == text);
        CHECK(read_certificate(write_certificate(c)) == c);
    }
}

TEST_CASE("certify reproduces the q61 golden certificate") {
    auto cm = fx::field(fx::kTwoPrimes);
    DriverConfig cfg;
    cfg.C_bound = 12;
    Certificate c = certify(*fx::groups(fx::kTwoPrimes), parse_ideal_expr(*cm, "13"), cm->v, cfg);
    CHECK(write_certificate(c) == fx::slurp(golden("q61_p13.cert")));
}

TEST_CASE("class groups and requirements round trip") {
    auto cm = fx::field(fx::kTwoPrimes);
    ClassGroupPtr G = fx::groups(fx::kTwoPrimes)->get(cm->v);
    std::string text = write_class_group(*G, *cm->ctx);
    ClassGroupPtr H = read_class_group(text, *cm);
    CHECK(H->h == G->h);
    CHECK(H->invariants == G->invariants);
    CHECK(write_class_group(*H, *cm->ctx) == text);

    RequirementsReport r = validate_requirements(fx::field(fx::kMain)->ctx, fx::field(fx::kMain)->OK);
    CHECK(read_requirements(write_requirements(r)) == r);
}

TEST_CASE("malformed documents raise ParseError") {
    std::string good = fx::slurp(golden("q61_p13.cert"));
    auto edit = [&](const std::string& from, const std::string& to) {
        std::string s = good;
        auto at = s.find(from);
        REQUIRE(at != std::string::npos);
        return s.replace(at, from.size(), to);
    };
    for (const std::string& bad : {
             edit("cmendo-cert/1", "cmendo-cert/2"),
             edit("    k 1\n", "    k 1\n    colour red\n"),
             edit("exponent 6", "exponent -6"),
             edit("conjugate false", "conjugate maybe"),
             edit("u 1 9 13", "u 1 9"),
             edit("rpoly 6 1", "rpoly 6 0"),
             good.substr(0, good.size() - 2),
             std::string(""),
         }) {
        CHECK(parse_code([&] { read_certificate(bad); }) == Errc::ParseError);
    }
    try {
        read_certificate(edit("    k 1\n", "    k 1\n    colour red\n"));
    } catch (const ParseError& e) {
        CHECK(e.line() == 9);
    }
}

TEST_CASE("job files") {
    for (const auto& entry : std::filesystem::directory_iterator(fx::dir() / "jobs")) {
        CAPTURE(entry.path().string());
        JobSpec j = read_job(fx::slurp(entry.path()));
        CHECK(j.command.has_value());
        CHECK(j.q.has_value());
    }
    JobSpec a = read_job("cmendo-job/1\ncommand certify\nfield_desc 61 3 117\ninputs {\n  u 13\n}\n");
    CHECK(*a.u == "13");
    CHECK_FALSE(a.v.has_value());
    JobSpec b;
    b.u = "1";
    b.C_bound = Int(12);
    JobSpec m = merge_jobs(a, b);
    CHECK(*m.u == "1");
    CHECK(*m.C_bound == 12);
    CHECK(*m.command == "certify");

    CHECK(parse_code([] { read_job("cmendo-job/1\ncommand certify\nspeed 3\n"); }) == Errc::ParseError);
    CHECK(parse_code([] { read_job("cmendo-job/1\nconfig {\n  seed -1\n}\n"); }) == Errc::ParseError);
    CHECK(parse_code([] { read_job("cmendo-job/1\nconfig {\n  mu fast\n}\n"); }) == Errc::ParseError);
    CHECK(parse_code([] { read_job("cmendo-cert/1\n"); }) == Errc::ParseError);
}

TEST_CASE("ideal expressions") {
    auto cm = fx::field(fx::kMain);
    CHECK(parse_ideal_expr(*cm, "v") == cm->v);
    CHECK(parse_ideal_expr(*cm, "1") == OFIdeal::unit());
    CHECK(parse_ideal_expr(*cm, "11*131") == cm->v);
    CHECK(parse_ideal_expr(*cm, "hnf:1,683,1441") == cm->v);
    CHECK(parse_ideal_expr(*cm, "131") == fx::hnf(*cm, 1, 28, 131));
    CHECK(ideal_expr(*cm, cm->v) == "11#1*131#1");
    for (const auto& d : of_divisors(*cm->OF, of_pow(*cm->OF, cm->v, 2)))
        CHECK(parse_ideal_expr(*cm, ideal_expr(*cm, d)) == d);
    for (const char* bad : {"", "12", "11#9", "11^", "hnf:1,2", "v*", "x"})
        CHECK_THROWS(parse_ideal_expr(*cm, bad));

    auto d3 = fx::field(fx::kDepth3);
    CHECK(ideal_expr(*d3, d3->v) == "3#2^3");
}

TEST_CASE("command exit codes") {
    const std::string q61[] = {"--q", "61", "--a1", "3", "--a2", "117"};
    auto with = [&](std::vector<std::string> rest) {
        std::vector<std::string> a(std::begin(q61), std::end(q61));
        a.insert(a.end(), rest.begin(), rest.end());
        return a;
    };

    Run r = cli({"--q", "82307", "--a1", "658", "--a2", "263610", "ideal-id"});
    CHECK(r.rc == 0);
    CHECK(r.out.find("expr 11#1*131#1") != std::string::npos);

    CHECK(cli({"--job", job("q82307_validate.job")}).rc == 0);
    CHECK(cli({"--job", job("q11_zeta5_validate.job")}).out.find("units_equal false") != std::string::npos);
    CHECK(cli({"--q", "82307", "--a1", "658", "--a2", "263610", "certify", "--u", "v"}).rc == 3);
    CHECK(cli({"--q", "12", "--a1", "1", "--a2", "1", "validate"}).rc == 2);
    CHECK(cli(with({"--bogus", "validate"})).rc == 2);
    CHECK(cli(with({"verify", "--cert", "/nonexistent.cert"})).rc == 2);
    CHECK(cli(with({"--C", "2", "certify", "--u", "1"})).rc == 2);
    CHECK(cli({"--job", job("q61_certify.job"), "validate"}).rc == 2);
    CHECK(cli({"validate"}).rc == 2);

    Run c = cli({"--job", job("q61_certify.job")});
    REQUIRE(c.rc == 0);
    CHECK(c.out == fx::slurp(golden("q61_p13.cert")));

    Run ok = cli(with({"--C", "12", "--simulate", "hidden=13;seed=5", "verify", "--cert", golden("q61_p13.cert")}));
    CHECK(ok.rc == 0);
    CHECK(ok.out.find("result true") != std::string::npos);
    Run no = cli(with({"--C", "12", "--simulate", "hidden=5*13", "verify", "--cert", golden("q61_p13.cert")}));
    CHECK(no.rc == 1);
    CHECK(no.out.find("result false") != std::string::npos);

    Run e = cli({"--job", job("q61_compute_endo.job")});
    CHECK(e.rc == 0);
    CHECK(e.out.find("13#2") != std::string::npos);
}
