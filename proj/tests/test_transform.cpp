#include <doctest.h>

#include <fstream>
#include <sstream>

#include "csr/analysis.hpp"
#include "csr/engine.hpp"
#include "csr/parser.hpp"
#include "csr/transform.hpp"
#include "testutil.hpp"

using namespace csr;

namespace {

Trs load(const std::string& name) {
    std::ifstream in(std::string(CSR_CORPUS_DIR) + "/" + name);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_file(ss.str()).trs;
}

void check_same_rules(const Trs& got, const Trs& want) {
    REQUIRE(got.rules().size() == want.rules().size());
    for (size_t i = 0; i < got.rules().size(); ++i) {
        CAPTURE(i);
        CAPTURE(got.rules()[i].lhs->to_string());
        CAPTURE(want.rules()[i].lhs->to_string());
        CHECK(alpha_equal_rule(got.rules()[i], want.rules()[i]));
    }
}

}  // namespace

TEST_CASE("transform: nested stream filter flattens to the reference system") {
    const auto R = load("ex5_3.trs");
    const auto res = shallow_transform(R);
    const auto want = load("ex5_3_shallow.trs");

    check_same_rules(res.output, want);
    for (const auto& sym : want.signature().symbols()) {
        REQUIRE(res.output.signature().has_symbol(sym.name));
        const auto& got = res.output.signature().symbol_or_throw(sym.name);
        CHECK(got.arg_sorts == sym.arg_sorts);
        CHECK(got.result_sort == sym.result_sort);
        CHECK(got.kind == sym.kind);
    }

    using Origin = std::pair<std::string, std::vector<std::string>>;
    const std::map<std::string, Origin> expected{
        {"f_a", {"f", {"a"}}},
        {"f_b", {"f", {"b"}}},
        {"f_b:", {"f", {"b", ":"}}},
    };
    CHECK(res.symbol_map == expected);
    CHECK(res.log == std::vector<std::string>{"split f on argument 1", "split f_b on argument 1"});
}

TEST_CASE("transform: flattening a flat system changes nothing") {
    for (const char* name : {"ex5_3_shallow.trs", "ordinals.trs", "zip_alt_p.trs"}) {
        const std::string fixture = name;
        CAPTURE(fixture);
        const auto R = load(name);
        const auto res = shallow_transform(R);
        CHECK(trs_equal(res.output, R));
        CHECK(res.symbol_map.empty());
        CHECK(res.log.empty());
    }
}

TEST_CASE("transform: output is always flat") {
    for (const char* name : {"ex5_3.trs", "ordinals.trs", "zip_alt_p.trs"}) {
        const std::string fixture = name;
        CAPTURE(fixture);
        const auto res = shallow_transform(load(name));
        CHECK(shallowness(res.output).shallow);
        CHECK(is_inductively_sequential(res.output));
        const auto twice = shallow_transform(res.output);
        CHECK(trs_equal(twice.output, res.output));
    }
}

TEST_CASE("transform: double unwrapping introduces one auxiliary symbol") {
    const auto R = parse_file("(VAR x)(RULES g(s(s(x))) -> x)").trs;
    const auto res = shallow_transform(R);
    const auto want = parse_file("(VAR x y)(RULES g(s(y)) -> g_s(y)  g_s(s(x)) -> x)").trs;
    check_same_rules(res.output, want);
    using Origin = std::pair<std::string, std::vector<std::string>>;
    CHECK(res.symbol_map == std::map<std::string, Origin>{{"g_s", {"g", {"s"}}}});
}

TEST_CASE("transform: inconsistent flat index sets force a split") {
    const auto R = parse_file(
        "(VAR n x xs)"
        "(RULES take(0,xs) -> nil  take(s(n),cons(x,xs)) -> consF(x,take(n,xs)))").trs;
    const auto res = shallow_transform(R);
    const auto want = parse_file(
        "(VAR n x xs z)"
        "(RULES take(0,z) -> take_0(z)"
        "  take_0(xs) -> nil"
        "  take(s(n),z) -> take_s(n,z)"
        "  take_s(n,cons(x,xs)) -> consF(x,take(n,xs)))").trs;
    check_same_rules(res.output, want);
    CHECK(shallowness(res.output).shallow);

    // Ground normal forms are preserved under unrestricted rewriting.
    const auto& sig = res.output.signature();
    std::map<std::string, std::string> vars;
    const auto t0 = parse_term("take(s(0),cons(0,nil))", R.signature(), vars);
    const auto t1 = parse_term("take(s(0),cons(0,nil))", sig, vars);
    const auto nf0 = normalize(t0, R, ReplacementMap::top(R.signature()), {});
    const auto nf1 = normalize(t1, res.output, ReplacementMap::top(sig), {});
    CHECK(nf0.reason == StopReason::NormalForm);
    CHECK(nf1.reason == StopReason::NormalForm);
    CHECK(equal(nf0.result(), nf1.result()));
    CHECK(nf0.result()->to_string() == "consF(0,nil)");
}

TEST_CASE("transform: fresh names avoid existing symbols") {
    const auto R = parse_file(
        "(VAR x)(RULES f(s(s(x))) -> f_s(x)  f_s(x) -> x)").trs;
    const auto res = shallow_transform(R);
    REQUIRE(res.output.signature().has_symbol("f_s#2"));
    const auto want = parse_file(
        "(VAR x y)(RULES f(s(y)) -> f_s#2(y)  f_s#2(s(x)) -> f_s(x)  f_s(x) -> x)").trs;
    check_same_rules(res.output, want);
}

TEST_CASE("transform: systems without definitional trees are rejected") {
    const auto berry = parse_file(
        "(VAR x)(RULES F(a,b,x) -> x  F(b,x,a) -> x  F(x,a,b) -> x)").trs;
    CHECK_THROWS_WITH_AS((void)shallow_transform(berry),
                         doctest::Contains("definitional trees"), Error);
    CHECK_THROWS_AS((void)shallow_transform(load("wallis.trs")), Error);
}
