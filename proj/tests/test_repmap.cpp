#include <doctest.h>

#include "csr/repmap.hpp"
#include "testutil.hpp"

using namespace csr;
using namespace csrtest;

namespace {

Trs plus_system() {
    auto sig = nat_stream_sig();
    std::vector<Rule> rules;
    rules.push_back({"", A(sig, "plus", {A(sig, "0"), V("y")}), V("y")});
    rules.push_back({"", A(sig, "plus", {A(sig, "s", {V("x")}), V("y")}),
                     A(sig, "s", {A(sig, "plus", {V("x"), V("y")})})});
    return Trs::make(sig, rules);
}

}  // namespace

TEST_CASE("bottom and top maps") {
    auto sig = nat_stream_sig();
    auto bot = ReplacementMap::bottom(sig);
    auto top = ReplacementMap::top(sig);
    CHECK(bot.at("plus").empty());
    CHECK(top.at("plus") == std::set<int>{1, 2});
    CHECK(top.at("0").empty());  // nullary symbols have no positions either way
    CHECK(leq(bot, top));
    CHECK_FALSE(leq(top, bot));
    CHECK(leq(bot, bot));
    CHECK(join(bot, top) == top);
    CHECK_THROWS_AS((void)bot.at("nosuch"), RepMapError);
}

TEST_CASE("map entries validate against the signature") {
    auto sig = nat_stream_sig();
    auto mu = ReplacementMap::bottom(sig);
    mu.set(sig, "plus", {2});
    CHECK(mu.at("plus") == std::set<int>{2});
    CHECK_THROWS_AS(mu.set(sig, "plus", {3}), RepMapError);
    CHECK_THROWS_AS(mu.set(sig, "plus", {0}), RepMapError);
    CHECK_THROWS_AS(mu.set(sig, "nosuch", {1}), Error);
}

TEST_CASE("domain mismatch is rejected") {
    auto sig = nat_stream_sig();
    Signature other;
    other.add_sort(Sort{"X", SortKind::Data});
    other.add_symbol(Symbol{"c", {}, "X", SymbolKind::Constructor});
    auto a = ReplacementMap::bottom(sig);
    auto b = ReplacementMap::bottom(other);
    CHECK_THROWS_AS((void)join(a, b), RepMapError);
    CHECK_THROWS_AS((void)leq(a, b), RepMapError);
}

TEST_CASE("replacing positions descend only through open arguments") {
    auto sig = nat_stream_sig();
    auto t = A(sig, "incr", {A(sig, "cons", {V("x"), V("xs", "S")})});

    auto mu = ReplacementMap::bottom(sig);
    mu.set(sig, "incr", {1});
    auto ps = replacing_positions(t, mu);
    REQUIRE(ps.size() == 2);
    CHECK(ps[0].to_string() == "e");
    CHECK(ps[1].to_string() == "1");

    CHECK(replacing_positions(t, ReplacementMap::bottom(sig)).size() == 1);
    CHECK(replacing_positions(t, ReplacementMap::top(sig)).size() == 4);

    CHECK(is_replacing(t, mu, Position({1})));
    CHECK_FALSE(is_replacing(t, mu, Position({1, 1})));
    CHECK_FALSE(is_replacing(t, mu, Position({2})));  // not even a position of t

    // The root of a bare variable is open under any map.
    CHECK(replacing_positions(V("x"), mu).size() == 1);
}

TEST_CASE("minimum compatible map of a term") {
    auto sig = nat_stream_sig();
    auto t = A(sig, "incr", {A(sig, "cons", {V("x"), V("xs", "S")})});
    auto mu = minimum_compatible_map(sig, t);
    CHECK(mu.at("incr") == std::set<int>{1});
    CHECK(mu.at("cons").empty());
    CHECK(mu.at("plus").empty());
    CHECK(compatibility(t, mu) == Compatibility::StronglyCompatible);

    CHECK(minimum_compatible_map(sig, V("x")) == ReplacementMap::bottom(sig));

    // Nested non-variable arguments force deeper entries.
    auto u = A(sig, "plus", {A(sig, "s", {A(sig, "0")}), V("y")});
    auto mv = minimum_compatible_map(sig, u);
    CHECK(mv.at("plus") == std::set<int>{1});
    CHECK(mv.at("s") == std::set<int>{1});
}

TEST_CASE("canonical map agrees across both computations") {
    auto R = plus_system();
    auto via_join = canonical_map(R);
    auto direct = canonical_map_direct(R);
    CHECK(via_join == direct);
    CHECK(via_join.at("plus") == std::set<int>{1});
    CHECK(via_join.at("s").empty());
    CHECK(via_join.at("incr").empty());
}

TEST_CASE("canonical lower bound check") {
    auto R = plus_system();
    CHECK(is_canonical_for(ReplacementMap::top(R.signature()), R));
    CHECK(is_canonical_for(canonical_map(R), R));
    CHECK_FALSE(is_canonical_for(ReplacementMap::bottom(R.signature()), R));
}

TEST_CASE("sort-driven map opens data arguments of data constructors") {
    auto sig = nat_stream_sig();
    sig.classify({"plus", "f", "g", "incr"});
    auto mu = mu_delta(sig);
    CHECK(mu.at("0").empty());
    CHECK(mu.at("s") == std::set<int>{1});
    CHECK(mu.at("cons").empty());  // codata result sort: closed everywhere
    CHECK(mu.at("plus").empty());
    CHECK(mu.at("incr").empty());
}

TEST_CASE("sort-driven map requires declared sorts") {
    auto sig = Signature::unsorted();
    sig.add_symbol(Symbol{"c", {}, Signature::kUnsortedSort, SymbolKind::Constructor});
    CHECK_THROWS_AS((void)mu_delta(sig), RepMapError);
}

TEST_CASE("compatibility classification") {
    auto sig = nat_stream_sig();
    auto t = A(sig, "plus", {A(sig, "s", {V("x")}), V("y")});

    CHECK(compatibility(t, ReplacementMap::bottom(sig)) == Compatibility::Incompatible);

    auto mu = ReplacementMap::bottom(sig);
    mu.set(sig, "plus", {1});
    CHECK(compatibility(t, mu) == Compatibility::StronglyCompatible);

    auto wide = ReplacementMap::bottom(sig);
    wide.set(sig, "plus", {1, 2});
    CHECK(compatibility(t, wide) == Compatibility::Compatible);  // y sits at an open slot

    CHECK(compatibility(V("x"), ReplacementMap::bottom(sig)) == Compatibility::Compatible);
    CHECK(compatibility(V("x"), ReplacementMap::top(sig)) == Compatibility::Compatible);
}

TEST_CASE("set compatibility is the weakest member") {
    auto sig = nat_stream_sig();
    auto strong = A(sig, "g", {A(sig, "0")});
    auto mu = ReplacementMap::bottom(sig);
    mu.set(sig, "g", {1});
    REQUIRE(compatibility(strong, mu) == Compatibility::StronglyCompatible);
    CHECK(compatibility({strong, strong}, mu) == Compatibility::StronglyCompatible);
    CHECK(compatibility({strong, V("x")}, mu) == Compatibility::Compatible);
    auto deep = A(sig, "f", {A(sig, "0"), V("y")});
    CHECK(compatibility({strong, deep}, mu) == Compatibility::Incompatible);
}

TEST_CASE("textual form round-trips") {
    auto sig = nat_stream_sig();
    auto mu = ReplacementMap::bottom(sig);
    mu.set(sig, "plus", {1, 2});
    mu.set(sig, "incr", {1});
    const std::string text = map_to_text(mu, sig);
    CHECK(text == "(plus 1 2) (incr 1)");  // declaration order, empties omitted
    CHECK(parse_replacement_map(text, sig) == mu);
    CHECK(parse_replacement_map("", sig) == ReplacementMap::bottom(sig));
    CHECK(parse_replacement_map("(plus)", sig) == ReplacementMap::bottom(sig));
    CHECK(parse_replacement_map(" (plus 2 1)\n(incr 1) ", sig).at("plus") ==
          std::set<int>{1, 2});
}

TEST_CASE("textual form rejects malformed input") {
    auto sig = nat_stream_sig();
    CHECK_THROWS_AS((void)parse_replacement_map("(nosuch 1)", sig), Error);
    CHECK_THROWS_AS((void)parse_replacement_map("(plus 3)", sig), RepMapError);
    CHECK_THROWS_AS((void)parse_replacement_map("(plus 1", sig), RepMapError);
    CHECK_THROWS_AS((void)parse_replacement_map("plus 1)", sig), RepMapError);
    CHECK_THROWS_AS((void)parse_replacement_map("(plus 1) (plus 2)", sig), RepMapError);
    CHECK_THROWS_AS((void)parse_replacement_map("(plus x)", sig), RepMapError);
}
