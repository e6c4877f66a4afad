#include <doctest.h>

#include "testutil.hpp"

using namespace csr;
using namespace csrtest;

TEST_CASE("term construction and accessors") {
    auto sig = nat_stream_sig();
    auto x = V("x");
    auto xs = V("xs", "S");
    auto t = A(sig, "incr", {A(sig, "cons", {x, xs})});

    CHECK(t->to_string() == "incr(cons(x,xs))");
    CHECK(t->sort() == "S");
    CHECK(t->size() == 4);
    CHECK(t->depth() == 3);
    CHECK_FALSE(t->is_var());
    CHECK(x->is_var());
    CHECK(A(sig, "0")->to_string() == "0");
}

TEST_CASE("checked application rejects ill-sorted terms") {
    auto sig = nat_stream_sig();
    CHECK_THROWS_AS((void)A(sig, "s", {V("xs", "S")}), TermError);
    CHECK_THROWS_AS((void)A(sig, "s", {V("x"), V("y")}), TermError);
    CHECK_THROWS_AS((void)A(sig, "nosuch", {}), TermError);
}

TEST_CASE("structural equality is deep and sort-aware") {
    auto sig = nat_stream_sig();
    auto t1 = A(sig, "plus", {V("x"), A(sig, "0")});
    auto t2 = A(sig, "plus", {V("x"), A(sig, "0")});
    CHECK(equal(t1, t2));
    CHECK_FALSE(equal(t1, A(sig, "plus", {V("y"), A(sig, "0")})));
    CHECK_FALSE(equal(V("x", "N"), V("x", "S")));
}

TEST_CASE("variables_of, linearity, groundness") {
    auto sig = nat_stream_sig();
    auto t = A(sig, "f", {V("x"), A(sig, "s", {V("x")})});
    auto vars = variables_of(t);
    CHECK(vars.size() == 1);
    CHECK(vars.at("x") == "N");
    CHECK_FALSE(is_linear(t));
    CHECK(is_linear(A(sig, "f", {V("x"), V("y")})));
    CHECK_FALSE(is_ground(t));
    CHECK(is_ground(A(sig, "s", {A(sig, "0")})));
}

TEST_CASE("rename_vars appends the suffix everywhere") {
    auto sig = nat_stream_sig();
    auto t = rename_vars(A(sig, "f", {V("x"), V("y")}), "$1");
    CHECK(t->to_string() == "f(x$1,y$1)");
}

TEST_CASE("positions in preorder") {
    auto sig = nat_stream_sig();
    auto t = A(sig, "incr", {A(sig, "cons", {V("x"), V("xs", "S")})});
    auto ps = positions(t);
    REQUIRE(ps.size() == 4);
    CHECK(ps[0].to_string() == "e");
    CHECK(ps[1].to_string() == "1");
    CHECK(ps[2].to_string() == "1.1");
    CHECK(ps[3].to_string() == "1.2");

    auto nv = positions_nonvar(t);
    REQUIRE(nv.size() == 2);
    CHECK(nv[0].is_root());
    CHECK(nv[1].to_string() == "1");

    auto pv = positions_var(t);
    REQUIRE(pv.size() == 2);
    CHECK(pv[0].to_string() == "1.1");
    CHECK(pv[1].to_string() == "1.2");
}

TEST_CASE("position parsing and printing") {
    CHECK(Position::parse("e")->is_root());
    CHECK(Position::parse("1.2")->path() == std::vector<int>{1, 2});
    CHECK(Position::parse("12").has_value());
    CHECK_FALSE(Position::parse("").has_value());
    CHECK_FALSE(Position::parse("0").has_value());
    CHECK_FALSE(Position::parse("1.").has_value());
    CHECK_FALSE(Position::parse("1..2").has_value());
    CHECK_FALSE(Position::parse("a").has_value());
    CHECK(Position::root().to_string() == "e");
    CHECK(Position({3, 1, 4}).to_string() == "3.1.4");
}

TEST_CASE("position prefixes and concatenation") {
    Position p({1});
    Position q({1, 2});
    CHECK(p.is_prefix_of(q));
    CHECK_FALSE(q.is_prefix_of(p));
    CHECK(Position::root().is_prefix_of(p));
    CHECK(p.concat(Position({2})) == q);
    CHECK(p.child(2) == q);
}

TEST_CASE("postorder puts children before parents, left to right") {
    auto sig = nat_stream_sig();
    auto t = A(sig, "f", {A(sig, "g", {A(sig, "a")}), A(sig, "b")});
    auto ps = positions(t);
    std::sort(ps.begin(), ps.end(), postorder_less);
    REQUIRE(ps.size() == 4);
    CHECK(ps[0].to_string() == "1.1");
    CHECK(ps[1].to_string() == "1");
    CHECK(ps[2].to_string() == "2");
    CHECK(ps[3].to_string() == "e");
}

TEST_CASE("subterm_at and replace_at") {
    auto sig = nat_stream_sig();
    auto t = A(sig, "plus", {A(sig, "s", {A(sig, "0")}), V("y")});
    CHECK(subterm_at(t, Position({1, 1}))->to_string() == "0");
    CHECK(subterm_at(t, Position::root()).get() == t.get());
    CHECK_THROWS_AS((void)subterm_at(t, Position({3})), TermError);

    auto r = replace_at(t, Position({1}), A(sig, "0"));
    CHECK(r->to_string() == "plus(0,y)");
    CHECK(t->to_string() == "plus(s(0),y)");  // original untouched
    CHECK_THROWS_AS((void)replace_at(t, Position({1}), V("zs", "S")), TermError);
    CHECK_THROWS_AS((void)replace_at(t, Position({1, 1, 1}), A(sig, "0")), TermError);
}

TEST_CASE("substitution binds sort-preserving and detects conflicts") {
    auto sig = nat_stream_sig();
    Substitution sub;
    CHECK(sub.bind("x", "N", A(sig, "0")));
    CHECK(sub.bind("x", "N", A(sig, "0")));  // same value again is fine
    CHECK_FALSE(sub.bind("x", "N", A(sig, "a")));
    CHECK_THROWS_AS(sub.bind("y", "N", V("zs", "S")), TermError);
    CHECK(sub.apply(A(sig, "plus", {V("x"), V("q")}))->to_string() == "plus(0,q)");
}

TEST_CASE("matching instantiates the pattern only") {
    auto sig = nat_stream_sig();
    auto pattern = A(sig, "plus", {V("x"), A(sig, "0")});
    auto subject = A(sig, "plus", {A(sig, "s", {A(sig, "0")}), A(sig, "0")});
    auto sub = match(pattern, subject);
    REQUIRE(sub.has_value());
    CHECK(sub->size() == 1);
    CHECK((*sub->lookup("x"))->to_string() == "s(0)");

    CHECK_FALSE(match(pattern, A(sig, "plus", {A(sig, "0"), A(sig, "a")})).has_value());
    CHECK_FALSE(match(subject, pattern).has_value());  // pattern vars only on the left
    // Non-linear pattern requires equal images.
    auto nl = A(sig, "f", {V("x"), V("x")});
    CHECK(match(nl, A(sig, "f", {A(sig, "0"), A(sig, "0")})).has_value());
    CHECK_FALSE(match(nl, A(sig, "f", {A(sig, "0"), A(sig, "a")})).has_value());
    // A variable pattern of the wrong sort does not match.
    CHECK_FALSE(match(V("z", "S"), A(sig, "0")).has_value());
}

TEST_CASE("unification computes an mgu with occurs check") {
    auto sig = nat_stream_sig();
    auto l = A(sig, "plus", {V("x"), A(sig, "0")});
    auto r = A(sig, "plus", {A(sig, "0"), V("y")});
    auto mgu = unify(l, r);
    REQUIRE(mgu.has_value());
    CHECK((*mgu->lookup("x"))->to_string() == "0");
    CHECK((*mgu->lookup("y"))->to_string() == "0");
    CHECK(equal(mgu->apply(l), mgu->apply(r)));

    CHECK_FALSE(unify(V("x"), A(sig, "g", {V("x")})).has_value());
    CHECK_FALSE(unify(A(sig, "0"), A(sig, "a")).has_value());
    CHECK_FALSE(unify(V("x", "N"), V("z", "S")).has_value());

    auto swap = unify(A(sig, "f", {V("x"), V("y")}), A(sig, "f", {V("y"), V("x")}));
    REQUIRE(swap.has_value());
    CHECK(equal(swap->apply(A(sig, "f", {V("x"), V("y")})),
                swap->apply(A(sig, "f", {V("y"), V("x")}))));

    // The solved form is idempotent: x through g meets a chained binding.
    auto chain = unify(A(sig, "f", {V("x"), A(sig, "g", {V("x")})}),
                       A(sig, "f", {A(sig, "0"), V("y")}));
    REQUIRE(chain.has_value());
    CHECK((*chain->lookup("y"))->to_string() == "g(0)");
}

TEST_CASE("rule system construction validates and classifies") {
    auto sig = nat_stream_sig();
    std::vector<Rule> rules;
    rules.push_back({"", A(sig, "plus", {A(sig, "0"), V("y")}), V("y")});
    rules.push_back({"", A(sig, "plus", {A(sig, "s", {V("x")}), V("y")}),
                     A(sig, "s", {A(sig, "plus", {V("x"), V("y")})})});
    auto R = Trs::make(sig, rules);

    CHECK(R.rules()[0].label == "r1");
    CHECK(R.rules()[1].label == "r2");
    CHECK(R.is_defined("plus"));
    CHECK(R.is_constructor("s"));
    CHECK(R.is_constructor("f"));  // no rule roots it here
    CHECK(R.rule_by_label("r2") == &R.rules()[1]);
    CHECK(R.rule_by_label("nope") == nullptr);
    CHECK(R.rules_of("plus").size() == 2);

    auto ctors = R.signature().constructors_of("N");
    REQUIRE(ctors.size() >= 4);
    CHECK(ctors[0]->name == "0");  // declaration order preserved
    CHECK(ctors[1]->name == "s");
}

TEST_CASE("rule system construction rejects invalid rules") {
    auto sig = nat_stream_sig();
    CHECK_THROWS_AS((void)Trs::make(sig, {{"", V("x"), V("x")}}), TermError);
    CHECK_THROWS_AS((void)Trs::make(sig, {{"", A(sig, "g", {V("x")}), V("y")}}), TermError);
    CHECK_THROWS_AS(
        Trs::make(sig, {{"", A(sig, "incr", {V("zs", "S")}), V("x", "N")}}), TermError);
    CHECK_THROWS_AS((void)Trs::make(sig, {{"dup", A(sig, "g", {V("x")}), V("x")},
                                    {"dup", A(sig, "g", {A(sig, "0")}), A(sig, "0")}}),
                    TermError);
}

TEST_CASE("alpha equality of rules") {
    auto sig = nat_stream_sig();
    Rule a{"", A(sig, "f", {V("x"), V("y")}), V("x")};
    Rule b{"", A(sig, "f", {V("u"), V("v")}), V("u")};
    Rule c{"", A(sig, "f", {V("u"), V("v")}), V("v")};
    Rule d{"", A(sig, "f", {V("u"), V("u")}), V("u")};
    CHECK(alpha_equal_rule(a, b));
    CHECK_FALSE(alpha_equal_rule(a, c));
    CHECK_FALSE(alpha_equal_rule(a, d));
}

TEST_CASE("critical pairs of overlapping rules") {
    Signature sig;
    sig.add_sort(Sort{"L", SortKind::Data});
    sig.set_sorts_declared(true);
    sig.add_symbol(Symbol{"nil", {}, "L", SymbolKind::Constructor});
    sig.add_symbol(Symbol{"zip", {"L", "L"}, "L", SymbolKind::Defined});
    std::vector<Rule> rules;
    rules.push_back({"", Term::app(sig, "zip", {Term::app(sig, "nil", {}), Term::var("y", "L")}),
                     Term::app(sig, "nil", {})});
    rules.push_back({"", Term::app(sig, "zip", {Term::var("x", "L"), Term::app(sig, "nil", {})}),
                     Term::app(sig, "nil", {})});
    auto R = Trs::make(sig, rules);
    auto cps = critical_pairs(R);
    REQUIRE(cps.size() == 2);  // each rule overlaps the other at the root
    for (const auto& cp : cps) {
        CHECK(cp.at.is_root());
        CHECK(cp.left->to_string() == "nil");
        CHECK(cp.right->to_string() == "nil");
    }
}

TEST_CASE("orthogonal systems have no critical pairs") {
    auto sig = nat_stream_sig();
    std::vector<Rule> rules;
    rules.push_back({"", A(sig, "plus", {A(sig, "0"), V("y")}), V("y")});
    rules.push_back({"", A(sig, "plus", {A(sig, "s", {V("x")}), V("y")}),
                     A(sig, "s", {A(sig, "plus", {V("x"), V("y")})})});
    auto R = Trs::make(sig, rules);
    CHECK(critical_pairs(R).empty());
}

TEST_CASE("nested overlap yields a proper critical pair") {
    // g(g(x)) -> x overlaps itself below the root.
    auto sig = nat_stream_sig();
    auto R = Trs::make(sig, {{"", A(sig, "g", {A(sig, "g", {V("x")})}), V("x")}});
    auto cps = critical_pairs(R);
    REQUIRE(cps.size() == 1);
    CHECK(cps[0].at.to_string() == "1");
    // Peak g(g(g(x$1))): inner step gives g(x$1), outer step gives g(x$1).
    CHECK(cps[0].left->to_string() == "g(x$1)");
    CHECK(cps[0].right->to_string() == "g(x$1)");
}
