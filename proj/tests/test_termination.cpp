#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "csr/engine.hpp"
#include "csr/parser.hpp"
#include "csr/polynomial.hpp"
#include "csr/repmap.hpp"
#include "csr/termination.hpp"
#include "testutil.hpp"

using namespace csr;

namespace {

ParsedFile load(const std::string& name) {
    std::ifstream in(std::string(CSR_CORPUS_DIR) + "/" + name);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_file(ss.str());
}

std::string load_text(const std::string& name) {
    std::ifstream in(std::string(CSR_CORPUS_DIR) + "/" + name);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Full-arity entries for defined symbols, data-sorted argument positions for
/// all constructors.
ReplacementMap permissive_map(const Trs& R) {
    const Signature& sig = R.signature();
    ReplacementMap mu = ReplacementMap::bottom(sig);
    for (const Symbol& sym : sig.symbols()) {
        std::set<int> open;
        for (int i = 1; i <= sym.arity(); ++i) {
            if (sym.kind == SymbolKind::Defined ||
                sig.find_sort(sym.arg_sorts[i - 1])->kind == SortKind::Data)
                open.insert(i);
        }
        mu.set(sig, sym.name, std::move(open));
    }
    return mu;
}

}  // namespace

TEST_CASE("polynomial arithmetic and printing") {
    const Polynomial x1 = Polynomial::variable(1);
    const Polynomial x2 = Polynomial::variable(2);

    CHECK(Polynomial().is_zero());
    CHECK(Polynomial::constant(0) == Polynomial());
    CHECK(Polynomial().to_string() == "0");

    const Polynomial p = Polynomial::constant(2) * x1 * x2 + x1 + Polynomial::constant(1);
    CHECK(p.to_string() == "2*x1*x2 + x1 + 1");
    CHECK(p.coefficient(Monomial{{1, 1}, {2, 1}}) == 2);
    CHECK(p.coefficient(Monomial{{1, 1}}) == 1);
    CHECK(p.coefficient(Monomial{{2, 1}}) == 0);
    CHECK(p.max_variable() == 2);
    CHECK(p.nonnegative());

    const Polynomial square = Polynomial::constant(2) * x1 * x1;
    CHECK(square.to_string() == "2*x1*x1");

    const Polynomial diff = x1 - Polynomial::constant(1);
    CHECK(diff.to_string() == "x1 - 1");
    CHECK_FALSE(diff.nonnegative());

    CHECK((p - p).is_zero());
    CHECK((x1 + x2) * (x1 + x2) ==
          x1 * x1 + Polynomial::constant(2) * x1 * x2 + x2 * x2);
}

TEST_CASE("polynomial substitution and evaluation") {
    const Polynomial zip = Polynomial::variable(1) + Polynomial::constant(1);
    CHECK(zip.substitute({Polynomial::constant(4), Polynomial::constant(9)}) ==
          Polynomial::constant(5));
    CHECK(zip.eval({4, 9}) == 5);

    const Polynomial p =
        Polynomial::constant(2) * Polynomial::variable(1) * Polynomial::variable(2);
    CHECK(p.eval({3, 5}) == 30);
    CHECK(p.substitute({Polynomial::variable(2), Polynomial::variable(1)}) ==
          Polynomial::constant(2) * Polynomial::variable(1) * Polynomial::variable(2));

    CHECK_THROWS_AS((void)Polynomial::variable(3).substitute({Polynomial::constant(1)}),
                    Error);
}

TEST_CASE("term interpretation numbers rule variables by name") {
    const auto pf = load("zip_alt_p.trs");
    const Trs& R = pf.trs;
    const Interpretation interp =
        parse_certificate(load_text("certs/zip_alt_p.cert"), R.signature());

    const Rule& r3 = R.rules()[2];
    const auto idx = variable_indexing(r3.lhs);
    REQUIRE(idx.size() == 3);
    CHECK(idx.at("sigma") == 1);
    CHECK(idx.at("tau") == 2);
    CHECK(idx.at("x") == 3);

    CHECK(interpret(r3.lhs, interp, idx).to_string() == "x3 + 1");
    CHECK(interpret(r3.rhs, interp, idx).to_string() == "x3");

    const Polynomial margin =
        interpret(r3.lhs, interp, idx) - interpret(r3.rhs, interp, idx) -
        Polynomial::constant(1);
    CHECK(margin.is_zero());
}

TEST_CASE("certificate files parse and print round-trip") {
    for (const auto& [trs_name, cert_name] :
         {std::pair{"zip_alt_p.trs", "certs/zip_alt_p.cert"},
          std::pair{"ordinals.trs", "certs/ordinals.cert"}}) {
        const std::string which = trs_name;
        CAPTURE(which);
        const auto pf = load(trs_name);
        const Interpretation interp =
            parse_certificate(load_text(cert_name), pf.trs.signature());
        CHECK(interp.polys.size() == pf.trs.signature().symbols().size());
        const std::string printed = print_certificate(interp, pf.trs.signature());
        CHECK(parse_certificate(printed, pf.trs.signature()) == interp);
    }

    const auto pf = load("ordinals.trs");
    const Interpretation interp =
        parse_certificate(load_text("certs/ordinals.cert"), pf.trs.signature());
    CHECK(interp.polys.at("*").coefficient(Monomial{{1, 1}, {2, 1}}) == 2);
    CHECK(interp.polys.at("*").coefficient(Monomial{{2, 1}}) == 2);
    CHECK(interp.polys.at("omega") == Polynomial::constant(1));
    CHECK(interp.polys.at("S") ==
          Polynomial::variable(1) + Polynomial::constant(1));
}

TEST_CASE("certificate parse errors carry line numbers") {
    const auto pf = load("zip_alt_p.trs");
    const Signature& sig = pf.trs.signature();

    CHECK_THROWS_WITH_AS((void)parse_certificate("foo = 1", sig),
                         doctest::Contains("certificate line 1"), Error);
    CHECK_THROWS_WITH_AS((void)parse_certificate("p = 1\nbar = 2", sig),
                         doctest::Contains("line 2"), Error);
    CHECK_THROWS_WITH_AS((void)parse_certificate("zip(x2,x1) = x1", sig),
                         doctest::Contains("x1"), Error);
    CHECK_THROWS_WITH_AS((void)parse_certificate("p = 1\np = 2", sig),
                         doctest::Contains("duplicate"), Error);
    CHECK_THROWS_WITH_AS((void)parse_certificate("zip(x1,x2) = x3", sig),
                         doctest::Contains("out of range"), Error);
    CHECK_THROWS_WITH_AS((void)parse_certificate("p = -1", sig),
                         doctest::Contains("factor"), Error);
    CHECK_THROWS_WITH_AS((void)parse_certificate("p = 1 junk", sig),
                         doctest::Contains("line 1"), Error);
}

TEST_CASE("shipped certificates validate under their maps") {
    SUBCASE("zip interpretation under the canonical map") {
        const auto pf = load("zip_alt_p.trs");
        const Interpretation interp =
            parse_certificate(load_text("certs/zip_alt_p.cert"), pf.trs.signature());
        const CertCheck ok = check_certificate(pf.trs, canonical_map(pf.trs), interp);
        CAPTURE(ok.reason);
        CHECK(ok.ok);

        // The same interpretation survives opening the head of ':' as well.
        ReplacementMap wider = canonical_map(pf.trs);
        wider.set(pf.trs.signature(), ":", {1});
        CHECK(check_certificate(pf.trs, wider, interp).ok);
    }

    SUBCASE("ordinal interpretation under the declared strategy") {
        const auto pf = load("ordinals.trs");
        REQUIRE(pf.strategy.has_value());
        const Interpretation interp =
            parse_certificate(load_text("certs/ordinals.cert"), pf.trs.signature());
        const CertCheck ok = check_certificate(pf.trs, *pf.strategy, interp);
        CAPTURE(ok.reason);
        CHECK(ok.ok);
    }
}

TEST_CASE("certificate rejection reasons") {
    const auto pf = load("zip_alt_p.trs");
    const Trs& R = pf.trs;
    const ReplacementMap mu = canonical_map(R);
    const Interpretation good =
        parse_certificate(load_text("certs/zip_alt_p.cert"), R.signature());

    SUBCASE("missing polynomial") {
        Interpretation bad = good;
        bad.polys.erase("alt");
        const CertCheck c = check_certificate(R, mu, bad);
        CHECK_FALSE(c.ok);
        CHECK(c.reason == "no polynomial for alt");
    }
    SUBCASE("unknown symbol") {
        Interpretation bad = good;
        bad.polys["ghost"] = Polynomial::constant(1);
        const CertCheck c = check_certificate(R, mu, bad);
        CHECK_FALSE(c.ok);
        CHECK(c.reason == "certificate interprets unknown symbol ghost");
    }
    SUBCASE("formal beyond the arity") {
        Interpretation bad = good;
        bad.polys["p"] = Polynomial::variable(1);
        const CertCheck c = check_certificate(R, mu, bad);
        CHECK_FALSE(c.ok);
        CHECK(c.reason == "polynomial for p uses a formal beyond x0");
    }
    SUBCASE("negative coefficient") {
        Interpretation bad = good;
        bad.polys["alt"] = Polynomial::constant(0) - Polynomial::constant(2);
        const CertCheck c = check_certificate(R, mu, bad);
        CHECK_FALSE(c.ok);
        CHECK(c.reason == "polynomial for alt has a negative coefficient");
    }
    SUBCASE("missing strictness at an open argument") {
        Interpretation bad = good;
        bad.polys["zip"] = Polynomial::constant(5);
        const CertCheck c = check_certificate(R, mu, bad);
        CHECK_FALSE(c.ok);
        CHECK(c.reason == "polynomial for zip is not strict in open argument 1");
    }
    SUBCASE("product terms do not satisfy strictness") {
        Interpretation bad = good;
        bad.polys["zip"] =
            Polynomial::variable(1) * Polynomial::variable(2) + Polynomial::constant(1);
        const CertCheck c = check_certificate(R, mu, bad);
        CHECK_FALSE(c.ok);
        CHECK(c.reason == "polynomial for zip is not strict in open argument 1");
    }
    SUBCASE("unoriented rule") {
        Interpretation bad = good;
        bad.polys["p"] = Polynomial::constant(1);
        const CertCheck c = check_certificate(R, mu, bad);
        CHECK_FALSE(c.ok);
        CHECK(c.reason == "rule r1 is not oriented: [lhs] - [rhs] - 1 = -2");
    }
}

TEST_CASE("certificate search finds the zip interpretation") {
    const auto pf = load("zip_alt_p.trs");
    const ReplacementMap mu = canonical_map(pf.trs);

    const auto found = find_certificate(pf.trs, mu);
    REQUIRE(found.has_value());
    CHECK(check_certificate(pf.trs, mu, *found).ok);

    Interpretation expected;
    expected.polys["0"] = Polynomial();
    expected.polys["1"] = Polynomial();
    expected.polys[":"] = Polynomial();
    expected.polys["p"] = Polynomial::constant(3);
    expected.polys["alt"] = Polynomial::constant(1);
    expected.polys["zip"] = Polynomial::variable(1) + Polynomial::constant(1);
    CHECK(*found == expected);

    const auto again = find_certificate(pf.trs, mu);
    REQUIRE(again.has_value());
    CHECK(*again == *found);
}

TEST_CASE("certificate search respects its budget") {
    const auto pf = load("zip_alt_p.trs");
    const ReplacementMap mu = canonical_map(pf.trs);
    SearchBudget tiny;
    tiny.max_nodes = 10;
    CHECK_FALSE(find_certificate(pf.trs, mu, tiny).has_value());
}

TEST_CASE("loop search on the self-reopening stream") {
    const auto pf = load("ex5_3.trs");
    const ReplacementMap mu = canonical_map(pf.trs);

    const auto w = find_loop(pf.trs, mu, 8);
    REQUIRE(w.has_value());
    CHECK(w->rule_label == "r1");
    REQUIRE(w->steps.size() == 1);
    CHECK(w->steps[0].first == Position::root());
    CHECK(w->steps[0].second == "r1");
    CHECK(w->prefix_len == 0);
    CHECK(w->reentry == Position({2}));

    std::string why;
    CHECK(replay_loop(pf.trs, mu, *w, &why));
    CHECK(why.empty());
}

TEST_CASE("loop search under the permissive full-arity map") {
    const auto pf = load("zip_alt_p.trs");
    const ReplacementMap mu = permissive_map(pf.trs);
    CHECK(mu.at("zip") == std::set<int>{1, 2});
    CHECK(mu.at(":") == std::set<int>{1});

    const auto w = find_loop(pf.trs, mu, 8);
    REQUIRE(w.has_value());
    CHECK(w->rule_label == "r1");
    REQUIRE(w->steps.size() == 1);
    CHECK(w->steps[0].first == Position::root());
    CHECK(w->prefix_len == 0);
    CHECK(w->reentry == Position({2}));
    CHECK(replay_loop(pf.trs, mu, *w));
}

TEST_CASE("loop search finds nothing under the tight maps") {
    const auto zp = load("zip_alt_p.trs");
    CHECK_FALSE(find_loop(zp.trs, canonical_map(zp.trs), 10).has_value());

    const auto ord = load("ordinals.trs");
    REQUIRE(ord.strategy.has_value());
    CHECK_FALSE(find_loop(ord.trs, *ord.strategy, 8).has_value());
}

TEST_CASE("loop search instantiates rule variables") {
    const auto pf = load("ordinals.trs");
    const ReplacementMap top = ReplacementMap::top(pf.trs.signature());

    // nats(x) reaches :(x,nats(S(x))) whose tail matches nats(x) with x
    // instantiated, so re-entry needs matching rather than term equality.
    const auto w = find_loop(pf.trs, top, 3);
    REQUIRE(w.has_value());
    CHECK(w->rule_label == "r9");
    REQUIRE(w->steps.size() == 1);
    CHECK(w->steps[0].first == Position::root());
    CHECK(w->prefix_len == 0);
    CHECK(w->reentry == Position({2}));
    CHECK(replay_loop(pf.trs, top, *w));
}

TEST_CASE("witness replay rejects tampering") {
    const auto pf = load("ex5_3.trs");
    const ReplacementMap mu = canonical_map(pf.trs);
    const auto w = find_loop(pf.trs, mu, 8);
    REQUIRE(w.has_value());

    std::string why;
    SUBCASE("unknown start rule") {
        LoopWitness bad = *w;
        bad.rule_label = "r99";
        CHECK_FALSE(replay_loop(pf.trs, mu, bad, &why));
        CHECK(why == "no rule labelled r99");
    }
    SUBCASE("empty loop part") {
        LoopWitness bad = *w;
        bad.prefix_len = bad.steps.size();
        CHECK_FALSE(replay_loop(pf.trs, mu, bad, &why));
        CHECK(why == "the loop part of the derivation is empty");
    }
    SUBCASE("step at a closed position") {
        LoopWitness bad = *w;
        bad.steps[0].first = Position({2});
        CHECK_FALSE(replay_loop(pf.trs, mu, bad, &why));
        CHECK(why == "step 1: position 2 is not open in s");
    }
    SUBCASE("step whose rule does not match") {
        LoopWitness bad = *w;
        bad.steps[0].second = "r2";
        CHECK_FALSE(replay_loop(pf.trs, mu, bad, &why));
        CHECK(why == "step 1: rule r2 does not match at e");
    }
    SUBCASE("re-entry at a closed position") {
        LoopWitness bad = *w;
        bad.reentry = Position({2, 2});
        CHECK_FALSE(replay_loop(pf.trs, mu, bad, &why));
        CHECK(why == "re-entry position 2.2 is not open in :(b,s)");
    }
    SUBCASE("re-entry subterm that does not match") {
        LoopWitness bad = *w;
        bad.reentry = Position::root();
        CHECK_FALSE(replay_loop(pf.trs, mu, bad, &why));
        CHECK(why ==
              "the term after 0 steps does not match the re-entry subterm :(b,s)");
    }
}

TEST_CASE("termination prover composes its slices") {
    SUBCASE("certificate route") {
        const auto pf = load("zip_alt_p.trs");
        const ReplacementMap mu = canonical_map(pf.trs);
        const TerminationResult r = prove_termination(pf.trs, mu);
        CHECK(r.status == TerminationStatus::Proved);
        REQUIRE(r.certificate.has_value());
        CHECK(check_certificate(pf.trs, mu, *r.certificate).ok);
        CHECK_FALSE(r.loop.has_value());
    }
    SUBCASE("loop route") {
        const auto pf = load("ex5_3.trs");
        const ReplacementMap mu = canonical_map(pf.trs);
        const TerminationResult r = prove_termination(pf.trs, mu);
        CHECK(r.status == TerminationStatus::Disproved);
        REQUIRE(r.loop.has_value());
        CHECK(replay_loop(pf.trs, mu, *r.loop));
        CHECK(r.note == "loop found within 8 steps");
    }
    SUBCASE("loop route under the permissive map") {
        const auto pf = load("zip_alt_p.trs");
        const ReplacementMap mu = permissive_map(pf.trs);
        const TerminationResult r = prove_termination(pf.trs, mu);
        CHECK(r.status == TerminationStatus::Disproved);
        REQUIRE(r.loop.has_value());
        CHECK(replay_loop(pf.trs, mu, *r.loop));
    }
    SUBCASE("open verdict when the budget is too small") {
        const auto pf = load("ordinals.trs");
        REQUIRE(pf.strategy.has_value());
        SearchBudget small;
        small.max_nodes = 20000;
        small.time_limit_ms = 2000;
        const TerminationResult r = prove_termination(pf.trs, *pf.strategy, small);
        CHECK(r.status == TerminationStatus::Unknown);
        CHECK_FALSE(r.certificate.has_value());
        CHECK_FALSE(r.loop.has_value());
        CHECK(r.note ==
              "no certificate in the searched template family and no loop within 25 steps");
    }
}
