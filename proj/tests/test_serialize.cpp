#include "moi/serialize.hpp"

#include <doctest.h>

#include "moi/errors.hpp"
#include "moi/mathml.hpp"
#include "testutil.hpp"

using namespace moi;

TEST_CASE("leaf and row forms match the published examples in display mode") {
    CHECK(display_key(tu::mi("x")) == "mi:x");
    CHECK(serialize(tu::mi("x")) == "mi:x");
    CHECK(display_key(tu::paren(tu::mi("x"))) == "mrow(mo:(,mi:x,mo:))");
    CHECK(display_key(tu::gamma_x_plus_1()) ==
          "mrow(mi:Γ,mo:ivt,mrow(mo:(,mrow(mi:x,mo:+,mn:1),mo:)))");
}

TEST_CASE("canonical keys escape structural characters") {
    CHECK(serialize(tu::paren(tu::mi("x"))) == "mrow(mo:\\(,mi:x,mo:\\))");
    CHECK(serialize(tu::mo(",")) == "mo:\\,");
    CHECK(serialize(tu::mo(":")) == "mo:\\:");
    CHECK(serialize(tu::mo("\\")) == "mo:\\\\");
    CHECK(serialize(tu::mi("a(b")) == "mi:a\\(b");
    // literal ivt/fa payloads on mo stay distinct from the operator tokens
    CHECK(serialize(tu::mo("ivt")) == "mo:\\ivt");
    CHECK(serialize(tu::mo("fa")) == "mo:\\fa");
    CHECK(serialize(tu::mi("ivt")) == "mi:ivt");
    CHECK(serialize(tu::ivt()) == "mo:ivt");
    CHECK(serialize(tu::fa()) == "mo:fa");
}

TEST_CASE("empty leaves serialize with a bare colon") {
    MathNode space;
    space.tag = Tag::mspace;
    CHECK(serialize(space) == "mspace:");
    CHECK(deserialize("mspace:") == space);
    MathNode empty_row;
    empty_row.tag = Tag::mrow;
    CHECK(serialize(empty_row) == "mrow()");
    CHECK(deserialize("mrow()") == empty_row);
}

TEST_CASE("deserialize inverts the examples") {
    CHECK(deserialize("mi:x") == tu::mi("x"));
    CHECK(deserialize("mrow(mo:\\(,mi:x,mo:\\))") == tu::paren(tu::mi("x")));
    CHECK(deserialize("mo:ivt") == tu::ivt());
    CHECK(deserialize("mo:\\ivt") == tu::mo("ivt"));
}

TEST_CASE("deserialize rejects malformed keys with positions") {
    const char* bad[] = {
        "mrow(mi:x",        // unbalanced
        "mi",               // no separator
        "bogus:x",          // unknown tag
        "mrow:x",           // container with leaf form
        "mi(mi:x)",         // leaf with container form
        "mrow(mi:x,)x",     // trailing garbage
        "mi:a(b",           // unescaped paren in content
        "mi:x\\",           // dangling escape
        "mi:\\x",           // non-canonical escape
        "mspace:y",         // content on an empty-leaf tag
        "",                 // nothing
        "mrow(mi:x))",      // extra close
    };
    for (const char* key : bad) {
        CAPTURE(key);
        CHECK_THROWS_AS(deserialize(key), DecodeError);
    }
    try {
        deserialize("mrow(mi:x");
        FAIL("expected DecodeError");
    } catch (const DecodeError& e) {
        CHECK(e.position() > 0);
    }
}

TEST_CASE("round trip on random trees") {
    std::mt19937_64 rng(101);
    tu::TreeGenOptions opts;
    opts.max_depth = 8;
    for (int i = 0; i < 2000; ++i) {
        MathNode tree = tu::random_tree(rng, opts);
        std::string key = serialize(tree);
        CHECK(deserialize(key) == tree);
        // display mode never carries backslash escapes for grammar chars
        std::string display = display_key(tree);
        CHECK(display.size() <= key.size());
    }
}

TEST_CASE("complexity of the published examples") {
    CHECK(complexity(tu::mi("P")) == 1);
    CHECK(complexity(tu::jacobi_tree()) == 4);
    CHECK(complexity(tu::row({tu::mi("x")})) == 2);
}

TEST_CASE("enumerate_mois on the Jacobi polynomial") {
    std::vector<MoiOccurrence> occurrences = enumerate_mois(tu::jacobi_tree());
    REQUIRE(occurrences.size() == 9);

    auto multiset = tu::to_multiset(occurrences);
    CHECK(multiset.size() == 9);  // all keys distinct here
    CHECK(multiset.count({"mi:P", 1}) == 1);
    CHECK(multiset.count({"mi:n", 1}) == 1);
    CHECK(multiset.count({"mi:α", 1}) == 1);
    CHECK(multiset.count({"mi:β", 1}) == 1);
    CHECK(multiset.count({"mi:x", 1}) == 1);
    CHECK(multiset.count({"mrow(mo:\\(,mi:x,mo:\\))", 2}) == 1);
    CHECK(multiset.count({"mrow(mo:\\(,mi:α,mo:\\,,mi:β,mo:\\))", 2}) == 1);
    CHECK(multiset.count({"msubsup(mi:P,mi:n,mrow(mo:\\(,mi:α,mo:\\,,mi:β,mo:\\)))", 3}) ==
          1);
    // the whole expression is included
    CHECK(multiset.count({serialize(tu::jacobi_tree()), 4}) == 1);
}

TEST_CASE("identifier-free expressions produce nothing") {
    // (1+2)^2
    MathNode tree = tu::sup(tu::paren(tu::row({tu::mn("1"), tu::mo("+"), tu::mn("2")})),
                            tu::mn("2"));
    CHECK(enumerate_mois(tree).empty());
}

TEST_CASE("wrapper rows count as distinct subexpressions") {
    std::vector<MoiOccurrence> occurrences = enumerate_mois(tu::row({tu::mi("x")}));
    REQUIRE(occurrences.size() == 2);
    CHECK(occurrences[0].key == "mrow(mi:x)");
    CHECK(occurrences[0].complexity == 2);
    CHECK(occurrences[1].key == "mi:x");
    CHECK(occurrences[1].complexity == 1);
}

TEST_CASE("multiplicity is preserved") {
    MathNode tree = tu::row({tu::mi("x"), tu::mo("+"), tu::mi("x")});
    auto multiset = tu::to_multiset(enumerate_mois(tree));
    CHECK(multiset.at({"mi:x", 1}) == 2);
}

TEST_CASE("extraction agrees with the brute-force oracle") {
    std::mt19937_64 rng(202);
    tu::TreeGenOptions opts;
    opts.max_depth = 8;
    for (int i = 0; i < 500; ++i) {
        MathNode tree = tu::random_tree(rng, opts);
        CHECK(tu::to_multiset(enumerate_mois(tree)) == tu::oracle_moi_multiset(tree));
    }
}

TEST_CASE("occurrence properties on random trees") {
    std::mt19937_64 rng(303);
    tu::TreeGenOptions opts;
    for (int i = 0; i < 300; ++i) {
        MathNode tree = tu::random_tree(rng, opts);
        std::vector<MoiOccurrence> occurrences = enumerate_mois(tree);
        CHECK(occurrences.size() <= node_count(tree));
        uint32_t root_complexity = complexity(tree);
        for (const MoiOccurrence& occ : occurrences) {
            CHECK(occ.complexity == complexity(deserialize(occ.key)));
            CHECK(occ.complexity <= root_complexity);  // subtree monotonicity
        }
    }
}
