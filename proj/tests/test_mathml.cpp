#include "moi/mathml.hpp"

#include <doctest.h>

#include "moi/errors.hpp"
#include "moi/serialize.hpp"
#include "testutil.hpp"

using namespace moi;

TEST_CASE("semantics wrapper is stripped, presentation branch kept") {
    MathTree tree = parse_mathml(
        "<math><semantics><mrow><mi>x</mi></mrow>"
        "<annotation-xml encoding=\"MathML-Content\"><ci>x</ci></annotation-xml>"
        "<annotation encoding=\"application/x-tex\">x</annotation>"
        "</semantics></math>");
    CHECK(tree.root == tu::row({tu::mi("x")}));
    REQUIRE(tree.source_tex.has_value());
    CHECK(*tree.source_tex == "x");
    CHECK(tree.foreign_tags.empty());
}

TEST_CASE("math root is the single child, never math itself") {
    MathTree tree = parse_mathml("<math><mi>P</mi></math>");
    CHECK(tree.root.tag == Tag::mi);
    CHECK(tree.root.content == "P");
}

TEST_CASE("multiple children get a synthetic mrow") {
    MathTree tree = parse_mathml("<math><mi>a</mi><mo>+</mo><mi>b</mi></math>");
    CHECK(tree.root.tag == Tag::mrow);
    REQUIRE(tree.root.children.size() == 3);
}

TEST_CASE("attributes are dropped") {
    MathTree tree = parse_mathml(
        "<math display=\"block\"><mi mathvariant=\"bold\" class=\"x\">x</mi></math>");
    CHECK(tree.root == tu::mi("x"));
}

TEST_CASE("empty math is an error") {
    CHECK_THROWS_AS(parse_mathml("<math></math>"), EmptyExpressionError);
    CHECK_THROWS_AS(parse_mathml("<math>  </math>"), EmptyExpressionError);
    CHECK_THROWS_AS(parse_mathml("<notmath/>"), ParseError);
}

TEST_CASE("alttext becomes source_tex") {
    MathTree tree = parse_mathml("<math alttext=\"{}^{1}\"><msup><mrow></mrow><mn>1</mn></msup></math>");
    REQUIRE(tree.source_tex.has_value());
    CHECK(*tree.source_tex == "{}^{1}");
}

TEST_CASE("token content is whitespace-collapsed and NFC-normalized") {
    MathTree tree = parse_mathml("<math><mi>  x \n y </mi></math>");
    CHECK(tree.root.content == "x y");
    // U+212B (angstrom sign) normalizes to U+00C5
    MathTree tree2 = parse_mathml("<math><mi>&#x212B;</mi></math>");
    CHECK(tree2.root.content == "Å");
}

TEST_CASE("foreign tags are stripped and recorded") {
    MathTree tree = parse_mathml(
        "<math><mrow><mi>x</mi><svg><path/></svg><mfenced><mi>y</mi></mfenced></mrow></math>");
    CHECK(tree.root.children.size() == 1);  // svg and mfenced subtrees removed
    REQUIRE(tree.foreign_tags.size() == 2);
    CHECK(tree.foreign_tags[0] == "svg");
    CHECK(tree.foreign_tags[1] == "mfenced");
}

TEST_CASE("filter: footnote tex pattern") {
    MathTree tree = parse_mathml("<math alttext=\"{}^{1}\"><msup><mrow></mrow><mn>1</mn></msup></math>");
    FilterVerdict v = filter_formula(tree);
    CHECK_FALSE(v.keep);
    CHECK(v.reason == RejectReason::footnote_pattern);

    // any content inside the braces matches
    tree.source_tex = "{}^{\\dagger}";
    CHECK(filter_formula(tree).reason == RejectReason::footnote_pattern);
    tree.source_tex = " {}^{ab} ";
    CHECK(filter_formula(tree).reason == RejectReason::footnote_pattern);

    tree.source_tex = "x^{2}";
    CHECK(filter_formula(tree).reason != RejectReason::footnote_pattern);
}

TEST_CASE("filter: structural footnote without tex") {
    MathTree tree = parse_mathml("<math><msup><mrow></mrow><mn>1</mn></msup></math>");
    REQUIRE_FALSE(tree.source_tex.has_value());
    FilterVerdict v = filter_formula(tree);
    CHECK_FALSE(v.keep);
    CHECK(v.reason == RejectReason::footnote_pattern);

    // with a non-footnote tex present, the structural check is not applied
    MathTree with_tex = parse_mathml(
        "<math alttext=\"y\"><msup><mrow></mrow><mn>1</mn></msup></math>");
    CHECK(filter_formula(with_tex).keep);
}

TEST_CASE("filter: svg and unknown tags") {
    MathTree svg = parse_mathml("<math><mrow><mi>x</mi><svg/></mrow></math>");
    CHECK(filter_formula(svg).reason == RejectReason::svg_content);

    MathTree unknown = parse_mathml("<math><mrow><mi>x</mi><mfenced/></mrow></math>");
    CHECK(filter_formula(unknown).reason == RejectReason::unknown_tag);

    MathTree emptied = parse_mathml("<math><mfenced><mi>x</mi></mfenced></math>");
    CHECK(filter_formula(emptied).reason == RejectReason::unknown_tag);
}

TEST_CASE("filter: empty after clean") {
    MathTree tree = parse_mathml("<math><mrow></mrow></math>");
    FilterVerdict v = filter_formula(tree);
    CHECK_FALSE(v.keep);
    CHECK(v.reason == RejectReason::empty_after_clean);
}

TEST_CASE("filter keeps recognized-only trees") {
    MathTree jacobi = parse_mathml(tu::jacobi_xml());
    CHECK(filter_formula(jacobi).keep);
    CHECK(filter_formula(parse_mathml("<math><mi>x</mi></math>")).keep);
}

TEST_CASE("invisible operator classification") {
    MathTree tree = parse_mathml(
        "<math><mrow><mi>f</mi><mo>&#x2061;</mo><mi>x</mi><mo>&#x2062;</mo><mo>+</mo></mrow></math>");
    tree = normalize_invisible_operators(std::move(tree));
    const auto& c = tree.root.children;
    REQUIRE(c.size() == 5);
    CHECK(c[1].op == OperatorKind::function_application);
    CHECK(c[3].op == OperatorKind::invisible_times);
    CHECK(c[4].op == OperatorKind::plain);
    CHECK(c[3].content == "⁢");  // content preserved byte for byte
    // embedded or longer content is not classified
    MathTree longer = parse_mathml("<math><mo>x&#x2062;y</mo></math>");
    longer = normalize_invisible_operators(std::move(longer));
    CHECK(longer.root.op == OperatorKind::plain);
}

TEST_CASE("cleaning is idempotent through to_xml") {
    const char* inputs[] = {
        tu::jacobi_xml(),
        "<math alttext=\"E=mc^2\"><mrow><mi>E</mi><mo>=</mo><mi>m</mi></mrow></math>",
        "<math><mspace/></math>",
        "<math><mtable><mtr><mtd><mi>a</mi></mtd></mtr></mtable></math>",
        "<math><semantics><mfrac><mi>p</mi><mi>q</mi></mfrac>"
        "<annotation encoding=\"application/x-tex\">\\frac{p}{q}</annotation></semantics></math>",
    };
    for (const char* input : inputs) {
        CAPTURE(input);
        MathTree once = parse_mathml(input);
        MathTree twice = parse_mathml(to_xml(once));
        CHECK(once == twice);
    }
}

TEST_CASE("random cleaned trees survive an xml round trip") {
    std::mt19937_64 rng(11);
    tu::TreeGenOptions opts;
    for (int i = 0; i < 300; ++i) {
        MathTree tree;
        tree.root = tu::random_tree(rng, opts);
        MathTree reparsed = parse_mathml(to_xml(tree));
        // op classification is assigned by normalize, not by parse
        MathTree renorm = normalize_invisible_operators(std::move(reparsed));
        MathTree expected = normalize_invisible_operators(tree);
        CHECK(renorm.root == expected.root);
    }
}
