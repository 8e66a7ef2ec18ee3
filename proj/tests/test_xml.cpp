#include "moi/xml.hpp"

#include <doctest.h>

#include "moi/errors.hpp"

using namespace moi;

TEST_CASE("basic element tree") {
    xml::Element root = xml::parse("<math><mrow><mi>x</mi><mo>+</mo></mrow></math>");
    CHECK(root.name == "math");
    REQUIRE(root.children.size() == 1);
    const xml::Element& row = root.children[0];
    REQUIRE(row.children.size() == 2);
    CHECK(row.children[0].name == "mi");
    CHECK(row.children[0].text == "x");
    CHECK(row.children[1].text == "+");
}

TEST_CASE("attributes, self-closing, prolog, comments") {
    xml::Element root = xml::parse(
        "<?xml version=\"1.0\"?>\n"
        "<!-- formula -->\n"
        "<math alttext=\"x^2\" display='block'>"
        "<mspace width=\"1em\"/><!-- inner --><mi mathvariant=\"bold\">x</mi>"
        "</math>");
    REQUIRE(root.attribute("alttext") != nullptr);
    CHECK(*root.attribute("alttext") == "x^2");
    CHECK(*root.attribute("display") == "block");
    CHECK(root.attribute("missing") == nullptr);
    REQUIRE(root.children.size() == 2);
    CHECK(root.children[0].name == "mspace");
    CHECK(root.children[1].text == "x");
}

TEST_CASE("entities and namespaces") {
    xml::Element root = xml::parse(
        "<m:math xmlns:m=\"http://www.w3.org/1998/Math/MathML\">"
        "<m:mo>&lt;</m:mo><m:mo>&#x2062;</m:mo><m:mi>&#945;</m:mi><m:mtext>a&amp;b</m:mtext>"
        "</m:math>");
    CHECK(root.name == "math");
    REQUIRE(root.children.size() == 4);
    CHECK(root.children[0].text == "<");
    CHECK(root.children[1].text == "⁢");
    CHECK(root.children[2].text == "α");
    CHECK(root.children[3].text == "a&b");
}

TEST_CASE("cdata") {
    xml::Element root = xml::parse("<math><mtext><![CDATA[a<b&c]]></mtext></math>");
    CHECK(root.children[0].text == "a<b&c");
}

TEST_CASE("malformed input reports byte offsets") {
    CHECK_THROWS_AS(xml::parse("<math><mi>x</mo></math>"), ParseError);
    CHECK_THROWS_AS(xml::parse("<math><mi>x"), ParseError);
    CHECK_THROWS_AS(xml::parse("not xml"), ParseError);
    CHECK_THROWS_AS(xml::parse("<math>&unknown;</math>"), ParseError);
    CHECK_THROWS_AS(xml::parse("<a/><b/>"), ParseError);

    try {
        xml::parse("<math><mi>x</mo></math>");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() > 0);
    }
}

TEST_CASE("text escaping round trip") {
    xml::Element root = xml::parse("<a>" + xml::escape_text("x<y>&z") + "</a>");
    CHECK(root.text == "x<y>&z");
}
