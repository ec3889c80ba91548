#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "blochlab/expr.hpp"
#include "testutil.hpp"

using namespace blochlab;
using Kind = SymbolExpr::Kind;

TEST_CASE("atomic variable parses to a variable node") {
    const SymbolExpr e = parse_expression("z1", 1);
    REQUIRE(e.root()->kind == Kind::variable);
    CHECK(e.root()->var_index == 1);
}

TEST_CASE("rational expression parses to the expected tree") {
    const SymbolExpr e = parse_expression("z1/(1 - 0.5*z1)", 1);
    const auto* quot = e.root().get();
    REQUIRE(quot->kind == Kind::div);
    CHECK(quot->lhs->kind == Kind::variable);
    const auto* diff = quot->rhs.get();
    REQUIRE(diff->kind == Kind::sub);
    CHECK(diff->lhs->kind == Kind::constant);
    CHECK(diff->lhs->constant == Complex(1.0, 0.0));
    const auto* prod = diff->rhs.get();
    REQUIRE(prod->kind == Kind::mul);
    CHECK(prod->lhs->kind == Kind::constant);
    CHECK(prod->lhs->constant == Complex(0.5, 0.0));
    CHECK(prod->rhs->kind == Kind::variable);
}

TEST_CASE("variable index beyond the dimension is rejected") {
    CHECK_THROWS_AS(parse_expression("z3", 2), ParseError);
    CHECK_THROWS_AS(parse_expression("z0", 2), ParseError);
    CHECK_NOTHROW(parse_expression("z2", 2));
}

TEST_CASE("parse errors carry a position") {
    try {
        parse_expression("z1 + ", 1);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 5);
    }
}

TEST_CASE("unknown function names are reported as such") {
    try {
        parse_expression("sin(z1)", 1);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("unknown function") != std::string::npos);
    }
}

TEST_CASE("imaginary literals") {
    CHECK(parse_expression("i", 1).root()->constant == Complex(0.0, 1.0));
    CHECK(parse_expression("2i", 1).root()->constant == Complex(0.0, 2.0));
    CHECK(parse_expression("0.5i", 1).root()->constant == Complex(0.0, 0.5));
    // a+bi composes through the grammar
    const SymbolExpr e = parse_expression("1+2i", 1);
    REQUIRE(e.root()->kind == Kind::add);
    CHECK(e.root()->rhs->constant == Complex(0.0, 2.0));
}

TEST_CASE("power exponents: nonnegative integers vs reals") {
    CHECK(parse_expression("z1^3", 1).root()->kind == Kind::int_pow);
    CHECK(parse_expression("z1^0", 1).root()->kind == Kind::int_pow);
    CHECK(parse_expression("z1^2.5", 1).root()->kind == Kind::real_pow);
    CHECK(parse_expression("z1^-2", 1).root()->kind == Kind::real_pow);
    CHECK(parse_expression("z1^1e2", 1).root()->kind == Kind::real_pow);
}

TEST_CASE("unary minus binds as a power base") {
    const SymbolExpr e = parse_expression("-z1^2", 1);
    REQUIRE(e.root()->kind == Kind::int_pow);
    CHECK(e.root()->lhs->kind == Kind::negate);
}

TEST_CASE("whitespace is insignificant") {
    const SymbolExpr a = parse_expression("z1/(1-0.5*z1)", 1);
    const SymbolExpr b = parse_expression("  z1 / ( 1 - 0.5 * z1 )  ", 1);
    CHECK(a.structurally_equal(b));
}

TEST_CASE("unparse round-trips hand-written corner cases") {
    const char* cases[] = {
        "z1",
        "z1/(1 - 0.5*z1)",
        "-z1^2",
        "(-z1)^2",
        "ln(4/(1 - 0.5*z1))",
        "1 - z1*z2",
        "z1 + (z2 + 1)",
        "z1 - (z2 - 1)",
        "z1/z2/2",
        "2i*z1 + i",
        "z1^-0.75",
        "(z1 + z2)^3",
        "1.5e-3*z1",
    };
    for (const char* text : cases) {
        CAPTURE(text);
        const SymbolExpr e = parse_expression(text, 2);
        const SymbolExpr reparsed = parse_expression(unparse(e), 2);
        CHECK(reparsed.structurally_equal(e));
    }
}

TEST_CASE("unparse round-trips generated expressions") {
    SplitMix64 rng{20240811};
    for (int i = 0; i < 500; ++i) {
        const SymbolExpr e = testutil::random_expression(rng, 2, 4);
        CAPTURE(unparse(e));
        const SymbolExpr reparsed = parse_expression(unparse(e), 2);
        CHECK(reparsed.structurally_equal(e));
    }
}

TEST_CASE("unparse of a parsed string reparses to the same tree") {
    const char* texts[] = {"z1/(1 - 0.5*z1)", "ln(4/(1 - (0.3-0.4*i)*z1))", "-(z1 + 1)/2"};
    for (const char* text : texts) {
        const SymbolExpr first = parse_expression(text, 1);
        const SymbolExpr second = parse_expression(unparse(first), 1);
        CHECK(second.structurally_equal(first));
    }
}
