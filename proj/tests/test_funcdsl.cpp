#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "genconvex/errors.hpp"
#include "genconvex/expr.hpp"
#include "genconvex/func.hpp"

using namespace genconvex;

TEST_CASE("parse produces the grammar-forced shapes") {
    const Expr t = parse("t", "t");
    CHECK(t.kind() == NodeKind::Variable);
    CHECK(t.name() == "t");

    const Expr sq = parse("x^2", "x");
    REQUIRE(sq.kind() == NodeKind::Pow);
    CHECK(sq.child(0).kind() == NodeKind::Variable);
    CHECK(sq.child(1).kind() == NodeKind::Constant);
    CHECK(sq.child(1).value() == 2.0);

    const Expr gl = parse("1/t", "t");
    REQUIRE(gl.kind() == NodeKind::Div);
    CHECK(gl.child(0).value() == 1.0);
    CHECK(gl.child(1).kind() == NodeKind::Variable);
}

TEST_CASE("precedence and associativity") {
    // pow binds tighter than unary minus
    CHECK(parse("-x^2", "x") == Expr::unary(NodeKind::Neg, parse("x^2", "x")));
    // pow is right associative
    CHECK(parse("2^3^2", "x") == parse("2^(3^2)", "x"));
    CHECK(parse("2^3^2", "x").try_eval(0.0).value() == 512.0);
    // subtraction and division are left associative
    CHECK(parse("8-3-2", "x").try_eval(0).value() == 3.0);
    CHECK(parse("8/4/2", "x").try_eval(0).value() == 1.0);
    CHECK(parse("1+2*3", "x").try_eval(0).value() == 7.0);
    // negative exponent
    CHECK(parse("2^-1", "x").try_eval(0).value() == 0.5);
    CHECK(parse("1.5e1 + .5 + 2E-1", "x").try_eval(0).value() == doctest::Approx(15.7));
    CHECK(parse("sqrt(abs(-x)) + ln(exp(x))", "x").try_eval(4.0).value() == doctest::Approx(6.0));
}

TEST_CASE("parse errors carry byte offsets") {
    auto offset_of = [](const char* text) -> std::size_t {
        try {
            parse(text, "x");
        } catch (const ParseError& e) {
            return e.offset();
        }
        FAIL("expected ParseError for " << text);
        return 0;
    };
    CHECK(offset_of("x + ") == 4);
    CHECK(offset_of("x + y") == 4);       // unknown symbol
    CHECK(offset_of("(x") == 2);          // missing ')'
    CHECK(offset_of("sqrt(x, 1)") == 6);  // arity
    CHECK(offset_of("sin(x)") == 0);      // unknown function
    CHECK(offset_of("x $ 2") == 2);
    CHECK(offset_of("") == 0);
    CHECK(offset_of("1e") == 1);
    CHECK_THROWS_AS(parse("sqrt", "x"), ParseError);
    CHECK_THROWS_AS(parse("1e999", "x"), ParseError);
}

namespace {

// Random grammar-valid source text with minimal parenthesisation and
// irregular spacing.
std::string random_source(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
    const char* consts[] = {"0", "1", "2.5", "0.125", "3e2", "1.0e-3", "7", ".5"};
    auto sp = [&]() { return (rng() & 3) == 0 ? std::string(" ") : std::string(); };
    switch (pick(rng)) {
        case 0: return consts[rng() % 8];
        case 1: return "x";
        case 2: return "-" + random_source(rng, depth - 1);
        case 3: {
            const char* fns[] = {"sqrt", "exp", "ln", "abs"};
            return std::string(fns[rng() % 4]) + "(" + sp() + random_source(rng, depth - 1) + ")";
        }
        case 4: return "(" + random_source(rng, depth - 1) + ")";
        case 5: return random_source(rng, depth - 1) + sp() + "^" + sp() + random_source(rng, depth - 1);
        default: {
            const char ops[] = {'+', '-', '*', '/'};
            return random_source(rng, depth - 1) + sp() + ops[rng() % 4] + sp() + random_source(rng, depth - 1);
        }
    }
}

}  // namespace

TEST_CASE("property: parse(print(parse(s))) == parse(s)") {
    std::mt19937_64 rng(20240601);
    for (int i = 0; i < 2000; ++i) {
        const std::string src = random_source(rng, 5);
        CAPTURE(src);
        const Expr e = parse(src, "x");
        const std::string printed = print(e);
        CAPTURE(printed);
        CHECK(parse(printed, "x") == e);
    }
}

TEST_CASE("evaluation is pure and partial nodes are undefined") {
    const Expr e = parse("sqrt(x) + ln(x) / (x - 2)", "x");
    const Program p(e);
    for (double u : {0.1, 0.5, 1.0, 3.0, 10.0}) {
        const auto a = e.try_eval(u);
        const auto b = p.eval(u);
        REQUIRE(a.has_value() == b.has_value());
        if (a) CHECK(std::bit_cast<std::uint64_t>(*a) == std::bit_cast<std::uint64_t>(*b));
    }
    CHECK_FALSE(p.eval(2.0));   // division by zero
    CHECK_FALSE(p.eval(-1.0));  // sqrt of negative
    CHECK_FALSE(p.eval(0.0));   // ln(0)
    CHECK_FALSE(Program(parse("exp(x)", "x")).eval(1000.0));  // overflow
    CHECK_FALSE(Program(parse("x^-1", "x")).eval(0.0));
}

TEST_CASE("evaluate examples") {
    CHECK(catalog("power", {2.0}).evaluate(0.5) == 0.25);
    const FuncDef c = catalog("constant", {1.0});
    for (double u : {-3.0, 0.0, 0.7, 1e6}) CHECK(c.evaluate(u) == 1.0);
    const FuncDef s = from_expression("sqrt(x)", {-5.0, 5.0});
    CHECK_THROWS_AS(s.evaluate(-1.0), DomainError);
    CHECK(s.evaluate(4.0) == 2.0);
}

TEST_CASE("FuncDef never extrapolates outside its interval") {
    const FuncDef f = from_expression("x^2", {0.0, 1.0});
    CHECK(f.evaluate(1.0) == 1.0);
    CHECK_THROWS_AS(f.evaluate(1.0000001), DomainError);
    CHECK_THROWS_AS(f.evaluate(-1e-300), DomainError);
    CHECK_FALSE(f.try_evaluate(2.0));
}

TEST_CASE("variable inference for one-symbol expressions") {
    CHECK(from_expression("t*(1-t)", {0, 1}).evaluate(0.5) == 0.25);
    CHECK(from_expression("u^3", {0, 2}).evaluate(2.0) == 8.0);
    CHECK(from_expression("4", {0, 1}).evaluate(0.3) == 4.0);
    CHECK_THROWS_AS(from_expression("x + y", {0, 1}), ParseError);
    CHECK(from_expression("exp(1e-2 * z)", {0, 1}).evaluate(0.0) == 1.0);
}

TEST_CASE("catalog families") {
    CHECK(catalog("identity", {}, {0, 1}).evaluate(0.3) == 0.3);
    CHECK(catalog("power", {1.0}).evaluate(0.3) == 0.3);
    CHECK(catalog("recip_power", {1.0}).evaluate(0.25) == 4.0);
    CHECK(catalog("affine", {0.5}).evaluate(2.0) == 1.0);
    CHECK(catalog("affine", {2.0, 1.0}).evaluate(3.0) == 7.0);
    CHECK(catalog("poly", {1.0, 0.0, 3.0}).evaluate(2.0) == 13.0);
    CHECK(catalog("sqrt").evaluate(9.0) == 3.0);

    // natural domains clip the requested interval
    CHECK(catalog("sqrt", {}, {-1.0, 4.0}).domain() == Interval{0.0, 4.0});
    CHECK(catalog("power", {0.5}, {-2.0, 2.0}).domain() == Interval{0.0, 2.0});
    CHECK(catalog("power", {2.0}, {-2.0, 2.0}).domain() == Interval{-2.0, 2.0});

    // a pole at a closed end is allowed; only the endpoint is undefined
    const FuncDef gl = catalog("recip_power", {1.0}, {0.0, 1.0});
    CHECK_THROWS_AS(gl.evaluate(0.0), DomainError);
    CHECK(gl.evaluate(0.5) == 2.0);
    // s <= 0 as an h on (0,1) is still evaluable
    CHECK(catalog("power", {-0.5}, {0.0, 1.0}).evaluate(0.25) == 2.0);
    CHECK(catalog("power", {0.0}, {0.0, 1.0}).evaluate(0.25) == 1.0);

    CHECK_THROWS_AS(catalog("nope"), InvalidArgument);
    CHECK_THROWS_AS(catalog("power"), InvalidArgument);
    CHECK_THROWS_AS(catalog("power", {1.0, 2.0}), InvalidArgument);
    CHECK_THROWS_AS(catalog("identity", {1.0}), InvalidArgument);
    CHECK_THROWS_AS(catalog("sqrt", {}, {-2.0, -1.0}), InvalidArgument);
    CHECK_THROWS_AS(catalog("constant", {NAN}), InvalidArgument);
}

TEST_CASE("property: catalog power on (0,1) lies in (0,1] and increases for s > 0") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> s_dist(0.05, 6.0);
    std::uniform_real_distribution<double> u_dist(1e-6, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double s = s_dist(rng);
        const FuncDef p = catalog("power", {s}, {0.0, 1.0});
        double a = u_dist(rng), b = u_dist(rng);
        if (a > b) std::swap(a, b);
        const double pa = p.evaluate(a), pb = p.evaluate(b);
        CHECK(pa > 0.0);
        CHECK(pb <= 1.0);
        CHECK(pa <= pb);
    }
}
