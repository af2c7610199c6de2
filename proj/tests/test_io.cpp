#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

#include "cornersol/io.hpp"

using namespace cornersol;

namespace {

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST(FormatDouble, RoundTripsBitExactly) {
    std::mt19937_64 rng(8101);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-30, 30);
    for (int i = 0; i < 1000; ++i) {
        const double v = std::ldexp(mant(rng), expo(rng));
        EXPECT_EQ(std::stod(format_double(v)), v);
    }
    EXPECT_EQ(std::stod(format_double(std::numbers::pi)), std::numbers::pi);
    EXPECT_EQ(format_double(1.0), "1");
}

TEST(ParseAngle, AcceptsPiRationalForms) {
    EXPECT_DOUBLE_EQ(parse_angle("3pi/2").value(), 1.5 * std::numbers::pi);
    EXPECT_DOUBLE_EQ(parse_angle("3*pi/2").value(), 1.5 * std::numbers::pi);
    EXPECT_DOUBLE_EQ(parse_angle("pi").value(), std::numbers::pi);
    EXPECT_DOUBLE_EQ(parse_angle("-pi").value(), -std::numbers::pi);
    EXPECT_DOUBLE_EQ(parse_angle(" 2*pi/3 ").value(), 2.0 * std::numbers::pi / 3.0);
    EXPECT_DOUBLE_EQ(parse_angle("pi/4").value(), 0.25 * std::numbers::pi);
    EXPECT_DOUBLE_EQ(parse_angle("3*pi").value(), 3.0 * std::numbers::pi);
    EXPECT_TRUE(parse_angle("3pi/2").is_pi_rational());
    EXPECT_EQ(*parse_angle("2pi/4").pi_fraction(), (Rational{1, 2}));
}

TEST(ParseAngle, AcceptsPlainRadians) {
    EXPECT_DOUBLE_EQ(parse_angle("2.5").value(), 2.5);
    EXPECT_DOUBLE_EQ(parse_angle("1e-3").value(), 1e-3);
    EXPECT_FALSE(parse_angle("2.5").is_pi_rational());
}

TEST(ParseAngle, RejectsMalformedText) {
    EXPECT_THROW(parse_angle("abc"), ValidationError);
    EXPECT_THROW(parse_angle(""), ValidationError);
    EXPECT_THROW(parse_angle("pi/0"), ValidationError);
    EXPECT_THROW(parse_angle("pi/x"), ValidationError);
    EXPECT_THROW(parse_angle("3pi/2x"), ValidationError);
    EXPECT_THROW(parse_angle("xpi"), ValidationError);
    EXPECT_THROW(parse_angle("pi 2"), ValidationError);
}

TEST(FormatAngle, CanonicalForms) {
    EXPECT_EQ(format_angle(Angle::pi_times(3, 2)), "3pi/2");
    EXPECT_EQ(format_angle(Angle::pi_times(1, 1)), "pi");
    EXPECT_EQ(format_angle(Angle::pi_times(-1, 1)), "-pi");
    EXPECT_EQ(format_angle(Angle::pi_times(2, 4)), "pi/2");
    EXPECT_EQ(format_angle(Angle::pi_times(-3, 4)), "-3pi/4");
    EXPECT_EQ(format_angle(Angle::pi_times(2, 1)), "2pi");
    EXPECT_EQ(format_angle(Angle::radians(2.0)), "2");
}

TEST(FormatAngle, RoundTrips) {
    for (const Angle& a : {Angle::pi_times(3, 2), Angle::pi_times(-5, 7), Angle::pi_times(4, 1),
                           Angle::radians(1.2345678901234567)}) {
        const Angle back = parse_angle(format_angle(a));
        EXPECT_TRUE(back == a) << format_angle(a);
    }
}

TEST(ParseConfig, TypicalDocument) {
    const RunConfig cfg = parse_config(
        "# corner run\n"
        "problem = laplace\n"
        "omega = 3pi/2\n"
        "bc = dd\n"
        "k = 1\n"
        "xi = 0.66666666666666663\n"
        "r0 = 0.25\n"
        "r1 = 0.75\n"
        "profile = quintic\n"
        "tol = 1e-8\n");
    EXPECT_EQ(cfg.problem, "laplace");
    EXPECT_DOUBLE_EQ(cfg.omega.value(), 4.7123889803846898577);
    EXPECT_EQ(cfg.bc.value(), "dd");
    EXPECT_EQ(cfg.k.value(), 1);
    EXPECT_DOUBLE_EQ(cfg.xi.value(), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(cfg.tol, 1e-8);
    EXPECT_FALSE(cfg.lambda.has_value());
}

TEST(ParseConfig, DefaultsSurviveEmptyDocument) {
    const RunConfig cfg = parse_config("# nothing but comments\n\n");
    EXPECT_EQ(cfg.problem, "laplace");
    EXPECT_EQ(*cfg.omega.pi_fraction(), (Rational{3, 2}));
    EXPECT_DOUBLE_EQ(cfg.r0, 0.25);
    EXPECT_DOUBLE_EQ(cfg.r1, 0.75);
    EXPECT_EQ(cfg.profile, "quintic");
    EXPECT_DOUBLE_EQ(cfg.tol, 1e-10);
}

TEST(ParseConfig, RejectsInvalidValues) {
    EXPECT_THROW(parse_config("omega = 0\n"), ValidationError);
    EXPECT_THROW(parse_config("omega = 5pi/2\n"), ValidationError);
    EXPECT_THROW(parse_config("problem = heat\n"), ValidationError);
    EXPECT_THROW(parse_config("bc = xy\n"), ValidationError);
    EXPECT_THROW(parse_config("r0 = 0.8\nr1 = 0.2\n"), ValidationError);
    EXPECT_THROW(parse_config("profile = linear\n"), ValidationError);
    EXPECT_THROW(parse_config("tol = -1\n"), ValidationError);
    EXPECT_THROW(parse_config("xi = 0\n"), ValidationError);
    EXPECT_THROW(parse_config("lambda = abc\n"), ValidationError);
    EXPECT_THROW(parse_config("k = 1.5\n"), ValidationError);
    EXPECT_THROW(parse_config("volume = 3\n"), ValidationError);
}

TEST(ParseConfig, ParseErrorsCarryPosition) {
    try {
        parse_config("problem = laplace\nomega 3pi/2\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line, 2);
        EXPECT_EQ(e.column, 12);
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
    try {
        parse_config("problem =\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line, 1);
        EXPECT_EQ(e.column, 10);
    }
    try {
        parse_config(" = laplace\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line, 1);
        EXPECT_EQ(e.column, 1);
    }
}

TEST(ParseConfig, EmitParseIdentity) {
    std::mt19937 rng(8102);
    std::uniform_real_distribution<double> unit(0.01, 0.49);
    std::uniform_real_distribution<double> upper(0.5, 0.99);
    std::uniform_real_distribution<double> lam(-1.0, 3.0);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> num(1, 7);
    std::uniform_int_distribution<int> den(1, 4);
    for (int i = 0; i < 100; ++i) {
        RunConfig cfg;
        cfg.problem = coin(rng) ? "stokes" : "laplace";
        // keep omega in (0, 2 pi]
        int n = num(rng), d = den(rng);
        while (n > 2 * d) n = num(rng), d = den(rng);
        cfg.omega = coin(rng) ? Angle::pi_times(n, d) : Angle::radians(unit(rng) + 0.5);
        if (coin(rng)) cfg.lambda = lam(rng);
        if (coin(rng)) cfg.bc = coin(rng) ? "dn" : "nn";
        if (coin(rng)) cfg.k = num(rng);
        if (coin(rng)) cfg.xi = upper(rng);
        cfg.r0 = unit(rng);
        cfg.r1 = upper(rng);
        cfg.profile = coin(rng) ? "exp" : "quintic";
        cfg.tol = std::pow(10.0, -4 - num(rng));

        const std::string text = emit_config(cfg);
        const RunConfig back = parse_config(text);
        EXPECT_EQ(emit_config(back), text) << text;
        EXPECT_TRUE(back.omega == cfg.omega);
        EXPECT_EQ(back.lambda, cfg.lambda);
        EXPECT_EQ(back.k, cfg.k);
        EXPECT_EQ(back.r0, cfg.r0);
        EXPECT_EQ(back.tol, cfg.tol);
    }
}

TEST(Tables, EmitThenParseIsLossless) {
    const auto path = temp_file("cornersol_test_table.csv");
    const std::vector<std::string> columns{"x", "y", "u"};
    std::vector<std::vector<std::string>> rows;
    std::mt19937_64 rng(8103);
    std::uniform_real_distribution<double> val(-10.0, 10.0);
    std::vector<double> originals;
    for (int i = 0; i < 50; ++i) {
        const double x = val(rng), y = val(rng), u = val(rng) * 1e-7;
        originals.insert(originals.end(), {x, y, u});
        rows.push_back({format_double(x), format_double(y), format_double(u)});
    }
    emit_table(path.string(), columns, rows);

    const Table t = parse_table(path.string());
    ASSERT_EQ(t.columns, columns);
    ASSERT_EQ(t.rows.size(), rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_EQ(std::stod(t.rows[i][j]), originals[3 * i + j]);
        }
    }
    std::filesystem::remove(path);
}

TEST(Tables, HeaderOnlyAndErrors) {
    const auto path = temp_file("cornersol_test_empty.csv");
    emit_table(path.string(), {"level", "h"}, {});
    const Table t = parse_table(path.string());
    EXPECT_EQ(t.columns, (std::vector<std::string>{"level", "h"}));
    EXPECT_TRUE(t.rows.empty());
    std::filesystem::remove(path);

    EXPECT_THROW(emit_table(path.string(), {"a", "b"}, {{"1"}}), ValidationError);
    EXPECT_THROW(emit_table("/nonexistent_dir_zz/x.csv", {"a"}, {}), ValidationError);
    EXPECT_THROW(parse_table("/nonexistent_dir_zz/x.csv"), ValidationError);
}

TEST(Tables, LineEndingsAreLf) {
    const auto path = temp_file("cornersol_test_lf.csv");
    emit_table(path.string(), {"a"}, {{"1"}, {"2"}});
    std::ifstream in(path, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_EQ(content, "a\n1\n2\n");
    std::filesystem::remove(path);
}
