#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "nhm/csv.hpp"
#include "nhm/random.hpp"
#include "nhm/stats.hpp"

using namespace nhm;

TEST(Rng, StandardSequence) {
    // 10000th output of a default-seeded mt19937_64, fixed by the standard
    Rng rng;
    rng.discard(9999);
    EXPECT_EQ(rng(), 9981545732273789042ULL);
}

TEST(Rng, UniformRangeAndDeterminism) {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        const double x = uniform01(a);
        EXPECT_GE(x, 0.0);
        EXPECT_LT(x, 1.0);
        EXPECT_EQ(x, uniform01(b));
    }
    Rng c(1);
    const Matrix m1 = random_complex_matrix(c, 3);
    Rng d(1);
    EXPECT_EQ(m1, random_complex_matrix(d, 3));
    Rng e(3);
    const Matrix h = random_hermitian(e, 4);
    EXPECT_LT((h - h.adjoint()).norm(), 1e-15);
}

TEST(Stats, LineAndPowerFits) {
    const std::vector<double> x{1, 2, 3, 4};
    const std::vector<double> y{3, 5, 7, 9};
    const LineFit f = fit_line(x, y);
    EXPECT_NEAR(f.slope, 2.0, 1e-14);
    EXPECT_NEAR(f.intercept, 1.0, 1e-14);
    const std::vector<double> n{2, 4, 8, 16};
    std::vector<double> p;
    for (double v : n) p.push_back(3.0 / (v * v));
    EXPECT_NEAR(fit_power_law(n, p).slope, -2.0, 1e-12);
}

TEST(Stats, TailDecreasing) {
    const std::vector<double> v{5, 1, 3, 2, 1};
    EXPECT_TRUE(tail_decreasing(v, 3));
    EXPECT_FALSE(tail_decreasing(v, 4));
}

TEST(Csv, SeventeenDigitsAndSignedZero) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(-0.0), "0");
    EXPECT_EQ(format_double(1.0), "1");
    EXPECT_EQ(format_double(-2.5e-300), "-2.5e-300");
    for (double x : {M_PI, 1.0 / 3.0, 6.02214076e23, -1e-17}) EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(Csv, HeaderAndRows) {
    std::ostringstream out;
    CsvWriter w(out, {"a", "b"});
    w.row(std::vector<double>{1.0, 0.5});
    w.row(std::vector<std::string>{"x", "y"});
    EXPECT_EQ(out.str(), "a,b\n1,0.5\nx,y\n");
    EXPECT_THROW(w.row(std::vector<double>{1.0}), std::exception);
}
