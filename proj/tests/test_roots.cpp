#include <gtest/gtest.h>

#include <cmath>

#include "gclm/roots.hpp"

using namespace gclm;

TEST(Roots, DottieNumber) {
  const double x = find_root([](double x) { return std::cos(x) - x; }, 0.0, 1.0);
  EXPECT_NEAR(x, 0.7390851332151607, 1e-14);
}

TEST(Roots, RejectsUnbracketed) {
  EXPECT_ANY_THROW(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0));
}

TEST(Roots, ParabolaMinimum) {
  const auto m = find_minimum([](double x) { return (x - 2.0) * (x - 2.0) + 1.0; }, 0.0, 5.0);
  EXPECT_NEAR(m.x, 2.0, 1e-7);
  EXPECT_NEAR(m.value, 1.0, 1e-14);
}
