#include <gtest/gtest.h>

#include <cstring>
#include <limits>
#include <random>
#include <sstream>

#include "gclm/io.hpp"

using namespace gclm;

TEST(Format, ShortestRoundTrip) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10000; ++i) {
    std::uint64_t bits = rng();
    double x;
    std::memcpy(&x, &bits, sizeof x);
    if (!std::isfinite(x)) continue;
    const double y = io::parse_double(io::format_double(x));
    EXPECT_EQ(std::memcmp(&x, &y, sizeof x), 0) << io::format_double(x);
  }
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(io::format_double(-2.0), "-2");
  EXPECT_EQ(io::format_double(std::numeric_limits<double>::denorm_min()), "5e-324");
}

TEST(Format, RejectsGarbage) {
  EXPECT_THROW(io::parse_double("1.0x"), Error);
  EXPECT_THROW(io::parse_double(""), Error);
}

TEST(Csv, TrajectoryRoundTrip) {
  Trajectory<PoleFamilyState> tr;
  tr.samples.push_back(PoleFamilyState{0.0, {Pole{cplx(0.1, -0.2), cplx(0.3, 0.4)}, Pole{cplx(1e-300, 2.5), cplx(7.0, -1.0 / 3.0)}}, 0.25});
  tr.samples.push_back(PoleFamilyState{0.5, {Pole{cplx(0.2, -0.1), cplx(0.4, 0.3)}, Pole{cplx(2.0, 2.0), cplx(6.0, -0.3)}}, 0.2});
  std::stringstream ss;
  io::write_trajectory(ss, tr);
  const auto t = io::read_csv(ss);
  ASSERT_EQ(t.header.front(), "t");
  ASSERT_EQ(t.header.size(), 10u);
  EXPECT_EQ(t.header[1], "amp1_re");
  EXPECT_EQ(t.header[4], "loc1_im");
  ASSERT_EQ(t.rows.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto s = io::pole_family_from_row(t.rows[i]);
    EXPECT_EQ(s.t, tr.samples[i].t);
    EXPECT_EQ(s.omega_av, tr.samples[i].omega_av);
    for (std::size_t k = 0; k < 2; ++k) {
      EXPECT_EQ(s.poles[k].amp, tr.samples[i].poles[k].amp);
      EXPECT_EQ(s.poles[k].loc, tr.samples[i].poles[k].loc);
    }
  }
}

TEST(Csv, OtherLayouts) {
  const DoublePoleState d{1.5, cplx(0.1, 0.2), cplx(0.3, 0.4), 0.5, 0.6};
  const auto back = io::double_pole_from_row(io::csv_row(d));
  EXPECT_EQ(back.amp2, d.amp2);
  EXPECT_EQ(back.gauge_q, d.gauge_q);
  EXPECT_EQ(io::csv_header(d).size(), io::csv_row(d).size());
  const RealReducedState r{2.0, -1.0, 0.4};
  EXPECT_EQ(io::real_from_row(io::csv_row(r)).vc, 0.4);
}

TEST(Csv, WidthMismatchIsAnError) {
  std::stringstream ss("t,a\n1,2,3\n");
  EXPECT_THROW(io::read_csv(ss), Error);
  std::stringstream out;
  io::CsvWriter w(out, {"t", "x"});
  EXPECT_THROW(w.row({1.0}), Error);
}

TEST(Json, ComplexObjects) {
  const auto j = io::to_json(cplx(1.5, -2.0));
  EXPECT_EQ(j.dump(), R"({"re":1.5,"im":-2.0})");
  EXPECT_EQ(io::complex_from_json(j, "z"), cplx(1.5, -2.0));
  EXPECT_EQ(io::complex_from_json(io::json(3.0), "z"), cplx(3.0, 0.0));
  EXPECT_THROW(io::complex_from_json(io::json::parse(R"({"re":1,"im":2,"abs":3})"), "z"), Error);
  EXPECT_THROW(io::complex_from_json(io::json::parse(R"({"re":1})"), "z"), Error);
}

TEST(Json, ClassificationFields) {
  ClassificationResult c;
  c.verdict = Verdict::BlowupB;
  c.t_c = 1.25;
  const auto j = io::to_json(c);
  EXPECT_EQ(j["verdict"], "BlowupB");
  EXPECT_EQ(j["t_c"], 1.25);
  EXPECT_TRUE(j["x_c"].is_null());
}
