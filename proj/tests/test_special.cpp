#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ginavg/special.hpp"

namespace sp = ginavg::special;

namespace {

// Reference values computed with 30-digit arithmetic and rounded to double.
struct Ref {
  double x, erf, erfc, erfcx;
};
constexpr Ref kRefs[] = {
    {0, 0.0, 1.0000000000000000, 1.0000000000000000},
    {1.0000000000000001e-17, 1.1283791670955127e-17, 1.0, 1.0},
    {1e-08, 1.1283791670955126e-8, 0.99999998871620833, 0.99999998871620843},
    {0.125, 0.14031620480133382, 0.85968379519866618, 0.87322184508215081},
    {0.25, 0.27632639016823693, 0.72367360983176307, 0.77034654773099674},
    {0.46875, 0.49261347321793799, 0.50738652678206201, 0.63206968924955608},
    {0.46875000001, 0.49261347322699592, 0.50738652677300408, 0.63206968924419794},
    {0.5, 0.52049987781304654, 0.47950012218695346, 0.61569034419292587},
    {0.75, 0.71115563365351513, 0.28884436634648487, 0.50693765029314481},
    {1, 0.84270079294971487, 0.15729920705028513, 0.42758357615580700},
    {1.5, 0.96610514647531073, 0.033894853524689273, 0.32158541645431750},
    {2, 0.99532226501895273, 0.0046777349810472658, 0.25539567631050574},
    {2.5, 0.99959304798255504, 0.00040695201744495894, 0.21080636406114358},
    {3, 0.99997790950300141, 2.2090496998585441e-5, 0.17900115118138995},
    {3.5, 0.99999925690162766, 7.4309837234141275e-7, 0.15529365560889430},
    {4, 0.99999998458274210, 1.5417257900280019e-8, 0.13699945762506139},
    {4.0000001000000003, 0.99999998458275480, 1.5417245202050391e-8,
     0.13699945438671085},
    {4.5, 0.99999999980338396, 1.9661604415428875e-10, 0.12248480427384142},
    {5, 0.99999999999846254, 1.5374597944280349e-12, 0.11070463773306863},
    {6, 0.99999999999999998, 2.1519736712498913e-17, 0.092776567800538354},
    {8, 1.0000000000000000, 1.1224297172982927e-29, 0.069985166200880928},
    {10, 1.0000000000000000, 2.0884875837625448e-45, 0.056140992743822586},
    {12, 1.0000000000000000, 1.3562611692059042e-64, 0.046854221014893763},
    {16, 1.0000000000000000, 2.3284857515715307e-113, 0.035193377824930838},
    {20, 1.0000000000000000, 5.3958656116079009e-176, 0.028174348741051319},
    {26, 1.0000000000000000, 5.6631924088561428e-296, 0.021683584850562907},
    {-0.125, -0.14031620480133382, 1.1403162048013338, 1.1582735720912207},
    {-0.46875, -0.49261347321793799, 1.4926134732179380, 1.8594024168714221},
    {-0.5, -0.52049987781304654, 1.5204998778130465, 1.9523604891825571},
    {-1, -0.84270079294971487, 1.8427007929497149, 5.0089800807622835},
    {-2, -0.99532226501895273, 1.9953222650189527, 108.94090438997797},
    {-3.5, -0.99999925690162766, 1.9999992569016277, 417962.42244577031},
    {-5, -0.99999999999846254, 1.9999999999984625, 144009798674.66104},
    {-10, -1.0000000000000000, 2.0000000000000000, 5.3762342836322709e+43},
    {-25, -1.0000000000000000, 2.0000000000000000, 5.4335189393274734e+271},
};

double rel_err(double got, double want) {
  if (want == 0.0) return std::abs(got);
  return std::abs(got - want) / std::abs(want);
}

}  // namespace

TEST_CASE("erf/erfc/erfcx match high-precision references") {
  for (const Ref& r : kRefs) {
    CAPTURE(r.x);
    CHECK(rel_err(sp::erf(r.x), r.erf) < 1e-14);
    CHECK(rel_err(sp::erfc(r.x), r.erfc) < 2e-14);
    CHECK(rel_err(sp::erfcx(r.x), r.erfcx) < 2e-14);
  }
}

TEST_CASE("erfc underflows to zero past the double range") {
  CHECK(sp::erfc(30.0) == 0.0);
  CHECK(sp::erfc(100.0) == 0.0);
  CHECK(sp::erfcx(30.0) == doctest::Approx(0.018795888861416751).epsilon(1e-14));
  CHECK(sp::erfcx(1e9) == doctest::Approx(5.6418958354775629e-10).epsilon(1e-13));
}

TEST_CASE("agreement with libm on a sweep") {
  for (double x = -5.0; x <= 27.0; x += 0.0625) {
    CAPTURE(x);
    CHECK(rel_err(sp::erf(x), std::erf(x)) < 1e-13);
    if (std::erfc(x) > 0) CHECK(rel_err(sp::erfc(x), std::erfc(x)) < 4e-13);
  }
}

TEST_CASE("internal identities") {
  for (double x = -3.0; x <= 8.0; x += 0.1875) {
    CAPTURE(x);
    CHECK(rel_err(sp::erf(x) + sp::erfc(x), 1.0) < 1e-14);
    if (x * x < 700.0)
      CHECK(rel_err(sp::erfcx(x) * std::exp(-x * x), sp::erfc(x)) < 1e-13);
  }
}
