#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <jcas/units.hpp>

using namespace jcas;

TEST_CASE("table defaults convert as expected") {
    CHECK(dbm_to_mw(30.0) == doctest::Approx(1000.0).epsilon(1e-12));
    CHECK(dbm_to_mw(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dbm_to_mw(27.78) == doctest::Approx(599.791).epsilon(1e-5));
    CHECK(dbm_to_mw(29.54) == doctest::Approx(899.498).epsilon(1e-5));
}

TEST_CASE("dbm round trip is exact to 1e-12") {
    for (double dbm = -40.0; dbm <= 40.0; dbm += 0.37) {
        CHECK(mw_to_dbm(dbm_to_mw(dbm)) == doctest::Approx(dbm).epsilon(1e-12));
    }
}
