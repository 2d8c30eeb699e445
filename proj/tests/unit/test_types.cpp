#include "doctest.h"
#include "senseflow/types.hpp"

using namespace senseflow;

TEST_CASE("mac address canonical text round trip") {
    auto mac = MacAddress::parse("aa:bb:cc:dd:ee:ff");
    CHECK(mac.str() == "aa:bb:cc:dd:ee:ff");
    CHECK(MacAddress::parse(mac.str()) == mac);
}

TEST_CASE("mac address parsing is case insensitive, output is lowercase") {
    auto upper = MacAddress::parse("AA:BB:CC:DD:EE:0F");
    auto lower = MacAddress::parse("aa:bb:cc:dd:ee:0f");
    CHECK(upper == lower);
    CHECK(upper.str() == "aa:bb:cc:dd:ee:0f");
    CHECK(MacHash{}(upper) == MacHash{}(lower));
}

TEST_CASE("mac address rejects malformed text") {
    CHECK_THROWS_AS(MacAddress::parse("aa:bb:cc:dd:ee"), ParseError);
    CHECK_THROWS_AS(MacAddress::parse("aa:bb:cc:dd:ee:fg"), ParseError);
    CHECK_THROWS_AS(MacAddress::parse("aabbccddeeff0011"), ParseError);
    CHECK_THROWS_AS(MacAddress::parse("aa-bb-cc-dd-ee-ff"), ParseError);
}

TEST_CASE("mac ordering is byte-wise") {
    CHECK(MacAddress::parse("00:00:00:00:00:01") < MacAddress::parse("00:00:00:00:00:02"));
    CHECK(MacAddress::parse("0f:00:00:00:00:00") < MacAddress::parse("10:00:00:00:00:00"));
}

TEST_CASE("quantization hits wire precision and normalizes -0") {
    CHECK(quantize_ms(1.23456) == 1.235);
    CHECK(quantize_ms(-0.0004) == 0.0);
    CHECK(!std::signbit(quantize_ms(-0.0004)));
    CHECK(quantize_dbm(-59.97) == -60.0);
    CHECK(quantize_dbm(-0.04) == 0.0);
}

TEST_CASE("event validation enforces rssi bounds") {
    ProbeEvent e{10.0, MacAddress::parse("aa:bb:cc:dd:ee:ff"), -60.0, 1};
    CHECK_NOTHROW(validate_event(e));
    e.rssi = -130.0;
    CHECK_THROWS_AS(validate_event(e), InvariantError);
    e.rssi = 1.0;
    CHECK_THROWS_AS(validate_event(e), InvariantError);
}

TEST_CASE("contact record averages its rssi sum") {
    ContactRecord r{MacAddress::parse("aa:bb:cc:dd:ee:ff"), 0.0, 10.0, -180.0, 3};
    CHECK(r.avg_rssi() == doctest::Approx(-60.0));
}

TEST_CASE("dataset packet construction validates and canonicalizes") {
    auto mac = MacAddress::parse("aa:bb:cc:dd:ee:ff");
    auto mac2 = MacAddress::parse("aa:bb:cc:dd:ee:01");

    SUBCASE("records are sorted by mac then first_ts") {
        DatasetPacket p(1, 0.0, 600.0,
                        {{mac, 100.0, 160.0, -60.0}, {mac2, 10.0, 20.0, -50.0}});
        CHECK(p.records()[0].mac == mac2);
        CHECK(p.records()[1].mac == mac);
    }
    SUBCASE("first_ts > last_ts is rejected with the record index") {
        CHECK_THROWS_WITH_AS(DatasetPacket(1, 0.0, 600.0, {{mac, 50.0, 40.0, -60.0}}),
                             doctest::Contains("record 0"), InvariantError);
    }
    SUBCASE("timestamps outside the period are rejected") {
        CHECK_THROWS_AS(DatasetPacket(1, 0.0, 600.0, {{mac, 100.0, 700.0, -60.0}}),
                        InvariantError);
        CHECK_THROWS_AS(DatasetPacket(1, 100.0, 600.0, {{mac, 50.0, 200.0, -60.0}}),
                        InvariantError);
    }
    SUBCASE("overlapping records of one mac are rejected") {
        CHECK_THROWS_AS(DatasetPacket(1, 0.0, 600.0,
                                      {{mac, 0.0, 100.0, -60.0}, {mac, 100.0, 200.0, -61.0}}),
                        InvariantError);
    }
    SUBCASE("inverted period is rejected") {
        CHECK_THROWS_AS(DatasetPacket(1, 600.0, 0.0, {}), InvariantError);
    }
    SUBCASE("avg rssi out of range is rejected") {
        CHECK_THROWS_AS(DatasetPacket(1, 0.0, 600.0, {{mac, 1.0, 2.0, -130.0}}), InvariantError);
    }
    SUBCASE("values are quantized at construction") {
        DatasetPacket p(1, 0.0, 600.0, {{mac, 1.23456, 2.98765, -60.04}});
        CHECK(p.records()[0].first_ts == 1.235);
        CHECK(p.records()[0].last_ts == 2.988);
        CHECK(p.records()[0].avg_rssi == -60.0);
    }
}
