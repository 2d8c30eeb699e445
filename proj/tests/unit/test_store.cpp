#include <fstream>

#include "doctest.h"
#include "senseflow/packet_io.hpp"
#include "senseflow/store.hpp"
#include "support/oracles.hpp"

using namespace senseflow;

namespace {

DatasetPacket packet(GatewayId gn, double start, std::vector<PacketRecord> records = {}) {
    return DatasetPacket(gn, start, start + 600.0, std::move(records));
}

const MacAddress kMac = MacAddress::parse("aa:bb:cc:dd:ee:ff");

} // namespace

TEST_CASE("ingest is idempotent for identical packets") {
    PacketStore store;
    auto p = packet(1, 0.0, {{kMac, 1.0, 2.0, -60.0}});
    store.ingest(p);
    store.ingest(p);
    CHECK(store.size() == 1);
}

TEST_CASE("same key with different payload is a conflict") {
    PacketStore store;
    store.ingest(packet(1, 0.0, {{kMac, 1.0, 2.0, -60.0}}));
    CHECK_THROWS_AS(store.ingest(packet(1, 0.0, {{kMac, 1.0, 2.0, -61.0}})), ConflictError);
}

TEST_CASE("range query sees every packet whose period intersects") {
    PacketStore store;
    store.ingest(packet(1, 0.0));
    store.ingest(packet(1, 600.0));
    store.ingest(packet(2, 1200.0));

    CHECK(store.query(0.0, 1200.0).size() == 2);
    CHECK(store.query(0.0, 1201.0).size() == 3);
    CHECK(store.query(599.0, 601.0).size() == 2);
    CHECK(store.query(600.0, 1200.0).size() == 1); // half-open periods
    CHECK_THROWS_AS(store.query(10.0, 10.0), InvariantError);
}

TEST_CASE("gateways and watermarks track ingested packets") {
    PacketStore store;
    store.ingest(packet(3, 600.0));
    store.ingest(packet(1, 0.0));
    store.ingest(packet(3, 1200.0));
    CHECK(store.gateways() == std::vector<GatewayId>{1, 3});
    CHECK(store.watermarks().at(3) == 1800.0);
    CHECK(store.min_time() == 0.0);
    CHECK(store.max_time() == 1800.0);
}

TEST_CASE("store directory round trip with conflict detection") {
    oracle::TempDir dir("store");
    auto p1 = packet(1, 0.0, {{kMac, 1.0, 2.0, -60.0}});
    auto p2 = packet(2, 600.0);
    PacketStore::store_file(dir.path(), p1, serialize_packet(p1));
    PacketStore::store_file(dir.path(), p2, serialize_packet(p2));
    // re-storing identical bytes is fine
    PacketStore::store_file(dir.path(), p1, serialize_packet(p1));

    PacketStore store = PacketStore::load_dir(dir.path());
    CHECK(store.size() == 2);
    CHECK(*store.query(0.0, 600.0).front() == p1);

    auto p1b = packet(1, 0.0, {{kMac, 1.0, 2.0, -50.0}});
    CHECK_THROWS_AS(PacketStore::store_file(dir.path(), p1b, serialize_packet(p1b)),
                    ConflictError);
}

TEST_CASE("loading a corrupt packet file names file and line") {
    oracle::TempDir dir("store_bad");
    {
        std::ofstream out(dir.path() / "1_0.000.ndjson");
        out << "{\"v\":1,\"gn\":1,\"period_start\":0}\n";
    }
    CHECK_THROWS_WITH_AS(PacketStore::load_dir(dir.path()), doctest::Contains("1_0.000.ndjson"),
                         ParseError);
}
