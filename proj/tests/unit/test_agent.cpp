#include <random>

#include "doctest.h"
#include "senseflow/agent.hpp"
#include "senseflow/packet_io.hpp"
#include "senseflow/rng.hpp"
#include "senseflow/scenario.hpp"
#include "support/oracles.hpp"

using namespace senseflow;

namespace {

const MacAddress kMac = MacAddress::parse("aa:bb:cc:dd:ee:ff");

ProbeEvent ev(double ts, GatewayId gn = 1, double rssi = -60.0, MacAddress mac = kMac) {
    return {ts, mac, rssi, gn};
}

AgentSummary replay(const std::vector<ProbeEvent>& events, CollectionConfig config,
                    CollectorSink& sink, GatewayId gn = 1) {
    VectorProbeSource source(events);
    return run_agent(config, gn, source, sink);
}

std::vector<ProbeEvent> random_stream(std::mt19937_64& rng, std::size_t max_events,
                                      unsigned max_macs) {
    std::size_t n = 1 + rng() % max_events;
    unsigned macs = 1 + static_cast<unsigned>(rng() % max_macs);
    std::vector<ProbeEvent> events;
    double t = uniform_in(rng, 0.0, 1000.0);
    for (std::size_t i = 0; i < n; ++i) {
        t += uniform_in(rng, 0.0, 120.0);
        MacAddress mac = phone_mac(static_cast<std::uint32_t>(rng() % macs) + 1);
        events.push_back(ev(quantize_ms(t), 1, quantize_dbm(uniform_in(rng, -100, -30)), mac));
    }
    return events;
}

} // namespace

TEST_CASE("gap below t_interval extends the open record") {
    AgentState state({600.0, 300.0}, 1);
    state.ingest_probe(ev(0.0));
    state.ingest_probe(ev(100.0));
    DatasetPacket p = state.flush_period(600.0);
    REQUIRE(p.records().size() == 1);
    CHECK(p.records()[0].first_ts == 0.0);
    CHECK(p.records()[0].last_ts == 100.0);
}

TEST_CASE("gap at or above t_interval starts a new record") {
    SUBCASE("above") {
        AgentState state({600.0, 300.0}, 1);
        state.ingest_probe(ev(0.0));
        state.ingest_probe(ev(400.0));
        DatasetPacket p = state.flush_period(600.0);
        REQUIRE(p.records().size() == 2);
        CHECK(p.records()[0].first_ts == 0.0);
        CHECK(p.records()[0].last_ts == 0.0);
        CHECK(p.records()[1].first_ts == 400.0);
        CHECK(p.records()[1].last_ts == 400.0);
    }
    SUBCASE("exactly equal gap splits (strict comparison)") {
        AgentState state({600.0, 300.0}, 1);
        state.ingest_probe(ev(0.0));
        state.ingest_probe(ev(300.0));
        DatasetPacket p = state.flush_period(600.0);
        CHECK(p.records().size() == 2);
    }
}

TEST_CASE("stream contract violations") {
    AgentState state({600.0, 300.0}, 1);
    state.ingest_probe(ev(10.0));
    CHECK_THROWS_AS(state.ingest_probe(ev(5.0)), OrderingError);
    CHECK_THROWS_AS(state.ingest_probe(ev(20.0, 2)), RoutingError);
    // equal timestamps are allowed
    CHECK_NOTHROW(state.ingest_probe(ev(10.0)));
}

TEST_CASE("flush with no probes emits an empty packet") {
    AgentState state({600.0, 300.0}, 4);
    state.start_period(1200.0);
    DatasetPacket p = state.flush_period(1800.0);
    CHECK(p.gn() == 4);
    CHECK(p.period_start() == 1200.0);
    CHECK(p.period_end() == 1800.0);
    CHECK(p.records().empty());
}

TEST_CASE("flush averages rssi per record") {
    AgentState state({600.0, 300.0}, 1);
    state.ingest_probe(ev(0.0, 1, -50.0));
    state.ingest_probe(ev(10.0, 1, -60.0));
    state.ingest_probe(ev(20.0, 1, -70.0));
    DatasetPacket p = state.flush_period(600.0);
    REQUIRE(p.records().size() == 1);
    CHECK(p.records()[0].avg_rssi == -60.0);
}

TEST_CASE("a phone active across the period boundary starts fresh") {
    CollectorSink sink;
    replay({ev(590.0), ev(595.0), ev(605.0), ev(610.0)}, {600.0, 300.0}, sink);
    REQUIRE(sink.packets.size() == 2);
    REQUIRE(sink.packets[0].records().size() == 1);
    CHECK(sink.packets[0].records()[0].last_ts == 595.0);
    REQUIRE(sink.packets[1].records().size() == 1);
    CHECK(sink.packets[1].records()[0].first_ts == 605.0);
}

TEST_CASE("run_agent on an empty source emits nothing") {
    CollectorSink sink;
    AgentSummary s = replay({}, {600.0, 300.0}, sink);
    CHECK(s.events_ingested == 0);
    CHECK(s.packets_emitted == 0);
    CHECK(s.bytes_uploaded == 0);
    CHECK(sink.packets.empty());
}

TEST_CASE("run_agent flushes every period the stream spans, empty ones included") {
    CollectorSink sink;
    AgentSummary s = replay({ev(10.0), ev(1850.0)}, {600.0, 300.0}, sink);
    CHECK(s.packets_emitted == 4); // [0,600) [600,1200) [1200,1800) [1800,2400)
    CHECK(sink.packets[1].records().empty());
    CHECK(sink.packets[2].records().empty());
    for (const auto& p : sink.packets) CHECK(p.period_end() - p.period_start() == 600.0);
}

TEST_CASE("run_agent reports bytes as the sum of serialized packet lengths") {
    CollectorSink sink;
    AgentSummary s = replay({ev(10.0), ev(20.0), ev(700.0)}, {600.0, 300.0}, sink);
    std::uint64_t expected = 0;
    for (const auto& p : sink.packets) expected += serialize_packet(p).size();
    CHECK(s.bytes_uploaded == expected);
    CHECK(s.events_ingested == 3);
}

TEST_CASE("a source with two gateways' events is a routing error") {
    VectorProbeSource source({ev(0.0, 1), ev(1.0, 2)});
    CollectorSink sink;
    CollectionConfig config{600.0, 300.0};
    CHECK_THROWS_AS(run_agent(config, 1, source, sink), RoutingError);
}

TEST_CASE("record boundaries match brute-force gap segmentation on random streams") {
    std::mt19937_64 rng(99);
    for (int iter = 0; iter < 50; ++iter) {
        auto events = random_stream(rng, 400, 8);
        std::sort(events.begin(), events.end(),
                  [](const ProbeEvent& a, const ProbeEvent& b) { return a.ts < b.ts; });
        double t_interval = uniform_in(rng, 10.0, 400.0);
        double t_dataset = uniform_in(rng, 200.0, 2000.0);

        CollectorSink sink;
        AgentSummary s = replay(events, {t_dataset, t_interval}, sink);
        CHECK(s.events_ingested == events.size());

        auto expected = oracle::segment_stream(events, t_dataset, t_interval);
        std::map<std::pair<MacAddress, double>, std::vector<oracle::Segment>> actual;
        std::uint64_t total_probes = 0;
        for (const auto& p : sink.packets) {
            for (const auto& r : p.records())
                actual[{r.mac, p.period_start()}].push_back({r.first_ts, r.last_ts, 0});
        }
        // conservation: every event lands in exactly one record
        for (const auto& [key, segments] : expected)
            for (const auto& seg : segments) total_probes += seg.count;
        CHECK(total_probes == events.size());

        REQUIRE(actual.size() == expected.size());
        for (const auto& [key, segments] : expected) {
            REQUIRE(actual.count(key) == 1);
            const auto& got = actual.at(key);
            REQUIRE(got.size() == segments.size());
            for (std::size_t i = 0; i < segments.size(); ++i) {
                CHECK(got[i].first_ts == segments[i].first_ts);
                CHECK(got[i].last_ts == segments[i].last_ts);
            }
        }
    }
}

TEST_CASE("increasing t_interval never increases the record count") {
    std::mt19937_64 rng(7);
    auto events = random_stream(rng, 500, 5);
    std::sort(events.begin(), events.end(),
              [](const ProbeEvent& a, const ProbeEvent& b) { return a.ts < b.ts; });
    std::size_t last_count = SIZE_MAX;
    for (double t_interval : {15.0, 60.0, 120.0, 240.0, 480.0}) {
        CollectorSink sink;
        replay(events, {3600.0, t_interval}, sink);
        std::size_t count = 0;
        for (const auto& p : sink.packets) count += p.records().size();
        CHECK(count <= last_count);
        last_count = count;
    }
}

TEST_CASE("identical stream and config produce byte-identical packets") {
    std::mt19937_64 rng(123);
    auto events = random_stream(rng, 300, 6);
    std::sort(events.begin(), events.end(),
              [](const ProbeEvent& a, const ProbeEvent& b) { return a.ts < b.ts; });
    CollectorSink a, b;
    replay(events, {600.0, 120.0}, a);
    replay(events, {600.0, 120.0}, b);
    REQUIRE(a.packets.size() == b.packets.size());
    for (std::size_t i = 0; i < a.packets.size(); ++i)
        CHECK(serialize_packet(a.packets[i]) == serialize_packet(b.packets[i]));
}

TEST_CASE("smaller t_dataset uploads strictly more bytes on the same stream") {
    std::mt19937_64 rng(5);
    auto events = random_stream(rng, 800, 6);
    std::sort(events.begin(), events.end(),
              [](const ProbeEvent& a, const ProbeEvent& b) { return a.ts < b.ts; });
    CollectorSink fine, coarse;
    replay(events, {600.0, 300.0}, fine);    // 10 min
    replay(events, {7200.0, 300.0}, coarse); // 120 min
    CHECK(fine.total_bytes > coarse.total_bytes);
}
