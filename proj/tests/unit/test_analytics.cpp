#include <random>
#include <set>

#include "doctest.h"
#include "senseflow/analytics.hpp"
#include "senseflow/packet_io.hpp"
#include "senseflow/rng.hpp"
#include "senseflow/scenario.hpp"
#include "support/oracles.hpp"

using namespace senseflow;

namespace {

const MacAddress kMac = MacAddress::parse("aa:bb:cc:dd:ee:ff");

PacketStore store_of(const std::vector<DatasetPacket>& packets) {
    PacketStore store;
    for (const auto& p : packets) store.ingest(p);
    return store;
}

/// Brute-force placement oracle: enumerate every (mac, window, gateway)
/// contribution from raw records, average per gateway, take the max with the
/// smallest-id tie-break.
std::map<std::pair<std::string, double>, GatewayId> placements_ref(const PacketStore& store,
                                                                   const WindowGrid& grid) {
    struct Acc {
        double sum = 0.0;
        int n = 0;
    };
    std::map<std::tuple<std::string, double, GatewayId>, Acc> cells;
    for (const DatasetPacket* p : store.query(grid.from, grid.to)) {
        for (const auto& r : p->records()) {
            for (std::size_t k = 0; k < grid.count(); ++k) {
                double ws = grid.start_of(k), we = grid.end_of(k);
                if (r.first_ts < we && r.last_ts >= ws) {
                    auto& acc = cells[{r.mac.str(), ws, p->gn()}];
                    acc.sum += r.avg_rssi;
                    acc.n += 1;
                }
            }
        }
    }
    std::map<std::pair<std::string, double>, std::pair<GatewayId, double>> best;
    for (const auto& [key, acc] : cells) {
        auto [mac, ws, gn] = key;
        double mean = acc.sum / acc.n;
        auto it = best.find({mac, ws});
        if (it == best.end() || mean > it->second.second)
            best[{mac, ws}] = {gn, mean};
    }
    std::map<std::pair<std::string, double>, GatewayId> out;
    for (const auto& [key, val] : best) out[key] = val.first;
    return out;
}

} // namespace

TEST_CASE("argmax picks the strongest gateway") {
    auto store = store_of({
        DatasetPacket(1, 0.0, 600.0, {{kMac, 10.0, 20.0, -55.0}}),
        DatasetPacket(2, 0.0, 600.0, {{kMac, 10.0, 20.0, -70.0}}),
    });
    auto placements = resolve_placements(store, WindowGrid(0.0, 600.0, 600.0));
    REQUIRE(placements.size() == 1);
    CHECK(placements[0].gn == 1);
    CHECK(placements[0].winning_rssi == -55.0);
}

TEST_CASE("a phone seen by one gateway is placed there") {
    auto store = store_of({DatasetPacket(3, 0.0, 600.0, {{kMac, 10.0, 20.0, -80.0}})});
    auto placements = resolve_placements(store, WindowGrid(0.0, 600.0, 600.0));
    REQUIRE(placements.size() == 1);
    CHECK(placements[0].gn == 3);
}

TEST_CASE("rssi ties go to the smallest gateway id") {
    auto store = store_of({
        DatasetPacket(5, 0.0, 600.0, {{kMac, 10.0, 20.0, -60.0}}),
        DatasetPacket(2, 0.0, 600.0, {{kMac, 10.0, 20.0, -60.0}}),
    });
    auto placements = resolve_placements(store, WindowGrid(0.0, 600.0, 600.0));
    REQUIRE(placements.size() == 1);
    CHECK(placements[0].gn == 2);
}

TEST_CASE("a record contributes to every window it overlaps") {
    auto store = store_of({DatasetPacket(1, 0.0, 600.0, {{kMac, 150.0, 450.0, -60.0}})});
    auto placements = resolve_placements(store, WindowGrid(0.0, 600.0, 200.0));
    CHECK(placements.size() == 3);
}

TEST_CASE("random fixtures match the brute-force argmax oracle") {
    std::mt19937_64 rng(4242);
    for (int iter = 0; iter < 200; ++iter) {
        int gateways = 1 + static_cast<int>(rng() % 5);
        int macs = 1 + static_cast<int>(rng() % 6);
        double t_win = 100.0;
        WindowGrid grid(0.0, 600.0, t_win);

        std::vector<DatasetPacket> packets;
        for (int g = 1; g <= gateways; ++g) {
            std::vector<PacketRecord> records;
            for (int m = 0; m < macs; ++m) {
                if (rng() % 3 == 0) continue;
                MacAddress mac = phone_mac(static_cast<std::uint32_t>(m + 1));
                double cursor = 0.0;
                int nrec = 1 + static_cast<int>(rng() % 3);
                for (int r = 0; r < nrec && cursor < 560.0; ++r) {
                    double first = cursor + static_cast<double>(rng() % 40);
                    double last = first + static_cast<double>(rng() % 120);
                    if (last > 600.0) break;
                    // integer dBm keeps averages exact so ties are honest ties
                    double rssi = -(20.0 + static_cast<double>(rng() % 12) * 7.0);
                    records.push_back({mac, first, last, rssi});
                    cursor = last + 1.0;
                }
            }
            packets.emplace_back(g, 0.0, 600.0, std::move(records));
        }
        auto store = store_of(packets);
        auto placements = resolve_placements(store, grid);
        auto expected = placements_ref(store, grid);

        REQUIRE(placements.size() == expected.size());
        std::set<std::pair<std::string, double>> seen;
        for (const auto& p : placements) {
            auto key = std::make_pair(p.mac.str(), p.window_start);
            CHECK(seen.insert(key).second); // exactly one placement per (mac, window)
            REQUIRE(expected.count(key) == 1);
            CHECK(expected.at(key) == p.gn);
        }

        // argmax is invariant under a +7 dB shift of every record
        std::vector<DatasetPacket> shifted;
        for (const auto& p : packets) {
            std::vector<PacketRecord> records = p.records();
            for (auto& r : records) r.avg_rssi += 7.0;
            shifted.emplace_back(p.gn(), p.period_start(), p.period_end(), std::move(records));
        }
        auto shifted_placements = resolve_placements(store_of(shifted), grid);
        REQUIRE(shifted_placements.size() == placements.size());
        for (std::size_t i = 0; i < placements.size(); ++i) {
            CHECK(shifted_placements[i].gn == placements[i].gn);
            CHECK(shifted_placements[i].winning_rssi ==
                  doctest::Approx(placements[i].winning_rssi + 7.0));
        }
    }
}

TEST_CASE("density counts distinct phones per gateway and window") {
    auto m1 = phone_mac(1), m2 = phone_mac(2), m3 = phone_mac(3);
    auto store = store_of({
        DatasetPacket(2, 0.0, 600.0,
                      {{m1, 10.0, 20.0, -60.0}, {m2, 15.0, 30.0, -62.0}, {m3, 5.0, 8.0, -64.0}}),
        DatasetPacket(1, 0.0, 600.0, {}),
    });
    DensitySeries series = density(store, WindowGrid(0.0, 600.0, 600.0));
    CHECK(series.at(2, 0.0) == 3);
    CHECK(series.at(1, 0.0) == 0); // zero windows are reported
}

TEST_CASE("one phone counts once per window it spans") {
    auto store = store_of({DatasetPacket(1, 0.0, 2400.0, {{kMac, 0.0, 2399.0, -60.0}})});
    DensitySeries series = density(store, WindowGrid(0.0, 2400.0, 600.0));
    for (double ws : {0.0, 600.0, 1200.0, 1800.0}) CHECK(series.at(1, ws) == 1);
}

TEST_CASE("density conservation: per-window sum equals distinct macs observed") {
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<DatasetPacket> packets;
        int gateways = 2 + static_cast<int>(rng() % 3);
        for (int g = 1; g <= gateways; ++g) {
            std::vector<PacketRecord> records;
            for (int m = 0; m < 6; ++m) {
                if (rng() % 2) continue;
                double first = static_cast<double>(rng() % 500);
                records.push_back({phone_mac(static_cast<std::uint32_t>(m + 1)), first,
                                   first + static_cast<double>(rng() % 80),
                                   -40.0 - static_cast<double>(rng() % 50)});
            }
            packets.emplace_back(g, 0.0, 600.0, std::move(records));
        }
        auto store = store_of(packets);
        WindowGrid grid(0.0, 600.0, 150.0);
        DensitySeries series = density(store, grid);

        for (std::size_t k = 0; k < grid.count(); ++k) {
            double ws = grid.start_of(k), we = grid.end_of(k);
            std::set<MacAddress> observed;
            for (const auto& p : packets)
                for (const auto& r : p.records())
                    if (r.first_ts < we && r.last_ts >= ws) observed.insert(r.mac);
            std::uint32_t total = 0;
            for (GatewayId g : series.gateways) total += series.at(g, ws);
            CHECK(total == observed.size());
        }
    }
}

TEST_CASE("dwell sums record spans per gateway and phone") {
    auto store = store_of({
        DatasetPacket(1, 0.0, 600.0, {{kMac, 0.0, 300.0, -60.0}}),
        DatasetPacket(1, 600.0, 1200.0, {{kMac, 1100.0, 1200.0, -60.0}}),
    });
    SUBCASE("single record") {
        DwellReport r = dwell_durations(store, 0.0, 600.0);
        CHECK(r.durations.at({1, kMac}) == 300.0);
    }
    SUBCASE("two records sum their spans") {
        DwellReport r = dwell_durations(store, 0.0, 1200.0);
        CHECK(r.durations.at({1, kMac}) == 400.0);
        CHECK(r.histogram.at({1, 0}) == 1);
    }
    SUBCASE("zero-span records use the configured floor") {
        auto s2 = store_of({DatasetPacket(2, 0.0, 600.0, {{kMac, 10.0, 10.0, -60.0}})});
        CHECK(dwell_durations(s2, 0.0, 600.0).durations.at({2, kMac}) == 0.0);
        CHECK(dwell_durations(s2, 0.0, 600.0, 600.0, 5.0).durations.at({2, kMac}) == 5.0);
    }
    SUBCASE("histogram buckets by total duration") {
        auto s3 = store_of({DatasetPacket(1, 0.0, 7200.0,
                                          {{kMac, 0.0, 6500.0, -60.0},
                                           {phone_mac(9), 10.0, 50.0, -60.0}})});
        DwellReport r = dwell_durations(s3, 0.0, 7200.0);
        CHECK(r.histogram.at({1, 10}) == 1); // 6500 s -> bucket 10
        CHECK(r.histogram.at({1, 0}) == 1);
    }
}

TEST_CASE("observed trajectory collapses consecutive duplicates") {
    auto store = store_of({
        DatasetPacket(1, 0.0, 1200.0, {{kMac, 0.0, 1150.0, -50.0}}),
        DatasetPacket(2, 0.0, 1200.0, {{kMac, 0.0, 550.0, -70.0}}),
        DatasetPacket(3, 1200.0, 2400.0, {{kMac, 1250.0, 2350.0, -40.0}}),
    });
    // windows of 600 s: placements 1,1,3,3 -> trajectory (1,3)
    ObservedTrajectory t = observed_trajectory(store, kMac, WindowGrid(0.0, 2400.0, 600.0));
    CHECK(t.ids() == GatewaySeq{1, 3});
    REQUIRE(t.steps.size() == 2);
    CHECK(t.steps[0].window_start == 0.0);
    CHECK(t.steps[1].window_start == 1200.0);
}

TEST_CASE("an unseen phone has an empty trajectory") {
    auto store = store_of({DatasetPacket(1, 0.0, 600.0, {})});
    CHECK(observed_trajectory(store, kMac, WindowGrid(0.0, 600.0, 600.0)).steps.empty());
}

TEST_CASE("window grid validation") {
    CHECK_THROWS_AS(WindowGrid(0.0, 600.0, 0.0), InvariantError);
    CHECK_THROWS_AS(WindowGrid(600.0, 0.0, 100.0), InvariantError);
    CHECK(WindowGrid(0.0, 601.0, 600.0).count() == 2);
}
