#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <arpa/inet.h>

#include <chrono>
#include <fstream>
#include <functional>
#include <thread>

#include "doctest.h"
#include "senseflow/agent.hpp"
#include "senseflow/packet_io.hpp"
#include "senseflow/serve.hpp"
#include "senseflow/store.hpp"
#include "support/oracles.hpp"

using namespace senseflow;

namespace {

DatasetPacket sample_packet(GatewayId gn, double start) {
    return DatasetPacket(gn, start, start + 600.0,
                         {{MacAddress::parse("aa:bb:cc:dd:ee:ff"), start + 1.0, start + 2.0,
                           -60.0}});
}

void send_all(int port, const std::string& bytes) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    REQUIRE(fd >= 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(port));
    ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
    REQUIRE(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0);
    std::size_t sent = 0;
    while (sent < bytes.size()) {
        ssize_t n = ::send(fd, bytes.data() + sent, bytes.size() - sent, 0);
        REQUIRE(n > 0);
        sent += static_cast<std::size_t>(n);
    }
    ::close(fd);
}

void wait_for(const std::function<bool()>& done, double timeout_s = 5.0) {
    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::milliseconds(static_cast<int>(timeout_s * 1000));
    while (!done() && std::chrono::steady_clock::now() < deadline)
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
}

} // namespace

TEST_CASE("spool scan ingests packet files into the store directory") {
    oracle::TempDir spool("serve_spool"), store("serve_store");
    auto p1 = sample_packet(1, 0.0);
    auto p2 = sample_packet(2, 600.0);
    {
        std::ofstream(spool.path() / spool_filename(1, 0.0)) << serialize_packet(p1);
        std::ofstream(spool.path() / spool_filename(2, 600.0)) << serialize_packet(p2);
    }

    ServeOptions options;
    options.store_dir = store.path();
    options.spool_dir = spool.path();
    IngestServer server(options);
    CHECK(server.scan_spool() == 2);
    CHECK(server.stats().ingested == 2);

    // spool files are consumed
    CHECK(!std::filesystem::exists(spool.path() / spool_filename(1, 0.0)));
    PacketStore loaded = PacketStore::load_dir(store.path());
    CHECK(loaded.size() == 2);
}

TEST_CASE("spool scan leaves corrupt files behind and counts them") {
    oracle::TempDir spool("serve_bad_spool"), store("serve_bad_store");
    {
        std::ofstream(spool.path() / "1_0.000.ndjson") << "{not json}\n";
    }
    ServeOptions options;
    options.store_dir = store.path();
    options.spool_dir = spool.path();
    IngestServer server(options);
    CHECK(server.scan_spool() == 0);
    CHECK(server.stats().rejected == 1);
    CHECK(std::filesystem::exists(spool.path() / "1_0.000.ndjson"));
}

TEST_CASE("tcp ingestion accepts newline-delimited packets") {
    oracle::TempDir store("serve_tcp_store");
    ServeOptions options;
    options.store_dir = store.path();
    options.listen_port = 0; // ephemeral
    IngestServer server(options);
    server.start();
    REQUIRE(server.port() > 0);

    auto p1 = sample_packet(3, 0.0);
    auto p2 = sample_packet(3, 600.0);
    send_all(server.port(), serialize_packet(p1) + serialize_packet(p2));
    wait_for([&] { return server.stats().ingested >= 2; });
    server.stop();

    PacketStore loaded = PacketStore::load_dir(store.path());
    REQUIRE(loaded.size() == 2);
    CHECK(*loaded.query(0.0, 600.0).front() == p1);
}

TEST_CASE("agent tcp sink streams into the ingest server") {
    oracle::TempDir store("serve_agent_store");
    ServeOptions options;
    options.store_dir = store.path();
    options.listen_port = 0;
    IngestServer server(options);
    server.start();

    std::vector<ProbeEvent> events = {
        {10.0, MacAddress::parse("aa:bb:cc:dd:ee:ff"), -60.0, 5},
        {40.0, MacAddress::parse("aa:bb:cc:dd:ee:ff"), -62.0, 5},
        {700.0, MacAddress::parse("02:00:00:00:00:01"), -70.0, 5},
    };
    VectorProbeSource source(events);
    TcpSink sink("127.0.0.1", server.port());
    AgentSummary summary = run_agent({600.0, 300.0}, 5, source, sink);
    CHECK(!summary.error);
    CHECK(summary.packets_emitted == 2);

    wait_for([&] { return server.stats().ingested >= 2; });
    server.stop();
    PacketStore loaded = PacketStore::load_dir(store.path());
    REQUIRE(loaded.size() == 2);
    CHECK(loaded.query(0.0, 600.0).front()->records().size() == 1);
}

TEST_CASE("tcp re-sends are duplicates, conflicting payloads are rejected") {
    oracle::TempDir store("serve_dup_store");
    ServeOptions options;
    options.store_dir = store.path();
    options.listen_port = 0;
    IngestServer server(options);
    server.start();

    auto p = sample_packet(1, 0.0);
    send_all(server.port(), serialize_packet(p));
    wait_for([&] { return server.stats().ingested >= 1; });
    send_all(server.port(), serialize_packet(p));
    wait_for([&] { return server.stats().duplicates >= 1; });

    DatasetPacket conflicting(1, 0.0, 600.0,
                              {{MacAddress::parse("aa:bb:cc:dd:ee:01"), 1.0, 2.0, -70.0}});
    send_all(server.port(), serialize_packet(conflicting));
    wait_for([&] { return server.stats().rejected >= 1; });
    server.stop();

    auto stats = server.stats();
    CHECK(stats.ingested == 1);
    CHECK(stats.duplicates == 1);
    CHECK(stats.rejected == 1);
    CHECK(PacketStore::load_dir(store.path()).size() == 1);
}
