#include "senseflow/agent.hpp"

#include <netdb.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cmath>
#include <cstring>
#include <fstream>

#include "senseflow/packet_io.hpp"

namespace senseflow {

SpoolSink::SpoolSink(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create spool directory " + dir_.string() + ": " + ec.message());
}

void SpoolSink::deliver(const DatasetPacket& packet, const std::string& bytes) {
    auto name = spool_filename(packet.gn(), packet.period_start());
    auto tmp = dir_ / (name + ".tmp");
    auto final_path = dir_ / name;
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open spool file " + tmp.string());
        out << bytes;
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, final_path, ec);
    if (ec) throw IoError("cannot rename spool file " + tmp.string() + ": " + ec.message());
}

TcpSink::TcpSink(const std::string& host, int port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    int rc = ::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res);
    if (rc != 0) throw IoError("cannot resolve " + host + ": " + gai_strerror(rc));
    int fd = -1;
    for (addrinfo* p = res; p; p = p->ai_next) {
        fd = ::socket(p->ai_family, p->ai_socktype, p->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, p->ai_addr, p->ai_addrlen) == 0) break;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) throw IoError("cannot connect to " + host + ":" + std::to_string(port));
    fd_ = fd;
}

TcpSink::~TcpSink() {
    if (fd_ >= 0) ::close(fd_);
}

void TcpSink::deliver(const DatasetPacket&, const std::string& bytes) {
    std::size_t sent = 0;
    while (sent < bytes.size()) {
        ssize_t n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
        if (n < 0) throw IoError(std::string("tcp upload failed: ") + std::strerror(errno));
        sent += static_cast<std::size_t>(n);
    }
}

AgentState::AgentState(CollectionConfig config, GatewayId gn) : config_(config), gn_(gn) {
    config_.validate();
}

void AgentState::start_period(Timestamp period_start) {
    period_index_ = static_cast<std::int64_t>(std::floor(period_start / config_.t_dataset));
    period_open_ = true;
}

void AgentState::ingest_probe(const ProbeEvent& e) {
    if (e.gn != gn_)
        throw RoutingError("event for gateway " + std::to_string(e.gn) +
                           " reached agent for gateway " + std::to_string(gn_));
    if (any_event_ && e.ts < last_event_ts_)
        throw OrderingError("probe events out of order: " + format_ts(e.ts) + " after " +
                            format_ts(last_event_ts_));
    if (!period_open_) start_period(e.ts);

    last_event_ts_ = e.ts;
    any_event_ = true;
    ++events_ingested_;

    auto it = open_records_.find(e.mac);
    if (it == open_records_.end()) {
        open_records_.emplace(e.mac, ContactRecord{e.mac, e.ts, e.ts, e.rssi, 1});
        return;
    }
    ContactRecord& open = it->second;
    // Alg. line: merge while the gap stays strictly below t_interval.
    double gap = e.ts - open.last_ts;
    if (gap < config_.t_interval) {
        open.last_ts = e.ts;
        open.rssi_sum += e.rssi;
        open.probe_count += 1;
    } else {
        closed_records_.push_back(open);
        open = ContactRecord{e.mac, e.ts, e.ts, e.rssi, 1};
    }
}

DatasetPacket AgentState::flush_period(Timestamp now) {
    if (!period_open_) throw InvariantError("flush_period before any period was started");
    Timestamp period_end = current_period_end();
    if (now < period_end)
        throw InvariantError("flush_period at " + format_ts(now) + " before period end " +
                             format_ts(period_end));

    std::vector<PacketRecord> records;
    records.reserve(closed_records_.size() + open_records_.size());
    for (const auto& r : closed_records_) {
        records.push_back({r.mac, r.first_ts, r.last_ts, r.avg_rssi()});
        probes_flushed_ += r.probe_count;
    }
    for (const auto& [mac, r] : open_records_) {
        records.push_back({r.mac, r.first_ts, r.last_ts, r.avg_rssi()});
        probes_flushed_ += r.probe_count;
    }
    closed_records_.clear();
    open_records_.clear();

    DatasetPacket packet(gn_, current_period_start(), period_end, std::move(records));
    period_index_ += 1;
    return packet;
}

AgentSummary run_agent(const CollectionConfig& config, GatewayId gn, ProbeSource& source,
                       PacketSink& sink) {
    AgentState state(config, gn);
    AgentSummary summary;

    auto flush_into_sink = [&](Timestamp now) {
        DatasetPacket packet = state.flush_period(now);
        std::string bytes = serialize_packet(packet);
        sink.deliver(packet, bytes);
        ++summary.packets_emitted;
        summary.bytes_uploaded += bytes.size();
    };

    try {
        while (true) {
            std::optional<ProbeEvent> e = source.next();
            if (!e) break;
            if (state.period_open()) {
                while (e->ts >= state.current_period_end()) flush_into_sink(e->ts);
            }
            state.ingest_probe(*e);
            summary.events_ingested = state.events_ingested();
        }
        if (state.period_open()) flush_into_sink(state.current_period_end());
        summary.probes_recorded = state.probes_flushed();
    } catch (const IoError& e) {
        summary.error = e.what();
    }
    return summary;
}

} // namespace senseflow
