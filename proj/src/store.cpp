#include "senseflow/store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "senseflow/packet_io.hpp"

namespace senseflow {

void PacketStore::ingest(const DatasetPacket& p) {
    auto key = std::make_pair(p.gn(), p.period_start());
    auto it = packets_.find(key);
    if (it != packets_.end()) {
        if (it->second == p) return; // idempotent
        throw ConflictError("conflicting packet for gateway " + std::to_string(p.gn()) +
                            " period " + format_ts(p.period_start()));
    }
    packets_.emplace(key, p);
    auto [wit, inserted] = watermarks_.emplace(p.gn(), p.period_end());
    if (!inserted) wit->second = std::max(wit->second, p.period_end());
}

std::vector<const DatasetPacket*> PacketStore::query(Timestamp from, Timestamp to) const {
    if (!(from < to)) throw InvariantError("query range must satisfy from < to");
    std::vector<const DatasetPacket*> out;
    for (const auto& [key, p] : packets_)
        if (p.period_start() < to && p.period_end() > from) out.push_back(&p);
    return out;
}

std::vector<GatewayId> PacketStore::gateways() const {
    std::vector<GatewayId> out;
    out.reserve(watermarks_.size());
    for (const auto& [gn, _] : watermarks_) out.push_back(gn);
    return out;
}

Timestamp PacketStore::min_time() const {
    Timestamp t = 0.0;
    bool first = true;
    for (const auto& [key, p] : packets_) {
        if (first || p.period_start() < t) t = p.period_start();
        first = false;
    }
    return t;
}

Timestamp PacketStore::max_time() const {
    Timestamp t = 0.0;
    bool first = true;
    for (const auto& [key, p] : packets_) {
        if (first || p.period_end() > t) t = p.period_end();
        first = false;
    }
    return t;
}

PacketStore PacketStore::load_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw IoError("store directory does not exist: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".ndjson")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    PacketStore store;
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        if (!in) throw IoError("cannot open packet file: " + f.string());
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            try {
                store.ingest(deserialize_packet(line));
            } catch (const Error& e) {
                throw ParseError(f.filename().string() + ":" + std::to_string(line_no) + ": " +
                                 e.what());
            }
        }
    }
    return store;
}

void PacketStore::store_file(const std::filesystem::path& dir, const DatasetPacket& p,
                             const std::string& bytes) {
    auto path = dir / spool_filename(p.gn(), p.period_start());
    if (std::filesystem::exists(path)) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream existing;
        existing << in.rdbuf();
        if (existing.str() == bytes) return; // idempotent
        throw ConflictError("conflicting packet file " + path.string());
    }
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string());
        out << bytes;
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace senseflow
