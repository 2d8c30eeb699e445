#include "senseflow/serve.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstring>
#include <fstream>
#include <iostream>

#include "senseflow/packet_io.hpp"
#include "senseflow/store.hpp"

namespace senseflow {

IngestServer::IngestServer(ServeOptions options) : options_(std::move(options)) {
    std::filesystem::create_directories(options_.store_dir);
    if (options_.spool_dir) std::filesystem::create_directories(*options_.spool_dir);
}

IngestServer::~IngestServer() {
    stop();
    if (listener_.joinable()) listener_.join();
    for (auto& t : connections_)
        if (t.joinable()) t.join();
    if (listen_fd_ >= 0) ::close(listen_fd_);
}

void IngestServer::start() {
    if (!options_.listen_port) return;
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw IoError(std::string("socket: ") + std::strerror(errno));
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(*options_.listen_port));
    if (::inet_pton(AF_INET, options_.listen_host.c_str(), &addr.sin_addr) != 1)
        throw IoError("bad listen host: " + options_.listen_host);
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
        throw IoError(std::string("bind: ") + std::strerror(errno));
    if (::listen(listen_fd_, 16) != 0)
        throw IoError(std::string("listen: ") + std::strerror(errno));

    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = ntohs(bound.sin_port);
    listener_ = std::thread([this] { listener_loop(); });
}

void IngestServer::listener_loop() {
    while (!stopping_) {
        pollfd pfd{listen_fd_, POLLIN, 0};
        int rc = ::poll(&pfd, 1, 200);
        if (rc <= 0) continue;
        int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) continue;
        std::lock_guard<std::mutex> lock(mutex_);
        connections_.emplace_back([this, fd] { handle_connection(fd); });
    }
}

void IngestServer::handle_connection(int fd) {
    std::string buffer;
    char chunk[4096];
    while (!stopping_) {
        pollfd pfd{fd, POLLIN, 0};
        int rc = ::poll(&pfd, 1, 200);
        if (rc < 0) break;
        if (rc == 0) continue;
        ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
        if (n <= 0) break;
        buffer.append(chunk, static_cast<std::size_t>(n));
        std::size_t pos;
        while ((pos = buffer.find('\n')) != std::string::npos) {
            std::string line = buffer.substr(0, pos);
            buffer.erase(0, pos + 1);
            if (!line.empty()) ingest_line(line, "tcp");
        }
    }
    if (!buffer.empty()) ingest_line(buffer, "tcp");
    ::close(fd);
}

bool IngestServer::ingest_line(const std::string& line, const std::string& origin) {
    try {
        DatasetPacket packet = deserialize_packet(line);
        std::string bytes = serialize_packet(packet);
        std::lock_guard<std::mutex> lock(mutex_);
        auto path = options_.store_dir / spool_filename(packet.gn(), packet.period_start());
        bool existed = std::filesystem::exists(path);
        PacketStore::store_file(options_.store_dir, packet, bytes);
        if (existed)
            ++stats_.duplicates;
        else
            ++stats_.ingested;
        return true;
    } catch (const Error& e) {
        std::lock_guard<std::mutex> lock(mutex_);
        ++stats_.rejected;
        std::cerr << "serve: rejected packet from " << origin << ": " << e.what() << "\n";
        return false;
    }
}

std::size_t IngestServer::scan_spool() {
    if (!options_.spool_dir) return 0;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(*options_.spool_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".ndjson")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::size_t ingested = 0;
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        if (!in) continue;
        std::string line;
        bool ok = true;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            ok = ingest_line(line, f.filename().string()) && ok;
        }
        in.close();
        if (ok) {
            std::error_code ec;
            std::filesystem::remove(f, ec);
            ++ingested;
        }
    }
    return ingested;
}

void IngestServer::run() {
    start();
    auto period = std::chrono::duration<double>(options_.poll_interval);
    while (!stopping_) {
        scan_spool();
        std::this_thread::sleep_for(period);
    }
}

void IngestServer::stop() { stopping_ = true; }

ServeStats IngestServer::stats() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return stats_;
}

} // namespace senseflow
