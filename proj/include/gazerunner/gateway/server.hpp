#pragma once

#include "gazerunner/gateway/session.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace gazerunner::gateway {

struct ServerConfig {
    GatewayConfig gateway;
    std::string address = "127.0.0.1";
    /// 0 picks a free port; see Server::port().
    std::uint16_t port = 8765;
    /// Each client that connects records to <record_root>/session_<n>.
    std::optional<std::filesystem::path> record_root;
    /// Stop cleanly on SIGINT/SIGTERM.
    bool handle_signals = false;
};

/// WebSocket endpoint serving one client at a time. While a client is
/// connected, further connections get an Error message and are closed.
/// The engine runs on its own thread at the configured tick rate.
class Server {
public:
    explicit Server(ServerConfig config);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    std::uint16_t port() const;
    /// Serves until stop() is called.
    void run();
    /// Safe to call from any thread.
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace gazerunner::gateway
