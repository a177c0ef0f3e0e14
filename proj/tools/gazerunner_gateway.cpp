// Live session endpoint: one WebSocket client plays the engine in real time.

#include "gazerunner/gateway/server.hpp"
#include "gazerunner/io.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace gazerunner;

    CLI::App app{"gazerunner-gateway: serve live sessions over WebSocket"};
    gateway::ServerConfig server;
    std::string config_path;
    std::string record_dir;
    app.add_option("--port", server.port, "Listening port (0 picks a free one)");
    app.add_option("--address", server.address, "Listening address");
    app.add_option("--config", config_path, "JSON engine config");
    app.add_option("--record", record_dir, "Record each session under DIR/session_<n>");
    app.add_option("--snapshot-hz", server.gateway.snapshot_hz, "Snapshot rate")->check(CLI::PositiveNumber);
    app.add_option("--calibration-radius", server.gateway.calibration.radius, "Calibration circle radius")
        ->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    server.handle_signals = true;
    try {
        if (!config_path.empty()) server.gateway.sim = load_config(config_path);
        if (!record_dir.empty()) server.record_root = record_dir;
        gateway::Server s(server);
        std::cout << "listening on " << server.address << ':' << s.port() << std::endl;
        s.run();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
