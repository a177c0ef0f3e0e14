#include "gazerunner/gateway/server.hpp"

#include "gazerunner/gateway/protocol.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <atomic>
#include <chrono>
#include <deque>
#include <iostream>
#include <thread>

namespace gazerunner::gateway {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

// Owns the socket. Every member is touched on the io_context thread only;
// the tick thread reaches it through asio::post.
class Connection : public std::enable_shared_from_this<Connection> {
public:
    Connection(tcp::socket socket, std::shared_ptr<GatewaySession> session)
        : ws_(std::move(socket)), session_(std::move(session)) {}

    void start(std::function<void()> on_open) {
        ws_.text(true);
        ws_.async_accept([self = shared_from_this(), on_open = std::move(on_open)](beast::error_code ec) {
            if (ec) {
                if (self->session_) self->session_->disconnect();
                return;
            }
            if (on_open) on_open();
            self->read();
        });
    }

    /// Accepts the handshake only to say "busy" and hang up.
    void reject(std::string reason) {
        ws_.text(true);
        ws_.async_accept([self = shared_from_this(), reason = std::move(reason)](beast::error_code ec) {
            if (ec) return;
            self->send({{error_message(reason).dump()}, true});
        });
    }

    void send(Outgoing out) {
        if (closing_) return;
        for (auto& m : out.messages) outbox_.push_back(std::move(m));
        closing_ = out.close;
        if (!writing_) write_next();
    }

private:
    void read() {
        ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                if (self->session_) self->session_->disconnect();
                return;
            }
            const std::string text = beast::buffers_to_string(self->buffer_.data());
            self->buffer_.consume(self->buffer_.size());
            if (self->session_) self->send(self->session_->handle(text));
            if (!self->closing_) self->read();
        });
    }

    void write_next() {
        if (outbox_.empty()) {
            writing_ = false;
            if (closing_ && !closed_) {
                closed_ = true;
                ws_.async_close(websocket::close_code::normal, [self = shared_from_this()](beast::error_code) {});
            }
            return;
        }
        writing_ = true;
        ws_.async_write(asio::buffer(outbox_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                self->outbox_.clear();
                self->writing_ = false;
                if (self->session_) self->session_->disconnect();
                return;
            }
            self->outbox_.pop_front();
            self->write_next();
        });
    }

    websocket::stream<tcp::socket> ws_;
    std::shared_ptr<GatewaySession> session_;
    beast::flat_buffer buffer_;
    std::deque<std::string> outbox_;
    bool writing_ = false;
    bool closing_ = false;
    bool closed_ = false;
};

}  // namespace

struct Server::Impl {
    explicit Impl(ServerConfig cfg)
        : config(std::move(cfg)), acceptor(ioc), signals(ioc) {
        config.gateway.validate();
        const tcp::endpoint endpoint(asio::ip::make_address(config.address), config.port);
        acceptor.open(endpoint.protocol());
        acceptor.set_option(asio::socket_base::reuse_address(true));
        acceptor.bind(endpoint);
        acceptor.listen();
        port = acceptor.local_endpoint().port();
        if (config.handle_signals) {
            signals.add(SIGINT);
            signals.add(SIGTERM);
            signals.async_wait([this](beast::error_code ec, int) {
                if (!ec) shutdown();
            });
        }
        accept();
    }

    ~Impl() {
        ticker = {};
    }

    void accept() {
        acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
            if (ec) return;
            if (busy.load()) {
                std::make_shared<Connection>(std::move(socket), nullptr)->reject("busy: one client at a time");
            } else {
                open(std::move(socket));
            }
            accept();
        });
    }

    void open(tcp::socket socket) {
        ticker = {};  // joins the previous client's tick thread, which has exited
        GatewayConfig gw = config.gateway;
        if (config.record_root) {
            gw.record_dir = *config.record_root / ("session_" + std::to_string(++clients));
        }
        auto session = std::make_shared<GatewaySession>(gw);
        auto connection = std::make_shared<Connection>(std::move(socket), session);
        busy = true;
        connection->start([this, session, connection] {
            ticker = std::jthread([this, session, connection](std::stop_token stop) {
                run_ticks(stop, *session, connection);
            });
        });
    }

    // Real-time tick loop for one client. Sleeps to absolute deadlines so
    // the tick rate does not drift.
    void run_ticks(std::stop_token stop, GatewaySession& session, std::shared_ptr<Connection> connection) {
        using clock = std::chrono::steady_clock;
        const auto dt = std::chrono::duration_cast<clock::duration>(
            std::chrono::duration<double>(config.gateway.sim.timestep));
        auto deadline = clock::now();
        while (!stop.stop_requested() && !session.finished()) {
            deadline += dt;
            std::this_thread::sleep_until(deadline);
            Outgoing out = session.step();
            if (!out.messages.empty() || out.close) {
                asio::post(ioc, [connection, out = std::move(out)]() mutable { connection->send(std::move(out)); });
            }
        }
        if (!session.finished()) {
            // Server shutdown: abort and flush whatever was recorded.
            session.disconnect();
            session.step();
        }
        busy = false;
    }

    void shutdown() {
        asio::post(ioc, [this] {
            beast::error_code ignored;
            acceptor.close(ignored);
            signals.cancel(ignored);
            ticker.request_stop();
            ioc.stop();
        });
    }

    ServerConfig config;
    asio::io_context ioc;
    tcp::acceptor acceptor;
    asio::signal_set signals;
    std::atomic<bool> busy{false};
    int clients = 0;
    std::uint16_t port = 0;
    std::jthread ticker;
};

Server::Server(ServerConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

Server::~Server() = default;

std::uint16_t Server::port() const { return impl_->port; }

void Server::run() { impl_->ioc.run(); }

void Server::stop() { impl_->shutdown(); }

}  // namespace gazerunner::gateway
