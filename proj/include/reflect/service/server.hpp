#pragma once

// HTTP + WebSocket front end (Boost.Beast). Each connection gets a thread
// doing blocking I/O; analysis itself runs on a fixed worker pool.
//
//   POST /api/analyze           analyze payload -> 200 feedback | 422 revision_request
//   GET  /api/history/{author}  ?page=1&page_size=20&include_text=false
//   GET  /api/health
//   GET  /ws                    WebSocket upgrade, analyze messages

#include <cstdint>
#include <functional>
#include <future>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/thread_pool.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "reflect/core/error.hpp"
#include "reflect/service/engine.hpp"
#include "reflect/service/wire.hpp"

namespace reflect::service {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

struct ApiReply {
    unsigned status = 200;
    json body;
};

/// Runs one analysis; the server passes a function that hops onto its
/// worker pool, tests call the engine directly.
using AnalyzeRunner = std::function<AnalyzeOutcome(const AnalyzeRequest&)>;

inline unsigned status_for(Errc code) noexcept {
    switch (code) {
        case Errc::schema_error:
        case Errc::unknown_clustering:
        case Errc::empty_input:
        case Errc::unsupported_language: return 400;
        case Errc::payload_too_large: return 413;
        default: return 500;
    }
}

inline std::string percent_decode(std::string_view s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '%' && i + 2 < s.size()) {
            auto hex = [](char c) -> int {
                if (c >= '0' && c <= '9') return c - '0';
                if (c >= 'a' && c <= 'f') return c - 'a' + 10;
                if (c >= 'A' && c <= 'F') return c - 'A' + 10;
                return -1;
            };
            const int hi = hex(s[i + 1]);
            const int lo = hex(s[i + 2]);
            if (hi >= 0 && lo >= 0) {
                out.push_back(static_cast<char>(hi * 16 + lo));
                i += 2;
                continue;
            }
        }
        out.push_back(s[i] == '+' ? ' ' : s[i]);
    }
    return out;
}

inline std::map<std::string, std::string> parse_query(std::string_view q) {
    std::map<std::string, std::string> out;
    while (!q.empty()) {
        const auto amp = q.find('&');
        const auto part = q.substr(0, amp);
        const auto eq = part.find('=');
        if (!part.empty()) {
            out[percent_decode(part.substr(0, eq))] = eq == std::string_view::npos ? "" : percent_decode(part.substr(eq + 1));
        }
        if (amp == std::string_view::npos) break;
        q.remove_prefix(amp + 1);
    }
    return out;
}

inline ApiReply analyze_reply(std::string_view body, bool require_type, const AnalyzeRunner& run) {
    try {
        const auto request = parse_analyze_request(body, require_type);
        const auto outcome = run(request);
        const bool accepted = std::holds_alternative<FeedbackResponse>(outcome);
        return {accepted ? 200u : 422u, outcome_message(outcome)};
    } catch (const Error& e) {
        return {status_for(e.code()), error_message(e)};
    } catch (const std::exception& e) {
        return {500, error_message("internal_error", e.what())};
    }
}

/// Pure request routing, independent of sockets.
inline ApiReply route(const Engine& engine, std::string_view method, std::string_view target, std::string_view body,
                      const AnalyzeRunner& run) {
    const auto qpos = target.find('?');
    const auto path = target.substr(0, qpos);
    const auto query = parse_query(qpos == std::string_view::npos ? std::string_view{} : target.substr(qpos + 1));

    if (path == "/api/analyze") {
        if (method != "POST") return {405, error_message("method_not_allowed", "use POST")};
        return analyze_reply(body, false, run);
    }
    if (path == "/api/health") {
        if (method != "GET") return {405, error_message("method_not_allowed", "use GET")};
        const auto& c = engine.counters();
        return {200,
                {{"status", "ok"},
                 {"pipeline_version", kPipelineVersion},
                 {"requests", c.requests.load()},
                 {"analysis_runs", c.analysis_runs.load()},
                 {"gate_rejections", c.gate_rejections.load()},
                 {"backend_failures", c.backend_failures.load()},
                 {"storage_failures", c.storage_failures.load()},
                 {"stored", engine.store() ? engine.store()->size() : 0},
                 {"gate_mode", to_string(engine.config().gate_mode)}}};
    }
    constexpr std::string_view history_prefix = "/api/history/";
    if (path.starts_with(history_prefix)) {
        if (method != "GET") return {405, error_message("method_not_allowed", "use GET")};
        const auto author = percent_decode(path.substr(history_prefix.size()));
        if (author.empty()) return {400, error_message("schema_error", "author id missing")};
        Page page;
        try {
            if (auto it = query.find("page"); it != query.end()) page.number = std::stoul(it->second);
            if (auto it = query.find("page_size"); it != query.end()) page.size = std::stoul(it->second);
        } catch (const std::exception&) {
            return {400, error_message("schema_error", "page and page_size must be positive integers")};
        }
        if (page.number == 0 || page.size == 0 || page.size > 1000) {
            return {400, error_message("schema_error", "page must be >= 1 and page_size in 1..1000")};
        }
        const auto it = query.find("include_text");
        const bool include_text = it != query.end() && (it->second == "true" || it->second == "1");
        try {
            json items = json::array();
            for (const auto& r : engine.history(author, page)) items.push_back(summary_json(r, include_text));
            return {200, {{"author", author}, {"page", page.number}, {"page_size", page.size}, {"items", std::move(items)}}};
        } catch (const Error& e) {
            return {500, error_message(e)};
        }
    }
    return {404, error_message("not_found", "no route for " + std::string(path))};
}

class Server {
public:
    Server(const Engine& engine, const std::string& address, std::uint16_t port, std::size_t workers = 0)
        : engine_(engine),
          pool_(workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : workers),
          acceptor_(ioc_) {
        const tcp::endpoint endpoint(asio::ip::make_address(address), port);
        acceptor_.open(endpoint.protocol());
        acceptor_.set_option(asio::socket_base::reuse_address(true));
        acceptor_.bind(endpoint);
        acceptor_.listen();
        port_ = acceptor_.local_endpoint().port();
    }

    ~Server() {
        stop();
        pool_.join();
    }

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    std::uint16_t port() const noexcept { return port_; }

    /// Blocks until stop().
    void run() {
        accept_next();
        ioc_.run();
    }

    void stop() {
        std::list<std::thread> threads;
        {
            std::lock_guard lock(mutex_);
            if (stopped_) return;
            stopped_ = true;
            for (auto& [id, socket] : sockets_) {
                beast::error_code ec;
                socket->shutdown(tcp::socket::shutdown_both, ec);
            }
            for (auto& [id, t] : threads_) threads.push_back(std::move(t));
            threads_.clear();
        }
        asio::post(ioc_, [this] {
            beast::error_code ec;
            acceptor_.close(ec);
        });
        ioc_.stop();
        for (auto& t : threads) {
            if (t.joinable()) t.join();
        }
    }

    AnalyzeOutcome run_on_pool(const AnalyzeRequest& request) {
        std::packaged_task<AnalyzeOutcome()> task([this, &request] { return engine_.handle_analyze(request); });
        auto result = task.get_future();
        asio::post(pool_, [&task] { task(); });
        return result.get();
    }

private:
    void accept_next() {
        acceptor_.async_accept([this](beast::error_code ec, tcp::socket socket) {
            if (ec) return;
            auto shared = std::make_shared<tcp::socket>(std::move(socket));
            {
                std::lock_guard lock(mutex_);
                if (stopped_) return;
                for (auto done : finished_) {
                    if (auto it = threads_.find(done); it != threads_.end()) {
                        it->second.join();
                        threads_.erase(it);
                    }
                }
                finished_.clear();
                const auto id = next_id_++;
                sockets_[id] = shared;
                threads_.emplace(id, std::thread([this, shared, id] {
                    session(*shared);
                    std::lock_guard inner(mutex_);
                    sockets_.erase(id);
                    finished_.push_back(id);
                }));
            }
            accept_next();
        });
    }

    std::size_t body_limit() const { return engine_.config().max_text_size * 4 + 64 * 1024; }

    void session(tcp::socket& socket) {
        beast::flat_buffer buffer;
        const AnalyzeRunner runner = [this](const AnalyzeRequest& r) { return run_on_pool(r); };
        for (;;) {
            http::request_parser<http::string_body> parser;
            parser.body_limit(body_limit());
            beast::error_code ec;
            http::read(socket, buffer, parser, ec);
            if (ec == http::error::body_limit) {
                http::request<http::string_body> dummy;
                write_reply(socket, dummy, {413, error_message("payload_too_large", "request body too large")}, false);
                return;
            }
            if (ec) return;
            auto req = parser.release();
            if (websocket::is_upgrade(req)) {
                if (req.target() == "/ws") websocket_session(socket, std::move(req), runner);
                return;
            }
            if (req.method() == http::verb::options) {
                http::response<http::empty_body> res{http::status::no_content, req.version()};
                cors(res);
                res.set(http::field::access_control_allow_methods, "GET, POST, OPTIONS");
                res.set(http::field::access_control_allow_headers, "Content-Type");
                res.keep_alive(req.keep_alive());
                http::write(socket, res, ec);
                if (ec || !req.keep_alive()) return;
                continue;
            }
            const auto reply =
                route(engine_, std::string(req.method_string()), std::string(req.target()), req.body(), runner);
            if (!write_reply(socket, req, reply, req.keep_alive())) return;
            if (!req.keep_alive()) {
                beast::error_code ignored;
                socket.shutdown(tcp::socket::shutdown_send, ignored);
                return;
            }
        }
    }

    template <class Response>
    static void cors(Response& res) {
        res.set(http::field::access_control_allow_origin, "*");
    }

    bool write_reply(tcp::socket& socket, const http::request<http::string_body>& req, const ApiReply& reply,
                     bool keep_alive) {
        http::response<http::string_body> res{static_cast<http::status>(reply.status), req.version() ? req.version() : 11};
        res.set(http::field::content_type, "application/json; charset=utf-8");
        cors(res);
        res.keep_alive(keep_alive);
        res.body() = reply.body.dump();
        res.prepare_payload();
        beast::error_code ec;
        http::write(socket, res, ec);
        return !ec;
    }

    void websocket_session(tcp::socket& socket, http::request<http::string_body> req, const AnalyzeRunner& runner) {
        websocket::stream<tcp::socket&> ws(socket);
        ws.read_message_max(body_limit());
        beast::error_code ec;
        ws.accept(req, ec);
        if (ec) return;
        for (;;) {
            beast::flat_buffer buffer;
            ws.read(buffer, ec);
            if (ec == websocket::error::message_too_big) {
                ws.text(true);
                const auto msg = error_message("payload_too_large", "message too large").dump();
                ws.write(asio::buffer(msg), ec);
                return;
            }
            if (ec) return;
            const auto reply = analyze_reply(beast::buffers_to_string(buffer.data()), true, runner);
            const auto text = reply.body.dump();
            ws.text(true);
            ws.write(asio::buffer(text), ec);
            if (ec) return;
        }
    }

    const Engine& engine_;
    asio::thread_pool pool_;
    asio::io_context ioc_;
    tcp::acceptor acceptor_;
    std::uint16_t port_ = 0;
    std::mutex mutex_;
    bool stopped_ = false;
    std::uint64_t next_id_ = 0;
    std::map<std::uint64_t, std::shared_ptr<tcp::socket>> sockets_;
    std::map<std::uint64_t, std::thread> threads_;
    std::vector<std::uint64_t> finished_;
};

}  // namespace reflect::service
