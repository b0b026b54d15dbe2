#pragma once

#include <memory>
#include <string>

#include "panofuse/oracle/interfaces.hpp"

namespace panofuse::oracle {

/// JSON-over-HTTP protocol: POST /v1/{panorama|inpaint|depth|segment}.
/// Images and masks travel as base64 PNG (RGB 8-bit; masks single-channel
/// {0,255}), depth as base64 PFM (little-endian float32). Every request
/// carries prompt, width, height and the camera pose as a row-major 4x4.
struct HttpConfig {
    std::string base_url = "http://127.0.0.1:8080";
    double timeout_s = 30.0;
    int retries = 3;
    double backoff_s = 0.25;  // doubles per attempt
};

/// Client-side adapters; each oracle call is one POST with retry/backoff.
OracleSet make_http_oracles(const HttpConfig& config);

/// Serves an oracle set over the same protocol (used by the bundled daemon
/// and the substitutability tests). Listens on 127.0.0.1; port 0 picks a free
/// port. The server owns a worker thread until stop() or destruction.
class OracleServer {
public:
    OracleServer(OracleSet oracles, int port, const std::string& model_name = "panofuse-synthetic");
    ~OracleServer();

    int port() const { return port_; }
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int port_ = 0;
};

}  // namespace panofuse::oracle
