#include "panofuse/oracle/http.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "panofuse/io/image_io.hpp"

namespace panofuse::oracle {

using geom::BitMask;
using geom::DepthMap;
using geom::EqrImage;
using nlohmann::json;

namespace {

json pose_to_json(const geom::Pose& pose) {
    json j = json::array();
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) j.push_back(pose.rotation(r, c));
    // fourth column / row of the homogeneous matrix
    json full = json::array();
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = pose.rotation;
    m.topRightCorner<3, 1>() = pose.translation;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) full.push_back(m(r, c));
    return full;
}

geom::Pose pose_from_json(const json& j) {
    if (!j.is_array() || j.size() != 16) throw Error("pose must be a row-major 4x4 array");
    Eigen::Matrix4d m;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = j.at(4 * r + c).get<double>();
    geom::Pose pose;
    pose.rotation = m.topLeftCorner<3, 3>();
    pose.translation = m.topRightCorner<3, 1>();
    return pose;
}

std::string image_b64(const EqrImage& image) { return io::base64_encode(io::encode_png(image)); }
std::string mask_b64(const BitMask& mask) { return io::base64_encode(io::encode_png(mask)); }
std::string depth_b64(const DepthMap& depth) { return io::base64_encode(io::encode_pfm(depth)); }

EqrImage image_from_b64(const std::string& s) { return io::decode_png_rgb(io::base64_decode(s)); }
BitMask mask_from_b64(const std::string& s) { return io::decode_png_mask(io::base64_decode(s)); }
DepthMap depth_from_b64(const std::string& s) { return io::decode_pfm(io::base64_decode(s)); }

std::atomic<std::uint64_t> g_request_counter{0};

class HttpClient {
public:
    explicit HttpClient(HttpConfig config) : config_(std::move(config)) {}

    json post(const std::string& route, const json& body, const std::string& request_id) const {
        std::string payload = body.dump();
        std::string last_error;
        double backoff = config_.backoff_s;
        for (int attempt = 0; attempt < std::max(1, config_.retries); ++attempt) {
            if (attempt > 0) {
                std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
                backoff *= 2.0;
            }
            httplib::Client client(config_.base_url);
            client.set_connection_timeout(std::chrono::duration<double>(config_.timeout_s));
            client.set_read_timeout(std::chrono::duration<double>(config_.timeout_s));
            client.set_write_timeout(std::chrono::duration<double>(config_.timeout_s));
            auto res = client.Post(route, payload, "application/json");
            if (!res) {
                last_error = "connection failed: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status != 200) {
                last_error = "http status " + std::to_string(res->status);
                continue;
            }
            json reply = json::parse(res->body, nullptr, false);
            if (reply.is_discarded()) {
                last_error = "invalid json in response";
                continue;
            }
            if (reply.value("status", "") != "ok") {
                last_error = "server error: " + reply.value("error", "unknown");
                continue;
            }
            return reply;
        }
        throw OracleError("POST " + route + " failed after " +
                              std::to_string(std::max(1, config_.retries)) + " attempts: " +
                              last_error,
                          request_id);
    }

private:
    HttpConfig config_;
};

std::string next_request_id(const char* kind) {
    return std::string(kind) + "-" + std::to_string(g_request_counter.fetch_add(1));
}

class HttpPanoramaGen final : public PanoramaGen {
public:
    explicit HttpPanoramaGen(HttpConfig config) : client_(std::move(config)) {}
    std::pair<EqrImage, std::optional<DepthMap>> generate(const std::string& prompt,
                                                          const geom::Pose& pose, int width,
                                                          int height) override {
        std::string id = next_request_id("panorama");
        json body = {{"prompt", prompt}, {"width", width}, {"height", height},
                     {"pose", pose_to_json(pose)}};
        json reply = client_.post("/v1/panorama", body, id);
        try {
            EqrImage image = image_from_b64(reply.at("image_png_b64").get<std::string>());
            std::optional<DepthMap> depth;
            if (reply.contains("depth_pfm_b64") && !reply.at("depth_pfm_b64").is_null())
                depth = depth_from_b64(reply.at("depth_pfm_b64").get<std::string>());
            if (!image.same_size(width, height))
                throw Error("response raster size does not match the request");
            return {std::move(image), std::move(depth)};
        } catch (const json::exception& e) {
            throw OracleError(std::string("malformed panorama response: ") + e.what(), id);
        }
    }

private:
    HttpClient client_;
};

class HttpInpainter final : public Inpainter {
public:
    explicit HttpInpainter(HttpConfig config) : client_(std::move(config)) {}
    EqrImage inpaint(const EqrImage& image, const BitMask& mask, const std::string& prompt,
                     const geom::Pose& pose) override {
        std::string id = next_request_id("inpaint");
        json body = {{"prompt", prompt},        {"width", image.width},
                     {"height", image.height},  {"pose", pose_to_json(pose)},
                     {"image_png_b64", image_b64(image)}, {"mask_png_b64", mask_b64(mask)}};
        json reply = client_.post("/v1/inpaint", body, id);
        try {
            EqrImage out = image_from_b64(reply.at("image_png_b64").get<std::string>());
            if (!out.same_size(image.width, image.height))
                throw Error("response raster size does not match the request");
            return out;
        } catch (const json::exception& e) {
            throw OracleError(std::string("malformed inpaint response: ") + e.what(), id);
        }
    }

private:
    HttpClient client_;
};

class HttpDepthEstimator final : public DepthEstimator {
public:
    explicit HttpDepthEstimator(HttpConfig config) : client_(std::move(config)) {}
    DepthMap estimate(const EqrImage& image, const geom::Pose& pose) override {
        std::string id = next_request_id("depth");
        json body = {{"width", image.width},
                     {"height", image.height},
                     {"pose", pose_to_json(pose)},
                     {"image_png_b64", image_b64(image)}};
        json reply = client_.post("/v1/depth", body, id);
        DepthMap depth;
        try {
            depth = depth_from_b64(reply.at("depth_pfm_b64").get<std::string>());
        } catch (const json::exception& e) {
            throw OracleError(std::string("malformed depth response: ") + e.what(), id);
        }
        if (!depth.same_size(image.width, image.height))
            throw OracleError("depth raster size does not match the request", id);
        if (!depth.fully_defined())
            throw OracleError("depth response contains nonpositive or non-finite values", id);
        return depth;
    }

private:
    HttpClient client_;
};

class HttpSegmenter final : public Segmenter {
public:
    explicit HttpSegmenter(HttpConfig config) : client_(std::move(config)) {}
    std::vector<BitMask> segment(const EqrImage& image, const geom::Pose& pose) override {
        std::string id = next_request_id("segment");
        json body = {{"width", image.width},
                     {"height", image.height},
                     {"pose", pose_to_json(pose)},
                     {"image_png_b64", image_b64(image)}};
        json reply = client_.post("/v1/segment", body, id);
        std::vector<BitMask> masks;
        try {
            for (const auto& b64 : reply.at("masks_png_b64")) {
                BitMask mask = mask_from_b64(b64.get<std::string>());
                if (!mask.same_size(image.width, image.height))
                    throw Error("mask raster size does not match the request");
                masks.push_back(std::move(mask));
            }
        } catch (const json::exception& e) {
            throw OracleError(std::string("malformed segment response: ") + e.what(), id);
        }
        return masks;
    }

private:
    HttpClient client_;
};

}  // namespace

OracleSet make_http_oracles(const HttpConfig& config) {
    OracleSet set;
    set.panorama = std::make_shared<HttpPanoramaGen>(config);
    set.inpainter = std::make_shared<HttpInpainter>(config);
    set.depth = std::make_shared<HttpDepthEstimator>(config);
    set.segmenter = std::make_shared<HttpSegmenter>(config);
    return set;
}

struct OracleServer::Impl {
    OracleSet oracles;
    std::string model_name;
    httplib::Server server;
    std::thread worker;

    json handle(const std::string& kind, const json& req) {
        geom::Pose pose = req.contains("pose") ? pose_from_json(req.at("pose"))
                                               : geom::Pose::identity();
        int width = req.value("width", 0);
        int height = req.value("height", 0);
        json reply = {{"status", "ok"}, {"model", model_name}};
        if (kind == "panorama") {
            auto [image, depth] = oracles.panorama->generate(
                req.value("prompt", std::string()), pose, width, height);
            reply["image_png_b64"] = image_b64(image);
            if (depth) reply["depth_pfm_b64"] = depth_b64(*depth);
        } else if (kind == "inpaint") {
            EqrImage image = image_from_b64(req.at("image_png_b64").get<std::string>());
            BitMask mask = mask_from_b64(req.at("mask_png_b64").get<std::string>());
            reply["image_png_b64"] = image_b64(
                oracles.inpainter->inpaint(image, mask, req.value("prompt", std::string()), pose));
        } else if (kind == "depth") {
            EqrImage image = image_from_b64(req.at("image_png_b64").get<std::string>());
            reply["depth_pfm_b64"] = depth_b64(oracles.depth->estimate(image, pose));
        } else if (kind == "segment") {
            EqrImage image = image_from_b64(req.at("image_png_b64").get<std::string>());
            json masks = json::array();
            for (const auto& mask : oracles.segmenter->segment(image, pose))
                masks.push_back(mask_b64(mask));
            reply["masks_png_b64"] = std::move(masks);
        } else {
            return {{"status", "error"}, {"error", "unknown route"}};
        }
        return reply;
    }
};

OracleServer::OracleServer(OracleSet oracles, int port, const std::string& model_name)
    : impl_(std::make_unique<Impl>()) {
    impl_->oracles = std::move(oracles);
    impl_->model_name = model_name;

    auto route = [this](const std::string& kind) {
        return [this, kind](const httplib::Request& req, httplib::Response& res) {
            json reply;
            try {
                json body = json::parse(req.body);
                reply = impl_->handle(kind, body);
            } catch (const std::exception& e) {
                reply = {{"status", "error"}, {"error", e.what()}};
            }
            res.set_content(reply.dump(), "application/json");
        };
    };
    impl_->server.Post("/v1/panorama", route("panorama"));
    impl_->server.Post("/v1/inpaint", route("inpaint"));
    impl_->server.Post("/v1/depth", route("depth"));
    impl_->server.Post("/v1/segment", route("segment"));

    if (port == 0) {
        port_ = impl_->server.bind_to_any_port("127.0.0.1");
    } else {
        if (!impl_->server.bind_to_port("127.0.0.1", port))
            throw Error("oracle server: cannot bind port " + std::to_string(port));
        port_ = port;
    }
    impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

OracleServer::~OracleServer() { stop(); }

void OracleServer::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
    if (impl_ && impl_->worker.joinable()) impl_->worker.join();
}

}  // namespace panofuse::oracle
