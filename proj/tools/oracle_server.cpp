// Serves the synthetic oracles over the JSON/HTTP protocol, for exercising
// the http oracle adapter end to end or standing in for a model server.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

#include "panofuse/oracle/http.hpp"
#include "panofuse/oracle/synthetic.hpp"

using namespace panofuse;

namespace {
volatile std::sig_atomic_t g_stop = 0;
void handle_signal(int) { g_stop = 1; }
}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"synthetic oracle server"};
    int port = 8080;
    std::string scene_path;
    std::uint64_t seed = 1;
    int objects = 2;
    int distractors = 1;
    double depth_scale = 1.0, depth_offset = 0.0, depth_noise = 0.0;
    app.add_option("--port", port, "listen port");
    app.add_option("--scene", scene_path, "scene spec JSON (default: demo scene)");
    app.add_option("--seed", seed, "demo scene seed");
    app.add_option("--objects", objects, "demo scene object count");
    app.add_option("--distractors", distractors, "segmenter distractor masks");
    app.add_option("--depth-scale", depth_scale, "depth estimator scale error");
    app.add_option("--depth-offset", depth_offset, "depth estimator offset error");
    app.add_option("--depth-noise", depth_noise, "depth estimator noise amplitude");
    CLI11_PARSE(app, argc, argv);

    try {
        oracle::SceneSpec scene;
        if (!scene_path.empty()) {
            std::ifstream in(scene_path);
            if (!in) throw Error("cannot open scene: " + scene_path);
            from_json(nlohmann::json::parse(in), scene);
        } else {
            scene = oracle::SceneSpec::demo(seed, objects);
        }
        oracle::DepthCorruption corruption{depth_scale, depth_offset, depth_noise, seed};
        oracle::OracleSet oracles = oracle::make_synthetic_oracles(scene, corruption, distractors);
        oracle::OracleServer server(oracles, port);
        std::cout << "oracle server listening on 127.0.0.1:" << server.port() << "\n";
        std::signal(SIGINT, handle_signal);
        std::signal(SIGTERM, handle_signal);
        while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
        server.stop();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
