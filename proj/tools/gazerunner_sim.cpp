// Headless session runner: synthetic gaze policies or recorded traces in,
// metrics, event logs, and replay digests out.

#include "gazerunner/io.hpp"
#include "gazerunner/sim.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitReplayMismatch = 1;
constexpr int kExitBadInput = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    using namespace gazerunner;

    CLI::App app{"gazerunner-sim: run headless gaze-runner sessions"};
    std::string config_path;
    std::string policy_name = "perfect";
    double sigma = sim::kDefaultSigma;
    std::string trace_path;
    int sessions = 1;
    std::optional<std::uint64_t> seed;
    std::string mode;
    std::string out_dir;
    std::string replay_path;
    unsigned jobs = 0;

    app.add_option("--config", config_path, "JSON config file (defaults apply when omitted)");
    app.add_option("--policy", policy_name, "Gaze policy")
        ->check(CLI::IsMember({"perfect", "jitter", "blind", "trace"}));
    app.add_option("--sigma", sigma, "Jitter standard deviation, normalized screen units")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--trace", trace_path, "Input trace CSV for --policy trace");
    app.add_option("--sessions", sessions, "Number of sessions")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "Master seed (overrides the config)");
    app.add_option("--mode", mode, "Attention mode")->check(CLI::IsMember({"tracked", "auto"}));
    app.add_option("--out", out_dir, "Output directory for artifacts");
    app.add_option("--replay", replay_path, "Digest file to verify against; exits 1 on mismatch");
    app.add_option("--jobs", jobs, "Worker threads (0 = hardware concurrency)");
    CLI11_PARSE(app, argc, argv);

    sim::RunSpec spec;
    try {
        spec.config = config_path.empty() ? SimConfig{} : load_config(config_path);
        if (seed) spec.config.seed = *seed;
        if (!mode.empty()) spec.config.attention_mode = *attention_mode_from_string(mode);
        spec.config.validate();
        spec.policy = *sim::policy_from_string(policy_name);
        spec.sigma = sigma;
        spec.sessions = sessions;
        spec.jobs = jobs;
        if (spec.policy == sim::PolicyKind::Trace) {
            if (trace_path.empty()) throw std::invalid_argument("--policy trace requires --trace");
            spec.trace = load_trace(trace_path);
        } else if (!trace_path.empty()) {
            throw std::invalid_argument("--trace is only valid with --policy trace");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadInput;
    }

    sim::RunResult result;
    try {
        result = sim::run(spec);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadInput;
    }

    std::vector<SessionMetrics> metrics;
    for (const auto& s : result.sessions) metrics.push_back(s.metrics);
    std::cout << format_session_table(metrics, result.aggregate);
    std::cout << sim::format_digests(result);

    if (!out_dir.empty()) {
        sim::write_artifacts(result, spec, out_dir);
    }

    if (!replay_path.empty()) {
        std::map<std::string, std::string> expected;
        try {
            expected = sim::parse_digests(read_file(replay_path));
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitBadInput;
        }
        const auto actual = sim::parse_digests(sim::format_digests(result));
        if (expected != actual) {
            std::cerr << "replay mismatch\n";
            for (const auto& [name, hex] : expected) {
                auto it = actual.find(name);
                std::cerr << "  " << name << " expected " << hex << " got "
                          << (it == actual.end() ? std::string("(missing)") : it->second) << '\n';
            }
            return kExitReplayMismatch;
        }
        std::cout << "replay ok: " << actual.size() << " digest(s) match\n";
    }
    return 0;
}
