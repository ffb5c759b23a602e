#include <cstdlib>
#include <iostream>

#include "commands.hpp"
#include "epstein_kit/core.hpp"
#include "epstein_kit/io.hpp"
#include "epstein_kit/kernels.hpp"

int main(int argc, char** argv) {
    CLI::App app{"epstein-kit: conformal metrics, Epstein surfaces, univalence and W-volume"};
    app.set_version_flag("--version", std::string(ek::kVersion));
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "INI/TOML file; [section] per subcommand, unknown keys rejected");
    app.allow_config_extras(CLI::config_extras_mode::error);
    int threads = 0;
    std::string json_path;
    app.add_option("--threads", threads, "worker threads (sets EPSTEIN_KIT_THREADS)");
    app.add_option("--json", json_path, "write a JSON summary here");

    std::function<ekcli::Outcome()> run;
    ekcli::register_commands(app, run);
    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (threads > 0) setenv("EPSTEIN_KIT_THREADS", std::to_string(threads).c_str(), 1);
    try {
        if (!json_path.empty()) ek::require_writable_parent(json_path);
        ekcli::Outcome out = run();
        if (!json_path.empty()) {
            out.summary["version"] = ek::kVersion;
            out.summary["status"] = out.status;
            ek::atomic_write(json_path, out.summary.dump(2) + "\n");
        }
        return out.status;
    } catch (const ek::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ek::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
