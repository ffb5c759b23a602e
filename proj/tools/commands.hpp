#pragma once

#include "json.hpp"
#include <functional>
#include <string>

#include "CLI11.hpp"

namespace ekcli {

using Json = nlohmann::ordered_json;

// Result of a subcommand: exit status plus a machine-readable summary.
struct Outcome {
    int status = 0;
    Json summary = Json::object();
};

// Registers every subcommand on the app. The chosen subcommand's handler is
// returned through `run`.
void register_commands(CLI::App& app, std::function<Outcome()>& run);

}  // namespace ekcli
