#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace adcert::cli {

struct Command {
    std::string verb;  // eval, ad, classify, census, fixture, bounds
    std::optional<std::string> net;      // config path
    std::optional<std::string> fixture;  // name[,key=value...]
    std::optional<std::string> at;
    std::optional<std::string> grid;
    std::optional<std::string> out;
    bool log_points = false;
    bool allow_unknown = false;
    bool decimal = false;
    std::size_t jobs = 1;
    std::uint64_t seed = 0;
    std::size_t directions = 8;
};

struct UsageError : std::runtime_error {
    std::string help;
    UsageError(const std::string& msg, std::string help_text) : std::runtime_error(msg), help(std::move(help_text)) {}
};

// -h / --help
struct HelpRequested {
    std::string text;
};

Command parse_args(const std::vector<std::string>& args);  // args exclude the program name
int run(const Command& cmd, std::ostream& out, std::ostream& err);
// parse + run with the exit-code contract: 0 ok, 1 check failed, 2 usage, I/O or config error.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace adcert::cli
