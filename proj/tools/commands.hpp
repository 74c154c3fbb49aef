#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

namespace sgmh::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitBoundsFailed = 2;
inline constexpr int kExitRejected = 3;

struct RunArgs {
    std::filesystem::path scenario;
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out_dir;
    bool csv = false;
    bool summary = false;
    bool bypass_admission = false;
    /// Number of consecutive seeds to run in parallel; 0 for a single run.
    unsigned sweep = 0;
};

int run_command(const RunArgs& args, std::ostream& out, std::ostream& err);
int admit_command(const std::filesystem::path& scenario, std::ostream& out, std::ostream& err);
int bounds_command(const std::filesystem::path& scenario, int hops, std::ostream& out, std::ostream& err);
int buffers_command(const std::filesystem::path& scenario, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to the subcommands above.
int main_entry(int argc, char** argv);

} // namespace sgmh::cli
