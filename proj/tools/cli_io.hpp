#pragma once

#include "scram/decoder.hpp"
#include "scram/ldpc.hpp"
#include "scram/scram_graph.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace scram::cli {

using Json = nlohmann::ordered_json;

/// Bad command line or configuration content (exit code 2).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string sha256_hex(const std::string& bytes);

/// Shortest round-trip decimal, independent of the C++ locale.
std::string format_double(double x);

/// Reads a non-negative integer from the environment, or returns `fallback`.
std::uint64_t env_budget(const char* name, std::uint64_t fallback);

/// Resolves paths against the work directory and records a digest of every
/// file it reads, keyed by the path as written.
class InputFiles {
public:
    explicit InputFiles(std::filesystem::path workdir) : workdir_(std::move(workdir)) {}

    std::filesystem::path resolve(const std::string& path) const;
    std::string read_text(const std::string& path);
    Json read_json(const std::string& path);
    ParityCheckMatrix read_alist(const std::string& path);

    const std::map<std::string, std::string>& digests() const noexcept { return digests_; }

private:
    std::filesystem::path workdir_;
    std::map<std::string, std::string> digests_;
};

struct LoadedSystem {
    ScramConfig config;
    ScramSystem system;
    /// Normalized description for the manifest.
    Json resolved;
    std::vector<std::string> warnings;
};

/// A scenario file, or a directory written by build-scram.
LoadedSystem load_system(InputFiles& files, const std::string& path, std::optional<std::uint64_t> seed);

LoadedSystem load_scenario(InputFiles& files, const Json& scenario, const std::string& where,
                           std::optional<std::uint64_t> seed);

struct LoadedExperiment {
    LoadedSystem system;
    PerExperiment per;
    Json resolved;
};

LoadedExperiment load_experiment(InputFiles& files, const std::string& path, std::optional<std::uint64_t> seed);

/// {"slot_base": 1, "slots": [[...], ...]}
Json assignment_json(const SlotAssignment& a);
SlotAssignment assignment_from_json(const Json& j, const std::string& where);

} // namespace scram::cli
