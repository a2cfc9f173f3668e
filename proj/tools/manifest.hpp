#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ambigeo::cli {

inline constexpr const char* kToolVersion = "0.1.0";

std::string sha256_file(const std::filesystem::path& path);

/// Provenance record written next to every command's outputs. The timestamp
/// honours SOURCE_DATE_EPOCH when set.
class RunManifest {
public:
    explicit RunManifest(std::string command) : command_(std::move(command)) {}

    template <typename T>
    void parameter(const std::string& key, const T& value) {
        parameters_[key] = value;
    }
    void input(const std::filesystem::path& path);
    void output(const std::filesystem::path& path);

    nlohmann::ordered_json to_json() const;
    void write(const std::filesystem::path& path) const;

private:
    std::string command_;
    nlohmann::ordered_json parameters_ = nlohmann::ordered_json::object();
    std::vector<std::pair<std::string, std::string>> inputs_;
    std::vector<std::pair<std::string, std::string>> outputs_;
};

}  // namespace ambigeo::cli
