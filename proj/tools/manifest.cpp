#include "manifest.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "ambigeo/error.hpp"

namespace ambigeo::cli {

namespace {

std::string timestamp() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string() + " for hashing");
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &len);
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        char byte[3];
        std::snprintf(byte, sizeof byte, "%02x", digest[i]);
        hex += byte;
    }
    return hex;
}

void RunManifest::input(const std::filesystem::path& path) {
    inputs_.emplace_back(path.string(), sha256_file(path));
}

void RunManifest::output(const std::filesystem::path& path) {
    outputs_.emplace_back(path.string(), sha256_file(path));
}

nlohmann::ordered_json RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command_;
    j["parameters"] = parameters_;
    auto digests = [](const auto& entries) {
        auto obj = nlohmann::ordered_json::object();
        for (const auto& [path, hash] : entries) obj[path] = "sha256:" + hash;
        return obj;
    };
    j["inputs"] = digests(inputs_);
    j["outputs"] = digests(outputs_);
    j["tool_version"] = kToolVersion;
    j["timestamp"] = timestamp();
    return j;
}

void RunManifest::write(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write manifest " + path.string());
    out << to_json().dump(2) << '\n';
}

}  // namespace ambigeo::cli
