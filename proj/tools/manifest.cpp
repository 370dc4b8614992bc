#include "manifest.hpp"

#include "ecosim/ingest.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace ecosim::cli {

namespace {

class Sha256 {
public:
    Sha256() : ctx_(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
        if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
            throw std::runtime_error("sha256 init failed");
        }
    }

    void update(std::string_view bytes) { EVP_DigestUpdate(ctx_.get(), bytes.data(), bytes.size()); }

    std::string hex() {
        unsigned char digest[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        EVP_DigestFinal_ex(ctx_.get(), digest, &len);
        std::ostringstream out;
        for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
        return out.str();
    }

private:
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

} // namespace

nlohmann::json RunManifest::to_json() const {
    return {{"tool", "ecosim"},
            {"tool_version", tool_version},
            {"command_line", command_line},
            {"config_hash", config_hash},
            {"dataset_hash", dataset_hash},
            {"seeds", seeds},
            {"wall_time_seconds", wall_time_seconds},
            {"outputs", outputs}};
}

std::string sha256_hex(std::string_view bytes) {
    Sha256 h;
    h.update(bytes);
    return h.hex();
}

std::string dataset_hash(const std::filesystem::path& dir) {
    Sha256 h;
    for (const char* name : {DatasetFiles::kMeta, DatasetFiles::kNodes, DatasetFiles::kEvents, DatasetFiles::kJoins,
                             DatasetFiles::kPosts, DatasetFiles::kBans}) {
        std::ifstream in(dir / name, std::ios::binary);
        if (!in) continue;
        h.update(name);
        h.update(std::string_view("\0", 1));
        char buf[1 << 16];
        while (in.read(buf, sizeof buf) || in.gcount() > 0) h.update(std::string_view(buf, static_cast<std::size_t>(in.gcount())));
    }
    return h.hex();
}

std::string json_hash(const nlohmann::json& j) { return sha256_hex(j.dump()); }

} // namespace ecosim::cli
