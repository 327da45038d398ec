#include "obs/cache.hpp"

#include <fstream>
#include <sstream>
#include <thread>

#include "obs/certificate.hpp"

namespace obs {

namespace fs = std::filesystem;

ResultCache::ResultCache(fs::path dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) fs::create_directories(dir_);
}

fs::path ResultCache::entry(const std::string& config) const { return dir_ / (sha256_hex(config) + ".json"); }

std::optional<std::string> ResultCache::get(const std::string& config) const {
    if (!enabled()) return std::nullopt;
    std::ifstream in(entry(config), std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    // First line repeats the configuration to guard against digest collisions.
    std::string text = ss.str();
    auto nl = text.find('\n');
    if (nl == std::string::npos || text.compare(0, nl, config) != 0) return std::nullopt;
    return text.substr(nl + 1);
}

void ResultCache::put(const std::string& config, const std::string& result) const {
    if (!enabled()) return;
    fs::path target = entry(config);
    std::ostringstream tmpname;
    tmpname << target.string() << ".tmp" << std::this_thread::get_id();
    {
        std::ofstream out(tmpname.str(), std::ios::binary | std::ios::trunc);
        out << config << '\n' << result;
        if (!out) throw std::runtime_error("cannot write cache entry " + tmpname.str());
    }
    fs::rename(tmpname.str(), target);
}

}  // namespace obs
