#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace obs {

// Directory of finished results keyed by the digest of a configuration
// string. Writes go through a temporary file and a rename, so a reader
// never sees a partial entry and an interrupted run can simply be resumed.
class ResultCache {
public:
    ResultCache() = default;  // disabled
    explicit ResultCache(std::filesystem::path dir);

    bool enabled() const { return !dir_.empty(); }
    std::optional<std::string> get(const std::string& config) const;
    void put(const std::string& config, const std::string& result) const;

private:
    std::filesystem::path entry(const std::string& config) const;
    std::filesystem::path dir_;
};

}  // namespace obs
