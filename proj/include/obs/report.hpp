#pragma once

#include <string>
#include <vector>

namespace obs {

struct VerifyReport {
    bool ok = true;
    std::vector<std::string> checks;
    std::string reason;  // first rejection, empty when ok
};

}  // namespace obs
