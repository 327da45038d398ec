#pragma once

// Certificate files: an envelope {kind, version, digest, payload} written as
// canonical JSON (sorted keys, compact, trailing newline). The digest is
// "sha256:" + hex SHA-256 of the compact payload text.

#include <stdexcept>
#include <string>
#include <variant>

#include "obs/m2_search.hpp"
#include "obs/report.hpp"
#include "obs/verify.hpp"

namespace obs {

inline constexpr int kCertificateVersion = 1;

// Schema or digest problem; the message starts with the offending field path.
class CertificateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Certificate = std::variant<LowerBoundCertificate, m2::StrategyPairCertificate, m2::SweepCertificate>;

std::string certificate_kind(const Certificate& cert);

std::string emit_certificate(const Certificate& cert);
Certificate load_certificate(const std::string& text);

// Parses, checks the digest and schema, then runs the kind's verifier.
VerifyReport verify_certificate_text(const std::string& text);
VerifyReport verify_certificate(const Certificate& cert);

std::string sha256_hex(const std::string& data);

}  // namespace obs
