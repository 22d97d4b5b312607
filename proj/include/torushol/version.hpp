#pragma once

namespace torushol {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kCertificateSchemaVersion = "1";

}  // namespace torushol
