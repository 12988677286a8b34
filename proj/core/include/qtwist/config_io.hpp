#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "qtwist/curve.hpp"

namespace qtwist {

// Curve configuration files are flat key-value text, one entry per line:
//
//   # X_0(11)
//   label 11a
//   a1 0
//   a2 -1
//   a3 1
//   a4 -10
//   a6 -20
//   N 11
//   sign +1
//   torsion 5
//   11 split 5 5          <- local data: p kodaira c ord_p(Delta)
//   eta 1:2,11:2
//
// "key value", "key = value" and "key: value" are all accepted, as are
// "local <p> <kodaira> <c> <ord>" lines and a combined "a [a1,a2,a3,a4,a6]".
// Optional keys: omega, omega_vol.

CurveConfig parse_curve_config(std::string_view text, std::string_view source = "<string>");
CurveConfig load_curve_config(const std::filesystem::path& path);
std::string format_curve_config(const CurveConfig& cfg);

EtaQuotientSpec parse_eta_spec(std::string_view text);
std::string format_eta_spec(const EtaQuotientSpec& spec);

/// FNV-1a 64-bit digest, hex encoded; used in run manifests.
std::string digest_hex(std::string_view bytes);

}  // namespace qtwist
