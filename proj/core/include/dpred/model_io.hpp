#ifndef DPRED_MODEL_IO_HPP
#define DPRED_MODEL_IO_HPP

#include <filesystem>
#include <stdexcept>

#include "dpred/lstm.hpp"

namespace dpred {

/// Weight files are versioned little-endian binaries:
///   magic "TKGW", version u32, hidden_dim u32, init seed u64,
///   weight blocks as f64 row-major in declaration order (Wi Wf Wg Wo,
///   Ui Uf Ug Uo, bi bf bg bo, wy, by),
///   normalization stats as 10 x {min, max} f64,
///   FNV-1a 64 checksum of all prior bytes.
inline constexpr std::uint32_t kWeightFileVersion = 1;

struct load_error : std::runtime_error {
    enum class Kind { BadMagic, VersionMismatch, DimensionMismatch, CorruptChecksum };
    Kind kind;
    load_error(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

void save_params(const ModelParams& params, const std::filesystem::path& path);
ModelParams load_params(const std::filesystem::path& path);

/// Checksum of the serialized form; what the determinism contract compares.
std::uint64_t params_checksum(const ModelParams& params);

} // namespace dpred

#endif
