#ifndef DPRED_SHOT_IO_HPP
#define DPRED_SHOT_IO_HPP

#include <filesystem>
#include <stdexcept>
#include <string>

#include "dpred/shot.hpp"

namespace dpred {

/// Raised on malformed shot files and CSV inputs; the message names the file
/// and the offending line.
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);

/// Canonical shot file: UTF-8, LF line endings.
///   shot_id=<int>
/// then per channel, in the order stored in the shot:
///   channel=<name> dt_ms=<decimal> t0_ms=<decimal> n=<int>
/// followed by n sample lines. Writing a shot read from a canonical file
/// reproduces the file byte for byte.
void write_shot_file(const RawShot& shot, const std::filesystem::path& path);
RawShot read_shot_file(const std::filesystem::path& path);

std::string shot_to_string(const RawShot& shot);
RawShot shot_from_string(const std::string& text, const std::string& origin = "<string>");

/// Aligned-shot CSV: header `t_ms,Ip,...,O1,label`, one row per 0.2 ms step.
void write_aligned_csv(const AlignedShot& shot, const std::filesystem::path& path);
AlignedShot read_aligned_csv(const std::filesystem::path& path);

} // namespace dpred

#endif
