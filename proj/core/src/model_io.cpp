#include "dpred/model_io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

namespace dpred {

namespace {

constexpr char kMagic[4] = {'T', 'K', 'G', 'W'};
constexpr std::size_t kMaxHidden = 1u << 20;

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    put_u64(out, bits);
}

struct Reader {
    const std::string& bytes;
    std::size_t pos = 0;

    bool need(std::size_t n) const { return pos + n <= bytes.size(); }

    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[pos + i])) << (8 * i);
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[pos + i])) << (8 * i);
        pos += 8;
        return v;
    }
    double f64() {
        std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }
};

std::string serialize(const ModelParams& params) {
    std::string out;
    const auto h = static_cast<std::size_t>(params.w.hidden);
    out.reserve(24 + (4 * h * kNumChannels + 4 * h * h + 5 * h + 21) * 8);

    out.append(kMagic, 4);
    put_u32(out, kWeightFileVersion);
    put_u32(out, static_cast<std::uint32_t>(params.w.hidden));
    put_u64(out, params.init_seed);
    params.w.for_each_block([&out](const std::vector<double>& block) {
        for (double v : block) put_f64(out, v);
    });
    put_f64(out, params.w.by);
    for (int c = 0; c < kNumChannels; ++c) {
        put_f64(out, params.norm_stats.min[c]);
        put_f64(out, params.norm_stats.max[c]);
    }
    put_u64(out, fnv1a(out));
    return out;
}

} // namespace

std::uint64_t params_checksum(const ModelParams& params) {
    return fnv1a(serialize(params));
}

void save_params(const ModelParams& params, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    const std::string bytes = serialize(params);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

ModelParams load_params(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string bytes = ss.str();

    Reader rd{bytes};
    if (!rd.need(4))
        throw load_error(load_error::Kind::CorruptChecksum,
                         path.string() + ": truncated weight file");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw load_error(load_error::Kind::BadMagic, path.string() + ": not a TKGW weight file");
    rd.pos = 4;

    if (!rd.need(8))
        throw load_error(load_error::Kind::CorruptChecksum,
                         path.string() + ": truncated weight file");
    const std::uint32_t version = rd.u32();
    if (version != kWeightFileVersion)
        throw load_error(load_error::Kind::VersionMismatch,
                         path.string() + ": weight file version " + std::to_string(version) +
                             ", expected " + std::to_string(kWeightFileVersion));
    const std::uint32_t hidden = rd.u32();
    if (hidden == 0 || hidden > kMaxHidden)
        throw load_error(load_error::Kind::DimensionMismatch,
                         path.string() + ": implausible hidden_dim " + std::to_string(hidden));

    const std::size_t h = hidden;
    const std::size_t payload_doubles =
        4 * h * kNumChannels + 4 * h * h + 4 * h + h + 1 + 2 * kNumChannels;
    const std::size_t expected = 4 + 4 + 4 + 8 + payload_doubles * 8 + 8;
    if (bytes.size() < expected)
        throw load_error(load_error::Kind::CorruptChecksum,
                         path.string() + ": truncated weight file (" +
                             std::to_string(bytes.size()) + " bytes, expected " +
                             std::to_string(expected) + ")");
    if (bytes.size() > expected)
        throw load_error(load_error::Kind::DimensionMismatch,
                         path.string() + ": file size does not match hidden_dim " +
                             std::to_string(hidden));

    const std::uint64_t stored =
        Reader{bytes, expected - 8}.u64();
    if (fnv1a(bytes.substr(0, expected - 8)) != stored)
        throw load_error(load_error::Kind::CorruptChecksum,
                         path.string() + ": checksum mismatch");

    ModelParams params;
    params.w.resize(static_cast<int>(hidden));
    params.init_seed = rd.u64();
    params.w.for_each_block([&rd](std::vector<double>& block) {
        for (auto& v : block) v = rd.f64();
    });
    params.w.by = rd.f64();
    for (int c = 0; c < kNumChannels; ++c) {
        params.norm_stats.min[c] = rd.f64();
        params.norm_stats.max[c] = rd.f64();
    }
    return params;
}

} // namespace dpred
