#include "dpred/shot_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dpred {

namespace {

std::string fmt_count(long n) { return std::to_string(n); }

[[noreturn]] void fail(const std::string& origin, long line, const std::string& what) {
    throw parse_error(origin + ":" + std::to_string(line) + ": " + what);
}

double parse_double(std::string_view tok, const std::string& origin, long line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        fail(origin, line, "bad number '" + std::string(tok) + "'");
    return v;
}

long parse_long(std::string_view tok, const std::string& origin, long line) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        fail(origin, line, "bad integer '" + std::string(tok) + "'");
    return v;
}

// "key=value" -> value, enforcing the key.
std::string_view expect_kv(std::string_view field, std::string_view key,
                           const std::string& origin, long line) {
    auto eq = field.find('=');
    if (eq == std::string_view::npos || field.substr(0, eq) != key)
        fail(origin, line, "expected '" + std::string(key) + "=...', got '" +
                               std::string(field) + "'");
    return field.substr(eq + 1);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw parse_error("write failed: " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string shot_to_string(const RawShot& shot) {
    std::string out;
    out.reserve(1024);
    out += "shot_id=" + std::to_string(shot.shot_id) + "\n";
    for (const auto& cs : shot.channels) {
        out += "channel=";
        out += channel_name(cs.channel);
        out += " dt_ms=" + format_double(cs.dt_ms);
        out += " t0_ms=" + format_double(cs.t0_ms);
        out += " n=" + fmt_count(static_cast<long>(cs.samples.size()));
        out += "\n";
        for (double s : cs.samples) {
            out += format_double(s);
            out += "\n";
        }
    }
    return out;
}

void write_shot_file(const RawShot& shot, const std::filesystem::path& path) {
    write_file(path, shot_to_string(shot));
}

RawShot shot_from_string(const std::string& text, const std::string& origin) {
    RawShot shot;
    std::istringstream in(text);
    std::string line;
    long lineno = 0;

    if (!std::getline(in, line)) fail(origin, 1, "empty file");
    ++lineno;
    long id = parse_long(expect_kv(line, "shot_id", origin, lineno), origin, lineno);
    if (id < 0) fail(origin, lineno, "negative shot_id");
    shot.shot_id = static_cast<std::uint32_t>(id);

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) fail(origin, lineno, "unexpected blank line");
        std::istringstream fields(line);
        std::string f_channel, f_dt, f_t0, f_n, extra;
        if (!(fields >> f_channel >> f_dt >> f_t0 >> f_n) || (fields >> extra))
            fail(origin, lineno, "malformed channel header '" + line + "'");

        ChannelSeries cs;
        auto name = expect_kv(f_channel, "channel", origin, lineno);
        auto id_opt = channel_from_name(name);
        if (!id_opt) fail(origin, lineno, "unknown channel '" + std::string(name) + "'");
        cs.channel = *id_opt;
        cs.dt_ms = parse_double(expect_kv(f_dt, "dt_ms", origin, lineno), origin, lineno);
        cs.t0_ms = parse_double(expect_kv(f_t0, "t0_ms", origin, lineno), origin, lineno);
        long n = parse_long(expect_kv(f_n, "n", origin, lineno), origin, lineno);
        if (n < 0) fail(origin, lineno, "negative sample count");

        cs.samples.reserve(static_cast<std::size_t>(n));
        for (long i = 0; i < n; ++i) {
            if (!std::getline(in, line))
                fail(origin, lineno, "unexpected end of file inside channel block");
            ++lineno;
            cs.samples.push_back(parse_double(line, origin, lineno));
        }
        shot.channels.push_back(std::move(cs));
    }
    return shot;
}

RawShot read_shot_file(const std::filesystem::path& path) {
    return shot_from_string(read_file(path), path.string());
}

void write_aligned_csv(const AlignedShot& shot, const std::filesystem::path& path) {
    std::string out;
    out.reserve(static_cast<std::size_t>(shot.steps) * 64 + 128);
    out += "t_ms";
    for (auto name : kChannelNames) {
        out += ',';
        out += name;
    }
    out += ",label\n";
    for (long t = 0; t < shot.steps; ++t) {
        out += format_double(static_cast<double>(t) * shot.dt_ms);
        for (int c = 0; c < kNumChannels; ++c) {
            out += ',';
            out += format_double(shot.values[static_cast<std::size_t>(t) * kNumChannels + c]);
        }
        out += ',';
        out += shot.label.empty() ? '0' : static_cast<char>('0' + shot.label[t]);
        out += '\n';
    }
    write_file(path, out);
}

AlignedShot read_aligned_csv(const std::filesystem::path& path) {
    const std::string origin = path.string();
    std::istringstream in(read_file(path));
    std::string line;
    long lineno = 0;

    if (!std::getline(in, line)) fail(origin, 1, "empty file");
    ++lineno;
    {
        std::string expected = "t_ms";
        for (auto name : kChannelNames) expected += "," + std::string(name);
        expected += ",label";
        if (line != expected) fail(origin, lineno, "bad header '" + line + "'");
    }

    AlignedShot shot;
    shot.dt_ms = kSlowDtMs;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::string_view rest = line;
        while (true) {
            auto comma = rest.find(',');
            fields.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        if (fields.size() != kNumChannels + 2)
            fail(origin, lineno, "expected 12 columns, got " + std::to_string(fields.size()));
        for (int c = 0; c < kNumChannels; ++c)
            shot.values.push_back(parse_double(fields[1 + c], origin, lineno));
        long lab = parse_long(fields[kNumChannels + 1], origin, lineno);
        if (lab != 0 && lab != 1) fail(origin, lineno, "label must be 0 or 1");
        shot.label.push_back(static_cast<std::uint8_t>(lab));
        ++shot.steps;
    }

    // Re-derive the disruption step from the label column.
    for (long t = 0; t < shot.steps; ++t) {
        if (shot.label[t] == 1) {
            shot.disruption_step = t;
            break;
        }
    }
    return shot;
}

} // namespace dpred
