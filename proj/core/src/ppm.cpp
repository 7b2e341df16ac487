#include "bovdyn/errors.hpp"
#include "bovdyn/render.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bovdyn {

namespace {

constexpr std::array<Rgb, 12> kAttractorColors{{
    {31, 119, 180},
    {255, 215, 0},
    {44, 160, 44},
    {214, 39, 40},
    {148, 103, 189},
    {23, 190, 207},
    {255, 127, 14},
    {227, 119, 194},
    {140, 86, 75},
    {188, 189, 34},
    {0, 0, 128},
    {128, 0, 0},
}};

void write_file(const std::string& bytes, const std::string& path)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw Error("cannot open '" + path + "' for writing");
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os)
        throw Error("write to '" + path + "' failed");
}

} // namespace

Rgb palette_color(int code)
{
    switch (code) {
    case kEscaped:
        return {0, 0, 0};
    case kPole:
        return {255, 255, 255};
    case kUndecided:
        return {128, 128, 128};
    default:
        break;
    }
    if (code < 0)
        throw Error("palette: no color for code " + std::to_string(code));
    if (static_cast<std::size_t>(code) < kAttractorColors.size())
        return kAttractorColors[static_cast<std::size_t>(code)];
    // Beyond the table: bytes of a multiplicative hash, kept away from the reserved grays.
    const std::uint32_t h = static_cast<std::uint32_t>(code) * 2654435761u;
    return {static_cast<unsigned char>(64 + (h & 0x7f)), static_cast<unsigned char>(32 + ((h >> 8) & 0xbf)),
            static_cast<unsigned char>(16 + ((h >> 16) & 0x3f))};
}

std::string encode_ppm(const BasinImage& img)
{
    if (img.cells.size() != static_cast<std::size_t>(img.nx) * static_cast<std::size_t>(img.ny))
        throw Error("encode_ppm: cell count does not match resolution");
    std::string out = "P6\n" + std::to_string(img.nx) + " " + std::to_string(img.ny) + "\n255\n";
    out.reserve(out.size() + 3 * img.cells.size());
    for (int code : img.cells) {
        const Rgb c = palette_color(code);
        out.push_back(static_cast<char>(c.r));
        out.push_back(static_cast<char>(c.g));
        out.push_back(static_cast<char>(c.b));
    }
    return out;
}

void write_ppm(const BasinImage& img, const std::string& path)
{
    write_file(encode_ppm(img), path);
}

std::string stats_csv(const BasinImage& img)
{
    std::ostringstream os;
    os.precision(17);
    os << "code,fraction\n";
    for (auto [code, frac] : img.stats)
        os << code << "," << frac << "\n";
    return os.str();
}

void write_stats_csv(const BasinImage& img, const std::string& path)
{
    write_file(stats_csv(img), path);
}

std::string fnv1a_hex(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace bovdyn
