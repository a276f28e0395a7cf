#include "sch/io.hpp"

#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace sch {
namespace io {

namespace {
constexpr char kMagic[4] = {'S', 'C', 'H', 'F'};
}

void write_field(const std::string& path, const Field& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_field: cannot open " + path);
    uint32_t header[3] = {static_cast<uint32_t>(f.size()), 0, 0};
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    out.write(reinterpret_cast<const char*>(f.values().data()),
              static_cast<std::streamsize>(sizeof(double) * f.values().size()));
    if (!out) throw std::runtime_error("write_field: write failed for " + path);
}

Field read_field(const std::string& path, GridPtr grid) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_field: cannot open " + path);
    char magic[4];
    uint32_t header[3];
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("read_field: bad magic in " + path);
    const uint32_t n = header[0];
    if (grid && static_cast<uint32_t>(grid->n) != n)
        throw std::runtime_error("read_field: snapshot has n=" + std::to_string(n) + ", expected " +
                                 std::to_string(grid->n));
    if (!grid) grid = make_grid(static_cast<int>(n));
    std::vector<double> values(n);
    in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(sizeof(double) * n));
    if (!in) throw std::runtime_error("read_field: truncated data in " + path);
    return Field(grid, std::move(values));
}

void write_csv(const std::string& path, const std::vector<double>& times,
               const std::vector<std::pair<std::string, std::vector<double>>>& columns) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << "t";
    for (const auto& [name, col] : columns) out << "," << name;
    out << "\n";
    out << std::setprecision(17);
    for (size_t i = 0; i < times.size(); ++i) {
        out << times[i];
        for (const auto& [name, col] : columns) {
            out << ",";
            if (i < col.size()) out << col[i];
        }
        out << "\n";
    }
}

uint64_t fnv1a(const void* data, size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    uint64_t h = 0xcbf29ce484222325ULL;
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

uint64_t fnv1a_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("fnv1a_file: cannot open " + path);
    uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        const auto got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

std::string hex64(uint64_t h) {
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << h;
    return s.str();
}

}  // namespace io
}  // namespace sch
