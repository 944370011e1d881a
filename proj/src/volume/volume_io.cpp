#include "fuzzpipe/volume/volume_io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fuzzpipe::volume {

namespace {

namespace fs = std::filesystem;

struct Header {
    int nx = 0, ny = 0, nz = 0;
    double sx = 1.0, sy = 1.0, sz = 1.0;
    std::string element_type;
    std::string data_file;
};

std::string raw_path_for(const std::string& header_path) {
    fs::path p(header_path);
    p.replace_extension(".raw");
    return p.string();
}

void write_header(const std::string& header_path, const Header& h) {
    std::ofstream out(header_path);
    if (!out) throw std::runtime_error("cannot write header: " + header_path);
    out << "NDims = 3\n";
    out << "DimSize = " << h.nx << " " << h.ny << " " << h.nz << "\n";
    out << "ElementSpacing = " << h.sx << " " << h.sy << " " << h.sz << "\n";
    out << "ElementType = " << h.element_type << "\n";
    out << "ElementDataFile = " << h.data_file << "\n";
}

Header read_header(const std::string& header_path) {
    std::ifstream in(header_path);
    if (!in) throw std::runtime_error("cannot open header: " + header_path);
    Header h;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
        };
        trim(key);
        trim(value);
        if (key == "NDims") {
            if (value != "3") throw std::runtime_error("expected NDims = 3 in " + header_path);
        } else if (key == "DimSize") {
            std::istringstream ss(value);
            ss >> h.nx >> h.ny >> h.nz;
        } else if (key == "ElementSpacing") {
            std::istringstream ss(value);
            ss >> h.sx >> h.sy >> h.sz;
        } else if (key == "ElementType") {
            h.element_type = value;
        } else if (key == "ElementDataFile") {
            h.data_file = value;
        }
    }
    if (h.nx <= 0 || h.ny <= 0 || h.nz <= 0)
        throw std::runtime_error("bad or missing DimSize in " + header_path);
    if (h.element_type.empty()) throw std::runtime_error("missing ElementType in " + header_path);
    return h;
}

std::string resolve_data_file(const std::string& header_path, const std::string& data_file) {
    const fs::path dp(data_file);
    if (dp.is_absolute()) return data_file;
    return (fs::path(header_path).parent_path() / dp).string();
}

template <typename Raw>
std::vector<Raw> read_raw(const std::string& path, std::size_t count) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open raw file: " + path);
    std::vector<Raw> buf(count);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(count * sizeof(Raw)));
    if (static_cast<std::size_t>(in.gcount()) != count * sizeof(Raw))
        throw std::runtime_error("raw file truncated: " + path);
    return buf;
}

template <typename Raw>
void write_raw(const std::string& path, const Raw* data, std::size_t count) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write raw file: " + path);
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(Raw)));
}

}  // namespace

void save_volume(const Volume& v, const std::string& header_path, const std::string& element_type) {
    const std::string raw = raw_path_for(header_path);
    Header h{v.nx(), v.ny(), v.nz(), v.sx, v.sy, v.sz, element_type,
             fs::path(raw).filename().string()};
    if (element_type == "float32") {
        write_raw(raw, v.data().data(), v.size());
    } else if (element_type == "uint8") {
        std::vector<std::uint8_t> buf(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            buf[i] = static_cast<std::uint8_t>(std::clamp(v[i], 0.0f, 1.0f) * 255.0f + 0.5f);
        write_raw(raw, buf.data(), buf.size());
    } else if (element_type == "uint16") {
        std::vector<std::uint16_t> buf(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            buf[i] = static_cast<std::uint16_t>(std::clamp(v[i], 0.0f, 1.0f) * 65535.0f + 0.5f);
        write_raw(raw, buf.data(), buf.size());
    } else {
        throw std::invalid_argument("unsupported intensity element type: " + element_type);
    }
    write_header(header_path, h);
}

Volume load_volume(const std::string& header_path) {
    const Header h = read_header(header_path);
    Volume v(h.nx, h.ny, h.nz);
    v.sx = h.sx;
    v.sy = h.sy;
    v.sz = h.sz;
    const std::string raw = resolve_data_file(header_path, h.data_file);
    if (h.element_type == "float32") {
        auto buf = read_raw<float>(raw, v.size());
        v.data() = std::move(buf);
    } else if (h.element_type == "uint8") {
        const auto buf = read_raw<std::uint8_t>(raw, v.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<float>(buf[i]) / 255.0f;
    } else if (h.element_type == "uint16") {
        const auto buf = read_raw<std::uint16_t>(raw, v.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<float>(buf[i]) / 65535.0f;
    } else {
        throw std::runtime_error("unsupported intensity element type: " + h.element_type);
    }
    return v;
}

void save_labels(const LabelVolume& v, const std::string& header_path) {
    const std::string raw = raw_path_for(header_path);
    Header h{v.nx(), v.ny(), v.nz(), v.sx, v.sy, v.sz, "uint32",
             fs::path(raw).filename().string()};
    write_raw(raw, v.data().data(), v.size());
    write_header(header_path, h);
}

LabelVolume load_labels(const std::string& header_path) {
    const Header h = read_header(header_path);
    if (h.element_type != "uint32")
        throw std::runtime_error("label volume must be uint32: " + header_path);
    LabelVolume v(h.nx, h.ny, h.nz);
    v.sx = h.sx;
    v.sy = h.sy;
    v.sz = h.sz;
    auto buf = read_raw<std::uint32_t>(resolve_data_file(header_path, h.data_file), v.size());
    v.data() = std::move(buf);
    return v;
}

}  // namespace fuzzpipe::volume
