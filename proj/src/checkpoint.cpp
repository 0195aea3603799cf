#include "axireg/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace axireg {

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

template <class T>
void put(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw Error("checkpoint: truncated header");
    return value;
}

void put_field(std::ostream& out, const ScalarField2D& f) {
    const auto v = f.values();
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void get_field(std::istream& in, ScalarField2D& f) {
    auto v = f.values();
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!in) throw Error("checkpoint: truncated field data");
}

}  // namespace

void write_checkpoint(std::ostream& out, const AxisymState& state) {
    const CylGrid& g = state.grid();
    out.write("AXRG", 4);
    put<std::uint32_t>(out, kCheckpointVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n_r()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n_z()));
    put<double>(out, g.r_max());
    put<double>(out, g.z_half());
    put<double>(out, state.t);
    put_field(out, state.u_r);
    put_field(out, state.u_theta);
    put_field(out, state.u_z);
    put_field(out, state.pressure);
    if (!out) throw Error("checkpoint: write failed");
}

void write_checkpoint(const std::filesystem::path& path, const AxisymState& state) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("checkpoint: cannot open " + path.string());
    write_checkpoint(out, state);
}

AxisymState read_checkpoint(std::istream& in) {
    std::array<char, 4> magic{};
    in.read(magic.data(), 4);
    if (!in || std::memcmp(magic.data(), "AXRG", 4) != 0) {
        throw Error("checkpoint: bad magic bytes");
    }
    const auto version = get<std::uint32_t>(in);
    if (version != kCheckpointVersion) {
        throw Error("checkpoint: unsupported format version " + std::to_string(version));
    }
    const auto n_r = get<std::uint32_t>(in);
    const auto n_z = get<std::uint32_t>(in);
    const auto r_max = get<double>(in);
    const auto z_half = get<double>(in);
    const auto t = get<double>(in);
    AxisymState state = AxisymState::zeros(make_grid(r_max, z_half, n_r, n_z), t);
    get_field(in, state.u_r);
    get_field(in, state.u_theta);
    get_field(in, state.u_z);
    get_field(in, state.pressure);
    return state;
}

AxisymState read_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("checkpoint: cannot open " + path.string());
    return read_checkpoint(in);
}

}  // namespace axireg
