#include "anyon/field_io.hpp"

#include <bit>
#include <fstream>

#include <json.hpp>

namespace anyon {

static_assert(std::endian::native == std::endian::little, "field dumps assume a little-endian host");

namespace {

std::filesystem::path with_ext(const std::filesystem::path& stem, const char* ext) {
    auto p = stem;
    p += ext;
    return p;
}

void write_payload(const std::filesystem::path& stem, const Grid2D& g, const char* kind,
                   const std::vector<double>& data) {
    std::ofstream bin(with_ext(stem, ".bin"), std::ios::binary);
    if (!bin) throw std::runtime_error("cannot open " + with_ext(stem, ".bin").string());
    bin.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double)));

    nlohmann::ordered_json meta;
    meta["n"] = g.n;
    meta["L"] = g.L;
    meta["kind"] = kind;
    std::ofstream js(with_ext(stem, ".json"));
    if (!js) throw std::runtime_error("cannot open " + with_ext(stem, ".json").string());
    js << meta.dump() << "\n";
}

std::pair<Grid2D, std::vector<double>> read_payload(const std::filesystem::path& stem, const std::string& kind,
                                                    std::size_t per_sample) {
    std::ifstream js(with_ext(stem, ".json"));
    if (!js) throw std::runtime_error("cannot open " + with_ext(stem, ".json").string());
    const auto meta = nlohmann::json::parse(js);
    if (meta.at("kind").get<std::string>() != kind)
        throw ShapeError("field dump " + stem.string() + " has kind " + meta.at("kind").get<std::string>() +
                         ", expected " + kind);
    const Grid2D g(meta.at("L").get<double>(), meta.at("n").get<int>());

    std::vector<double> data(g.size() * per_sample);
    std::ifstream bin(with_ext(stem, ".bin"), std::ios::binary | std::ios::ate);
    if (!bin) throw std::runtime_error("cannot open " + with_ext(stem, ".bin").string());
    const auto bytes = static_cast<std::size_t>(bin.tellg());
    if (bytes != data.size() * sizeof(double))
        throw ShapeError("field dump " + stem.string() + ": payload size does not match sidecar");
    bin.seekg(0);
    bin.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(bytes));
    return {g, std::move(data)};
}

} // namespace

void write_field(const std::filesystem::path& stem, const ComplexField& f) {
    std::vector<double> data(2 * f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        data[2 * i] = f[i].real();
        data[2 * i + 1] = f[i].imag();
    }
    write_payload(stem, f.grid, "complex", data);
}

void write_field(const std::filesystem::path& stem, const RealField& f) {
    write_payload(stem, f.grid, "real", f.values);
}

void write_field(const std::filesystem::path& stem, const VectorField2& f) {
    std::vector<double> data(2 * f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        data[2 * i] = f.x[i];
        data[2 * i + 1] = f.y[i];
    }
    write_payload(stem, f.grid, "vector2", data);
}

ComplexField read_complex_field(const std::filesystem::path& stem) {
    auto [g, data] = read_payload(stem, "complex", 2);
    ComplexField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = {data[2 * i], data[2 * i + 1]};
    return f;
}

RealField read_real_field(const std::filesystem::path& stem) {
    auto [g, data] = read_payload(stem, "real", 1);
    return RealField(g, std::move(data));
}

VectorField2 read_vector_field(const std::filesystem::path& stem) {
    auto [g, data] = read_payload(stem, "vector2", 2);
    VectorField2 f(g);
    for (std::size_t i = 0; i < f.size(); ++i) {
        f.x[i] = data[2 * i];
        f.y[i] = data[2 * i + 1];
    }
    return f;
}

} // namespace anyon
