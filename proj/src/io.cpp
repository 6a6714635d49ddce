#include "bubblelab/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace bubblelab {

static_assert(std::endian::native == std::endian::little,
              "field format is little-endian; byte-swapping writer not provided");

namespace {

template <typename T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("field file truncated");
  return v;
}

}  // namespace

void write_field(const std::string& path, const Field& f, int N) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os.write("AXIF", 4);
  put<uint32_t>(os, 1);
  put<uint32_t>(os, static_cast<uint32_t>(N));
  put<uint32_t>(os, f.grid->periodic_y1 ? 1u : 0u);
  put<uint64_t>(os, f.grid->n1());
  put<uint64_t>(os, f.grid->nr());
  put<double>(os, f.grid->period);
  os.write(reinterpret_cast<const char*>(f.grid->y1.data()),
           static_cast<std::streamsize>(sizeof(double) * f.grid->n1()));
  os.write(reinterpret_cast<const char*>(f.grid->r.data()),
           static_cast<std::streamsize>(sizeof(double) * f.grid->nr()));
  os.write(reinterpret_cast<const char*>(f.v.data()),
           static_cast<std::streamsize>(sizeof(double) * f.v.size()));
  if (!os) throw std::runtime_error("write failed: " + path);
}

Field read_field(const std::string& path, int* N_out) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "AXIF", 4) != 0)
    throw std::runtime_error("not a field file: " + path);
  const auto version = get<uint32_t>(is);
  if (version != 1) throw std::runtime_error("unsupported field version");
  const auto N = get<uint32_t>(is);
  const auto flags = get<uint32_t>(is);
  const auto n1 = get<uint64_t>(is);
  const auto nr = get<uint64_t>(is);
  const double period = get<double>(is);
  auto grid = std::make_shared<AxiGrid>();
  grid->y1.resize(n1);
  grid->r.resize(nr);
  grid->periodic_y1 = (flags & 1u) != 0;
  grid->period = period;
  is.read(reinterpret_cast<char*>(grid->y1.data()),
          static_cast<std::streamsize>(sizeof(double) * n1));
  is.read(reinterpret_cast<char*>(grid->r.data()),
          static_cast<std::streamsize>(sizeof(double) * nr));
  grid->finalize();
  Field f{std::shared_ptr<const AxiGrid>(grid)};
  is.read(reinterpret_cast<char*>(f.v.data()),
          static_cast<std::streamsize>(sizeof(double) * f.v.size()));
  if (!is) throw std::runtime_error("field file truncated: " + path);
  if (N_out) *N_out = static_cast<int>(N);
  return f;
}

std::string ansatz_to_json(const Ansatz& a) {
  nlohmann::ordered_json j;
  j["N"] = a.dims.N;
  nlohmann::ordered_json bubbles = nlohmann::ordered_json::array();
  for (const auto& b : a.bubbles)
    bubbles.push_back({{"y1", b.center.y1}, {"r", b.center.r}, {"mu", b.height}});
  j["bubbles"] = bubbles;
  j["cutoff"] = {{"inner_radius", a.cutoff.inner_radius}, {"outer_radius", a.cutoff.outer_radius}};
  j["potential"] = {{"a", a.potential.a},
                    {"beta", a.potential.beta},
                    {"period_L", a.potential.period_L},
                    {"remainder_scale", a.potential.remainder_scale},
                    {"clip_ceiling", a.potential.clip_ceiling},
                    {"clip_enabled", a.potential.clip_enabled},
                    {"offset", a.potential.offset}};
  return j.dump(2);
}

Ansatz ansatz_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Ansatz a;
  a.dims = DimensionParams::make(j.at("N").get<int>());
  for (const auto& b : j.at("bubbles"))
    a.bubbles.push_back(
        {{b.at("y1").get<double>(), b.at("r").get<double>()}, b.at("mu").get<double>()});
  const auto& c = j.at("cutoff");
  a.cutoff.inner_radius = c.at("inner_radius").get<double>();
  a.cutoff.outer_radius = c.at("outer_radius").get<double>();
  const auto& p = j.at("potential");
  a.potential.a = p.at("a").get<double>();
  a.potential.beta = p.at("beta").get<double>();
  a.potential.period_L = p.at("period_L").get<double>();
  a.potential.remainder_scale = p.at("remainder_scale").get<double>();
  a.potential.clip_ceiling = p.at("clip_ceiling").get<double>();
  a.potential.clip_enabled = p.at("clip_enabled").get<bool>();
  a.potential.offset = p.value("offset", 0.0);
  a.validate();
  return a;
}

void write_field_with_sidecar(const std::string& path, const Field& f, const Ansatz& a) {
  write_field(path, f, a.dims.N);
  std::ofstream os(path + ".json");
  if (!os) throw std::runtime_error("cannot open sidecar for " + path);
  os << ansatz_to_json(a) << "\n";
}

Field read_field_with_sidecar(const std::string& path, Ansatz* a_out) {
  Field f = read_field(path);
  if (a_out) {
    std::ifstream is(path + ".json");
    if (!is) throw std::runtime_error("missing sidecar for " + path);
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    *a_out = ansatz_from_json(text);
  }
  return f;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace bubblelab
