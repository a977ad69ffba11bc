#include "mmt/trajectory_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>

namespace mmt {

using nlohmann::json;

json to_json(const ModelParams& p) {
  return {{"alpha", p.alpha}, {"beta", p.beta}, {"s", p.s}, {"sign", to_string(p.sign)}};
}

json to_json(const GridSpec& g) {
  return {{"num_modes", g.num_modes()}, {"box_length", g.box_length()}};
}

json to_json(const IntegratorConfig& c) {
  return {{"dt", c.dt},
          {"t_end", c.t_end},
          {"dealias_pad_factor", c.dealias_pad_factor},
          {"scheme", to_string(c.scheme)},
          {"record_stride", c.record_stride},
          {"nonlinear", c.nonlinear},
          {"snapshots", c.keep_snapshots}};
}

json to_json(const TrajectoryRecord& rec, const ModelParams& p, const GridSpec& g,
             const IntegratorConfig& c, const std::string& sidecar_name) {
  json j = {{"params", to_json(p)},
            {"grid", to_json(g)},
            {"cfg", to_json(c)},
            {"times", rec.times},
            {"mass", rec.mass_series},
            {"energy", rec.energy_series},
            {"hamiltonian", rec.hamiltonian_series},
            {"h_half", rec.h_alpha_half_series}};
  if (!rec.snapshots.empty()) {
    const std::size_t stride = g.num_modes() * 16;
    json offsets = json::array();
    for (std::size_t i = 0; i < rec.snapshots.size(); ++i) offsets.push_back(i * stride);
    j["snapshots"] = {{"file", sidecar_name},
                      {"count", rec.snapshots.size()},
                      {"num_modes", g.num_modes()},
                      {"layout", "little-endian float64 (re, im) pairs, FFT mode order"},
                      {"byte_offsets", offsets}};
  }
  return j;
}

namespace {

void put_le(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  char buf[8];
  std::memcpy(buf, &bits, 8);
  out.append(buf, 8);
}

double get_le(const char* p) {
  std::uint64_t bits;
  std::memcpy(&bits, p, 8);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

std::string snapshot_bytes(const TrajectoryRecord& rec) {
  std::string out;
  for (const auto& f : rec.snapshots)
    for (const auto& c : f.modes()) {
      put_le(out, c.real());
      put_le(out, c.imag());
    }
  return out;
}

std::vector<SpectralField> read_snapshots(const std::string& bytes, const GridSpec& g) {
  const std::size_t stride = g.num_modes() * 16;
  if (bytes.size() % stride != 0) throw InvalidArgument("snapshots", "sidecar size mismatch");
  std::vector<SpectralField> out;
  for (std::size_t off = 0; off < bytes.size(); off += stride) {
    std::vector<cplx> m(g.num_modes());
    for (std::size_t i = 0; i < m.size(); ++i)
      m[i] = {get_le(bytes.data() + off + 16 * i), get_le(bytes.data() + off + 16 * i + 8)};
    out.emplace_back(g, std::move(m));
  }
  return out;
}

}  // namespace mmt
