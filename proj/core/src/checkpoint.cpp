#include "arrl/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace arrl {
namespace {

constexpr char kMagic[8] = {'A', 'R', 'R', 'L', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void write_checkpoint(const std::string& path, const NamedTensors& tensors,
                      const nlohmann::json& meta) {
  nlohmann::json manifest;
  manifest["meta"] = meta;
  std::uint64_t offset = 0;
  for (const auto& [name, m] : tensors.items) {
    manifest["tensors"].push_back({{"name", name},
                                   {"rows", m.rows()},
                                   {"cols", m.cols()},
                                   {"offset", offset}});
    offset += static_cast<std::uint64_t>(m.size()) * sizeof(double);
  }
  if (!manifest.contains("tensors")) manifest["tensors"] = nlohmann::json::array();
  std::string mstr = manifest.dump();

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write checkpoint: " + path);
  os.write(kMagic, 8);
  std::uint32_t ver = kVersion;
  os.write(reinterpret_cast<const char*>(&ver), sizeof(ver));
  std::uint64_t mlen = mstr.size();
  os.write(reinterpret_cast<const char*>(&mlen), sizeof(mlen));
  os.write(mstr.data(), static_cast<std::streamsize>(mstr.size()));
  for (const auto& [name, m] : tensors.items) {
    // Eigen is column-major; data() streams columns contiguously.
    os.write(reinterpret_cast<const char*>(m.data()),
             static_cast<std::streamsize>(m.size() * sizeof(double)));
  }
  if (!os) throw std::runtime_error("short write on checkpoint: " + path);
}

NamedTensors read_checkpoint(const std::string& path, nlohmann::json* meta) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read checkpoint: " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("bad checkpoint magic: " + path);
  std::uint32_t ver = 0;
  is.read(reinterpret_cast<char*>(&ver), sizeof(ver));
  if (ver != kVersion) throw std::runtime_error("unsupported checkpoint version");
  std::uint64_t mlen = 0;
  is.read(reinterpret_cast<char*>(&mlen), sizeof(mlen));
  std::string mstr(mlen, '\0');
  is.read(mstr.data(), static_cast<std::streamsize>(mlen));
  nlohmann::json manifest = nlohmann::json::parse(mstr);
  if (meta) *meta = manifest.at("meta");

  NamedTensors out;
  for (const auto& t : manifest.at("tensors")) {
    Mat m(t.at("rows").get<long>(), t.at("cols").get<long>());
    is.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(m.size() * sizeof(double)));
    if (!is) throw std::runtime_error("truncated checkpoint: " + path);
    out.items.emplace_back(t.at("name").get<std::string>(), std::move(m));
  }
  return out;
}

}  // namespace arrl
