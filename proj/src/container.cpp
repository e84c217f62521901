#include "sdd/container.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace sdd {

namespace {

constexpr char kMagic[4] = {'S', 'D', 'T', 'C'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in, const std::string& path) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw IoError(path + ": truncated container");
  return static_cast<std::uint32_t>(b[0]) |
         (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64(std::ostream& out, double v) {
  std::uint64_t u;
  std::memcpy(&u, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::istream& in, const std::string& path) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw IoError(path + ": truncated container");
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &u, 8);
  return v;
}

void put_str(std::ostream& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_str(std::istream& in, const std::string& path) {
  const std::uint32_t n = get_u32(in, path);
  if (n > (1u << 20)) throw IoError(path + ": implausible string length");
  std::string s(n, '\0');
  in.read(s.data(), n);
  if (!in) throw IoError(path + ": truncated container");
  return s;
}

}  // namespace

void save_tensor_file(const std::string& path,
                      const std::vector<NamedTensor>& tensors,
                      const std::map<std::string, std::string>& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open for writing");
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(meta.size()));
  for (const auto& [k, v] : meta) {
    put_str(out, k);
    put_str(out, v);
  }
  put_u32(out, static_cast<std::uint32_t>(tensors.size()));
  for (const NamedTensor& t : tensors) {
    put_str(out, t.name);
    put_u32(out, static_cast<std::uint32_t>(t.dims.size()));
    for (int d : t.dims) put_u32(out, static_cast<std::uint32_t>(d));
    if (static_cast<int>(t.data.size()) != t.numel())
      throw ShapeError(path + ": tensor '" + t.name +
                       "' data does not match dims");
    for (double v : t.data) put_f64(out, v);
  }
  if (!out) throw IoError(path + ": write failed");
}

std::vector<NamedTensor> load_tensor_file(
    const std::string& path, std::map<std::string, std::string>* meta_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": missing file");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw IoError(path + ": not a tensor container (bad magic)");
  const std::uint32_t version = get_u32(in, path);
  if (version != kVersion)
    throw IoError(path + ": unsupported container version " +
                  std::to_string(version));
  const std::uint32_t meta_count = get_u32(in, path);
  std::map<std::string, std::string> meta;
  for (std::uint32_t i = 0; i < meta_count; ++i) {
    std::string k = get_str(in, path);
    meta[k] = get_str(in, path);
  }
  if (meta_out) *meta_out = std::move(meta);

  const std::uint32_t count = get_u32(in, path);
  std::vector<NamedTensor> tensors(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedTensor& t = tensors[i];
    t.name = get_str(in, path);
    const std::uint32_t nd = get_u32(in, path);
    if (nd > 8) throw IoError(path + ": implausible tensor rank");
    t.dims.resize(nd);
    for (std::uint32_t k = 0; k < nd; ++k)
      t.dims[k] = static_cast<int>(get_u32(in, path));
    t.data.resize(t.numel());
    for (double& v : t.data) v = get_f64(in, path);
  }
  return tensors;
}

namespace {

std::string arch_to_meta(const ArchDescriptor& a) {
  std::string s = a.kind == NetKind::Stereo ? "stereo" : "mono";
  for (int w : a.widths) s += "," + std::to_string(w);
  s += "," + std::to_string(a.scales);
  s += "," + std::to_string(a.max_disp);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", a.mono_disp_frac);
  s += std::string(",") + buf;
  return s;
}

ArchDescriptor arch_from_meta(const std::string& s, const std::string& path) {
  ArchDescriptor a;
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = s.find(',', pos);
    parts.push_back(s.substr(pos, comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (parts.size() != 8) throw IoError(path + ": malformed arch metadata");
  if (parts[0] == "stereo")
    a.kind = NetKind::Stereo;
  else if (parts[0] == "mono")
    a.kind = NetKind::Mono;
  else
    throw IoError(path + ": unknown net kind '" + parts[0] + "'");
  try {
    for (int i = 0; i < 4; ++i) a.widths[i] = std::stoi(parts[1 + i]);
    a.scales = std::stoi(parts[5]);
    a.max_disp = std::stoi(parts[6]);
    a.mono_disp_frac = std::stod(parts[7]);
  } catch (const std::exception&) {
    throw IoError(path + ": malformed arch metadata");
  }
  return a;
}

}  // namespace

void save_checkpoint(const std::string& path, const NetParams& params,
                     std::map<std::string, std::string> extra_meta) {
  extra_meta["arch"] = arch_to_meta(params.arch);
  save_tensor_file(path, params.tensors, extra_meta);
}

NetParams load_checkpoint(const std::string& path,
                          std::map<std::string, std::string>* meta_out) {
  std::map<std::string, std::string> meta;
  NetParams p;
  p.tensors = load_tensor_file(path, &meta);
  const auto it = meta.find("arch");
  if (it == meta.end())
    throw IoError(path + ": container has no arch metadata (not a checkpoint)");
  p.arch = arch_from_meta(it->second, path);

  // structural check against the descriptor
  const auto specs = param_specs(p.arch);
  if (specs.size() != p.tensors.size())
    throw IoError(path + ": tensor count does not match architecture");
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (specs[i].name != p.tensors[i].name ||
        specs[i].dims != p.tensors[i].dims)
      throw IoError(path + ": tensor '" + p.tensors[i].name +
                    "' does not match architecture layout");
  }
  if (meta_out) *meta_out = std::move(meta);
  return p;
}

std::string file_hash_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": missing file");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(hex);
}

}  // namespace sdd
