#include "sdd/image_io.hpp"

#include <png.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

namespace sdd {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& reason) {
  throw IoError(path + ": " + reason);
}

std::uint8_t quantize(double v) {
  double q = std::lround(v * 255.0);
  if (q < 0.0) q = 0.0;
  if (q > 255.0) q = 255.0;
  return static_cast<std::uint8_t>(q);
}

// ---------------------------------------------------------------- PPM / PGM

// Reads one header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (!std::isspace(c)) {
      tok.push_back(static_cast<char>(c));
      while ((c = in.peek()) != EOF && !std::isspace(c)) {
        tok.push_back(static_cast<char>(in.get()));
      }
      return tok;
    }
  }
  return tok;
}

Image load_pnm(std::ifstream& in, const std::string& path) {
  const std::string magic = next_token(in);
  int channels;
  if (magic == "P6")
    channels = 3;
  else if (magic == "P5")
    channels = 1;
  else
    fail(path, "malformed header: expected P5 or P6, got '" + magic + "'");

  const std::string ws = next_token(in), hs = next_token(in),
                    ms = next_token(in);
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(ws);
    h = std::stoi(hs);
    maxval = std::stoi(ms);
  } catch (const std::exception&) {
    fail(path, "malformed header: non-numeric size fields");
  }
  if (w <= 0 || h <= 0) fail(path, "malformed header: non-positive size");
  if (maxval != 255)
    fail(path, "unsupported bit depth: maxval " + std::to_string(maxval) +
                   " (only 8-bit supported)");
  in.get();  // single whitespace after maxval

  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(w) * h * channels);
  in.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(in.gcount()) != bytes.size())
    fail(path, "truncated pixel payload");

  Image img(h, w, channels);
  for (std::size_t k = 0; k < bytes.size(); ++k)
    img.data[k] = bytes[k] / 255.0;
  return img;
}

void save_pnm(const std::string& path, const Image& img) {
  validate(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out << (img.channels == 3 ? "P6" : "P5") << "\n"
      << img.width << " " << img.height << "\n255\n";
  std::vector<std::uint8_t> bytes(img.data.size());
  for (std::size_t k = 0; k < bytes.size(); ++k)
    bytes[k] = quantize(img.data[k]);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(path, "write failed");
}

// ----------------------------------------------------------------------- PFM

void byteswap32(std::uint8_t* p, std::size_t count) {
  for (std::size_t k = 0; k < count; ++k, p += 4) {
    std::swap(p[0], p[3]);
    std::swap(p[1], p[2]);
  }
}

constexpr bool host_little_endian() {
  return std::endian::native == std::endian::little;
}

}  // namespace

DisparityMap load_pfm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "missing file");
  const std::string magic = next_token(in);
  if (magic == "PF")
    fail(path, "color PF not supported: disparity maps are single-channel");
  if (magic != "Pf") fail(path, "malformed header: expected Pf");
  const std::string ws = next_token(in), hs = next_token(in),
                    ss = next_token(in);
  int w = 0, h = 0;
  double scale = 0.0;
  try {
    w = std::stoi(ws);
    h = std::stoi(hs);
    scale = std::stod(ss);
  } catch (const std::exception&) {
    fail(path, "malformed header fields");
  }
  if (w <= 0 || h <= 0 || scale == 0.0) fail(path, "malformed header values");
  in.get();  // single whitespace before payload

  const bool file_little = scale < 0.0;
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(w) * h * 4);
  in.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(in.gcount()) != bytes.size())
    fail(path, "truncated payload");
  if (file_little != host_little_endian())
    byteswap32(bytes.data(), static_cast<std::size_t>(w) * h);

  DisparityMap map(h, w);
  // bottom row first
  for (int i = 0; i < h; ++i) {
    const std::uint8_t* row = bytes.data() +
                              static_cast<std::size_t>(h - 1 - i) * w * 4;
    for (int j = 0; j < w; ++j) {
      float f;
      std::memcpy(&f, row + static_cast<std::size_t>(j) * 4, 4);
      map.at(i, j) = static_cast<double>(f);
    }
  }
  return map;
}

void save_pfm(const std::string& path, const DisparityMap& map,
              bool little_endian) {
  if (map.height <= 0 || map.width <= 0)
    throw ShapeError("save_pfm: empty map");
  for (const double v : map.data)
    if (!std::isfinite(v))
      fail(path, "refusing to write non-finite disparity value");

  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out << "Pf\n"
      << map.width << " " << map.height << "\n"
      << (little_endian ? "-1.0" : "1.0") << "\n";

  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(map.width) *
                                  map.height * 4);
  for (int i = 0; i < map.height; ++i) {
    std::uint8_t* row = bytes.data() +
                        static_cast<std::size_t>(map.height - 1 - i) *
                            map.width * 4;
    for (int j = 0; j < map.width; ++j) {
      const float f = static_cast<float>(map.at(i, j));
      std::memcpy(row + static_cast<std::size_t>(j) * 4, &f, 4);
    }
  }
  if (little_endian != host_little_endian())
    byteswap32(bytes.data(), static_cast<std::size_t>(map.width) * map.height);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(path, "write failed");
}

// ----------------------------------------------------------------------- PNG

namespace {

struct PngReadCtx {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::FILE* fp = nullptr;
  ~PngReadCtx() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (fp) std::fclose(fp);
  }
};

struct PngWriteCtx {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::FILE* fp = nullptr;
  ~PngWriteCtx() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    if (fp) std::fclose(fp);
  }
};

Image load_png_file(const std::string& path) {
  PngReadCtx ctx;
  ctx.fp = std::fopen(path.c_str(), "rb");
  if (!ctx.fp) fail(path, "missing file");
  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                   nullptr);
  if (!ctx.png) fail(path, "libpng init failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) fail(path, "libpng init failed");
  if (setjmp(png_jmpbuf(ctx.png))) fail(path, "malformed or truncated PNG");

  png_init_io(ctx.png, ctx.fp);
  png_read_info(ctx.png, ctx.info);

  const png_uint_32 w = png_get_image_width(ctx.png, ctx.info);
  const png_uint_32 h = png_get_image_height(ctx.png, ctx.info);
  const int depth = png_get_bit_depth(ctx.png, ctx.info);
  const int color = png_get_color_type(ctx.png, ctx.info);
  if (depth == 16)
    fail(path, "unsupported bit depth: 16-bit PNG (only 8-bit supported)");

  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8)
    png_set_expand_gray_1_2_4_to_8(ctx.png);
  if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS))
    png_set_tRNS_to_alpha(ctx.png);
  png_set_strip_alpha(ctx.png);
  png_read_update_info(ctx.png, ctx.info);

  const int channels = png_get_channels(ctx.png, ctx.info);
  if (channels != 1 && channels != 3)
    fail(path, "unsupported channel count " + std::to_string(channels));

  std::vector<std::uint8_t> rowbuf(static_cast<std::size_t>(w) * channels);
  Image img(static_cast<int>(h), static_cast<int>(w), channels);
  for (png_uint_32 i = 0; i < h; ++i) {
    png_read_row(ctx.png, rowbuf.data(), nullptr);
    for (std::size_t k = 0; k < rowbuf.size(); ++k)
      img.data[static_cast<std::size_t>(i) * rowbuf.size() + k] =
          rowbuf[k] / 255.0;
  }
  png_read_end(ctx.png, nullptr);
  return img;
}

void save_png_file(const std::string& path, const Image& img) {
  validate(img);
  PngWriteCtx ctx;
  ctx.fp = std::fopen(path.c_str(), "wb");
  if (!ctx.fp) fail(path, "cannot open for writing");
  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                    nullptr);
  if (!ctx.png) fail(path, "libpng init failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) fail(path, "libpng init failed");
  if (setjmp(png_jmpbuf(ctx.png))) fail(path, "PNG write failed");

  png_init_io(ctx.png, ctx.fp);
  png_set_IHDR(ctx.png, ctx.info, static_cast<png_uint_32>(img.width),
               static_cast<png_uint_32>(img.height), 8,
               img.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);

  std::vector<std::uint8_t> rowbuf(static_cast<std::size_t>(img.width) *
                                   img.channels);
  for (int i = 0; i < img.height; ++i) {
    for (std::size_t k = 0; k < rowbuf.size(); ++k)
      rowbuf[k] = quantize(img.data[static_cast<std::size_t>(i) *
                                        rowbuf.size() + k]);
    png_write_row(ctx.png, rowbuf.data());
  }
  png_write_end(ctx.png, nullptr);
}

}  // namespace

Image load_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "missing file");
  std::uint8_t sig[2] = {0, 0};
  in.read(reinterpret_cast<char*>(sig), 2);
  in.seekg(0);
  if (sig[0] == 0x89 && sig[1] == 'P') {
    in.close();
    return load_png_file(path);
  }
  if (sig[0] == 'P' && (sig[1] == '5' || sig[1] == '6'))
    return load_pnm(in, path);
  fail(path, "unknown format (expected PPM/PGM or PNG)");
}

void save_image(const std::string& path, const Image& img) {
  const auto dot = path.find_last_of('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  if (ext == ".png")
    save_png_file(path, img);
  else if (ext == ".ppm" || ext == ".pgm")
    save_pnm(path, img);
  else
    fail(path, "unsupported output extension '" + ext + "'");
}

OcclusionMask load_mask_png(const std::string& path) {
  const Image img = load_png_file(path);
  OcclusionMask mask(img.height, img.width);
  for (int i = 0; i < img.height; ++i)
    for (int j = 0; j < img.width; ++j) mask.at(i, j) = img.at(i, j, 0);
  return mask;
}

void save_mask_png(const std::string& path, const OcclusionMask& mask) {
  Image img(mask.height, mask.width, 1);
  for (int i = 0; i < mask.height; ++i)
    for (int j = 0; j < mask.width; ++j) img.at(i, j, 0) = mask.at(i, j);
  save_png_file(path, img);
}

}  // namespace sdd
