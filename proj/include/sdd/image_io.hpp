#pragma once

#include <string>

#include "sdd/types.hpp"

namespace sdd {

// Supported formats: PPM (P6, RGB), PGM (P5, gray), PNG (8-bit gray/RGB),
// PFM ("Pf", single-channel float32). 8-bit integer channels are divided by
// 255 on load; PFM values pass through (rounded to float32 on write).

// Dispatches on file magic.
Image load_image(const std::string& path);

// Dispatches on extension: .ppm/.pgm or .png.
void save_image(const std::string& path, const Image& img);

// PFM rows are stored bottom-up; the sign of the scale line encodes
// endianness (negative = little-endian), the de-facto Scene Flow convention.
DisparityMap load_pfm(const std::string& path);
void save_pfm(const std::string& path, const DisparityMap& map,
              bool little_endian = true);

// Occlusion masks as 8-bit gray PNG: 0 -> 0, 1 -> 255.
OcclusionMask load_mask_png(const std::string& path);
void save_mask_png(const std::string& path, const OcclusionMask& mask);

}  // namespace sdd
