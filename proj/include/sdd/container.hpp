#pragma once

#include <map>
#include <string>
#include <vector>

#include "sdd/nets.hpp"

namespace sdd {

// Versioned binary container of named float64 tensors plus string metadata.
// Fixed little-endian layout; write-then-read is bit-exact.
void save_tensor_file(const std::string& path,
                      const std::vector<NamedTensor>& tensors,
                      const std::map<std::string, std::string>& meta);

std::vector<NamedTensor> load_tensor_file(
    const std::string& path, std::map<std::string, std::string>* meta_out);

// Checkpoints store the architecture descriptor in the metadata block.
void save_checkpoint(const std::string& path, const NetParams& params,
                     std::map<std::string, std::string> extra_meta = {});
NetParams load_checkpoint(const std::string& path,
                          std::map<std::string, std::string>* meta_out =
                              nullptr);

// FNV-1a of a file's bytes; used for provenance stamps.
std::string file_hash_hex(const std::string& path);

}  // namespace sdd
