#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "mnmt/tensor.hpp"

namespace mnmt {

// Binary tensor container: magic "MNT1", u32 rank, u32 dims (little-endian),
// then the float64 payload row-major. Multi-tensor files are plain
// concatenations of records.

void write_tensor(std::ostream& out, const Tensor& t);
Tensor read_tensor(std::istream& in);

void save_tensor(const std::filesystem::path& path, const Tensor& t);
Tensor load_tensor(const std::filesystem::path& path);

void save_tensors(const std::filesystem::path& path,
                  const std::vector<const Tensor*>& tensors);
std::vector<Tensor> load_tensors(const std::filesystem::path& path);

}  // namespace mnmt
