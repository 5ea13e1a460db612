// manifest.hpp - run provenance records emitted next to every CLI output
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace optomask {

inline constexpr const char* kVersion = "0.1.0";

// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64_file(const std::string& path);
std::string digest_hex(std::uint64_t d);

// Ordered key=value block:
//   OPTOMASK MANIFEST v1
//   version=0.1.0
//   subcommand=<name>
//   arg.<key>=<value>            (insertion order)
//   input.<name>=fnv1a:<hex>
//   output.<name>=fnv1a:<hex>
struct Manifest {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> entries;

  void arg(const std::string& key, const std::string& value);
  void arg(const std::string& key, std::int64_t value);
  void arg(const std::string& key, double value);
  void input(const std::string& name, const std::string& path);   // digests the file
  void output(const std::string& name, const std::string& path);  // digests the file

  std::string text() const;
  void write_file(const std::string& path) const;
};

}  // namespace optomask
