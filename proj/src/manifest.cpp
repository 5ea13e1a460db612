#include "optomask/manifest.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace optomask {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::uint64_t h = 14695981039346656037ULL;
  char buf[65536];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
  }
  return h;
}

std::string digest_hex(std::uint64_t d) {
  static const char* hex = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[std::size_t(i)] = hex[d & 0xf];
    d >>= 4;
  }
  return s;
}

void Manifest::arg(const std::string& key, const std::string& value) {
  entries.emplace_back("arg." + key, value);
}

void Manifest::arg(const std::string& key, std::int64_t value) {
  arg(key, std::to_string(value));
}

void Manifest::arg(const std::string& key, double value) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  arg(key, std::string(buf, p));
}

void Manifest::input(const std::string& name, const std::string& path) {
  entries.emplace_back("input." + name, "fnv1a:" + digest_hex(fnv1a64_file(path)));
}

void Manifest::output(const std::string& name, const std::string& path) {
  entries.emplace_back("output." + name, "fnv1a:" + digest_hex(fnv1a64_file(path)));
}

std::string Manifest::text() const {
  std::string out = "OPTOMASK MANIFEST v1\n";
  out += "version=";
  out += kVersion;
  out += "\nsubcommand=" + subcommand + "\n";
  for (const auto& [k, v] : entries) out += k + "=" + v + "\n";
  return out;
}

void Manifest::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text();
  out.flush();
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace optomask
