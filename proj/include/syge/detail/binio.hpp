#pragma once
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "syge/common.hpp"

// Little-endian raw-array IO shared by the checkpoint and dataset-cache
// formats. On a big-endian host every element is byte-swapped in a staging
// buffer; files are identical across platforms.

namespace syge::detail {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};

inline std::FILE* open_or_throw(const std::string& path, const char* mode) {
  std::FILE* f = std::fopen(path.c_str(), mode);
  if (!f) throw io_error("cannot open " + path);
  return f;
}

template <class T>
void swap_bytes(T& v) {
  auto* b = reinterpret_cast<unsigned char*>(&v);
  for (size_t i = 0, j = sizeof(T) - 1; i < j; ++i, --j) std::swap(b[i], b[j]);
}

template <class T>
void write_le_array(std::FILE* f, const T* data, size_t count, const std::string& path) {
  static_assert(std::is_trivially_copyable_v<T>);
  if constexpr (sizeof(T) > 1) {
    if (std::endian::native == std::endian::big) {
      std::vector<T> staged(data, data + count);
      for (auto& v : staged) swap_bytes(v);
      if (std::fwrite(staged.data(), sizeof(T), count, f) != count)
        throw io_error("write failed: " + path);
      return;
    }
  }
  if (count > 0 && std::fwrite(data, sizeof(T), count, f) != count)
    throw io_error("write failed: " + path);
}

template <class T>
void read_le_array(std::FILE* f, T* data, size_t count, const std::string& path) {
  static_assert(std::is_trivially_copyable_v<T>);
  if (count > 0 && std::fread(data, sizeof(T), count, f) != count)
    throw io_error("truncated payload in " + path);
  if constexpr (sizeof(T) > 1) {
    if (std::endian::native == std::endian::big)
      for (size_t i = 0; i < count; ++i) swap_bytes(data[i]);
  }
}

inline void write_text(std::FILE* f, const std::string& s, const std::string& path) {
  if (!s.empty() && std::fwrite(s.data(), 1, s.size(), f) != s.size())
    throw io_error("write failed: " + path);
}

// reads up to and including '\n'; throws if EOF hits first
inline std::string read_header_line(std::FILE* f, const std::string& path) {
  std::string line;
  int c;
  while ((c = std::fgetc(f)) != EOF) {
    line.push_back(static_cast<char>(c));
    if (c == '\n') return line;
  }
  throw io_error("truncated header in " + path);
}

inline void expect_magic(std::FILE* f, const char* magic, const std::string& path) {
  const size_t len = std::strlen(magic);
  std::string got(len, '\0');
  if (std::fread(got.data(), 1, len, f) != len || got != magic)
    throw io_error("bad magic in " + path);
}

}  // namespace syge::detail
