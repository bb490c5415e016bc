#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>

namespace asbq {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace binary {

static_assert(std::endian::native == std::endian::little,
              "binary formats are written with native little-endian stores");

template <class T>
void put(std::ostream& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.write(buf, sizeof(T));
}

template <class T>
T get(std::istream& in, const char* what) {
  char buf[sizeof(T)];
  if (!in.read(buf, sizeof(T))) {
    throw FormatError(std::string("truncated file while reading ") + what);
  }
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

inline void put_doubles(std::ostream& out, std::span<const double> v) {
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}

inline void get_doubles(std::istream& in, std::span<double> v, const char* what) {
  if (!in.read(reinterpret_cast<char*>(v.data()),
               static_cast<std::streamsize>(v.size() * sizeof(double)))) {
    throw FormatError(std::string("truncated file while reading ") + what);
  }
}

inline void expect_magic(std::istream& in, const char (&magic)[5]) {
  char buf[4];
  if (!in.read(buf, 4) || std::memcmp(buf, magic, 4) != 0) {
    throw FormatError(std::string("bad magic: expected \"") + magic + "\"");
  }
}

}  // namespace binary
}  // namespace asbq
