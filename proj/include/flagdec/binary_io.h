#pragma once

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace flagdec {

// Little-endian fixed-width encoding, independent of host byte order.
class ByteWriter {
 public:
  template <typename T>
  void put(T v) {
    static_assert(std::is_arithmetic_v<T>);
    uint64_t u = 0;
    if constexpr (std::is_floating_point_v<T>) {
      static_assert(sizeof(T) == 8);
      std::memcpy(&u, &v, 8);
    } else {
      u = static_cast<uint64_t>(v);
    }
    for (size_t i = 0; i < sizeof(T); ++i) buf_.push_back(static_cast<char>((u >> (8 * i)) & 0xff));
  }
  void put_string(const std::string& s) {
    put<uint32_t>(static_cast<uint32_t>(s.size()));
    buf_ += s;
  }
  void put_raw(const char* p, size_t n) { buf_.append(p, n); }
  const std::string& bytes() const { return buf_; }

 private:
  std::string buf_;
};

class ByteReader {
 public:
  explicit ByteReader(const std::string& bytes) : buf_(bytes) {}

  template <typename T>
  T get() {
    static_assert(std::is_arithmetic_v<T>);
    need(sizeof(T));
    uint64_t u = 0;
    for (size_t i = 0; i < sizeof(T); ++i)
      u |= static_cast<uint64_t>(static_cast<unsigned char>(buf_[pos_ + i])) << (8 * i);
    pos_ += sizeof(T);
    if constexpr (std::is_floating_point_v<T>) {
      double d;
      std::memcpy(&d, &u, 8);
      return d;
    } else {
      return static_cast<T>(u);
    }
  }
  std::string get_string() {
    const uint32_t n = get<uint32_t>();
    need(n);
    std::string s = buf_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::string get_raw(size_t n) {
    need(n);
    std::string s = buf_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == buf_.size(); }

 private:
  void need(size_t n) const {
    if (pos_ + n > buf_.size()) throw std::runtime_error("binary record truncated");
  }
  const std::string& buf_;
  size_t pos_ = 0;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

}  // namespace flagdec
