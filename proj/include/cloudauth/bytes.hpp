#pragma once

#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cloudauth {

using Bytes = std::vector<std::uint8_t>;

inline Bytes to_bytes(std::string_view s) {
  return Bytes(s.begin(), s.end());
}

inline std::string to_hex(std::span<const std::uint8_t> data) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0x0f]);
  }
  return out;
}

inline std::optional<Bytes> from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) return std::nullopt;
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = nibble(hex[i]);
    int lo = nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
  }
  return out;
}

inline void put_u64_be(Bytes& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8)
    out.push_back(static_cast<std::uint8_t>(v >> shift));
}

inline std::uint64_t get_u64_be(std::span<const std::uint8_t> in) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8; ++i) v = (v << 8) | in[i];
  return v;
}

// Field encoding used by every wire structure: [u8 tag][u16 big-endian
// length][value bytes], fields emitted in declaration order.
class TlvWriter {
 public:
  void field(std::uint8_t tag, std::span<const std::uint8_t> value) {
    out_.push_back(tag);
    out_.push_back(static_cast<std::uint8_t>(value.size() >> 8));
    out_.push_back(static_cast<std::uint8_t>(value.size() & 0xff));
    out_.insert(out_.end(), value.begin(), value.end());
  }

  void field_string(std::uint8_t tag, std::string_view s) {
    field(tag, {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
  }

  void field_u8(std::uint8_t tag, std::uint8_t v) {
    field(tag, std::span<const std::uint8_t>(&v, 1));
  }

  void field_u32(std::uint8_t tag, std::uint32_t v) {
    std::uint8_t buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<std::uint8_t>(v >> (24 - 8 * i));
    field(tag, buf);
  }

  void field_u64(std::uint8_t tag, std::uint64_t v) {
    std::uint8_t buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<std::uint8_t>(v >> (56 - 8 * i));
    field(tag, buf);
  }

  const Bytes& bytes() const& { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

class TlvReader {
 public:
  explicit TlvReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::optional<std::uint8_t> peek_tag() const {
    if (pos_ >= data_.size()) return std::nullopt;
    return data_[pos_];
  }

  // Reads the next field, which must carry `tag`.
  std::optional<std::span<const std::uint8_t>> field(std::uint8_t tag) {
    if (pos_ + 3 > data_.size() || data_[pos_] != tag) return std::nullopt;
    std::size_t len = (static_cast<std::size_t>(data_[pos_ + 1]) << 8) | data_[pos_ + 2];
    if (pos_ + 3 + len > data_.size()) return std::nullopt;
    auto value = data_.subspan(pos_ + 3, len);
    pos_ += 3 + len;
    return value;
  }

  std::optional<std::string> field_string(std::uint8_t tag) {
    auto v = field(tag);
    if (!v) return std::nullopt;
    return std::string(reinterpret_cast<const char*>(v->data()), v->size());
  }

  std::optional<std::uint8_t> field_u8(std::uint8_t tag) {
    auto v = field(tag);
    if (!v || v->size() != 1) return std::nullopt;
    return (*v)[0];
  }

  std::optional<std::uint32_t> field_u32(std::uint8_t tag) {
    auto v = field(tag);
    if (!v || v->size() != 4) return std::nullopt;
    std::uint32_t out = 0;
    for (auto b : *v) out = (out << 8) | b;
    return out;
  }

  std::optional<std::uint64_t> field_u64(std::uint8_t tag) {
    auto v = field(tag);
    if (!v || v->size() != 8) return std::nullopt;
    std::uint64_t out = 0;
    for (auto b : *v) out = (out << 8) | b;
    return out;
  }

  bool at_end() const { return pos_ == data_.size(); }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace cloudauth
