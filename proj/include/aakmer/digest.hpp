#pragma once

#include <cstdint>
#include <string_view>

namespace aakmer {

// 64-bit FNV-1a, used for content digests written into outputs.
class Fnv1a {
 public:
  void update(std::string_view bytes) {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= 0x100000001b3ULL;
    }
  }
  // Field separator so that ("ab","c") and ("a","bc") differ.
  void field(std::string_view bytes) {
    update(bytes);
    update(std::string_view("\0", 1));
  }
  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace aakmer
