#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kickoff/core/world.hpp"

namespace kickoff {

/// Super Mini Map: 4 x 72 x 96 occupancy bits. Channels: 0 Left players,
/// 1 Right players, 2 ball, 3 controlled players. Stored bit-packed in wire
/// order (channel-major, then row-major, MSB first within each byte).
class SmmTensor {
 public:
  static constexpr int kChannels = 4;
  static constexpr int kRows = 72;
  static constexpr int kCols = 96;
  static constexpr std::size_t kBits = std::size_t{kChannels} * kRows * kCols;
  static constexpr std::size_t kBytes = kBits / 8;

  bool get(int channel, int row, int col) const {
    const std::size_t i = index(channel, row, col);
    return (bytes_[i >> 3] >> (7 - (i & 7))) & 1u;
  }
  void set(int channel, int row, int col) {
    const std::size_t i = index(channel, row, col);
    bytes_[i >> 3] = static_cast<std::uint8_t>(bytes_[i >> 3] | (0x80u >> (i & 7)));
  }
  int popcount(int channel) const;
  void clear() { bytes_.fill(0); }

  const std::array<std::uint8_t, kBytes>& bytes() const { return bytes_; }
  /// Throws Error unless `packed` holds exactly kBytes bytes.
  static SmmTensor from_bytes(std::span<const std::uint8_t> packed);

  friend bool operator==(const SmmTensor&, const SmmTensor&) = default;

 private:
  static constexpr std::size_t index(int channel, int row, int col) {
    return (static_cast<std::size_t>(channel) * kRows + static_cast<std::size_t>(row)) * kCols +
           static_cast<std::size_t>(col);
  }
  std::array<std::uint8_t, kBytes> bytes_{};
};

struct SmmCell {
  int row = 0;
  int col = 0;
  friend bool operator==(const SmmCell&, const SmmCell&) = default;
};

/// col = clamp(floor((x + 1) / 2 * 96), 0, 95); row = clamp(floor((y + 0.42) / 0.84 * 72), 0, 71).
SmmCell smm_cell(Vec2 p);

SmmTensor encode_smm(const WorldState& w, std::span<const PlayerId> controlled);
void encode_smm(const WorldState& w, std::span<const PlayerId> controlled, SmmTensor& out);

std::string base64_encode(std::span<const std::uint8_t> data);
/// Throws Error on characters outside the standard alphabet or bad padding.
std::vector<std::uint8_t> base64_decode(std::string_view text);

}  // namespace kickoff
