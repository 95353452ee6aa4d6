#include "kickoff/env/smm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "kickoff/core/errors.hpp"

namespace kickoff {

namespace {

constexpr std::string_view kAlphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int cell_index(double v, int cells) {
  const double f = std::floor(v * cells);
  if (!(f >= 0.0)) return 0;
  return f >= cells ? cells - 1 : static_cast<int>(f);
}

int decode_char(char c) {
  const auto p = kAlphabet.find(c);
  return p == std::string_view::npos ? -1 : static_cast<int>(p);
}

}  // namespace

int SmmTensor::popcount(int channel) const {
  const std::size_t per = kBytes / kChannels;
  int n = 0;
  for (std::size_t i = per * static_cast<std::size_t>(channel); i < per * (static_cast<std::size_t>(channel) + 1); ++i) {
    n += std::popcount(bytes_[i]);
  }
  return n;
}

SmmTensor SmmTensor::from_bytes(std::span<const std::uint8_t> packed) {
  if (packed.size() != kBytes) {
    throw Error("SMM bit-pack must be " + std::to_string(kBytes) + " bytes, got " + std::to_string(packed.size()));
  }
  SmmTensor t;
  std::copy(packed.begin(), packed.end(), t.bytes_.begin());
  return t;
}

SmmCell smm_cell(Vec2 p) {
  return {cell_index((p.y + 0.42) / 0.84, SmmTensor::kRows), cell_index((p.x + 1.0) / 2.0, SmmTensor::kCols)};
}

void encode_smm(const WorldState& w, std::span<const PlayerId> controlled, SmmTensor& out) {
  out.clear();
  for (const auto& p : w.players) {
    const SmmCell c = smm_cell(p.pos);
    out.set(p.team == Team::Left ? 0 : 1, c.row, c.col);
  }
  const SmmCell b = smm_cell(w.ball.pos);
  out.set(2, b.row, b.col);
  for (PlayerId id : controlled) {
    const SmmCell c = smm_cell(w.player(id).pos);
    out.set(3, c.row, c.col);
  }
}

SmmTensor encode_smm(const WorldState& w, std::span<const PlayerId> controlled) {
  SmmTensor t;
  encode_smm(w, controlled, t);
  return t;
}

std::string base64_encode(std::span<const std::uint8_t> data) {
  std::string out;
  out.reserve((data.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= data.size(); i += 3) {
    const std::uint32_t v = (std::uint32_t{data[i]} << 16) | (std::uint32_t{data[i + 1]} << 8) | data[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  const std::size_t rest = data.size() - i;
  if (rest > 0) {
    std::uint32_t v = std::uint32_t{data[i]} << 16;
    if (rest == 2) v |= std::uint32_t{data[i + 1]} << 8;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += rest == 2 ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw Error("base64 length is not a multiple of 4");
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    const bool last = i + 4 == text.size();
    int pad = 0;
    std::uint32_t v = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      const char c = text[i + k];
      int d = 0;
      if (c == '=' && last && k >= 2) {
        ++pad;
      } else {
        if (pad > 0) throw Error("base64 padding in the middle of a quantum");
        d = decode_char(c);
        if (d < 0) throw Error("invalid base64 character");
      }
      v = (v << 6) | static_cast<std::uint32_t>(d);
    }
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(v & 0xff));
  }
  return out;
}

}  // namespace kickoff
