#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vizrec {

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

/// Little-endian IEEE-754 blocks, base64 wrapped. Used for bit-exact model files.
std::string encode_doubles(std::span<const double> values);
std::vector<double> decode_doubles(std::string_view text);
std::string encode_floats(std::span<const float> values);
std::vector<float> decode_floats(std::string_view text);

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

}  // namespace vizrec
