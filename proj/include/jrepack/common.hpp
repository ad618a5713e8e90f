#ifndef JREPACK_COMMON_HPP
#define JREPACK_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace jrepack {

using Bytes = std::vector<std::uint8_t>;

// Coefficient alphabet shared by the probability model and both entropy
// coders. Baseline JPEG quantized coefficients always fit this range; the
// decoder relies on it to size its tables before seeing any data.
inline constexpr int kAlphabetMin = -2048;
inline constexpr int kAlphabetMax = 2047;
inline constexpr int kAlphabetSize = kAlphabetMax - kAlphabetMin + 1;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input JPEG uses a feature outside the supported class (progressive,
// arithmetic-coded, 12-bit, >3 components, multi-scan, ...).
struct UnsupportedJpeg : Error { using Error::Error; };
// Entropy-coded data cannot be decoded (bad Huffman code, truncated scan,
// coefficient out of range, marker where data was expected).
struct CorruptStream : Error { using Error::Error; };
// A coefficient cannot be represented by the stored Huffman tables.
struct EncodingOverflow : Error { using Error::Error; };
struct CorruptContainer : Error { using Error::Error; };
struct VersionMismatch : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct SymbolOutOfAlphabet : Error { using Error::Error; };
struct MissingPartnerMap : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };

} // namespace jrepack

#endif
