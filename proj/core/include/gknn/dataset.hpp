#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gknn/transforms.hpp"

namespace gknn {

enum class DatasetFormat {
    CsvXyz,    // "x,y,z" per line
    BinF32x4,  // packed little-endian float32 records of 4 values; the first 3 are used
    Csv2d,     // "x,y" per line
    Bits,      // one bit string of length 1..3 per line
};

[[nodiscard]] DatasetFormat parse_format(std::string_view text);
[[nodiscard]] std::string to_string(DatasetFormat format);

struct DatasetFile {
    DatasetFormat format = DatasetFormat::CsvXyz;
    std::filesystem::path path;
    std::size_t n = 0;        // leading records used as data
    std::size_t queries = 0;  // records after those used as queries
};

struct Dataset {
    std::vector<SourcePoint> data;
    std::vector<SourcePoint> queries;
};

/// Every record of a text format. Blank lines are skipped. Errors carry the
/// 1-based record index and line number.
[[nodiscard]] std::vector<SourcePoint> parse_text_records(std::string_view text, DatasetFormat format);

/// Every record of a bin-f32x4 buffer, widened to double.
[[nodiscard]] std::vector<SourcePoint> parse_binary_records(std::span<const std::byte> bytes);

[[nodiscard]] std::vector<SourcePoint> read_records(const std::filesystem::path& path, DatasetFormat format);

/// First n records become data, the next `queries` become queries.
/// Throws InputError when the file holds fewer than n + queries records.
[[nodiscard]] Dataset load_dataset(const DatasetFile& file);

/// Same split applied to records already in memory.
[[nodiscard]] Dataset split_records(std::vector<SourcePoint> records, std::size_t n, std::size_t queries);

/// Uniform random points of the format's shape: [0,1]^3, [0,1]^2, or random
/// 3-bit strings. Identical seeds give identical datasets on every platform.
[[nodiscard]] Dataset synthetic_dataset(DatasetFormat format, std::size_t n, std::size_t queries, std::uint64_t seed);

}  // namespace gknn
