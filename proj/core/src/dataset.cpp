#include "gknn/dataset.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>

#include "gknn/errors.hpp"

namespace gknn {

namespace {

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::string where(std::size_t record, std::size_t line) {
    return "record " + std::to_string(record) + " (line " + std::to_string(line) + ")";
}

std::vector<double> parse_fields(std::string_view line, std::size_t expected, std::size_t record, std::size_t line_no) {
    std::vector<double> values;
    while (true) {
        const std::size_t comma = line.find(',');
        const std::string_view field = trim(line.substr(0, comma));
        double v = 0.0;
        const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (field.empty() || ec != std::errc() || end != field.data() + field.size()) {
            throw InputError(where(record, line_no) + ": cannot parse '" + std::string(field) + "' as a number");
        }
        if (!std::isfinite(v)) throw InputError(where(record, line_no) + ": non-finite value");
        values.push_back(v);
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    if (values.size() != expected) {
        throw InputError(where(record, line_no) + ": expected " + std::to_string(expected) + " values, got " +
                         std::to_string(values.size()));
    }
    return values;
}

std::uint32_t load_le32(const std::byte* p) {
    std::uint32_t v = 0;
    std::memcpy(&v, p, sizeof v);
    if constexpr (std::endian::native == std::endian::big) {
        v = ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
    }
    return v;
}

// 53 random bits -> [0, 1); avoids the implementation-defined std distributions.
double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

DatasetFormat parse_format(std::string_view text) {
    if (text == "csv-xyz") return DatasetFormat::CsvXyz;
    if (text == "bin-f32x4") return DatasetFormat::BinF32x4;
    if (text == "csv-2d") return DatasetFormat::Csv2d;
    if (text == "bits") return DatasetFormat::Bits;
    throw InputError("unknown format '" + std::string(text) + "' (expected csv-xyz, bin-f32x4, csv-2d or bits)");
}

std::string to_string(DatasetFormat format) {
    switch (format) {
        case DatasetFormat::CsvXyz: return "csv-xyz";
        case DatasetFormat::BinF32x4: return "bin-f32x4";
        case DatasetFormat::Csv2d: return "csv-2d";
        case DatasetFormat::Bits: return "bits";
    }
    return "unknown";
}

std::vector<SourcePoint> parse_text_records(std::string_view text, DatasetFormat format) {
    if (format == DatasetFormat::BinF32x4) throw InputError("bin-f32x4 is not a text format");
    std::vector<SourcePoint> records;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const std::size_t newline = text.find('\n');
        const std::string_view line = trim(text.substr(0, newline));
        text.remove_prefix(newline == std::string_view::npos ? text.size() : newline + 1);
        ++line_no;
        if (line.empty()) continue;
        const std::size_t record = records.size() + 1;
        switch (format) {
            case DatasetFormat::CsvXyz: {
                const auto v = parse_fields(line, 3, record, line_no);
                records.emplace_back(Point3{v[0], v[1], v[2]});
                break;
            }
            case DatasetFormat::Csv2d: {
                const auto v = parse_fields(line, 2, record, line_no);
                records.emplace_back(Point2{v[0], v[1]});
                break;
            }
            case DatasetFormat::Bits:
                try {
                    records.emplace_back(BitString(line));
                } catch (const InputError& e) {
                    throw InputError(where(record, line_no) + ": " + e.what());
                }
                break;
            case DatasetFormat::BinF32x4: break;
        }
    }
    return records;
}

std::vector<SourcePoint> parse_binary_records(std::span<const std::byte> bytes) {
    constexpr std::size_t kRecordBytes = 4 * sizeof(float);
    if (bytes.size() % kRecordBytes != 0) {
        throw InputError("bin-f32x4: record " + std::to_string(bytes.size() / kRecordBytes + 1) + " is truncated (" +
                         std::to_string(bytes.size()) + " bytes is not a multiple of 16)");
    }
    std::vector<SourcePoint> records;
    records.reserve(bytes.size() / kRecordBytes);
    for (std::size_t offset = 0; offset < bytes.size(); offset += kRecordBytes) {
        double xyz[3];
        for (int i = 0; i < 3; ++i) {
            xyz[i] = static_cast<double>(std::bit_cast<float>(load_le32(bytes.data() + offset + 4 * i)));
        }
        const Point3 p{xyz[0], xyz[1], xyz[2]};
        if (!p.is_finite()) {
            throw InputError("bin-f32x4: record " + std::to_string(records.size() + 1) + " has a non-finite value");
        }
        records.emplace_back(p);
    }
    return records;
}

std::vector<SourcePoint> read_records(const std::filesystem::path& path, DatasetFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (format == DatasetFormat::BinF32x4) {
        return parse_binary_records(std::as_bytes(std::span(content.data(), content.size())));
    }
    return parse_text_records(content, format);
}

Dataset split_records(std::vector<SourcePoint> records, std::size_t n, std::size_t queries) {
    if (n == 0) throw InputError("dataset size n must be positive");
    if (n + queries > records.size()) {
        throw InputError("insufficient records: need " + std::to_string(n + queries) + " (n=" + std::to_string(n) +
                         ", queries=" + std::to_string(queries) + "), found " + std::to_string(records.size()));
    }
    Dataset out;
    out.data.assign(std::make_move_iterator(records.begin()),
                    std::make_move_iterator(records.begin() + static_cast<std::ptrdiff_t>(n)));
    out.queries.assign(std::make_move_iterator(records.begin() + static_cast<std::ptrdiff_t>(n)),
                       std::make_move_iterator(records.begin() + static_cast<std::ptrdiff_t>(n + queries)));
    return out;
}

Dataset load_dataset(const DatasetFile& file) {
    try {
        return split_records(read_records(file.path, file.format), file.n, file.queries);
    } catch (const InputError& e) {
        throw InputError(file.path.string() + ": " + e.what());
    }
}

Dataset synthetic_dataset(DatasetFormat format, std::size_t n, std::size_t queries, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<SourcePoint> records;
    records.reserve(n + queries);
    for (std::size_t i = 0; i < n + queries; ++i) {
        switch (format) {
            case DatasetFormat::CsvXyz:
            case DatasetFormat::BinF32x4: {
                const double x = unit_double(rng);
                const double y = unit_double(rng);
                const double z = unit_double(rng);
                records.emplace_back(Point3{x, y, z});
                break;
            }
            case DatasetFormat::Csv2d: {
                const double x = unit_double(rng);
                const double y = unit_double(rng);
                records.emplace_back(Point2{x, y});
                break;
            }
            case DatasetFormat::Bits: {
                const auto v = static_cast<unsigned>(rng() >> 61);
                const std::string bits{static_cast<char>('0' + ((v >> 2) & 1u)), static_cast<char>('0' + ((v >> 1) & 1u)),
                                       static_cast<char>('0' + (v & 1u))};
                records.emplace_back(BitString(bits));
                break;
            }
        }
    }
    return split_records(std::move(records), n, queries);
}

}  // namespace gknn
