#include "vbp/dataset.hpp"

#include "vbp/errors.hpp"
#include "text_format.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

namespace vbp {

namespace {

constexpr const char* kHeader = "clip_path,systolic,diastolic,age,sex";

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(field);
            field.clear();
        } else {
            field += ch;
        }
    }
    fields.push_back(field);
    return fields;
}

double parse_double(const std::string& text, const std::string& what) {
    double value = 0.0;
    const auto* begin = text.data();
    const auto* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw CorruptFile("manifest: bad " + what + " value '" + text + "'");
    }
    return value;
}

int parse_int(const std::string& text, const std::string& what) {
    int value = 0;
    const auto* begin = text.data();
    const auto* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw CorruptFile("manifest: bad " + what + " value '" + text + "'");
    }
    return value;
}

} // namespace

std::filesystem::path DatasetManifest::resolve(const ManifestRow& row) const {
    const std::filesystem::path p(row.clip_path);
    return p.is_absolute() ? p : base_dir / p;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw CorruptFile(path.string() + ": empty manifest");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader) {
        throw CorruptFile(path.string() + ": header must be exactly '" + kHeader + "'");
    }

    DatasetManifest manifest;
    manifest.base_dir = path.has_parent_path() ? path.parent_path() : ".";

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        const auto fields = split_csv_line(line);
        if (fields.size() != 5) {
            throw CorruptFile(path.string() + ":" + std::to_string(line_no) +
                              ": expected 5 fields, got " + std::to_string(fields.size()));
        }
        ManifestRow row;
        row.clip_path = fields[0];
        if (row.clip_path.empty()) {
            throw CorruptFile(path.string() + ":" + std::to_string(line_no) + ": empty clip path");
        }
        row.systolic = parse_double(fields[1], "systolic");
        row.diastolic = parse_double(fields[2], "diastolic");
        row.age = parse_int(fields[3], "age");
        if (fields[4] != "M" && fields[4] != "F") {
            throw CorruptFile(path.string() + ":" + std::to_string(line_no) +
                              ": sex must be M or F");
        }
        row.sex = fields[4][0];
        if (!is_valid_label(label_of(row))) {
            throw CorruptFile(path.string() + ":" + std::to_string(line_no) +
                              ": label needs systolic > diastolic > 0");
        }
        if (row.age < 1 || row.age > 120) {
            throw CorruptFile(path.string() + ":" + std::to_string(line_no) +
                              ": age out of range");
        }
        manifest.rows.push_back(std::move(row));
    }
    if (in.bad()) throw IoFailure("read failed for " + path.string());
    return manifest;
}

void write_manifest(const std::filesystem::path& path, std::span<const ManifestRow> rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out << kHeader << '\n';
    for (const auto& row : rows) {
        out << row.clip_path << ',' << detail::format_g17(row.systolic) << ','
            << detail::format_g17(row.diastolic) << ',' << row.age << ',' << row.sex << '\n';
    }
    if (!out) throw IoFailure("write failed for " + path.string());
}

BpLabel label_of(const ManifestRow& row) {
    return {row.systolic, row.diastolic};
}

Split stratified_split(std::span<const BpClass> classes, int training_percent, Rng& rng) {
    if (training_percent < 1 || training_percent > 99) {
        throw InvalidConfig("training_percent must be within [1, 99]");
    }
    if (classes.empty()) throw InsufficientData("stratified_split needs samples");

    std::array<std::vector<std::size_t>, kBpClassCount> by_class;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        by_class[static_cast<std::size_t>(classes[i])].push_back(i);
    }

    Split split;
    for (auto& members : by_class) {
        if (members.empty()) continue;
        // Fisher-Yates with our own index draws, so the order is seed-stable.
        for (std::size_t i = members.size() - 1; i > 0; --i) {
            std::swap(members[i], members[rng.index(i + 1)]);
        }
        auto take = static_cast<std::size_t>(
            std::lround(static_cast<double>(members.size()) * training_percent / 100.0));
        take = std::clamp<std::size_t>(take, 1, members.size());
        for (std::size_t i = 0; i < members.size(); ++i) {
            (i < take ? split.train : split.test).push_back(members[i]);
        }
    }

    if (split.test.empty()) {
        // Give up the largest class's last training row so the held-out side
        // is never empty.
        std::size_t donor = 0;
        std::size_t donor_size = 0;
        for (std::size_t c = 0; c < by_class.size(); ++c) {
            if (by_class[c].size() > donor_size) {
                donor_size = by_class[c].size();
                donor = c;
            }
        }
        if (donor_size < 2) throw InsufficientData("stratified_split cannot form a test set");
        const std::size_t moved = by_class[donor].back();
        split.train.erase(std::find(split.train.begin(), split.train.end(), moved));
        split.test.push_back(moved);
    }

    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

} // namespace vbp
