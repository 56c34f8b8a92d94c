#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

namespace rbn {

// CSV with '#'-prefixed metadata lines, then a header row, then data rows.
// Doubles are printed with "%.17g" so files round-trip and reruns with the
// same config + seed are bit-identical.
class CsvWriter {
public:
    void meta(const std::string& key, const std::string& value) {
        out_ += "# ";
        out_ += key;
        out_ += "=";
        out_ += value;
        out_ += "\n";
    }

    void header(const std::string& columns) {
        out_ += columns;
        out_ += "\n";
    }

    CsvWriter& field(double v) {
        sep();
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out_ += buf;
        return *this;
    }

    CsvWriter& field(std::uint64_t v) {
        sep();
        out_ += std::to_string(v);
        return *this;
    }

    CsvWriter& field(long long v) {
        sep();
        out_ += std::to_string(v);
        return *this;
    }

    CsvWriter& field(int v) { return field(static_cast<long long>(v)); }
    CsvWriter& field(unsigned v) { return field(static_cast<std::uint64_t>(v)); }
    CsvWriter& field(std::size_t v) { return field(static_cast<std::uint64_t>(v)); }

    CsvWriter& field(const std::string& v) {
        sep();
        out_ += v;
        return *this;
    }

    void end_row() {
        out_ += "\n";
        row_open_ = false;
    }

    const std::string& str() const { return out_; }

private:
    void sep() {
        if (row_open_) out_ += ",";
        row_open_ = true;
    }

    std::string out_;
    bool row_open_ = false;
};

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace rbn
