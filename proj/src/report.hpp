#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace berw {

inline constexpr const char* kToolName = "berw-lab";
inline constexpr const char* kToolVersion = "1.0.0";

/// A set of named byte documents produced by one analysis. Rendering is
/// deterministic: the same inputs yield byte-identical documents.
class Report {
public:
    void add(std::string name, std::string bytes) {
        docs_.emplace_back(std::move(name), std::move(bytes));
    }

    const std::string* find(const std::string& name) const {
        for (const auto& [n, d] : docs_)
            if (n == name) return &d;
        return nullptr;
    }

    const std::vector<std::pair<std::string, std::string>>& docs() const { return docs_; }

private:
    std::vector<std::pair<std::string, std::string>> docs_;
};

/// Deterministic shortest-ish float formatting for CSV cells.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvBuilder {
public:
    explicit CsvBuilder(std::initializer_list<const char*> header) {
        bool first = true;
        for (const char* h : header) {
            if (!first) out_ += ',';
            out_ += h;
            first = false;
        }
        out_ += '\n';
    }

    CsvBuilder& cell(const std::string& s) {
        if (!line_empty_) out_ += ',';
        out_ += s;
        line_empty_ = false;
        return *this;
    }

    CsvBuilder& cell(std::int64_t v) { return cell(std::to_string(v)); }
    CsvBuilder& cell(std::uint64_t v) { return cell(std::to_string(v)); }
    CsvBuilder& cell(std::uint32_t v) { return cell(std::to_string(v)); }
    CsvBuilder& cell(double v) { return cell(fmt_double(v)); }

    void end_row() {
        out_ += '\n';
        line_empty_ = true;
    }

    std::string take() { return std::move(out_); }

private:
    std::string out_;
    bool line_empty_ = true;
};

} // namespace berw
