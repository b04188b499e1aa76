#pragma once

#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "tauberian/common.hpp"

namespace tauberian {

/// One labelled row of an experiment report.  `pass` is tri-state: rows that
/// merely record a quantity (no acceptance bound attached) leave it empty.
struct ReportRow {
    std::string label;
    std::vector<double> values;
    std::optional<bool> pass;
};

/// Tabular result of one experiment: named metadata, a fixed column layout,
/// and rows with optional pass flags.  Serialises to deterministic CSV.
class ValueReport {
  public:
    explicit ValueReport(std::string title, std::vector<std::string> columns)
        : title_(std::move(title)), columns_(std::move(columns)) {}

    void add_meta(const std::string& key, const std::string& value) {
        meta_.emplace_back(key, value);
    }
    void add_meta(const std::string& key, double value) {
        meta_.emplace_back(key, format_double(value));
    }

    void add_row(std::string label, std::vector<double> values,
                 std::optional<bool> pass = std::nullopt) {
        if (values.size() != columns_.size())
            throw domain_error("ValueReport: row width does not match column count");
        rows_.push_back(ReportRow{std::move(label), std::move(values), pass});
    }

    const std::string& title() const { return title_; }
    void set_title(std::string title) { title_ = std::move(title); }
    const std::vector<ReportRow>& rows() const { return rows_; }
    const std::vector<std::string>& columns() const { return columns_; }

    /// True when no row with an attached flag failed.
    bool all_pass() const {
        for (const auto& r : rows_)
            if (r.pass.has_value() && !*r.pass) return false;
        return true;
    }

    std::size_t flagged_failures() const {
        std::size_t n = 0;
        for (const auto& r : rows_)
            if (r.pass.has_value() && !*r.pass) ++n;
        return n;
    }

    void write_csv(std::ostream& os) const {
        os << "# report," << title_ << "\n";
        for (const auto& [k, v] : meta_) os << "# " << k << "," << v << "\n";
        os << "label";
        for (const auto& c : columns_) os << "," << c;
        os << ",pass\n";
        for (const auto& r : rows_) {
            os << r.label;
            for (double v : r.values) os << "," << format_double(v);
            if (r.pass.has_value())
                os << "," << (*r.pass ? "1" : "0");
            else
                os << ",";
            os << "\n";
        }
    }

    void write_csv_file(const std::string& path) const {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("ValueReport: cannot open " + path);
        write_csv(os);
    }

  private:
    std::string title_;
    std::vector<std::string> columns_;
    std::vector<std::pair<std::string, std::string>> meta_;
    std::vector<ReportRow> rows_;
};

}  // namespace tauberian
