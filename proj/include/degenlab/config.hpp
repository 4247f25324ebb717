#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "degenlab/linalg.hpp"

namespace degen {

// key=value lines grouped under [section] headers; '#' starts a comment.
// Keys before the first header live in section "".
class Config {
public:
    using Section = std::map<std::string, std::string>;

    static Config parse(std::istream& is);
    static Config parse_string(const std::string& text);
    static Config load(const std::string& path);  // throws InvalidInput if unreadable

    bool has(const std::string& section, const std::string& key) const;
    const Section& section(const std::string& name) const;  // empty if absent
    void set(const std::string& section, const std::string& key, const std::string& value);

    std::string get(const std::string& section, const std::string& key, const std::string& def) const;
    double get_double(const std::string& section, const std::string& key, double def) const;
    long long get_int(const std::string& section, const std::string& key, long long def) const;
    bool get_bool(const std::string& section, const std::string& key, bool def) const;
    Vec get_vec(const std::string& section, const std::string& key, const Vec& def) const;

private:
    std::map<std::string, Section> sections_;
};

double parse_double(const std::string& s);
Vec parse_vec(const std::string& s);  // comma separated

// Minimal CSV writer with deterministic number formatting.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    CsvWriter& cell(const std::string& s);
    CsvWriter& cell(double v);
    CsvWriter& cell(long long v);
    CsvWriter& cell(bool v) { return cell(std::string(v ? "1" : "0")); }
    void end_row();
    std::string str() const;
    void save(const std::string& path) const;
    std::size_t rows() const { return rows_; }

private:
    std::size_t cols_;
    std::string buf_;
    std::vector<std::string> pending_;
    std::size_t rows_ = 0;
};

std::string format_double(double v);

}  // namespace degen
