#include "degenlab/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "degenlab/errors.hpp"

namespace degen {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

double parse_double(const std::string& s) {
    const std::string t = trim(s);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw InvalidInput("not a number: '" + s + "'");
    }
    if (used != t.size()) throw InvalidInput("not a number: '" + s + "'");
    return v;
}

Vec parse_vec(const std::string& s) {
    Vec out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trim(item).empty()) out.push_back(parse_double(item));
    return out;
}

Config Config::parse(std::istream& is) {
    Config c;
    std::string line, current;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw InvalidInput("config line " + std::to_string(lineno) + ": bad section header");
            current = trim(line.substr(1, line.size() - 2));
            c.sections_[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InvalidInput("config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw InvalidInput("config line " + std::to_string(lineno) + ": empty key");
        c.sections_[current][key] = trim(line.substr(eq + 1));
    }
    return c;
}

Config Config::parse_string(const std::string& text) {
    std::istringstream is(text);
    return parse(is);
}

Config Config::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InvalidInput("cannot open config '" + path + "'");
    return parse(is);
}

bool Config::has(const std::string& section, const std::string& key) const {
    const auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key) > 0;
}

const Config::Section& Config::section(const std::string& name) const {
    static const Section empty;
    const auto it = sections_.find(name);
    return it == sections_.end() ? empty : it->second;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
    sections_[section][key] = value;
}

std::string Config::get(const std::string& section, const std::string& key, const std::string& def) const {
    return has(section, key) ? sections_.at(section).at(key) : def;
}

double Config::get_double(const std::string& section, const std::string& key, double def) const {
    return has(section, key) ? parse_double(sections_.at(section).at(key)) : def;
}

long long Config::get_int(const std::string& section, const std::string& key, long long def) const {
    if (!has(section, key)) return def;
    const double v = get_double(section, key, 0.0);
    if (v != static_cast<double>(static_cast<long long>(v))) throw InvalidInput(key + " must be an integer");
    return static_cast<long long>(v);
}

bool Config::get_bool(const std::string& section, const std::string& key, bool def) const {
    if (!has(section, key)) return def;
    const std::string v = get(section, key, "");
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw InvalidInput(key + " must be a boolean");
}

Vec Config::get_vec(const std::string& section, const std::string& key, const Vec& def) const {
    return has(section, key) ? parse_vec(sections_.at(section).at(key)) : def;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : cols_(header.size()) {
    pending_ = std::move(header);
    end_row();
    rows_ = 0;
}

CsvWriter& CsvWriter::cell(const std::string& s) {
    if (s.find_first_of(",\"\n") != std::string::npos) {
        std::string q = "\"";
        for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        pending_.push_back(q + "\"");
    } else {
        pending_.push_back(s);
    }
    return *this;
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_double(v)); }

CsvWriter& CsvWriter::cell(long long v) { return cell(std::to_string(v)); }

void CsvWriter::end_row() {
    if (pending_.size() != cols_) throw Error("csv row has " + std::to_string(pending_.size()) + " cells, expected " +
                                              std::to_string(cols_));
    for (std::size_t i = 0; i < pending_.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += pending_[i];
    }
    buf_ += '\n';
    pending_.clear();
    ++rows_;
}

std::string CsvWriter::str() const { return buf_; }

void CsvWriter::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InvalidInput("cannot write '" + path + "'");
    os << buf_;
}

}  // namespace degen
