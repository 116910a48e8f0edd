#include "vibsim/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vibsim {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok)
        out.push_back(tok);
    return out;
}

std::vector<std::string> split_rows(const std::string& s) {
    std::vector<std::string> rows;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find('/', start);
        if (pos == std::string::npos) {
            rows.push_back(s.substr(start));
            break;
        }
        rows.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return rows;
}

} // namespace

bool ParsedConfig::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

const std::string* ParsedConfig::find(const std::string& section,
                                      const std::string& key) const {
    auto it = sections.find(section);
    if (it == sections.end())
        return nullptr;
    for (const auto& kv : it->second)
        if (kv.first == key)
            return &kv.second;
    return nullptr;
}

ParsedConfig parse_config_text(const std::string& text) {
    ParsedConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": empty section name");
            cfg.sections[section]; // register even if empty
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        if (section.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": key outside any [section]");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": empty key");
        cfg.sections[section].emplace_back(std::move(key), std::move(value));
    }
    return cfg;
}

ParsedConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

double config_double(const std::string& value, const std::string& context) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(context + ": cannot parse '" + value + "' as a number");
    }
}

int config_int(const std::string& value, const std::string& context) {
    int v = 0;
    auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size())
        throw std::invalid_argument(context + ": cannot parse '" + value + "' as an integer");
    return v;
}

std::vector<double> config_double_list(const std::string& value, const std::string& context) {
    std::vector<double> out;
    for (const auto& tok : split_ws(value))
        out.push_back(config_double(tok, context));
    if (out.empty())
        throw std::invalid_argument(context + ": empty list");
    return out;
}

std::vector<int> config_int_list(const std::string& value, const std::string& context) {
    std::vector<int> out;
    for (const auto& tok : split_ws(value))
        out.push_back(config_int(tok, context));
    if (out.empty())
        throw std::invalid_argument(context + ": empty list");
    return out;
}

std::vector<std::vector<double>> config_double_rows(const std::string& value,
                                                    const std::string& context) {
    std::vector<std::vector<double>> rows;
    for (const auto& row : split_rows(value))
        rows.push_back(config_double_list(row, context));
    return rows;
}

std::vector<std::vector<int>> config_int_rows(const std::string& value,
                                              const std::string& context) {
    std::vector<std::vector<int>> rows;
    for (const auto& row : split_rows(value))
        rows.push_back(config_int_list(row, context));
    return rows;
}

} // namespace vibsim
