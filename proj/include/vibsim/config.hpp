#ifndef VIBSIM_CONFIG_HPP
#define VIBSIM_CONFIG_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace vibsim {

// Sectioned key/value configuration text:
//
//   # comment
//   [simulation]
//   f_dist = 20
//   i_u = 12
//
// Lists are whitespace-separated; per-frequency tables separate rows
// with '/'. Section and key names are case-sensitive. Unknown sections
// and keys are rejected by the apply step, not silently ignored.
struct ParsedConfig {
    // section -> ordered (key, value) pairs
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections;

    bool has(const std::string& section, const std::string& key) const;
    const std::string* find(const std::string& section, const std::string& key) const;
};

ParsedConfig parse_config_text(const std::string& text);
ParsedConfig parse_config_file(const std::string& path);

// Value conversions, throwing std::invalid_argument with context on failure.
double config_double(const std::string& value, const std::string& context);
int config_int(const std::string& value, const std::string& context);
std::vector<double> config_double_list(const std::string& value, const std::string& context);
std::vector<int> config_int_list(const std::string& value, const std::string& context);
std::vector<std::vector<double>> config_double_rows(const std::string& value,
                                                    const std::string& context);
std::vector<std::vector<int>> config_int_rows(const std::string& value,
                                              const std::string& context);

} // namespace vibsim

#endif
