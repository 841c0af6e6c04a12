#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ddikit {

// Flat "key = value" text config; '#' starts a comment, later keys win.
class Config {
public:
    static Config load(const std::string& path);
    static Config parse(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    void set(const std::string& key, const std::string& value) {
        values_[key] = value;
    }

    std::string get_string(const std::string& key,
                           const std::string& fallback = "") const;
    long get_int(const std::string& key, long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const;
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;
    std::vector<int> get_int_list(const std::string& key,
                                  const std::vector<int>& fallback) const;
    std::vector<std::string> get_string_list(
        const std::string& key, const std::vector<std::string>& fallback) const;

    const std::map<std::string, std::string>& items() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

}  // namespace ddikit
