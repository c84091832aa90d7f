#ifndef LSTS_CONFIG_HPP
#define LSTS_CONFIG_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

namespace lsts {

/// Flat key = value configuration with [section] headers. Keys are addressed
/// as "section.key" ("key" alone for the unnamed leading section). Unknown
/// keys are rejected when the consumer validates against its known-key set,
/// so a typo cannot silently change an experiment.
class Config {
  public:
    static Config from_file(const std::string& path);
    static Config from_stream(std::istream& in, const std::string& origin);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get(const std::string& key, const std::string& fallback) const;
    int get_int(const std::string& key, int fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    unsigned long long get_seed(const std::string& key, unsigned long long fallback) const;
    std::vector<int> get_int_list(const std::string& key, std::vector<int> fallback) const;

    /// Throws ParseError naming the first key outside `known`.
    void require_known(const std::set<std::string>& known) const;

  private:
    std::map<std::string, std::string> values_;
};

} // namespace lsts

#endif
