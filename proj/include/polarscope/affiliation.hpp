#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace polarscope {

enum class Affiliation { Supporter, Opposer, Unaffiliated };

inline constexpr std::size_t kGroupCount = 3;

const char* to_string(Affiliation a);
std::optional<Affiliation> affiliation_from(std::string_view name);

// Account -> group labeling. Only Supporter/Opposer are stored; every other
// account is Unaffiliated by construction.
class AffiliationMap {
  public:
    void set(std::string account_id, Affiliation a);
    Affiliation of(const std::string& account_id) const;
    bool is_labeled(const std::string& account_id) const;

    const std::map<std::string, Affiliation>& labeled() const { return labels_; }
    std::map<Affiliation, std::int64_t> group_sizes() const;

    // how the labeling came to be: seed digest + clustering parameters
    std::string provenance;

    // "account_id,affiliation" rows, sorted
    std::string to_csv() const;
    static AffiliationMap from_csv(const std::string& content);

  private:
    std::map<std::string, Affiliation> labels_;
};

struct SeedLabel {
    std::string account_id;
    Affiliation label = Affiliation::Unaffiliated;
};

// Parses "account_id,label" seed rows (header optional); throws on unknown
// labels or an account seeded into both groups.
std::vector<SeedLabel> parse_seed_csv(const std::string& content);

}  // namespace polarscope
