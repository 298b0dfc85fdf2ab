#include "polarscope/affiliation.hpp"

#include <stdexcept>

#include "polarscope/csv.hpp"
#include "polarscope/text.hpp"

namespace polarscope {

const char* to_string(Affiliation a) {
    switch (a) {
        case Affiliation::Supporter: return "Supporter";
        case Affiliation::Opposer: return "Opposer";
        case Affiliation::Unaffiliated: return "Unaffiliated";
    }
    return "?";
}

std::optional<Affiliation> affiliation_from(std::string_view name) {
    std::string n = to_lower(name);
    if (n == "supporter" || n == "supporters") return Affiliation::Supporter;
    if (n == "opposer" || n == "opposers") return Affiliation::Opposer;
    if (n == "unaffiliated" || n == "none") return Affiliation::Unaffiliated;
    return std::nullopt;
}

void AffiliationMap::set(std::string account_id, Affiliation a) {
    if (a == Affiliation::Unaffiliated) {
        labels_.erase(account_id);
        return;
    }
    labels_[std::move(account_id)] = a;
}

Affiliation AffiliationMap::of(const std::string& account_id) const {
    auto it = labels_.find(account_id);
    return it == labels_.end() ? Affiliation::Unaffiliated : it->second;
}

bool AffiliationMap::is_labeled(const std::string& account_id) const {
    return labels_.count(account_id) > 0;
}

std::map<Affiliation, std::int64_t> AffiliationMap::group_sizes() const {
    std::map<Affiliation, std::int64_t> out{{Affiliation::Supporter, 0},
                                            {Affiliation::Opposer, 0}};
    for (const auto& [_, a] : labels_) out[a]++;
    return out;
}

std::string AffiliationMap::to_csv() const {
    csv::File f;
    if (!provenance.empty()) f.comment("provenance: " + provenance);
    f.row({"account_id", "affiliation"});
    for (const auto& [id, a] : labels_) f.row({id, to_string(a)});
    return csv::emit(f);
}

AffiliationMap AffiliationMap::from_csv(const std::string& content) {
    AffiliationMap out;
    csv::File f = csv::parse(content);
    for (const auto& l : f.lines)
        if (l.comment && l.text.rfind("# provenance: ", 0) == 0)
            out.provenance = l.text.substr(14);
    for (const auto* row : f.data_rows()) {
        if (row->size() < 2) continue;
        auto a = affiliation_from((*row)[1]);
        if (!a) throw std::invalid_argument("unknown affiliation '" + (*row)[1] + "'");
        out.set((*row)[0], *a);
    }
    return out;
}

std::vector<SeedLabel> parse_seed_csv(const std::string& content) {
    csv::File f = csv::parse(content);
    std::vector<SeedLabel> out;
    std::map<std::string, Affiliation> seen;
    bool first_data = true;
    for (const auto& l : f.lines) {
        if (l.comment || l.fields.empty()) continue;
        if (first_data) {
            first_data = false;
            if (l.fields.size() >= 2 && to_lower(l.fields[0]) == "account_id") continue;  // header
        }
        if (l.fields.size() < 2)
            throw std::invalid_argument("seed row needs account_id,label");
        auto a = affiliation_from(l.fields[1]);
        if (!a || *a == Affiliation::Unaffiliated)
            throw std::invalid_argument("seed label must be Supporter or Opposer, got '" +
                                        l.fields[1] + "'");
        auto [it, inserted] = seen.emplace(l.fields[0], *a);
        if (!inserted && it->second != *a)
            throw std::invalid_argument("account " + l.fields[0] + " seeded into both groups");
        if (inserted) out.push_back({l.fields[0], *a});
    }
    return out;
}

}  // namespace polarscope
