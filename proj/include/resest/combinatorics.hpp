#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "resest/errors.hpp"

namespace resest {

enum class SubsetClass { J, S, Other };

/// A sorted set of 1-based sensor indices.
class SubsetIndex {
public:
    SubsetIndex() = default;

    SubsetIndex(std::vector<int> members, SubsetClass cls = SubsetClass::Other)
        : members_(std::move(members)), cls_(cls) {
        for (std::size_t i = 1; i < members_.size(); ++i)
            if (members_[i] <= members_[i - 1]) throw ConfigError("subset members must be strictly increasing");
        if (!members_.empty() && members_.front() < 1) throw ConfigError("subset members are 1-based");
    }

    const std::vector<int>& members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    SubsetClass subset_class() const noexcept { return cls_; }

    std::vector<int> zero_based() const {
        std::vector<int> out;
        out.reserve(members_.size());
        for (int m : members_) out.push_back(m - 1);
        return out;
    }

    bool contains(int sensor) const { return std::binary_search(members_.begin(), members_.end(), sensor); }

    bool is_subset_of(const SubsetIndex& other) const {
        return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
    }

    /// "1,3,4"
    std::string joined() const {
        std::string out;
        for (std::size_t i = 0; i < members_.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(members_[i]);
        }
        return out;
    }

    /// Canonical key, e.g. "J:1,3,4" or "S:2".
    std::string key() const {
        const char* prefix = cls_ == SubsetClass::J ? "J:" : cls_ == SubsetClass::S ? "S:" : "";
        return prefix + joined();
    }

    // Ordering and equality ignore the class tag: lexicographic on members.
    friend bool operator==(const SubsetIndex& a, const SubsetIndex& b) { return a.members_ == b.members_; }
    friend bool operator<(const SubsetIndex& a, const SubsetIndex& b) { return a.members_ < b.members_; }

private:
    std::vector<int> members_;
    SubsetClass cls_ = SubsetClass::Other;
};

/// Parse "J:1,3" / "S:2" / "1,3". Returns the subset with the tagged class.
inline SubsetIndex parse_subset_key(const std::string& key) {
    SubsetClass cls = SubsetClass::Other;
    std::string body = key;
    if (key.size() >= 2 && key[1] == ':') {
        if (key[0] == 'J') cls = SubsetClass::J;
        else if (key[0] == 'S') cls = SubsetClass::S;
        else throw ConfigError("bad subset key '" + key + "'");
        body = key.substr(2);
    }
    std::vector<int> members;
    std::size_t pos = 0;
    while (pos <= body.size()) {
        const auto comma = body.find(',', pos);
        const std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (tok.empty()) throw ConfigError("bad subset key '" + key + "'");
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(tok, &used);
        } catch (const std::exception&) {
            throw ConfigError("bad subset key '" + key + "'");
        }
        if (used != tok.size()) throw ConfigError("bad subset key '" + key + "'");
        members.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    try {
        return SubsetIndex(std::move(members), cls);
    } catch (const ConfigError&) {
        throw ConfigError("bad subset key '" + key + "'");
    }
}

/// All subsets of {1..p} with `size` members, lexicographic.
inline std::vector<SubsetIndex> enumerate_subsets(int p, int size, SubsetClass cls = SubsetClass::Other) {
    if (p < 1 || size < 1 || size > p)
        throw ConfigError("enumerate_subsets: size " + std::to_string(size) + " out of range for p=" + std::to_string(p));
    std::vector<SubsetIndex> out;
    std::vector<int> cur(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) cur[static_cast<std::size_t>(i)] = i + 1;
    while (true) {
        out.emplace_back(cur, cls);
        int i = size - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == p - size + i + 1) --i;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < size; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

inline long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// The observer bank layout for p sensors and at most q attacks.
struct BankIndex {
    int p = 0;
    int q = 0;
    std::vector<SubsetIndex> J_list;            // card p - q
    std::vector<SubsetIndex> S_list;            // card p - 2q
    std::vector<std::vector<std::size_t>> contained;  // contained[j] = positions in S_list of S subset of J_list[j]

    std::size_t observer_count() const { return J_list.size() + S_list.size(); }

    std::vector<SubsetIndex> all() const {
        std::vector<SubsetIndex> out = J_list;
        out.insert(out.end(), S_list.begin(), S_list.end());
        return out;
    }
};

inline BankIndex bank_index(int p, int q) {
    if (p < 1) throw ConfigError("bank_index: p must be >= 1");
    if (q < 0) throw ConfigError("bank_index: q must be >= 0");
    if (!(2 * q < p))
        throw AssumptionViolated("q < p/2 fails for p=" + std::to_string(p) + ", q=" + std::to_string(q));
    BankIndex b;
    b.p = p;
    b.q = q;
    b.J_list = enumerate_subsets(p, p - q, SubsetClass::J);
    b.S_list = enumerate_subsets(p, p - 2 * q, SubsetClass::S);
    for (const auto& J : b.J_list) {
        std::vector<std::size_t> inside;
        for (std::size_t s = 0; s < b.S_list.size(); ++s)
            if (b.S_list[s].is_subset_of(J)) inside.push_back(s);
        b.contained.push_back(std::move(inside));
    }
    return b;
}

}  // namespace resest
