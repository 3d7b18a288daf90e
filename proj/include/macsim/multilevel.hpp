#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace macsim {

/// A freshness/dirtiness level grid: n1 freshness levels crossed with n2
/// dirty levels, mapped one-to-one onto combined protection levels 1..n1*n2.
/// Larger combined level means lower protection priority.
struct MultilevelConfig {
    int n1 = 0;
    int n2 = 0;
    int n_total = 0;
    /// (fl, dl) -> fdl. Must cover the full grid bijectively to be valid.
    std::map<std::pair<int, int>, int> correspondence;
    int ways = 0;
    int bytes_per_block = 0;
};

struct LevelTriple {
    int fl = 0;
    int dl = 0;
    int fdl = 0;
};

/// The 2x2 instantiation used by the MAC policy: level 1 = fresh dirty,
/// 2 = fresh clean, 3 = stale dirty, 4 = stale clean.
inline MultilevelConfig mac_multilevel_config(int ways = 16, int bytes_per_block = 64) {
    MultilevelConfig c;
    c.n1 = 2;
    c.n2 = 2;
    c.n_total = 4;
    c.correspondence = {{{1, 1}, 1}, {{1, 2}, 2}, {{2, 1}, 3}, {{2, 2}, 4}};
    c.ways = ways;
    c.bytes_per_block = bytes_per_block;
    return c;
}

/// Returns every violated constraint by name; empty means the config is valid.
inline std::vector<std::string> validate_config(const MultilevelConfig& c) {
    std::vector<std::string> violations;
    if (c.n1 < 1 || c.n1 > c.ways)
        violations.push_back("freshness-level-bound: require 1 <= n1 <= ways");
    if (c.n2 < 1 || c.n2 > c.bytes_per_block + 1)
        violations.push_back("dirty-level-bound: require 1 <= n2 <= bytes_per_block + 1");
    if (c.n_total != c.n1 * c.n2)
        violations.push_back("total-level-product: require n_total = n1 * n2");
    if (violations.empty()) {
        // Bijection check over the full grid.
        std::set<int> used;
        bool ok = true;
        for (int fl = 1; fl <= c.n1 && ok; ++fl) {
            for (int dl = 1; dl <= c.n2 && ok; ++dl) {
                auto it = c.correspondence.find({fl, dl});
                if (it == c.correspondence.end() || it->second < 1 || it->second > c.n_total ||
                    !used.insert(it->second).second) {
                    ok = false;
                }
            }
        }
        if (!ok || c.correspondence.size() != static_cast<size_t>(c.n1) * c.n2)
            violations.push_back("correspondence-bijection: table must map the n1 x n2 grid "
                                 "one-to-one onto 1..n_total");
    }
    return violations;
}

inline int fdl_of(int fl, int dl, const MultilevelConfig& c) {
    if (fl < 1 || fl > c.n1 || dl < 1 || dl > c.n2)
        throw std::out_of_range("fdl_of: fl/dl outside the level grid");
    return c.correspondence.at({fl, dl});
}

/// Inverts the correspondence table. Throws if the fdl value is unused.
inline std::pair<int, int> levels_of(int fdl, const MultilevelConfig& c) {
    for (const auto& [key, value] : c.correspondence) {
        if (value == fdl) return key;
    }
    throw std::out_of_range("levels_of: fdl not present in correspondence table");
}

struct TransitionResult {
    bool ok = false;
    std::string violation;  // empty iff ok
};

/// A block's combined level may only move within its dirty-level group unless
/// the caller asserts that the block's dirtiness actually changed.
inline TransitionResult check_transition(const LevelTriple& from, const LevelTriple& to,
                                         const MultilevelConfig& c, bool dirty_degree_changed) {
    auto consistent = [&](const LevelTriple& t) {
        return t.fl >= 1 && t.fl <= c.n1 && t.dl >= 1 && t.dl <= c.n2 &&
               fdl_of(t.fl, t.dl, c) == t.fdl;
    };
    if (!consistent(from) || !consistent(to))
        throw std::invalid_argument("check_transition: triple inconsistent with correspondence table");
    if (from.dl == to.dl || dirty_degree_changed) return {true, ""};
    return {false, "group-rule: dirty level changed without a dirtiness event"};
}

/// Loads a correspondence table from text rows "fl dl fdl". Lines starting
/// with '#' and blank lines are skipped. n1/n2/n_total are inferred.
inline MultilevelConfig load_correspondence(std::istream& in, int ways, int bytes_per_block) {
    MultilevelConfig c;
    c.ways = ways;
    c.bytes_per_block = bytes_per_block;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream row(line);
        std::string first;
        if (!(row >> first) || first[0] == '#') continue;
        int fl = 0, dl = 0, fdl = 0;
        std::istringstream reparse(line);
        if (!(reparse >> fl >> dl >> fdl))
            throw std::invalid_argument("correspondence table: bad row at line " +
                                        std::to_string(line_no));
        c.correspondence[{fl, dl}] = fdl;
        c.n1 = std::max(c.n1, fl);
        c.n2 = std::max(c.n2, dl);
    }
    c.n_total = c.n1 * c.n2;
    return c;
}

}  // namespace macsim
