#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "resest/combinatorics.hpp"
#include "resest/errors.hpp"
#include "resest/estimator.hpp"
#include "resest/observers.hpp"

namespace resest {

struct ThresholdTable {
    std::vector<double> pi_bar;  // aligned with J_list
    std::size_t k_bar_star = 0;
    double epsilon = 0.0;
};

/// pi_bar_J = 2 (eps + g1' + g2' + nu'), each primed term the max over {J} and
/// every S inside J. `gains` is aligned with BankIndex::all().
inline ThresholdTable compute_thresholds(const BankIndex& bank, const std::vector<std::optional<ISSGainModel>>& gains,
                                         double mbar, double dbar, double epsilon) {
    const auto all = bank.all();
    if (gains.size() != all.size()) throw ConfigError("compute_thresholds: gain table does not match the bank");
    std::vector<std::string> missing;
    for (std::size_t i = 0; i < all.size(); ++i)
        if (!gains[i]) missing.push_back(all[i].key());
    if (!missing.empty()) {
        std::string msg = "missing ISS gains for";
        for (const auto& m : missing) msg += " " + m;
        throw ConfigError(msg);
    }
    if (mbar < 0.0 || dbar < 0.0 || epsilon < 0.0) throw ConfigError("compute_thresholds: bounds must be >= 0");

    ThresholdTable t;
    t.epsilon = epsilon;
    for (const auto& g : gains) t.k_bar_star = std::max(t.k_bar_star, g->k_star);
    const std::size_t nJ = bank.J_list.size();
    for (std::size_t j = 0; j < nJ; ++j) {
        double g1 = gains[j]->gamma1 * mbar, g2 = gains[j]->gamma2 * dbar, nu = gains[j]->nu;
        for (std::size_t s : bank.contained[j]) {
            const auto& gs = *gains[nJ + s];
            g1 = std::max(g1, gs.gamma1 * mbar);
            g2 = std::max(g2, gs.gamma2 * dbar);
            nu = std::max(nu, gs.nu);
        }
        t.pi_bar.push_back(2.0 * (epsilon + g1 + g2 + nu));
    }
    return t;
}

/// Union of the members of every J with pi_J <= pi_bar_J; sorted.
inline std::vector<int> attack_free_union(const BankIndex& bank, const std::vector<double>& pi,
                                          const ThresholdTable& thresholds) {
    if (pi.size() != bank.J_list.size() || thresholds.pi_bar.size() != bank.J_list.size())
        throw ConsistencyError("attack_free_union: table sizes do not match the bank");
    std::set<int> out;
    for (std::size_t j = 0; j < pi.size(); ++j)
        if (pi[j] <= thresholds.pi_bar[j])
            for (int m : bank.J_list[j].members()) out.insert(m);
    return {out.begin(), out.end()};
}

struct IsolationWindow {
    std::size_t index = 0;  // 1-based
    std::size_t k_start = 0;
    std::size_t k_end = 0;
    std::map<SubsetIndex, std::size_t> counters;  // only subsets that were hit
    std::optional<SubsetIndex> winner;
    std::vector<int> isolated;  // complement of the winner
    bool no_quorum = false;
};

struct IsolationReport {
    std::size_t window_length = 0;
    std::vector<std::pair<std::size_t, std::vector<int>>> per_step;  // (k, W_bar(k))
    std::vector<IsolationWindow> windows;
};

/// Windowed voting on W_bar(k). Window i covers [k_bar* + (i-1) N, k_bar* + i N - 1];
/// only complete windows are reported. A step votes for J when W_bar(k) equals J
/// exactly and card(J) >= p - q.
inline IsolationReport windowed_isolation(const BankIndex& bank, const std::vector<EstimatorFrame>& frames,
                                          const ThresholdTable& thresholds, std::size_t N) {
    if (N < 1) throw ConfigError("windowed_isolation: window length must be >= 1");
    IsolationReport report;
    report.window_length = N;
    if (frames.empty()) return report;

    std::map<std::size_t, std::vector<int>> wbar;
    for (const auto& f : frames) {
        auto w = attack_free_union(bank, f.pi, thresholds);
        report.per_step.emplace_back(f.k, w);
        wbar[f.k] = std::move(w);
    }
    const std::size_t min_card = static_cast<std::size_t>(bank.p - bank.q);
    const std::size_t k_last = frames.back().k;
    for (std::size_t i = 1;; ++i) {
        const std::size_t k_start = thresholds.k_bar_star + (i - 1) * N;
        const std::size_t k_end = k_start + N - 1;
        if (k_end > k_last) break;
        IsolationWindow win;
        win.index = i;
        win.k_start = k_start;
        win.k_end = k_end;
        for (std::size_t k = k_start; k <= k_end; ++k) {
            auto it = wbar.find(k);
            if (it == wbar.end() || it->second.size() < min_card) continue;
            ++win.counters[SubsetIndex(it->second)];
        }
        std::size_t best = 0;
        for (const auto& [J, n] : win.counters)
            if (n > best) {
                best = n;
                win.winner = J;
            }
        if (win.winner) {
            for (int s = 1; s <= bank.p; ++s)
                if (!win.winner->contains(s)) win.isolated.push_back(s);
        } else {
            win.no_quorum = true;
        }
        report.windows.push_back(std::move(win));
    }
    return report;
}

}  // namespace resest
