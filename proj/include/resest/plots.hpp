#pragma once

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "resest/config.hpp"
#include "resest/csv.hpp"
#include "resest/errors.hpp"
#include "resest/runner.hpp"

namespace resest {

struct PlotResult {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::size_t column(const std::vector<std::string>& head, const std::string& name, const std::string& file) {
    for (std::size_t i = 0; i < head.size(); ++i)
        if (head[i] == name) return i;
    throw IoError(file + ": missing column '" + name + "'");
}

}  // namespace detail

/// Plot-ready tables from a run directory.
///
///   plot_states.csv     k,x1,xhat1,x2,xhat2,...   (true vs estimated state)
///   plot_isolation.csv  window_i,k_start,k_end,isolated_sensor   (0 = none isolated)
inline PlotResult emit_plots(const std::filesystem::path& dir) {
    PlotResult res;
    const auto traj_path = dir / "trajectory.csv", frames_path = dir / "frames.csv";
    for (const auto& p : {traj_path, frames_path})
        if (!std::filesystem::exists(p)) throw IoError("missing artifact '" + p.string() + "'");

    const auto traj = csv::parse(read_file(traj_path.string()));
    const auto frames = csv::parse(read_file(frames_path.string()));
    if (frames.size() <= 1 || traj.size() <= 1) {
        write_atomic(dir / "plot_states.csv", "");
        res.files.push_back(dir / "plot_states.csv");
        res.warnings.push_back("no frames in '" + frames_path.string() + "', wrote an empty plot file");
    } else {
        const auto& th = traj.front();
        const auto& fh = frames.front();
        std::size_t n = 0;
        while (std::find(th.begin(), th.end(), "x" + std::to_string(n + 1)) != th.end()) ++n;
        std::vector<std::string> head{"k"};
        std::vector<std::pair<std::size_t, std::size_t>> cols;
        for (std::size_t i = 1; i <= n; ++i) {
            head.push_back("x" + std::to_string(i));
            head.push_back("xhat" + std::to_string(i));
            cols.emplace_back(detail::column(th, "x" + std::to_string(i), traj_path.string()),
                              detail::column(fh, "xhat" + std::to_string(i), frames_path.string()));
        }
        const std::size_t kt = detail::column(th, "k", traj_path.string());
        const std::size_t kf = detail::column(fh, "k", frames_path.string());
        if (traj.size() != frames.size()) throw IoError("trajectory and frames have different lengths");
        std::string out = csv::join_row(head) + "\n";
        for (std::size_t r = 1; r < frames.size(); ++r) {
            if (traj[r].at(kt) != frames[r].at(kf)) throw IoError("trajectory and frames are misaligned");
            std::vector<std::string> row{frames[r].at(kf)};
            for (const auto& [xc, hc] : cols) {
                row.push_back(traj[r].at(xc));
                row.push_back(frames[r].at(hc));
            }
            out += csv::join_row(row) + "\n";
        }
        write_atomic(dir / "plot_states.csv", out);
        res.files.push_back(dir / "plot_states.csv");
    }

    const auto win_path = dir / "isolation_windows.csv";
    if (std::filesystem::exists(win_path)) {
        const auto win = csv::parse(read_file(win_path.string()));
        std::string out = "window_i,k_start,k_end,isolated_sensor\n";
        if (!win.empty()) {
            const auto& h = win.front();
            const std::size_t wi = detail::column(h, "window_i", win_path.string());
            const std::size_t ks = detail::column(h, "k_start", win_path.string());
            const std::size_t ke = detail::column(h, "k_end", win_path.string());
            const std::size_t is = detail::column(h, "isolated_set", win_path.string());
            for (std::size_t r = 1; r < win.size(); ++r)
                out += csv::join_row({win[r].at(wi), win[r].at(ks), win[r].at(ke), win[r].at(is)}) + "\n";
        }
        write_atomic(dir / "plot_isolation.csv", out);
        res.files.push_back(dir / "plot_isolation.csv");
    }
    return res;
}

}  // namespace resest
