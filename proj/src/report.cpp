#include "lab/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace lab {

using nlohmann::json;

std::string ExperimentConfig::to_json_string() const {
    json j;
    j["experiment"] = experiment;
    j["ensemble"] = json::parse(ensemble.to_json_string());
    j["w_re"] = w.real();
    j["w_im"] = w.imag();
    j["trials"] = trials;
    j["n_list"] = n_list;
    j["grid_h"] = grid_h;
    j["grid_r_max"] = grid_r_max;
    j["subspace_dim"] = subspace_dim;
    j["epsilons"] = epsilons;
    j["rho_hat"] = rho_hat;
    j["k_hat"] = k_hat;
    j["m_small"] = m_small;
    j["literal_kernel"] = literal_kernel;
    j["tolerance_overrides"] = tolerance_overrides;
    j["out_dir"] = out_dir;
    j["master_seed"] = master_seed;
    j["formats"] = formats;
    j["threads"] = threads;
    return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json_string(const std::string& text) {
    const json j = json::parse(text);
    ExperimentConfig c;
    c.experiment = j.value("experiment", "");
    if (j.contains("ensemble")) {
        c.ensemble = EnsembleSpec::from_json_string(j.at("ensemble").dump());
    }
    c.w = cplx(j.value("w_re", 0.0), j.value("w_im", 0.0));
    c.trials = j.value("trials", 20);
    c.n_list = j.value("n_list", std::vector<int>{});
    c.grid_h = j.value("grid_h", 0.1);
    c.grid_r_max = j.value("grid_r_max", 1.5);
    c.subspace_dim = j.value("subspace_dim", 0);
    c.epsilons = j.value("epsilons", std::vector<double>{});
    c.rho_hat = j.value("rho_hat", 1.0);
    c.k_hat = j.value("k_hat", 4.0);
    c.m_small = j.value("m_small", 0);
    c.literal_kernel = j.value("literal_kernel", false);
    c.tolerance_overrides =
        j.value("tolerance_overrides", std::map<std::string, double>{});
    c.out_dir = j.value("out_dir", "");
    c.master_seed = j.value("master_seed", std::uint64_t{1});
    c.formats = j.value("formats", std::vector<std::string>{"csv", "json"});
    c.threads = j.value("threads", 1);
    return c;
}

bool ExperimentReport::all_pass() const {
    for (const auto& v : verdicts) {
        if (!v.pass) return false;
    }
    return true;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void atomic_write(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw std::runtime_error("atomic_write: short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

std::string report_to_json(const ExperimentReport& report) {
    json j;
    j["config"] = json::parse(report.config.to_json_string());
    j["version"] = report.version;
    j["wall_clock_seconds"] = report.wall_clock_seconds;
    j["row_columns"] = report.row_columns;
    j["rows"] = report.rows;
    j["summary"] = report.summary;
    json verdicts = json::array();
    for (const auto& v : report.verdicts) {
        verdicts.push_back({{"criterion", v.criterion},
                            {"value", v.value},
                            {"threshold", v.threshold},
                            {"higher_is_bad", v.higher_is_bad},
                            {"pass", v.pass}});
    }
    j["verdicts"] = verdicts;
    j["all_pass"] = report.all_pass();
    return j.dump(2) + "\n";
}

namespace {

std::string triple_csv(const std::vector<std::array<double, 3>>& rows, const char* header,
                       bool first_is_int, bool second_is_int) {
    std::string out = header;
    out += "\n";
    for (const auto& r : rows) {
        if (first_is_int) {
            out += std::to_string(static_cast<long>(r[0]));
        } else {
            out += format_double(r[0]);
        }
        out += ",";
        if (second_is_int) {
            out += std::to_string(static_cast<long>(r[1]));
        } else {
            out += format_double(r[1]);
        }
        out += ",";
        out += format_double(r[2]);
        out += "\n";
    }
    return out;
}

}  // namespace

std::string eigenvalues_csv(const ExperimentReport& report) {
    return triple_csv(report.eigenvalue_points, "trial,re,im", true, false);
}

std::string singular_values_csv(const ExperimentReport& report) {
    return triple_csv(report.singular_value_rows, "trial,index,value", true, true);
}

std::string density_csv(const ExperimentReport& report) {
    return triple_csv(report.density_rows, "re,im,density", false, false);
}

std::string lcd_csv(const ExperimentReport& report) {
    std::string out =
        "trial,d_small,lcd2_value,lcd2_censored,delta_value,class,inf_norm_ratio,"
        "compressible,dominated\n";
    for (const auto& line : report.lcd_rows) {
        out += line;
        out += "\n";
    }
    return out;
}

std::string rows_csv(const ExperimentReport& report) {
    std::string out;
    for (std::size_t c = 0; c < report.row_columns.size(); ++c) {
        if (c) out += ",";
        out += report.row_columns[c];
    }
    out += "\n";
    for (const auto& row : report.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ",";
            out += format_double(row[c]);
        }
        out += "\n";
    }
    return out;
}

std::string scatter_svg(const ExperimentReport& report) {
    // Fixed frame [-1.5, 1.5]^2 with the unit circle; one glyph per eigenvalue.
    const double span = 3.0;
    const int px = 640;
    auto sx = [&](double re) { return (re + 1.5) / span * px; };
    auto sy = [&](double im) { return (1.5 - im) / span * px; };
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
           "viewBox=\"0 0 640 640\">\n";
    svg += "<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"none\" "
                  "stroke=\"#888\" stroke-width=\"1\"/>\n",
                  sx(0.0), sy(0.0), px / span);
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"0\" y1=\"%.2f\" x2=\"640\" y2=\"%.2f\" stroke=\"#ccc\"/>\n",
                  sy(0.0), sy(0.0));
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.2f\" y1=\"0\" x2=\"%.2f\" y2=\"640\" stroke=\"#ccc\"/>\n",
                  sx(0.0), sx(0.0));
    svg += buf;
    for (const auto& pt : report.eigenvalue_points) {
        std::snprintf(buf, sizeof(buf),
                      "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"1.2\" fill=\"#1f77b4\" "
                      "fill-opacity=\"0.5\"/>\n",
                      sx(pt[1]), sy(pt[2]));
        svg += buf;
    }
    svg += "</svg>\n";
    return svg;
}

void emit_report(const ExperimentReport& report) {
    namespace fs = std::filesystem;
    const std::string dir = report.config.out_dir;
    if (dir.empty()) return;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::exists(dir)) throw std::runtime_error("emit_report: cannot create " + dir);

    const auto& fmts = report.config.formats;
    auto wants = [&](const std::string& f) {
        return std::find(fmts.begin(), fmts.end(), f) != fmts.end();
    };
    if (wants("json")) atomic_write(dir + "/report.json", report_to_json(report));
    if (wants("csv")) {
        if (!report.rows.empty()) atomic_write(dir + "/rows.csv", rows_csv(report));
        if (!report.eigenvalue_points.empty()) {
            atomic_write(dir + "/eigenvalues.csv", eigenvalues_csv(report));
        }
        if (!report.singular_value_rows.empty()) {
            atomic_write(dir + "/singular_values.csv", singular_values_csv(report));
        }
        if (!report.density_rows.empty()) {
            atomic_write(dir + "/density.csv", density_csv(report));
        }
        if (!report.lcd_rows.empty()) atomic_write(dir + "/lcd.csv", lcd_csv(report));
    }
    if (wants("svg") && !report.eigenvalue_points.empty()) {
        atomic_write(dir + "/scatter.svg", scatter_svg(report));
    }
}

}  // namespace lab
