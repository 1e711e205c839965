#include "pemsim/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pemsim/errors.hpp"

namespace pemsim {

struct CsvWriter::Impl {
    std::FILE* fp = nullptr;
    std::size_t n_cols = 0;
    std::string path;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns,
                     const std::vector<std::string>& comments)
    : impl_(new Impl) {
    impl_->path = path;
    impl_->n_cols = columns.size();
    impl_->fp = std::fopen(path.c_str(), "w");
    if (!impl_->fp) {
        delete impl_;
        throw ConfigError("cannot open '" + path + "' for writing");
    }
    for (const auto& c : comments) {
        std::fprintf(impl_->fp, "# %s\n", c.c_str());
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
        std::fprintf(impl_->fp, "%s%s", columns[i].c_str(),
                     i + 1 == columns.size() ? "\n" : ",");
    }
}

CsvWriter::~CsvWriter() {
    if (impl_->fp) std::fclose(impl_->fp);
    delete impl_;
}

void CsvWriter::write_row(const std::vector<double>& values) {
    if (values.size() != impl_->n_cols) {
        throw ConfigError("CSV row width mismatch for '" + impl_->path + "'");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::fprintf(impl_->fp, "%.12g%s", values[i], i + 1 == values.size() ? "\n" : ",");
    }
}

void CsvWriter::flush() { std::fflush(impl_->fp); }

CurveFile read_curve_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open curve file '" + path + "'");
    CurveFile out;
    std::string line;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            const auto eq = body.find('=');
            if (eq != std::string::npos) {
                std::string key = body.substr(0, eq);
                std::string val = body.substr(eq + 1);
                auto trim = [](std::string& s) {
                    const auto b = s.find_first_not_of(" \t");
                    const auto e = s.find_last_not_of(" \t");
                    s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
                };
                trim(key);
                trim(val);
                try {
                    out.metadata[key] = std::stod(val);
                } catch (...) {
                    // non-numeric metadata is ignored
                }
            }
            continue;
        }
        if (!header_seen) {
            if (line != "i_fc_A_per_cm2,U_cell_V") {
                throw ConfigError("curve file '" + path
                                  + "': expected header 'i_fc_A_per_cm2,U_cell_V', got '"
                                  + line + "'");
            }
            header_seen = true;
            continue;
        }
        std::istringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) {
            throw ConfigError("curve file '" + path + "': malformed row at line "
                              + std::to_string(line_no));
        }
        try {
            CurvePoint p{};
            p.i_fc = std::stod(a) * 1e4; // A cm^-2 -> A m^-2
            p.U_cell = std::stod(b);
            out.points.push_back(p);
        } catch (...) {
            throw ConfigError("curve file '" + path + "': non-numeric row at line "
                              + std::to_string(line_no));
        }
    }
    if (!header_seen) {
        throw ConfigError("curve file '" + path + "': missing header");
    }
    return out;
}

void write_curve_csv(const std::string& path, const std::vector<CurvePoint>& points,
                     const std::map<std::string, double>& metadata) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw ConfigError("cannot open '" + path + "' for writing");
    for (const auto& [k, v] : metadata) {
        std::fprintf(fp, "# %s=%.12g\n", k.c_str(), v);
    }
    std::fprintf(fp, "i_fc_A_per_cm2,U_cell_V\n");
    for (const auto& p : points) {
        std::fprintf(fp, "%.12g,%.12g\n", p.i_fc * 1e-4, p.U_cell);
    }
    std::fclose(fp);
}

} // namespace pemsim
