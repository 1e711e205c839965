#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pemsim {

// Row-streaming CSV writer with fixed columns and reproducible formatting.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns,
              const std::vector<std::string>& comments = {});
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void write_row(const std::vector<double>& values);
    void flush();

private:
    struct Impl;
    Impl* impl_;
};

// One experimental or simulated polarization sample.
struct CurvePoint {
    double i_fc;    // A m^-2
    double U_cell;  // V
};

struct CurveFile {
    std::vector<CurvePoint> points;
    // Metadata from "# key=value" comment lines (e.g. P_des_bar).
    std::map<std::string, double> metadata;
};

// Reads the canonical two-column polarization format:
//   i_fc_A_per_cm2,U_cell_V
// "#"-prefixed comment lines may carry key=value metadata and are skipped.
// Currents are converted to A m^-2. Throws ConfigError on malformed content.
CurveFile read_curve_csv(const std::string& path);

// Writes the canonical curve format, optionally with metadata comments.
void write_curve_csv(const std::string& path, const std::vector<CurvePoint>& points,
                     const std::map<std::string, double>& metadata = {});

} // namespace pemsim
