#ifndef BH_IO_HPP
#define BH_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "bh/field.hpp"

namespace bh {
namespace io {

using json = nlohmann::json;

/** Complex scalars serialize as [re, im]; matrices as nested row arrays. */
json to_json(const cdouble& z);
json to_json(const MatrixXcd& m);
json to_json(const Eigen::MatrixXd& m);
json to_json(const Eigen::VectorXd& v);
json to_json(const Eigen::VectorXi& v);

/** Grid shape plus the Fourier dictionary (frequency -> matrix). */
json field_json(const PeriodicField& f);

void write_text(const std::string& path, const std::string& content);

/** RFC-4180 table: quoted cells where needed, CRLF row endings, header row
 * first.  Numeric cells are preformatted by the caller (format_double gives a
 * deterministic shortest-roundtrip form). */
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string format_double(double v);
std::string csv_escape(const std::string& cell);
std::string to_csv(const CsvTable& table);
void write_csv(const std::string& path, const CsvTable& table);

/** Minimal hand-rolled log-log line chart. */
struct SvgSeries {
  std::string label;
  std::vector<double> x, y;
};

std::string loglog_svg(const std::string& title, const std::vector<SvgSeries>& series,
                       int width = 640, int height = 480);

}  // namespace io
}  // namespace bh

#endif
