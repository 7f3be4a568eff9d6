#include "cldg/app/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace cldg::app {

namespace {

void stamp_line(std::ostream& os, const std::string& stamp) { os << "# config: " << stamp << '\n'; }

std::string optional_number(const std::optional<double>& v) { return v ? csv_number(*v) : std::string(); }

}  // namespace

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_snapshot(std::ostream& os, const DGField<double>& field, const std::string& stamp, int points) {
  const int m = points > 0 ? points : field.degree() + 2;
  if (m < 2) throw std::invalid_argument("write_snapshot: need at least 2 points per cell");
  stamp_line(os, stamp);
  os << "x,r,s,abs\n";
  const auto& mesh = field.mesh();
  for (Index j = 0; j < field.n_cells(); ++j) {
    for (int i = 0; i < m; ++i) {
      const double xi = -1.0 + 2.0 * i / (m - 1);
      const double x = mesh.center(j) + 0.5 * mesh.width(j) * xi;
      const double r = field.eval(Component::r, j, xi), s = field.eval(Component::s, j, xi);
      os << csv_number(x) << ',' << csv_number(r) << ',' << csv_number(s) << ',' << csv_number(std::hypot(r, s))
         << '\n';
    }
  }
}

void write_charge_series(std::ostream& os, const std::vector<ChargeSample<double>>& series,
                         const std::string& stamp) {
  stamp_line(os, stamp);
  os << "t,charge,drift,relative_drift\n";
  if (series.empty()) return;
  const double c0 = series.front().charge;
  for (const auto& c : series) {
    const double drift = c.charge - c0;
    os << csv_number(c.t) << ',' << csv_number(c.charge) << ',' << csv_number(drift) << ','
       << csv_number(drift / c0) << '\n';
  }
}

void write_convergence(std::ostream& os, const std::vector<ConvergenceRecord<double>>& rows,
                       const std::string& stamp) {
  stamp_line(os, stamp);
  os << "theta,k,N,h,l2_error,order\n";
  for (const auto& r : rows)
    os << csv_number(r.theta) << ',' << r.degree << ',' << r.n_cells << ',' << csv_number(r.h) << ','
       << csv_number(r.l2_error) << ',' << optional_number(r.order) << '\n';
}

std::string convergence_table(const std::vector<ConvergenceRecord<double>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (i == 0 || r.theta != rows[i - 1].theta || r.degree != rows[i - 1].degree) {
      if (i > 0) os << '\n';
      os << "theta = " << r.theta << ", k = " << r.degree << '\n';
      os << std::setw(6) << "N" << std::setw(14) << "L2 error" << std::setw(9) << "Order" << '\n';
    }
    char err[32], ord[32];
    if (r.error.empty()) std::snprintf(err, sizeof err, "%.2E", r.l2_error);
    else std::snprintf(err, sizeof err, "%s", "failed");
    if (r.order) std::snprintf(ord, sizeof ord, "%.2f", *r.order);
    else std::snprintf(ord, sizeof ord, "%s", "-");
    os << std::setw(6) << r.n_cells << std::setw(14) << err << std::setw(9) << ord << '\n';
  }
  return os.str();
}

void write_projection_study(std::ostream& os, const std::vector<ProjectionStudyRow<double>>& rows,
                            const std::string& stamp) {
  stamp_line(os, stamp);
  os << "theta,k,N,h,l2_error,slope\n";
  for (const auto& r : rows)
    os << csv_number(r.theta) << ',' << r.degree << ',' << r.n_cells << ',' << csv_number(r.h) << ','
       << csv_number(r.l2_error) << ',' << optional_number(r.slope) << '\n';
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  body(out);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace cldg::app
