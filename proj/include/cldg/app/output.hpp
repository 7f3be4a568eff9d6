#pragma once

#include "cldg/diagnostics.hpp"
#include "cldg/projections.hpp"
#include "cldg/time_integration.hpp"

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace cldg::app {

/// %.17g, enough to round-trip a double.
std::string csv_number(double v);

/// x, r, s, abs at `points` uniform points per cell, faces included; 0 selects k + 2.
void write_snapshot(std::ostream& os, const DGField<double>& field, const std::string& stamp, int points = 0);

/// t, charge, drift, relative_drift.
void write_charge_series(std::ostream& os, const std::vector<ChargeSample<double>>& series,
                         const std::string& stamp);

/// theta, k, N, h, l2_error, order; order is empty on the first row of a block.
void write_convergence(std::ostream& os, const std::vector<ConvergenceRecord<double>>& rows,
                       const std::string& stamp);

/// N, L2 error and order per (theta, k) block.
std::string convergence_table(const std::vector<ConvergenceRecord<double>>& rows);

/// theta, k, N, h, l2_error, slope.
void write_projection_study(std::ostream& os, const std::vector<ProjectionStudyRow<double>>& rows,
                            const std::string& stamp);

/// Writes through `body` into `path`, creating parent directories; throws on I/O failure.
void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body);

}  // namespace cldg::app
