#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cgreat/app/pipeline.hpp"

namespace cgreat::app {

/// Cell of a CSV row; empty cells are written as nothing between commas.
using Cell = std::optional<Real>;

/// Header row, LF line endings, '.' decimal point, 15 significant digits.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<Cell>>& rows);

/// Export targets, each writing one file into dir. Returns the file path.
std::string export_map_graph(Pipeline& p, const std::string& dir);
std::string export_potential(Pipeline& p, const std::string& dir);
std::string export_schedule(Pipeline& p, const std::string& dir);
std::string export_delta_scan(Pipeline& p, const std::string& dir);
std::string export_invariant_graph(const Lift& f, const std::string& dir);
std::string export_phase_portrait(const Lift& f, const std::string& dir, std::size_t orbits = 12,
                                  std::size_t steps = 400);

const std::vector<std::string>& export_targets();
/// Runs one target by name ("all" runs every target); unknown names raise Config.
std::vector<std::string> run_export(Pipeline& p, const std::string& what, const std::string& dir);

}  // namespace cgreat::app
