#ifndef RELULIM_IO_HPP
#define RELULIM_IO_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "relulim/lab.hpp"
#include "relulim/regions.hpp"
#include "relulim/types.hpp"

namespace relulim {

using json = nlohmann::ordered_json;

json network_to_json(const Network& net);
Network network_from_json(const json& j);

json spec_to_json(const SequenceSpec& spec);
SequenceSpec spec_from_json(const json& j);

json cells_to_json(const std::vector<RegionCell>& cells);
json report_to_json(const ConvergenceReport& report);
json audit_to_json(const AuditReport& report);

std::string report_to_csv(const ConvergenceReport& report);

/// Serialize a double with 17 significant digits.
std::string format_double(double v);

Network load_network(const std::filesystem::path& path);
SequenceSpec load_spec(const std::filesystem::path& path);

/// Write-temp-then-rename; the target never holds a partial file.
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace relulim

#endif
