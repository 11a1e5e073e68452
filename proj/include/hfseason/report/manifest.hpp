#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace hfseason::report {

struct ArtifactEntry {
    std::string kind;    // table1 | correlation | grid | returns | candles | density |
                         // seasonal_profile | seasonal_csv | svg
    std::string asset;   // empty for cross-asset artifacts
    std::string path;    // relative to the run directory
    std::string sha256;
};

struct ReportBundle {
    std::string run_id;            // content-derived: digest of config + input digests
    std::string parameters_text;   // canonical config serialization
    std::vector<ArtifactEntry> artifacts;
};

/// Manifest JSON, schema_version "1"; artifacts sorted by path.
nlohmann::json manifest_to_json(const ReportBundle& bundle);
std::string manifest_text(const ReportBundle& bundle);

/// Recomputes every artifact digest under run_dir against the manifest.
/// Throws DataError on a missing file or digest mismatch.
void verify_manifest(const std::string& run_dir);

}  // namespace hfseason::report
