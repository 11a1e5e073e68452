#include <algorithm>

#include <json.hpp>

#include "hfseason/errors.hpp"
#include "hfseason/report/artifacts.hpp"
#include "hfseason/report/digest.hpp"
#include "hfseason/report/manifest.hpp"

namespace hfseason::report {

using nlohmann::json;

json manifest_to_json(const ReportBundle& bundle) {
    std::vector<ArtifactEntry> sorted = bundle.artifacts;
    std::sort(sorted.begin(), sorted.end(),
              [](const ArtifactEntry& a, const ArtifactEntry& b) { return a.path < b.path; });
    json arr = json::array();
    for (const auto& a : sorted) {
        arr.push_back({{"kind", a.kind}, {"asset", a.asset}, {"path", a.path}, {"sha256", a.sha256}});
    }
    return json{{"schema_version", "1"},
                {"run_id", bundle.run_id},
                {"parameters", bundle.parameters_text},
                {"artifacts", arr}};
}

std::string manifest_text(const ReportBundle& bundle) {
    return manifest_to_json(bundle).dump(2) + "\n";
}

void verify_manifest(const std::string& run_dir) {
    const json j = json::parse(read_text_file(run_dir + "/manifest.json"));
    for (const auto& a : j.at("artifacts")) {
        const std::string path = run_dir + "/" + a.at("path").get<std::string>();
        const std::string expected = a.at("sha256").get<std::string>();
        const std::string actual = sha256_file(path);
        if (actual != expected) {
            throw DataError("manifest digest mismatch for " + path);
        }
    }
}

}  // namespace hfseason::report
