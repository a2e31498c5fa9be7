#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "imtriage/extract.hpp"
#include "imtriage/model.hpp"

namespace imtriage::report {

using model::AppId;
using model::ArtifactRecord;
using model::TaxonomyCategory;
using ordered_json = nlohmann::ordered_json;

struct DuplicateApp : std::runtime_error {
    explicit DuplicateApp(const std::string& what) : std::runtime_error(what) {}
};

struct CaseError {
    AppId app = AppId::skype;
    std::string store_path;
    std::string reason;
};

inline constexpr const char* kToolName = "imtriage";
inline constexpr const char* kToolVersion = "0.1.0";

/// Merged view over all per-app extractions plus image metadata.
struct CaseReport {
    std::string image_path;  // as given by the operator
    model::Os os = model::Os::unknown;
    uint64_t file_count = 0;
    std::vector<AppId> apps;  // apps with results, sorted
    std::vector<ArtifactRecord> records;  // canonical order
    std::vector<std::string> warnings;
    std::vector<CaseError> errors;
};

/// Order-insensitive merge; at most one result per (app, os).
CaseReport merge(const std::vector<extract::AppResult>& results);

struct TimelineEvent {
    int64_t timestamp_utc_ms = 0;
    AppId app = AppId::skype;
    TaxonomyCategory category = TaxonomyCategory::ContentData;
    std::string summary;
    model::SourceAnchor anchor;
};

struct Timeline {
    std::vector<TimelineEvent> events;  // sorted (ts, app, category, path, locator)
    uint64_t excluded_untimed = 0;      // timestamped-category records with no instant
};

Timeline build_timeline(const CaseReport& report);

// ---------------------------------------------------------------- matrix

enum class CellState { none, unknown, found };
enum class Tag { chats, calls, text, image, video, audio };
const char* to_string(CellState s);
const char* to_string(Tag t);

struct MatrixCell {
    CellState state = CellState::none;
    std::set<Tag> tags;

    bool operator==(const MatrixCell&) const = default;
};

/// app x taxonomy-category grid of findings, always covering all four apps.
struct RecoverabilityMatrix {
    std::map<std::pair<AppId, TaxonomyCategory>, MatrixCell> cells;

    const MatrixCell& cell(AppId app, TaxonomyCategory cat) const;
};

RecoverabilityMatrix build_matrix(const CaseReport& report);

/// Transcriptions of the published recoverability tables, shipped as data.
const RecoverabilityMatrix& reference_ios_filesystem();
const RecoverabilityMatrix& reference_android_logical();

/// True when every non-unknown reference cell is covered by the computed
/// matrix (found state and tag superset). Gaps, when requested, name the
/// uncovered cells.
bool covers_reference(const RecoverabilityMatrix& computed,
                      const RecoverabilityMatrix& reference,
                      std::vector<std::string>* gaps = nullptr);

// ------------------------------------------------------------ serialization

/// Record as JSON with fixed key order; anchors optional so ground-truth
/// comparisons can ignore provenance.
ordered_json record_to_json(const ArtifactRecord& r, bool include_anchor);
ArtifactRecord record_from_json(const nlohmann::json& j);

/// Canonical total order used for reports and manifests.
void sort_records_canonical(std::vector<ArtifactRecord>& records);

std::string serialize_json(const CaseReport& report);
/// One CSV per record category, RFC-4180 quoting; filename -> content.
std::map<std::string, std::string> serialize_csv(const CaseReport& report);
/// One line per event: <ISO-8601Z>\t<app>\t<category>\t<summary>
std::string serialize_timeline_text(const CaseReport& report);

ordered_json matrix_to_json(const RecoverabilityMatrix& m);

}  // namespace imtriage::report
