#pragma once

// Claim registry and audit reports.
//
// Each registered claim is a finite, executable check of one identity,
// inequality or asymptotic statement. A claim yields one of five statuses;
// counterexamples are findings and do not make an audit fail. Only the exact
// identities (see requires_exact) count as internal failures.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "primepairs/asymptotic.hpp"
#include "primepairs/trace.hpp"

namespace primepairs {

class PrimeTable;

inline constexpr int kReportSchemaVersion = 1;

enum class ClaimStatus { ExactPass, BoundedPass, TrendConsistent, Counterexample, ReportOnly };

std::string to_string(ClaimStatus s);
ClaimStatus parse_claim_status(const std::string& s);

using FieldValue = std::variant<std::int64_t, double, std::string>;
using Fields = std::vector<std::pair<std::string, FieldValue>>;

struct ClaimVerdict {
    std::string claim_id;
    std::string statement;
    Fields params;
    ClaimStatus status = ClaimStatus::ReportOnly;
    std::optional<Fields> witness;
    std::vector<TracePoint> checkpoints;
    std::vector<FitResult> fits;
    std::vector<std::string> notes;

    bool operator==(const ClaimVerdict&) const;
};

struct AuditConfig {
    std::uint64_t limit = 10'000'000;
    double grid_lo = 1e4;
    double grid_ratio = 3.1622776601683795;  // sqrt(10)
    std::uint64_t q_max = 100;
    std::vector<LinearForm> forms = default_forms();
    /// Run only these claims (empty = all), minus the excluded ones.
    std::vector<std::string> only;
    std::vector<std::string> exclude;
    /// Per-claim parameters keyed "C-06.q_max"; see claim_parameters().
    std::map<std::string, double> overrides;

    static std::vector<LinearForm> default_forms();
    /// Grid lo .. limit with the configured ratio.
    std::vector<std::uint64_t> grid() const;
    /// Table limit that covers every selected claim.
    std::uint64_t table_limit() const;
    /// Throws UsageError on unknown claim ids or override keys.
    void validate() const;
    double param(const std::string& key) const;
    /// Config echo for reports; the worker count is deliberately absent.
    Fields echo() const;
};

struct AuditReport {
    int schema_version = kReportSchemaVersion;
    std::string tool_version;
    Fields config;
    std::vector<ClaimVerdict> claims;

    bool operator==(const AuditReport&) const;
    /// Exact identities that did not come out exact-pass.
    std::vector<std::string> invariant_failures() const;
};

struct ClaimInfo {
    std::string id;
    std::string statement;
    bool exact;                                             // must be exact-pass
    std::vector<std::pair<std::string, double>> defaults;  // override keys without the id prefix
};

/// Registry in report order.
const std::vector<ClaimInfo>& claim_registry();
const ClaimInfo& claim_info(const std::string& id);
bool requires_exact(const std::string& id);

/// Runs one claim against a table that covers config.table_limit(). Errors
/// inside the check are captured as a report-only verdict with a note.
ClaimVerdict run_claim(const std::string& id, const AuditConfig& config, const PrimeTable& table);
ClaimVerdict run_claim(const std::string& id, const AuditConfig& config);

AuditReport run_all(const AuditConfig& config);

enum class ReportFormat { Json, Csv, Markdown };
ReportFormat parse_report_format(const std::string& name);

std::string render(const AuditReport& report, ReportFormat format);
/// Inverse of the JSON rendering.
AuditReport parse_report_json(const std::string& text);

}  // namespace primepairs
