#pragma once

#include <string>
#include <vector>

#include "siegel/verify.hpp"

namespace siegel {

/// JSON token for a double: bare %.17g when finite, else the quoted strings
/// "inf" / "-inf" / "nan" (JSON has no literals for them).
std::string json_number(double v);
std::string json_escape(const std::string& s);

/// {kind, params, estimate:{re,im}, stderr, reference:{re,im}, rel_error,
/// pass, samples, seed, wall_ms} in exactly that key order; param values are
/// strings.
std::string emit_check_json(const CheckReport& r);
/// "PASS <kind>" / "FAIL <kind>" header, then estimate / stderr / reference /
/// rel_error (scientific) / samples / params.
std::string emit_check_text(const CheckReport& r);

/// {kind:"verdict", params, bounded, failed:[...], slope, schur_bound|null}.
std::string emit_verdict_json(const Verdict& v, const ParamList& params, double slope);
std::string emit_verdict_text(const Verdict& v, const ParamList& params, double slope);

/// Fixed header n,p,alpha,a,b,c,verdict,failed,slope,bound and, when
/// with_ratios, ratio_beta_0.1 / ratio_beta_1 / ratio_beta_10 columns.
/// verdict is bounded/unbounded/error; failed names are '|'-joined; cells
/// without a value are empty.
std::string emit_scan_csv(const std::vector<ScanRow>& rows, bool with_ratios);
std::string emit_scan_json(const std::vector<ScanRow>& rows, bool with_ratios,
                           const ParamList& params);
std::string emit_scan_text(const std::vector<ScanRow>& rows, bool with_ratios);

/// Flat record for the norm/distance subcommands: named doubles after an
/// echoed param block.
struct Record {
    std::string kind;
    ParamList params;
    std::vector<std::pair<std::string, double>> values;
};

std::string emit_record_json(const Record& rec);
std::string emit_record_text(const Record& rec);

}  // namespace siegel
