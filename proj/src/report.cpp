#include "siegel/report.hpp"

#include <cmath>
#include <cstdio>

namespace siegel {

namespace {

const char* verdict_word(const ScanRow& row) {
    if (!row.ok) return "error";
    return row.verdict.bounded ? "bounded" : "unbounded";
}

std::string joined_failures(const std::vector<FailedCondition>& failed) {
    std::string out;
    for (size_t i = 0; i < failed.size(); ++i) {
        if (i) out += '|';
        out += failed_condition_name(failed[i]);
    }
    return out;
}

std::string joined_errors(const std::vector<std::string>& errors) {
    std::string out;
    for (size_t i = 0; i < errors.size(); ++i) {
        if (i) out += '|';
        out += errors[i];
    }
    return out;
}

std::string sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

void append_params_json(std::string& out, const ParamList& params) {
    out += "\"params\":{";
    for (size_t i = 0; i < params.size(); ++i) {
        if (i) out += ',';
        out += '"';
        out += json_escape(params[i].first);
        out += "\":\"";
        out += json_escape(params[i].second);
        out += '"';
    }
    out += '}';
}

void append_complex_json(std::string& out, const char* key, Complex v) {
    out += '"';
    out += key;
    out += "\":{\"re\":";
    out += json_number(v.real());
    out += ",\"im\":";
    out += json_number(v.imag());
    out += '}';
}

void append_string_array_json(std::string& out, const std::vector<std::string>& items) {
    out += '[';
    for (size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += '"';
        out += json_escape(items[i]);
        out += '"';
    }
    out += ']';
}

void append_ratios_json(std::string& out, const std::vector<RayleighPoint>& ratios) {
    out += '[';
    for (size_t i = 0; i < ratios.size(); ++i) {
        if (i) out += ',';
        out += "{\"beta\":";
        out += json_number(ratios[i].beta);
        out += ",\"ratio\":";
        out += json_number(ratios[i].ratio);
        out += ",\"rel_stderr\":";
        out += json_number(ratios[i].rel_std_error);
        out += ",\"converged\":";
        out += ratios[i].converged ? "true" : "false";
        out += '}';
    }
    out += ']';
}

std::string params_line(const ParamList& params) {
    std::string out = "  params:";
    for (const auto& kv : params) {
        out += ' ';
        out += kv.first;
        out += '=';
        out += kv.second;
    }
    out += '\n';
    return out;
}

}  // namespace

std::string json_number(double v) {
    if (std::isfinite(v)) return format_double(v);
    if (std::isnan(v)) return "\"nan\"";
    return v > 0 ? "\"inf\"" : "\"-inf\"";
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (const char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    return out;
}

std::string emit_check_json(const CheckReport& r) {
    std::string out = "{\"kind\":\"";
    out += identity_kind_name(r.kind);
    out += "\",";
    append_params_json(out, r.params);
    out += ',';
    append_complex_json(out, "estimate", r.estimate);
    out += ",\"stderr\":";
    out += json_number(r.std_error);
    out += ',';
    append_complex_json(out, "reference", r.reference);
    out += ",\"rel_error\":";
    out += json_number(r.rel_error);
    out += ",\"pass\":";
    out += r.pass ? "true" : "false";
    out += ",\"samples\":";
    out += std::to_string(r.samples);
    out += ",\"seed\":";
    out += std::to_string(r.seed);
    out += ",\"wall_ms\":";
    out += std::to_string(r.wall_ms);
    out += "}\n";
    return out;
}

std::string emit_check_text(const CheckReport& r) {
    std::string out = r.pass ? "PASS " : "FAIL ";
    out += identity_kind_name(r.kind);
    out += '\n';
    out += "  estimate  = " + format_complex(r.estimate) + '\n';
    out += "  stderr    = " + sci(r.std_error) + '\n';
    out += "  reference = " + format_complex(r.reference) + '\n';
    out += "  rel_error = " + sci(r.rel_error) + '\n';
    out += "  samples = " + std::to_string(r.samples) +
           "  seed = " + std::to_string(r.seed) +
           "  wall_ms = " + std::to_string(r.wall_ms) + '\n';
    out += params_line(r.params);
    return out;
}

std::string emit_verdict_json(const Verdict& v, const ParamList& params, double slope) {
    std::string out = "{\"kind\":\"verdict\",";
    append_params_json(out, params);
    out += ",\"bounded\":";
    out += v.bounded ? "true" : "false";
    out += ",\"failed\":";
    std::vector<std::string> names;
    names.reserve(v.failed.size());
    for (FailedCondition fc : v.failed) names.emplace_back(failed_condition_name(fc));
    append_string_array_json(out, names);
    out += ",\"slope\":";
    out += json_number(slope);
    out += ",\"schur_bound\":";
    out += v.schur_bound ? json_number(*v.schur_bound) : "null";
    out += "}\n";
    return out;
}

std::string emit_verdict_text(const Verdict& v, const ParamList& params, double slope) {
    std::string out = v.bounded ? "bounded" : "unbounded";
    if (!v.failed.empty()) out += "  failed: " + joined_failures(v.failed);
    out += '\n';
    out += "  slope = " + format_double(slope) + '\n';
    if (v.schur_bound) out += "  schur_bound = " + format_double(*v.schur_bound) + '\n';
    out += params_line(params);
    return out;
}

std::string emit_scan_csv(const std::vector<ScanRow>& rows, bool with_ratios) {
    std::string out = "n,p,alpha,a,b,c,verdict,failed,slope,bound";
    if (with_ratios) out += ",ratio_beta_0.1,ratio_beta_1,ratio_beta_10";
    out += '\n';
    for (const auto& row : rows) {
        out += format_double(row.n) + ',' + format_double(row.p) + ',' +
               format_double(row.alpha) + ',' + format_double(row.a) + ',' +
               format_double(row.b) + ',' + format_double(row.c) + ',';
        out += verdict_word(row);
        out += ',';
        out += row.ok ? joined_failures(row.verdict.failed) : joined_errors(row.errors);
        out += ',';
        out += format_double(row.slope);
        out += ',';
        if (row.ok && row.verdict.schur_bound)
            out += format_double(*row.verdict.schur_bound);
        if (with_ratios) {
            for (size_t i = 0; i < 3; ++i) {
                out += ',';
                if (i < row.ratios.size()) out += format_double(row.ratios[i].ratio);
            }
        }
        out += '\n';
    }
    return out;
}

std::string emit_scan_json(const std::vector<ScanRow>& rows, bool with_ratios,
                           const ParamList& params) {
    std::string out = "{\"kind\":\"scan\",";
    append_params_json(out, params);
    out += ",\"rows\":[";
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (i) out += ',';
        out += "{\"n\":" + json_number(row.n) + ",\"p\":" + json_number(row.p) +
               ",\"alpha\":" + json_number(row.alpha) + ",\"a\":" + json_number(row.a) +
               ",\"b\":" + json_number(row.b) + ",\"c\":" + json_number(row.c);
        out += ",\"verdict\":\"";
        out += verdict_word(row);
        out += "\",\"failed\":";
        if (row.ok) {
            std::vector<std::string> names;
            names.reserve(row.verdict.failed.size());
            for (FailedCondition fc : row.verdict.failed)
                names.emplace_back(failed_condition_name(fc));
            append_string_array_json(out, names);
        } else {
            append_string_array_json(out, row.errors);
        }
        out += ",\"slope\":";
        out += json_number(row.slope);
        out += ",\"bound\":";
        out += (row.ok && row.verdict.schur_bound) ? json_number(*row.verdict.schur_bound)
                                                   : "null";
        if (with_ratios) {
            out += ",\"ratios\":";
            append_ratios_json(out, row.ratios);
        }
        out += '}';
    }
    out += "]}\n";
    return out;
}

std::string emit_scan_text(const std::vector<ScanRow>& rows, bool with_ratios) {
    std::string out;
    for (const auto& row : rows) {
        out += "n=" + format_double(row.n) + " p=" + format_double(row.p) +
               " alpha=" + format_double(row.alpha) + " a=" + format_double(row.a) +
               " b=" + format_double(row.b) + " c=" + format_double(row.c) + ": ";
        out += verdict_word(row);
        if (row.ok && !row.verdict.failed.empty())
            out += " [" + joined_failures(row.verdict.failed) + ']';
        if (!row.ok) out += " [" + joined_errors(row.errors) + ']';
        out += " slope=" + format_double(row.slope);
        if (row.ok && row.verdict.schur_bound)
            out += " bound=" + format_double(*row.verdict.schur_bound);
        if (with_ratios && !row.ratios.empty()) {
            out += " ratios=";
            for (size_t i = 0; i < row.ratios.size(); ++i) {
                if (i) out += ',';
                out += format_double(row.ratios[i].ratio);
            }
        }
        out += '\n';
    }
    return out;
}

std::string emit_record_json(const Record& rec) {
    std::string out = "{\"kind\":\"";
    out += json_escape(rec.kind);
    out += "\",";
    append_params_json(out, rec.params);
    for (const auto& kv : rec.values) {
        out += ",\"";
        out += json_escape(kv.first);
        out += "\":";
        out += json_number(kv.second);
    }
    out += "}\n";
    return out;
}

std::string emit_record_text(const Record& rec) {
    std::string out = rec.kind + '\n';
    for (const auto& kv : rec.values)
        out += "  " + kv.first + " = " + format_double(kv.second) + '\n';
    out += params_line(rec.params);
    return out;
}

}  // namespace siegel
