#include "omegalab.h"

#include <cstdlib>
#include <cstring>
#include <json.hpp>
#include <new>

#include "omegalab/harness.hpp"
#include "omegalab/nesting.hpp"
#include "omegalab/table.hpp"

using json = nlohmann::ordered_json;

namespace {

thread_local std::string g_last_error = "no error";

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

// Maps C++ failures onto status codes; anything unrecognized is internal.
template <typename Fn>
olab_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const omegalab::internal_error& e) {
        g_last_error = e.what();
        return OLAB_ERR_INTERNAL;
    } catch (const omegalab::out_of_domain& e) {
        g_last_error = e.what();
        return OLAB_ERR_DOMAIN;
    } catch (const std::domain_error& e) {
        g_last_error = e.what();
        return OLAB_ERR_USAGE;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return OLAB_ERR_USAGE;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return OLAB_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        return OLAB_ERR_INTERNAL;
    }
}

olab_status require(bool cond, const char* message) {
    if (cond) return OLAB_OK;
    g_last_error = message;
    return OLAB_ERR_USAGE;
}

json gap_report_json(const omegalab::GapReport& report) {
    json gaps = json::array();
    for (const auto& g : report.gaps) {
        json occupants = json::array();
        for (const auto& [idx, val] : g.occupants)
            occupants.push_back({{"index", idx}, {"value", val.str()}});
        json rec{{"side", g.side},
                 {"ordinal", g.ordinal},
                 {"lo", g.lo.str()},
                 {"hi", g.hi.str()},
                 {"occupants", std::move(occupants)}};
        if (g.eta_candidate) rec["eta_candidate"] = g.eta_candidate->str();
        gaps.push_back(std::move(rec));
    }
    return json{{"enough_steps", report.enough_steps}, {"note", report.note}, {"gaps", std::move(gaps)}};
}

}  // namespace

struct olab_enum {
    omegalab::EnumPtr impl;
};

struct olab_trace {
    omegalab::NestingTrace impl;
};

struct olab_table {
    omegalab::DigitTable impl;
};

extern "C" {

const char* olab_version(void) { return omegalab::version_string(); }

const char* olab_last_error(void) { return g_last_error.c_str(); }

void olab_string_free(char* s) { std::free(s); }

olab_status olab_rational_canonical(const char* text, char** out) {
    if (auto st = require(text && out, "rational_canonical: null argument")) return st;
    return guarded([&] {
        *out = dup_string(omegalab::Rational::from_string(text).str());
        return OLAB_OK;
    });
}

olab_status olab_rational_to_decimal(const char* fraction, char** out) {
    if (auto st = require(fraction && out, "rational_to_decimal: null argument")) return st;
    return guarded([&] {
        auto r = omegalab::Rational::from_string(fraction);
        if (r.sign() < 0) {
            g_last_error = "rational_to_decimal: value must be non-negative";
            return OLAB_ERR_DOMAIN;
        }
        *out = dup_string(omegalab::decimal_expansion(r).str());
        return OLAB_OK;
    });
}

olab_status olab_decimal_to_rational(const char* int_part, const char* preperiod,
                                     const char* period, char** out) {
    if (auto st = require(int_part && preperiod && period && out, "decimal_to_rational: null argument"))
        return st;
    return guarded([&] {
        omegalab::Integer ip;
        if (mpz_set_str(ip.get_mpz_t(), int_part, 10) != 0) {
            g_last_error = "decimal_to_rational: malformed integer part";
            return OLAB_ERR_USAGE;
        }
        *out = dup_string(omegalab::from_period(preperiod, period, ip).str());
        return OLAB_OK;
    });
}

olab_status olab_digit_at(const char* fraction, uint64_t n, int* out) {
    if (auto st = require(fraction && out, "digit_at: null argument")) return st;
    return guarded([&] {
        auto stream = omegalab::to_digit_stream(omegalab::Rational::from_string(fraction));
        *out = omegalab::digit_at(*stream, n);
        return OLAB_OK;
    });
}

olab_status olab_enum_open(const char* spec, olab_enum** out) {
    if (auto st = require(spec && out, "enum_open: null argument")) return st;
    return guarded([&] {
        *out = new olab_enum{omegalab::parse_enumeration(spec)};
        return OLAB_OK;
    });
}

void olab_enum_close(olab_enum* e) { delete e; }

olab_status olab_enum_id(const olab_enum* e, char** out) {
    if (auto st = require(e && out, "enum_id: null argument")) return st;
    return guarded([&] {
        *out = dup_string(e->impl->id());
        return OLAB_OK;
    });
}

olab_status olab_enum_nth(const olab_enum* e, uint64_t i, char** out) {
    if (auto st = require(e && out, "enum_nth: null argument")) return st;
    return guarded([&] {
        *out = dup_string(e->impl->nth(i).str());
        return OLAB_OK;
    });
}

olab_status olab_enum_index_of(const olab_enum* e, const char* fraction, uint64_t budget,
                               uint64_t* out) {
    if (auto st = require(e && fraction && out, "enum_index_of: null argument")) return st;
    return guarded([&] {
        auto idx = e->impl->index_of(omegalab::Rational::from_string(fraction), budget);
        if (!idx) {
            g_last_error = "enum_index_of: not found within budget";
            return OLAB_ERR_NOT_FOUND;
        }
        *out = *idx;
        return OLAB_OK;
    });
}

olab_status olab_nest_run(const olab_enum* e, const char* lo, const char* hi, uint64_t budget,
                          int frontier_mode, olab_trace** out) {
    if (auto st = require(e && lo && hi && out, "nest_run: null argument")) return st;
    return guarded([&] {
        omegalab::OpenInterval base(omegalab::Rational::from_string(lo),
                                    omegalab::Rational::from_string(hi));
        auto mode = frontier_mode ? omegalab::ScanMode::Frontier : omegalab::ScanMode::Restart;
        *out = new olab_trace{omegalab::run_nesting(*e->impl, base, budget, mode)};
        return OLAB_OK;
    });
}

void olab_trace_close(olab_trace* t) { delete t; }

uint64_t olab_trace_step_count(const olab_trace* t) { return t ? t->impl.steps.size() : 0; }

olab_status olab_trace_step(const olab_trace* t, uint64_t k, char** a, char** b, uint64_t* idx_a,
                            uint64_t* idx_b) {
    if (auto st = require(t && a && b && idx_a && idx_b, "trace_step: null argument")) return st;
    if (k == 0 || k > t->impl.steps.size()) {
        g_last_error = "trace_step: step number outside trace";
        return OLAB_ERR_DOMAIN;
    }
    return guarded([&] {
        const auto& s = t->impl.steps[k - 1];
        *a = dup_string(s.a.str());
        *b = dup_string(s.b.str());
        *idx_a = s.idx_a;
        *idx_b = s.idx_b;
        return OLAB_OK;
    });
}

int olab_trace_sequence_exhausted(const olab_trace* t) {
    return t && t->impl.termination == omegalab::Termination::SequenceExhausted ? 1 : 0;
}

olab_status olab_trace_eta(const olab_trace* t, char** out) {
    if (auto st = require(t && out, "trace_eta: null argument")) return st;
    if (!t->impl.eta) {
        g_last_error = "trace_eta: no witness (run did not exhaust the sequence)";
        return OLAB_ERR_NOT_FOUND;
    }
    return guarded([&] {
        *out = dup_string(t->impl.eta->str());
        return OLAB_OK;
    });
}

olab_status olab_trace_json(const olab_trace* t, char** out) {
    if (auto st = require(t && out, "trace_json: null argument")) return st;
    return guarded([&] {
        json steps = json::array();
        for (std::size_t n = 0; n < t->impl.steps.size(); ++n) {
            const auto& s = t->impl.steps[n];
            steps.push_back({{"step", n + 1},
                             {"a", s.a.str()},
                             {"b", s.b.str()},
                             {"width", (s.b - s.a).str()},
                             {"idx_a", s.idx_a},
                             {"idx_b", s.idx_b}});
        }
        json j{{"enum", t->impl.enum_id},
               {"budget", t->impl.budget},
               {"budget_used", t->impl.budget_used},
               {"termination",
                t->impl.termination == omegalab::Termination::BudgetExhausted
                    ? "budget-exhausted"
                    : "sequence-exhausted"},
               {"steps", std::move(steps)}};
        if (t->impl.eta) j["eta"] = t->impl.eta->str();
        *out = dup_string(j.dump(2));
        return OLAB_OK;
    });
}

olab_status olab_trace_csv(const olab_trace* t, char** out) {
    if (auto st = require(t && out, "trace_csv: null argument")) return st;
    return guarded([&] {
        std::string csv = "step,a,b,width,idx_a,idx_b\n";
        for (std::size_t n = 0; n < t->impl.steps.size(); ++n) {
            const auto& s = t->impl.steps[n];
            csv += std::to_string(n + 1) + "," + s.a.str() + "," + s.b.str() + "," +
                   (s.b - s.a).str() + "," + std::to_string(s.idx_a) + "," +
                   std::to_string(s.idx_b) + "\n";
        }
        *out = dup_string(csv);
        return OLAB_OK;
    });
}

olab_status olab_trace_check_indices(const olab_trace* t, char** violations_json) {
    if (auto st = require(t && violations_json, "check_indices: null argument")) return st;
    return guarded([&] {
        json arr = json::array();
        for (const auto& v : omegalab::check_defining_index(t->impl))
            arr.push_back({{"step", v.step},
                           {"endpoint", std::string(1, v.endpoint)},
                           {"index", v.index}});
        *violations_json = dup_string(arr.dump());
        return OLAB_OK;
    });
}

olab_status olab_trace_check_exclusion(const olab_trace* t, const olab_enum* e, uint64_t prefix,
                                       char** violations_json) {
    if (auto st = require(t && e && violations_json, "check_exclusion: null argument")) return st;
    return guarded([&] {
        json arr = json::array();
        for (const auto& v : omegalab::check_exclusion(t->impl, *e->impl, prefix))
            arr.push_back({{"element", v.element}, {"step", v.step}});
        *violations_json = dup_string(arr.dump());
        return OLAB_OK;
    });
}

olab_status olab_gap_occupancy(const olab_trace* t, const olab_enum* e, uint64_t prefix,
                               uint64_t denominator_bound, char** report_json) {
    if (auto st = require(t && e && report_json, "gap_occupancy: null argument")) return st;
    return guarded([&] {
        auto report = omegalab::gap_occupancy(t->impl, *e->impl, prefix, denominator_bound);
        *report_json = dup_string(gap_report_json(report).dump(2));
        return OLAB_OK;
    });
}

olab_status olab_condition_probe(const olab_enum* e, const char* lo, const char* hi,
                                 uint64_t budget, char** report_json) {
    if (auto st = require(e && lo && hi && report_json, "condition_probe: null argument")) return st;
    return guarded([&] {
        omegalab::OpenInterval base(omegalab::Rational::from_string(lo),
                                    omegalab::Rational::from_string(hi));
        json arr = json::array();
        for (const auto& r : omegalab::condition_probe(*e->impl, base, budget)) {
            json ev = json::object();
            for (const auto& [k, v] : r.evidence) ev[k] = v;
            arr.push_back({{"condition", r.condition},
                           {"status", omegalab::probe_status_name(r.status)},
                           {"note", r.note},
                           {"evidence", std::move(ev)}});
        }
        *report_json = dup_string(arr.dump(2));
        return OLAB_OK;
    });
}

olab_status olab_epilog_scan(const olab_enum* e, const char* lo, const char* hi, uint64_t prefix,
                             char** report_json) {
    if (auto st = require(e && lo && hi && report_json, "epilog_scan: null argument")) return st;
    return guarded([&] {
        omegalab::OpenInterval base(omegalab::Rational::from_string(lo),
                                    omegalab::Rational::from_string(hi));
        auto res = omegalab::epilog_scan(*e->impl, base, prefix);
        json updates = json::array();
        for (const auto& [i, v] : res.updates) updates.push_back({{"index", i}, {"value", v.str()}});
        json j{{"x", res.x.str()},
               {"eta", res.eta.str()},
               {"scanned", res.scanned},
               {"updates", std::move(updates)}};
        *report_json = dup_string(j.dump(2));
        return OLAB_OK;
    });
}

olab_status olab_table_build(const char* enum_spec, const char* h_family, uint64_t window,
                             olab_table** out) {
    if (auto st = require(enum_spec && h_family && out, "table_build: null argument")) return st;
    return guarded([&] {
        omegalab::TableSpec spec{enum_spec, h_family};
        *out = new olab_table{omegalab::DigitTable::build(spec, window)};
        return OLAB_OK;
    });
}

void olab_table_close(olab_table* t) { delete t; }

uint64_t olab_table_window(const olab_table* t) { return t ? t->impl.window() : 0; }

olab_status olab_table_row_digits(const olab_table* t, uint64_t row, uint64_t count, char** out) {
    if (auto st = require(t && out, "table_row_digits: null argument")) return st;
    return guarded([&] {
        *out = dup_string(t->impl.row(row)->digits_prefix(count));
        return OLAB_OK;
    });
}

olab_status olab_table_row_id(const olab_table* t, uint64_t row, char** out) {
    if (auto st = require(t && out, "table_row_id: null argument")) return st;
    return guarded([&] {
        *out = dup_string(t->impl.row(row)->id());
        return OLAB_OK;
    });
}

olab_status olab_table_dump(const olab_table* t, char** out) {
    if (auto st = require(t && out, "table_dump: null argument")) return st;
    return guarded([&] {
        *out = dup_string(t->impl.dump());
        return OLAB_OK;
    });
}

olab_status olab_table_diagonal(const olab_table* t, uint64_t n, char** digits_out) {
    if (auto st = require(t && digits_out, "table_diagonal: null argument")) return st;
    return guarded([&] {
        *digits_out = dup_string(omegalab::diagonal(t->impl, n));
        return OLAB_OK;
    });
}

olab_status olab_table_antidiagonal(const olab_table* t, uint64_t n, char** digits_out) {
    if (auto st = require(t && digits_out, "table_antidiagonal: null argument")) return st;
    return guarded([&] {
        *digits_out = dup_string(omegalab::antidiagonal(t->impl, n));
        return OLAB_OK;
    });
}

int olab_row_is_n_modular(const olab_table* t, uint64_t row, uint64_t n) {
    if (!t) {
        g_last_error = "row_is_n_modular: null table";
        return -1;
    }
    int result = -1;
    guarded([&] {
        result = omegalab::is_n_modular(*t->impl.row(row), n) ? 1 : 0;
        return OLAB_OK;
    });
    return result;
}

olab_status olab_permute_dmodular(const olab_table* t, int synthesis, int tie_seeded,
                                  uint64_t seed, olab_table** table_out, char** trace_json_out) {
    if (auto st = require(t && table_out && trace_json_out, "permute: null argument")) return st;
    return guarded([&] {
        auto mode = synthesis ? omegalab::PermuteMode::Synthesis : omegalab::PermuteMode::StrictWindow;
        auto tie = tie_seeded ? omegalab::TieBreak::seeded(seed) : omegalab::TieBreak::first();
        auto res = omegalab::permute_dmodular(t->impl, mode, tie);

        json swaps = json::array();
        for (const auto& s : res.trace.swaps) {
            json rec{{"i", s.i}};
            if (s.j) rec["j"] = *s.j;
            if (s.synth) rec["synth"] = {{"position", s.synth->position}, {"ones", s.synth->ones}};
            swaps.push_back(std::move(rec));
        }
        json escapes = json::array();
        for (const auto& esc : res.trace.escapes)
            escapes.push_back({{"i", esc.i}, {"row", esc.row_id}});
        json j{{"mode", synthesis ? "synthesis" : "strict"},
               {"tie", tie_seeded ? "seeded" : "first"},
               {"seed", seed},
               {"window", res.trace.window},
               {"swaps", std::move(swaps)},
               {"failures", res.trace.failures},
               {"escapes", std::move(escapes)}};
        *trace_json_out = dup_string(j.dump(2));
        *table_out = new olab_table{std::move(res.table)};
        return OLAB_OK;
    });
}

olab_status olab_modular_family(const char* prefix_digits, uint64_t count, char** json_out) {
    if (auto st = require(prefix_digits && json_out, "modular_family: null argument")) return st;
    return guarded([&] {
        json arr = json::array();
        for (const auto& r : omegalab::modular_family(prefix_digits, count))
            arr.push_back(r.str());
        *json_out = dup_string(arr.dump());
        return OLAB_OK;
    });
}

olab_status olab_antidiagonal_family(uint64_t n, char** fraction_out) {
    if (auto st = require(fraction_out != nullptr, "antidiagonal_family: null argument")) return st;
    return guarded([&] {
        *fraction_out = dup_string(omegalab::antidiagonal_family(n).str());
        return OLAB_OK;
    });
}

olab_status olab_count_avoiding_periods(unsigned length, uint64_t* out) {
    if (auto st = require(out != nullptr, "count_avoiding_periods: null argument")) return st;
    return guarded([&] {
        *out = omegalab::count_avoiding_periods(length);
        return OLAB_OK;
    });
}

olab_status olab_displacement_track(const char* target, const char* enum_spec,
                                    const char* h_family, const uint64_t* windows,
                                    size_t window_count, char** report_json) {
    if (auto st = require(target && enum_spec && h_family && (windows || window_count == 0) &&
                              report_json,
                          "displacement_track: null argument"))
        return st;
    return guarded([&] {
        omegalab::TableSpec spec{enum_spec, h_family};
        std::vector<std::uint64_t> ws(windows, windows + window_count);
        json arr = json::array();
        for (const auto& e : omegalab::displacement_track(
                 omegalab::Rational::from_string(target), spec, ws)) {
            json rec{{"window", e.window}};
            rec["initial"] = e.initial ? json(*e.initial) : json("absent");
            if (e.absent) rec["final"] = "absent";
            else rec["final"] = e.final ? json(*e.final) : json("escaped");
            arr.push_back(std::move(rec));
        }
        *report_json = dup_string(arr.dump(2));
        return OLAB_OK;
    });
}

olab_status olab_run(const char* config_json, char** manifest_json) {
    if (auto st = require(config_json && manifest_json, "run: null argument")) return st;
    return guarded([&] {
        auto config = omegalab::ExperimentConfig::from_json_text(config_json);
        auto manifest = omegalab::run_experiment(config);
        *manifest_json =
            dup_string(config.format == "csv" ? manifest.to_csv_text() : manifest.to_json_text());
        return OLAB_OK;
    });
}

}  // extern "C"
