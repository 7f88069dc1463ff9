#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace omegalab {

// One experiment: a command plus the knobs it reads.  Unused fields are
// ignored by commands that do not consume them.  Parsed from / serialized to
// JSON with the same field names as the CLI flags.
struct ExperimentConfig {
    std::string command;                  // nest | epilog | diagonal | permute |
                                          // family | count-periods | displace
    std::string enum_spec = "calkin-wilf";
    std::string interval_lo = "0";
    std::string interval_hi = "1";
    std::uint64_t budget = 10000;         // nest: elements examined
    std::uint64_t prefix = 100;           // epilog scan length; family size
    std::uint64_t window = 100;           // table window (rows)
    std::string scan_mode = "restart";    // nest: restart | frontier
    std::string permute_mode = "strict";  // permute: strict | synthesis
    std::string tie = "first";            // permute: first | seeded
    std::uint64_t seed = 0;               // tie-break seed
    std::string h_family = "seeded:1";    // table even-row family
    std::string digit_prefix;             // family command: starting digits
    std::string target;                   // displace command: tracked fraction
    std::vector<std::uint64_t> windows;   // displace command: window sizes
    std::uint64_t denominator_bound = 64; // gap candidate search bound
    std::string out_dir = ".";
    std::string format = "json";          // manifest on stdout: json | csv

    static ExperimentConfig from_json_text(const std::string& text);
    std::string to_json_text() const;
    void validate() const;
};

struct OutputDigest {
    std::string path;    // relative to out_dir
    std::string sha256;  // hex digest of the file bytes
};

struct RunManifest {
    std::string command;
    std::string config_json;  // the exact configuration echoed back
    std::string version;
    std::uint64_t wall_ms = 0;
    std::vector<OutputDigest> outputs;

    std::string to_json_text() const;
    std::string to_csv_text() const;  // "path,sha256" lines
};

// Executes the experiment, writes its result files atomically under
// config.out_dir, and returns the manifest.  Identical configurations always
// produce byte-identical result files.
RunManifest run_experiment(const ExperimentConfig& config);

std::string sha256_hex(const std::string& bytes);

// Writes via a temp file in the same directory plus an atomic rename.
void atomic_write(const std::string& path, const std::string& bytes);

const char* version_string();

}  // namespace omegalab
