#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dgff/sampler.hpp"

namespace dgff {

inline constexpr const char* kManifestSchema = "dgff-manifest/1";

// Plain "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> parse_key_values(std::istream& in);

struct ExperimentConfig {
    std::string experiment;
    std::map<std::string, std::string> params;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out_dir = ".";

    bool has(const std::string& key) const { return params.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    std::vector<long long> get_int_list(const std::string& key, const std::vector<long long>& fallback) const;
    // Resolves a relative output path against out_dir.
    std::string output_path(const std::string& name) const;
};

// Reserved keys experiment, seed, threads, out-dir fill the struct; the rest
// become params.
ExperimentConfig load_config(std::istream& in);
ExperimentConfig load_config_file(const std::string& path);

// SHA-1 of "blob <len>\0<content>", lowercase hex.
std::string git_blob_sha1(std::string_view content);

struct OutputFile {
    std::string path;
    std::string sha1;
    std::size_t bytes = 0;
};

struct ExperimentResult {
    std::string summary_json;
    std::vector<OutputFile> outputs;
    std::string manifest_path;
};

std::vector<std::string> experiment_names();
// Deterministic given (config, seed); writes outputs, a summary and manifest.json.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// One record per field: int64 N, int64 vertex count, then float64 values.
void write_field_binary(std::ostream& out, const Field& f);
std::vector<Field> read_fields_binary(std::istream& in, const LatticeDomain& domain);
// Rows "replica,index,x,y,value".
void write_field_csv(std::ostream& out, const Field& f, std::size_t replica, bool header);

} // namespace dgff
