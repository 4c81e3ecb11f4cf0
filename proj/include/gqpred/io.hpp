#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gqpred/bayes.hpp"
#include "gqpred/sha1.hpp"

namespace gqpred {
namespace io {

using nlohmann::json;

/// Experiment description accepted by the CLI. Complex quantities are
/// encoded as explicit re/im field pairs; unknown fields are rejected so a
/// typo cannot silently fall back to a default.
struct RunConfig {
    double photon_number = 1.0;
    int n = 1;
    int m = 1;
    predict::PriorParams prior;
    long long mc_samples = 100000;
    std::uint64_t seed = 0;
    int truncation_dim = 60;
    std::vector<double> tau2_grid;  // used by sweep only
};

namespace detail {

inline void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed,
                                const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const std::string& k : allowed) {
            if (it.key() == k) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw std::invalid_argument("config: unknown field \"" + it.key() + "\" in " + where);
        }
    }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw std::invalid_argument(std::string("config: field \"") + key + "\" has the wrong type");
    }
}

}  // namespace detail

/// Parses and validates a config document. Throws std::invalid_argument with
/// a field-level message on any problem (treated as a usage error by the
/// CLI, exit code 2).
inline RunConfig parse_run_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
    detail::reject_unknown_keys(j,
                                {"photon_number", "n", "m", "prior", "mc_samples", "seed",
                                 "truncation_dim", "tau2_grid"},
                                "top level");

    RunConfig cfg;
    cfg.photon_number = detail::get_or<double>(j, "photon_number", cfg.photon_number);
    cfg.n = detail::get_or<int>(j, "n", cfg.n);
    cfg.m = detail::get_or<int>(j, "m", cfg.m);
    cfg.mc_samples = detail::get_or<long long>(j, "mc_samples", cfg.mc_samples);
    cfg.seed = detail::get_or<std::uint64_t>(j, "seed", cfg.seed);
    cfg.truncation_dim = detail::get_or<int>(j, "truncation_dim", cfg.truncation_dim);
    if (j.contains("tau2_grid")) {
        try {
            cfg.tau2_grid = j.at("tau2_grid").get<std::vector<double>>();
        } catch (const json::exception&) {
            throw std::invalid_argument("config: field \"tau2_grid\" must be an array of numbers");
        }
    }
    if (j.contains("prior")) {
        const json& p = j.at("prior");
        if (!p.is_object()) throw std::invalid_argument("config: \"prior\" must be an object");
        detail::reject_unknown_keys(p, {"mean_re", "mean_im", "tau2", "noninformative"}, "prior");
        cfg.prior.mean = cplx(detail::get_or<double>(p, "mean_re", 0.0),
                              detail::get_or<double>(p, "mean_im", 0.0));
        cfg.prior.tau2 = detail::get_or<double>(p, "tau2", 1.0);
        cfg.prior.noninformative = detail::get_or<bool>(p, "noninformative", false);
    }

    if (!(cfg.photon_number > 0.0)) throw std::invalid_argument("config: photon_number must be > 0");
    if (cfg.n < 1) throw std::invalid_argument("config: n must be >= 1");
    if (cfg.m < 1) throw std::invalid_argument("config: m must be >= 1");
    if (!cfg.prior.noninformative && !(cfg.prior.tau2 > 0.0)) {
        throw std::invalid_argument("config: prior.tau2 must be > 0");
    }
    if (cfg.mc_samples != 0 && cfg.mc_samples < 100) {
        throw std::invalid_argument(
            "config: mc_samples must be 0 (disable) or >= 100 for a usable standard error");
    }
    if (cfg.truncation_dim < 2) throw std::invalid_argument("config: truncation_dim must be >= 2");
    for (double t : cfg.tau2_grid) {
        if (!(t > 0.0)) throw std::invalid_argument("config: tau2_grid entries must be > 0");
    }
    return cfg;
}

/// Canonical serialisation: fixed key set, alphabetically ordered keys
/// (nlohmann default), shortest-round-trip number formatting. Hashing this
/// text gives a stable config fingerprint.
inline std::string canonical_config_json(const RunConfig& cfg) {
    json j;
    j["photon_number"] = cfg.photon_number;
    j["n"] = cfg.n;
    j["m"] = cfg.m;
    j["prior"] = {{"mean_re", cfg.prior.mean.real()},
                  {"mean_im", cfg.prior.mean.imag()},
                  {"tau2", cfg.prior.tau2},
                  {"noninformative", cfg.prior.noninformative}};
    j["mc_samples"] = cfg.mc_samples;
    j["seed"] = cfg.seed;
    j["truncation_dim"] = cfg.truncation_dim;
    if (!cfg.tau2_grid.empty()) j["tau2_grid"] = cfg.tau2_grid;
    return j.dump();
}

inline std::string config_hash(const RunConfig& cfg) {
    return git_blob_sha1(canonical_config_json(cfg));
}

/// Formats a double with 17 significant digits, '.' decimal separator,
/// locale-independent (the C locale is never changed by this library).
inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

/// Minimal CSV emitter: mandatory header, rows of preformatted cells.
class CsvBuilder {
public:
    explicit CsvBuilder(const std::vector<std::string>& header) { append_row(header); }

    void row(const std::vector<std::string>& cells) { append_row(cells); }

    void numeric_row(const std::vector<double>& values) {
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values) cells.push_back(fmt_double(v));
        append_row(cells);
    }

    const std::string& text() const { return text_; }

private:
    void append_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) text_ += ',';
            text_ += cells[i];
        }
        text_ += '\n';
    }

    std::string text_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes <command>.manifest.json next to the outputs it describes. The
/// manifest embeds the seed, the canonical config (when one was used) with
/// its git-style content hash, and a fingerprint of every output file.
/// Deliberately contains nothing run-dependent beyond that (no timestamps,
/// no worker counts), so reruns with the same seed are byte-identical.
inline std::filesystem::path write_manifest(const std::filesystem::path& out_dir,
                                            const std::string& command, const RunConfig* cfg,
                                            std::uint64_t seed,
                                            const std::vector<std::string>& output_files) {
    json m;
    m["command"] = command;
    m["seed"] = seed;
    if (cfg != nullptr) {
        const std::string canonical = canonical_config_json(*cfg);
        m["config"] = json::parse(canonical);
        m["config_hash"] = git_blob_sha1(canonical);
    } else {
        m["config"] = nullptr;
        m["config_hash"] = nullptr;
    }
    json outs = json::array();
    for (const std::string& f : output_files) {
        const std::string content = read_file(out_dir / f);
        outs.push_back({{"file", f},
                        {"bytes", content.size()},
                        {"sha1", git_blob_sha1(content)}});
    }
    m["outputs"] = outs;
    const std::filesystem::path path = out_dir / (command + ".manifest.json");
    write_file(path, m.dump(2) + "\n");
    return path;
}

}  // namespace io
}  // namespace gqpred
