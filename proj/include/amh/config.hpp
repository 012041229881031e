#pragma once

// Verification configuration: every tolerance, case count and resolution the
// harness uses, loadable from one JSON file and fingerprinted by a digest of
// its canonical serialization.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>

#include "json.hpp"

#include "amh/approx.hpp"
#include "amh/error.hpp"

namespace amh {

class Config {
public:
    std::map<std::string, double> tolerances{
        // geometry
        {"homogeneity", 1e-9},
        {"triangle", 1e-9},
        {"euclidean", 1e-10},
        {"root", 1e-12},
        {"volume", 0.02},
        // norms
        {"rectangle", 1e-10},
        {"isotropic", 1e-12},
        {"axis_max", 1e-12},
        {"norm_scaling", 1e-12},
        {"indicator", 0.02},
        {"lr_example", 1e-3},
        // projection
        {"projection", 1e-8},
        {"moment", 1e-8},
        {"covariance", 1e-8},
        {"ratio", 1e-8},
        {"dilation_ratio", 1e-6},
        {"gram", 1e-8},
        // atoms
        {"atom_size", 1e-9},
        {"atom_moment", 1e-7},
        {"sign_atom", 1e-9},
        {"grid", 0.02},
        // campanato
        {"q2", 1e-10},
        {"q2_abs", 1e-13}, // times ||g||_{L^2(B)}
        {"minimax", 1e-6},
        {"median", 1e-3},
        {"monotone", 1e-6},
        {"seminorm_homogeneity", 1e-9},
        {"polynomial_kernel", 1e-8},
        {"benchmark", 0.02},
        {"witness", 0.02},
        // duality
        {"single_ball", 1e-6},
        {"single_ball_abs", 1e-12}, // times int |a g|
        {"dual_abs", 1e-12},        // times ||g||_{L^{r'}(B)}
        {"functional", 1e-5},
        {"dual", 1e-5},
        {"dual_benchmark", 0.05},
        {"sup_domination", 1e-9},
    };

    std::map<std::string, int> counts{
        {"quasi_norm", 2000},   {"volume", 5},       {"mixed_norm", 200},  {"indicator", 6},
        {"projection", 100},    {"atoms", 100},      {"combinations", 100}, {"approx_q2", 20},
        {"minimax", 20},        {"median", 20},      {"monotone", 40},     {"single_ball", 100},
        {"functional", 20},     {"dual_norm", 10},   {"dual_samples", 500}, {"seminorm", 6},
    };

    // Per-axis samples. "grid_n*" are default domain resolutions; "ball_n*"
    // are per-ball bounding-box lattices used by the projection, atom,
    // Campanato and duality suites.
    std::map<std::string, int> resolutions{
        {"grid_n1", 1024}, {"grid_n2", 256}, {"grid_n3", 64}, {"volume_n2", 256},
        {"ball_n1", 256},  {"ball_n2", 40},  {"union_n1", 1024}, {"union_n2", 128}, {"benchmark_n1", 1024},
    };

    ApproxOptions approx;
    double tolerance_scale = 1.0;
    int threads = 1;

    [[nodiscard]] double tol(const std::string& name) const { return lookup(tolerances, name) * tolerance_scale; }
    [[nodiscard]] int count(const std::string& name) const { return lookup(counts, name); }
    [[nodiscard]] int resolution(const std::string& name) const { return lookup(resolutions, name); }

    /// Case counts sized to the full acceptance criteria.
    static Config acceptance()
    {
        Config c;
        c.counts = {
            {"quasi_norm", 10000}, {"volume", 20},     {"mixed_norm", 1000},  {"indicator", 20},
            {"projection", 500},   {"atoms", 500},     {"combinations", 500}, {"approx_q2", 100},
            {"minimax", 100},      {"median", 100},    {"monotone", 200},     {"single_ball", 1000},
            {"functional", 200},   {"dual_norm", 50},  {"dual_samples", 2000}, {"seminorm", 20},
        };
        return c;
    }

    [[nodiscard]] nlohmann::json to_json() const
    {
        nlohmann::json j;
        j["tolerances"] = tolerances;
        j["counts"] = counts;
        j["resolutions"] = resolutions;
        j["approx"] = {{"max_iterations", approx.max_iterations},
                       {"tolerance", approx.tolerance},
                       {"residual_floor", approx.residual_floor},
                       {"lawson_iterations", approx.lawson_iterations},
                       {"exchange_rounds", approx.exchange_rounds}};
        j["tolerance_scale"] = tolerance_scale;
        j["threads"] = threads;
        return j;
    }

    /// Overlays the keys present in `j`; unknown keys and wrong types are errors.
    void merge(const nlohmann::json& j)
    {
        if (!j.is_object())
            throw invalid_input("config: top level must be a JSON object");
        try {
            for (const auto& [key, value] : j.items()) {
                if (key == "tolerances")
                    overlay(tolerances, value, key);
                else if (key == "counts")
                    overlay(counts, value, key);
                else if (key == "resolutions")
                    overlay(resolutions, value, key);
                else if (key == "approx")
                    merge_approx(value);
                else if (key == "tolerance_scale")
                    tolerance_scale = value.get<double>();
                else if (key == "threads")
                    threads = value.get<int>();
                else
                    throw invalid_input("config: unknown key '" + key + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw invalid_input(std::string("config: ") + e.what());
        }
        validate();
    }

    void validate() const
    {
        for (const auto& [k, v] : tolerances)
            if (!(v >= 0.0))
                throw invalid_input("config: tolerance '" + k + "' must be nonnegative");
        for (const auto& [k, v] : counts)
            if (v < 0)
                throw invalid_input("config: count '" + k + "' must be nonnegative");
        for (const auto& [k, v] : resolutions)
            if (v < 2)
                throw invalid_input("config: resolution '" + k + "' must be at least 2");
        if (!(tolerance_scale >= 0.0))
            throw invalid_input("config: tolerance_scale must be nonnegative");
        if (threads < 1)
            throw invalid_input("config: threads must be at least 1");
        if (approx.max_iterations < 1 || !(approx.tolerance > 0.0) || !(approx.residual_floor > 0.0))
            throw invalid_input("config: approx settings must be positive");
    }

    static Config load(const std::string& path) { return load(path, Config()); }

    static Config load(const std::string& path, Config base)
    {
        std::ifstream in(path);
        if (!in)
            throw invalid_input("config: cannot open " + path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw invalid_input("config: " + path + ": " + e.what());
        }
        base.merge(j);
        return base;
    }

    /// FNV-1a 64 of the canonical (sorted-key) dump, as 16 hex digits. The
    /// worker count is left out: reports do not depend on it.
    [[nodiscard]] std::string digest() const
    {
        auto j = to_json();
        j.erase("threads");
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char ch : j.dump()) {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }

private:
    template <class T>
    static T lookup(const std::map<std::string, T>& m, const std::string& name)
    {
        const auto it = m.find(name);
        if (it == m.end())
            throw invalid_input("config: no setting named '" + name + "'");
        return it->second;
    }

    template <class T>
    static void overlay(std::map<std::string, T>& target, const nlohmann::json& value, const std::string& section)
    {
        if (!value.is_object())
            throw invalid_input("config: '" + section + "' must be an object");
        for (const auto& [k, v] : value.items()) {
            if (!target.count(k))
                throw invalid_input("config: unknown " + section + " key '" + k + "'");
            target[k] = v.template get<T>();
        }
    }

    void merge_approx(const nlohmann::json& value)
    {
        if (!value.is_object())
            throw invalid_input("config: 'approx' must be an object");
        for (const auto& [k, v] : value.items()) {
            if (k == "max_iterations")
                approx.max_iterations = v.get<int>();
            else if (k == "tolerance")
                approx.tolerance = v.get<double>();
            else if (k == "residual_floor")
                approx.residual_floor = v.get<double>();
            else if (k == "lawson_iterations")
                approx.lawson_iterations = v.get<int>();
            else if (k == "exchange_rounds")
                approx.exchange_rounds = v.get<int>();
            else
                throw invalid_input("config: unknown approx key '" + k + "'");
        }
    }
};

} // namespace amh
