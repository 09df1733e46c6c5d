#pragma once

#include <robba/herr.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace robba
{

struct VerifyConfig
{
    std::int64_t p = 3;
    int prec = 12;
    int lo = -10;
    int hi = 80;
    std::uint64_t seed = 1;
    int count = 100; // random series per identity
    std::optional<std::int64_t> chi_gamma;
    int search_limit = kDefaultSearchLimit;
    int margin = 3;

    GammaGenerator gamma() const;
    // Throws DomainError when an invariant fails.
    void validate() const;
};

struct CheckResult
{
    std::string name;
    bool pass = false;
    int cases = 0;
    // Smallest residual valuation seen and the threshold it had to reach; unset for
    // checks that compare integers.
    std::optional<int> worst_valuation;
    std::optional<int> required;
    std::string detail;
};

struct SuiteReport
{
    std::string suite;
    std::vector<CheckResult> checks;
    bool pass() const;
};

// Seeded random series with integral coefficients known to `prec` digits on [lo, hi] (open).
TruncatedLaurent random_series(std::mt19937_64 &rng, std::int64_t p, int prec, int lo, int hi);

SuiteReport verify_operators(const VerifyConfig &cfg);
SuiteReport verify_residues(const VerifyConfig &cfg);
SuiteReport verify_herr(const VerifyConfig &cfg);
SuiteReport verify_torsion(const VerifyConfig &cfg);
SuiteReport verify_shapiro_suite(const VerifyConfig &cfg);

// "operators", "residues", "herr", "torsion", "shapiro" or "all".
std::vector<SuiteReport> run_suite(const std::string &name, const VerifyConfig &cfg);

} // namespace robba
