#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmendo/ideals.hpp"

namespace cmendo {

/// Bad command line or job file; exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything a command can be configured with.  Values left empty fall
/// back to command defaults; command-line flags override a job file.
struct JobSpec {
    std::optional<std::string> command;
    std::optional<Int> q, a1, a2;
    // config
    std::optional<std::uint64_t> seed;
    std::optional<double> mu;
    std::optional<int> k0;
    std::optional<Int> B;
    std::optional<std::uint64_t> max_trials;
    std::optional<Int> C_bound;
    std::optional<Int> fb_bound;
    std::optional<bool> force;
    // simulator
    std::optional<std::string> sim_v, sim_hidden;
    std::optional<std::uint64_t> sim_seed;
    // inputs, in ideal-expression syntax
    std::optional<std::string> u, v, f1, f2, prime, order;
    std::optional<int> k;
    // paths
    std::optional<std::string> cert, out, cache_dir;
};

inline constexpr const char* kJobTag = "cmendo-job/1";

// Strict: unknown keys and malformed values raise ParseError.
JobSpec read_job(const std::string& text);
// Fields set in `over` replace those in `base`.
JobSpec merge_jobs(JobSpec base, const JobSpec& over);

// Ideal expressions: "1", "v", "hnf:a,b,c", or a product of prime powers
// "N", "N#i", "N^k", "N#i^k" joined by '*'.  N is the norm of a prime of
// O_F and i its 1-based position among primes of that norm.  A bare N must
// be unambiguous (ties are broken in favour of primes dividing v).
OFIdeal parse_ideal_expr(const CMField& cm, const std::string& expr);
std::string prime_label(const CMField& cm, const RealPrime& p);
// Inverse of parse_ideal_expr, always with explicit indices.
std::string ideal_expr(const CMField& cm, const OFIdeal& a);

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cmendo
