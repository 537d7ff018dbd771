#ifndef QTL_CONFIG_HPP
#define QTL_CONFIG_HPP

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>

#include "qtl/l0mod.hpp"

namespace qtl {

/// Malformed run configuration; the message carries the line number and key.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A full run description parsed from a flat key-value file.  Lists are
/// built from repeated keys; `root` starts a new root entry and the coeff
/// keys append to the most recent one.
struct RunConfig {
    GradingBasis basis;
    bool odd = false;  // declared parity, cross-checked against basis
    ExpPolyDataEven even;
    ExpPolyDataOdd oddData;
    EvalModuleSpec eval;  // mu/dims slots, odd parity only
    long depth = 3;
    long window = 4;
    long probe = 4;
    long l0window = 6;  // precomputed action window for eval modules
    std::string backend = "exact";
    std::uint64_t seed = 0;
    // loop-submodule pattern, one residue list per top slot; modulus 0 means
    // the full pattern
    long wmodulus = 0;
    std::vector<std::vector<long>> wresidues;

    void validate() const;
    /// The degree-0 module this configuration describes.
    L0Module buildTop() const;
};

RunConfig parseConfig(std::istream& in);
RunConfig parseConfigFile(const std::string& path);

}  // namespace qtl

#endif
