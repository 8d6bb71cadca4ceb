#pragma once

#include "cmendo/relations.hpp"

namespace cmendo {

/// Relation attached to the prime power p^k.  Loop 1 entries must hold for
/// the variety, loop 2 entries must fail.
struct CertificateEntry {
    RealPrime prime;
    int k = 1;
    int loop = 1;
    Relation relation;
    bool operator==(const CertificateEntry& o) const {
        return prime == o.prime && k == o.k && loop == o.loop && relation == o.relation;
    }
};

struct Certificate {
    OFIdeal u, v;
    Int q, a1, a2;
    std::vector<CertificateEntry> entries;  // sorted by prime, then loop

    std::size_t term_count() const;
    bool operator==(const Certificate& o) const {
        return u == o.u && v == o.v && q == o.q && a1 == o.a1 && a2 == o.a2 && entries == o.entries;
    }
};

}  // namespace cmendo
