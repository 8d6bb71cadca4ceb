#include "fixtures.hpp"

#include <fstream>
#include <sstream>

namespace fx {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

cmendo::OFIdeal hnf(const cmendo::CMField& cm, long a, long b, long c) {
    using cmendo::Int;
    return cmendo::OFIdeal::from_generators(*cm.OF, {{Int(a), Int(b)}, {Int(0), Int(c)}});
}

}  // namespace fx
