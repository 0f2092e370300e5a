#ifndef SPARSEWARN_VERSION_HPP
#define SPARSEWARN_VERSION_HPP

namespace sparsewarn {

inline constexpr const char* kVersion = "1.0.0";

}

#endif
