#ifndef BLOCHLAB_VERSION_HPP
#define BLOCHLAB_VERSION_HPP

namespace blochlab {

inline constexpr const char* kToolName = "blochlab";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace blochlab

#endif
