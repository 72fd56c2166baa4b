#ifndef HYPERMET_VERSION_HPP
#define HYPERMET_VERSION_HPP

namespace hypermet {

inline constexpr const char* version = "0.1.0";

}  // namespace hypermet

#endif  // HYPERMET_VERSION_HPP
