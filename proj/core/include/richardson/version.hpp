#ifndef RICHARDSON_VERSION_HPP
#define RICHARDSON_VERSION_HPP

namespace richardson {

inline constexpr const char* kProjectVersion = "0.1.0";

// Version of the CSV/JSON output layout; bump on any column or key change.
inline constexpr const char* kSchemaVersion = "1";

}  // namespace richardson

#endif
