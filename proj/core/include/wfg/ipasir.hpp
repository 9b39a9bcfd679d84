#pragma once

#include "wfg/enumerate.hpp"

#include <memory>
#include <string>

namespace wfg {

struct IpasirApi;

/// A dynamically loaded IPASIR library. Loading is cached per path.
class IpasirLibrary : public std::enable_shared_from_this<IpasirLibrary> {
public:
  static std::shared_ptr<IpasirLibrary> load(const std::string& path);
  /// Path from the WFG_IPASIR_LIB environment variable, empty if unset.
  static std::string env_path();

  const std::string& path() const noexcept { return path_; }
  std::string signature() const;
  std::unique_ptr<SatSolver> make_solver() const;

  ~IpasirLibrary();

private:
  IpasirLibrary() = default;

  std::string path_;
  void* handle_ = nullptr;
  std::unique_ptr<IpasirApi> api_;
};

} // namespace wfg
