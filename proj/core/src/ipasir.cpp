#include "wfg/ipasir.hpp"

#include "wfg/error.hpp"

#include <cstdlib>
#include <dlfcn.h>
#include <map>
#include <mutex>

namespace wfg {

struct IpasirApi {
  const char* (*signature)();
  void* (*init)();
  void (*release)(void*);
  void (*add)(void*, int);
  int (*solve)(void*);
  int (*val)(void*, int);
};

namespace {

class IpasirSolver : public SatSolver {
public:
  IpasirSolver(std::shared_ptr<const IpasirLibrary> lib, const IpasirApi& api)
      : lib_(std::move(lib)), api_(api), s_(api.init()) {
    if (!s_) throw BackendError("ipasir_init returned null");
  }
  ~IpasirSolver() override { api_.release(s_); }
  IpasirSolver(const IpasirSolver&) = delete;
  IpasirSolver& operator=(const IpasirSolver&) = delete;

  void add_clause(std::span<const int> lits) override {
    for (int l : lits) {
      if (l == 0) throw BackendError("literal 0 inside a clause");
      api_.add(s_, l);
    }
    api_.add(s_, 0);
  }

  bool solve() override {
    const int r = api_.solve(s_);
    if (r == 10) return true;
    if (r == 20) return false;
    throw BackendError("ipasir_solve returned " + std::to_string(r));
  }

  bool value(int var) override { return api_.val(s_, var) > 0; }

private:
  std::shared_ptr<const IpasirLibrary> lib_;
  const IpasirApi& api_;
  void* s_;
};

template <class T>
T symbol(void* handle, const char* name, const std::string& path) {
  void* p = dlsym(handle, name);
  if (!p) throw BackendError("IPASIR library " + path + " lacks " + name);
  return reinterpret_cast<T>(p);
}

} // namespace

std::shared_ptr<IpasirLibrary> IpasirLibrary::load(const std::string& path) {
  static std::mutex mu;
  static std::map<std::string, std::weak_ptr<IpasirLibrary>> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(path); it != cache.end()) {
    if (auto lib = it->second.lock()) return lib;
  }
  void* h = dlopen(path.c_str(), RTLD_NOW | RTLD_LOCAL);
  if (!h) {
    const char* err = dlerror();
    throw BackendError("cannot load IPASIR library " + path + ": " + (err ? err : "unknown error"));
  }
  std::shared_ptr<IpasirLibrary> lib(new IpasirLibrary());
  lib->path_ = path;
  lib->handle_ = h;
  lib->api_ = std::make_unique<IpasirApi>(IpasirApi{
      symbol<const char* (*)()>(h, "ipasir_signature", path),
      symbol<void* (*)()>(h, "ipasir_init", path),
      symbol<void (*)(void*)>(h, "ipasir_release", path),
      symbol<void (*)(void*, int)>(h, "ipasir_add", path),
      symbol<int (*)(void*)>(h, "ipasir_solve", path),
      symbol<int (*)(void*, int)>(h, "ipasir_val", path),
  });
  cache[path] = lib;
  return lib;
}

std::string IpasirLibrary::env_path() {
  const char* p = std::getenv("WFG_IPASIR_LIB");
  return p ? std::string(p) : std::string();
}

std::string IpasirLibrary::signature() const { return api_->signature(); }

std::unique_ptr<SatSolver> IpasirLibrary::make_solver() const {
  return std::make_unique<IpasirSolver>(shared_from_this(), *api_);
}

IpasirLibrary::~IpasirLibrary() {
  if (handle_) dlclose(handle_);
}

} // namespace wfg
