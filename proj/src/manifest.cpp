#include "syge/manifest.hpp"

#include <array>
#include <cstdio>
#include <ctime>
#include <memory>

#include "syge/common.hpp"
#include "syge/detail/binio.hpp"

namespace syge {

std::string hash_file_fnv1a(const std::string& path) {
  std::unique_ptr<std::FILE, detail::FileCloser> f(detail::open_or_throw(path, "rb"));
  uint64_t h = 0xcbf29ce484222325ull;
  std::array<unsigned char, 1 << 16> buf;
  size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), f.get())) > 0)
    h = fnv1a64(buf.data(), got, h);
  if (std::ferror(f.get())) throw io_error("read failed: " + path);
  char out[32];
  std::snprintf(out, sizeof out, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return out;
}

std::string tool_version_string() {
  std::FILE* p = popen("git describe --tags --always --dirty 2>/dev/null", "r");
  if (!p) return "unknown";
  char buf[256];
  std::string out;
  if (std::fgets(buf, sizeof buf, p)) out = buf;
  pclose(p);
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
  return out.empty() ? "unknown" : out;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void manifest_write(const RunManifest& m, const std::string& path) {
  nlohmann::json inputs = nlohmann::json::object();
  for (const auto& [p, h] : m.inputs) inputs[p] = h;
  nlohmann::json j{{"command", m.command},
                   {"tool_version", m.tool_version},
                   {"created_utc", m.created_utc},
                   {"inputs", inputs},
                   {"outputs", m.outputs}};
  j["config"] = m.config.is_null() ? nlohmann::json(nullptr) : m.config;
  if (m.has_seed) j["seed"] = m.seed;
  std::unique_ptr<std::FILE, detail::FileCloser> f(detail::open_or_throw(path, "wb"));
  detail::write_text(f.get(), j.dump(2) + "\n", path);
  if (std::fflush(f.get()) != 0) throw io_error("write failed: " + path);
}

}  // namespace syge
