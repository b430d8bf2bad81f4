#include "frslab/cache.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <system_error>

#include <unistd.h>

#include "frslab/errors.hpp"

namespace fs = std::filesystem;

namespace frslab {

std::string cache_key(const std::string& scheme_hash, std::uint64_t p, int r,
                      int n) {
  return scheme_hash + ".p" + std::to_string(p) + ".r" + std::to_string(r) +
         ".n" + std::to_string(n);
}

std::optional<CountRecord> cache_read(const std::string& dir,
                                      const std::string& key) {
  std::ifstream in(fs::path(dir) / key);
  if (!in) return std::nullopt;
  std::string count_line, method_line;
  if (!std::getline(in, count_line) || !std::getline(in, method_line))
    return std::nullopt;
  if (count_line.empty() || method_line.empty()) return std::nullopt;
  for (std::size_t i = 0; i < count_line.size(); ++i) {
    const char ch = count_line[i];
    if (!(ch >= '0' && ch <= '9')) return std::nullopt;
  }
  CountRecord rec;
  rec.count = Int(count_line, 10);
  rec.method = method_line;
  return rec;
}

void cache_write(const std::string& dir, const std::string& key,
                 const CountRecord& rec) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw invalid_input_error("cannot create cache directory: " + dir);
  static std::atomic<unsigned> seq{0};
  const fs::path target = fs::path(dir) / key;
  const fs::path tmp =
      fs::path(dir) / (key + ".tmp." + std::to_string(::getpid()) + "." +
                       std::to_string(seq.fetch_add(1)));
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out)
      throw invalid_input_error("cannot write cache entry: " + tmp.string());
    out << rec.count.get_str() << '\n' << rec.method << '\n';
    if (!out)
      throw invalid_input_error("cache write failed: " + tmp.string());
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw invalid_input_error("cache rename failed: " + target.string());
  }
}

std::string resolve_cache_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("FRSLAB_CACHE"); env && *env)
    return std::string(env);
  return "./.frslab-cache";
}

}  // namespace frslab
