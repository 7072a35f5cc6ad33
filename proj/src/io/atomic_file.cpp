#include "hug/io/atomic_file.hpp"

#include <fstream>
#include <system_error>

#include "hug/core/errors.hpp"

namespace hug::io {

void atomic_write(const std::filesystem::path& path,
                  const std::function<void(const std::filesystem::path&)>& writer) {
  namespace fs = std::filesystem;
  fs::path dir = path.parent_path();
  if (!dir.empty()) fs::create_directories(dir);
  fs::path tmp = path;
  tmp += ".tmp";
  try {
    writer(tmp);
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

void atomic_write_text(const std::filesystem::path& path, const std::string& text) {
  atomic_write(path, [&](const std::filesystem::path& tmp) {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw InputError("cannot open for writing: " + tmp.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw InputError("write failed: " + tmp.string());
  });
}

}  // namespace hug::io
