#pragma once

#include <string>
#include <vector>

namespace lhic {

struct SubprocessResult {
  int exit_code = -1;
  bool timed_out = false;
  std::string output;  // combined stdout + stderr
};

// Runs argv[0] with the given arguments, capturing combined output.
// Kills the child on timeout.
SubprocessResult run_subprocess(const std::vector<std::string>& argv,
                                int timeout_ms = 60000);

// RAII private temp directory (mkdtemp under $TMPDIR or /tmp).
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::string& path() const { return path_; }
  std::string file(const std::string& name) const { return path_ + "/" + name; }

 private:
  std::string path_;
};

}  // namespace lhic
