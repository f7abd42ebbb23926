#include "lhic/subprocess.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <thread>

#include "lhic/error.hpp"

namespace lhic {

SubprocessResult run_subprocess(const std::vector<std::string>& argv,
                                int timeout_ms) {
  if (argv.empty()) throw Error(ErrorKind::Usage, "empty subprocess argv");
  int pipefd[2];
  if (pipe(pipefd) != 0)
    throw Error(ErrorKind::Codec, "pipe() failed: " + std::string(strerror(errno)));

  const pid_t pid = fork();
  if (pid < 0) {
    close(pipefd[0]);
    close(pipefd[1]);
    throw Error(ErrorKind::Codec, "fork() failed: " + std::string(strerror(errno)));
  }
  if (pid == 0) {
    close(pipefd[0]);
    dup2(pipefd[1], STDOUT_FILENO);
    dup2(pipefd[1], STDERR_FILENO);
    close(pipefd[1]);
    std::vector<char*> args;
    args.reserve(argv.size() + 1);
    for (const std::string& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    execvp(args[0], args.data());
    fprintf(stderr, "exec %s failed: %s\n", args[0], strerror(errno));
    _exit(127);
  }

  close(pipefd[1]);
  fcntl(pipefd[0], F_SETFL, O_NONBLOCK);

  SubprocessResult res;
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  bool done = false;
  while (!done) {
    char buf[4096];
    ssize_t n;
    while ((n = read(pipefd[0], buf, sizeof buf)) > 0)
      res.output.append(buf, static_cast<size_t>(n));

    int status = 0;
    const pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) {
      res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -WTERMSIG(status);
      done = true;
    } else if (std::chrono::steady_clock::now() > deadline) {
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      res.timed_out = true;
      res.exit_code = -1;
      done = true;
    } else {
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
  }
  // Drain whatever is left after exit.
  char buf[4096];
  ssize_t n;
  while ((n = read(pipefd[0], buf, sizeof buf)) > 0)
    res.output.append(buf, static_cast<size_t>(n));
  close(pipefd[0]);
  return res;
}

TempDir::TempDir() {
  const char* base = getenv("TMPDIR");
  std::string tmpl = std::string(base && *base ? base : "/tmp") + "/lhic-XXXXXX";
  std::vector<char> buf(tmpl.begin(), tmpl.end());
  buf.push_back('\0');
  if (!mkdtemp(buf.data()))
    throw Error(ErrorKind::Io, "mkdtemp failed: " + std::string(strerror(errno)));
  path_ = buf.data();
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace lhic
