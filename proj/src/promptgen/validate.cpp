#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fstream>
#include <thread>

#include "json.hpp"
#include "tyfix/promptgen.hpp"

namespace tyfix {

namespace fs = std::filesystem;

int run_with_timeout(const std::string& command, const fs::path& cwd, std::chrono::seconds timeout) {
  pid_t pid = fork();
  if (pid < 0) throw SandboxError("fork failed");
  if (pid == 0) {
    setpgid(0, 0);
    if (chdir(cwd.c_str()) != 0) _exit(127);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  auto deadline = std::chrono::steady_clock::now() + timeout;
  int status = 0;
  for (;;) {
    pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0) throw SandboxError("waitpid failed");
    if (std::chrono::steady_clock::now() >= deadline) {
      kill(-pid, SIGKILL);
      waitpid(pid, &status, 0);
      return -1;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  return WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
}

namespace {

bool inside(const fs::path& child, const fs::path& parent) {
  auto c = fs::weakly_canonical(child);
  auto p = fs::weakly_canonical(parent);
  auto [pe, ce] = std::mismatch(p.begin(), p.end(), c.begin(), c.end());
  return pe == p.end();
}

}  // namespace

std::vector<CandidatePatch> validate(std::vector<CandidatePatch> patches, const ValidationOptions& options) {
  bool run_tests = !options.test_command.empty();
  if (run_tests) {
    if (!fs::is_directory(options.project_dir)) throw SandboxError("project directory not found");
    if (inside(options.workdir, options.project_dir)) {
      throw SandboxError("the sandbox directory must be outside the project");
    }
  }
  for (auto& c : patches) {
    try {
      syntax::parse_source(c.text);
    } catch (const syntax::SyntaxError& e) {
      c.status = PatchStatus::Generated;
      c.note = std::string("syntax error: ") + e.what();
      continue;
    }
    c.status = PatchStatus::SyntaxOk;
    if (!run_tests) continue;
    fs::path box = options.workdir / c.id;
    std::error_code ec;
    fs::remove_all(box, ec);
    fs::create_directories(box, ec);
    if (!ec) fs::copy(options.project_dir, box, fs::copy_options::recursive | fs::copy_options::copy_symlinks, ec);
    if (ec) throw SandboxError("cannot copy the project to " + box.string() + ": " + ec.message());
    std::ofstream(box / options.file, std::ios::binary | std::ios::trunc) << c.text;
    int rc = run_with_timeout(options.test_command, box, options.timeout);
    if (rc == 0) {
      c.status = PatchStatus::Plausible;
    } else {
      c.note = rc < 0 ? "timeout" : "tests failed with status " + std::to_string(rc);
    }
  }
  return patches;
}

std::string manifest_json(const std::vector<CandidatePatch>& patches) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& c : patches) {
    j.push_back({{"candidate_id", c.id},
                 {"template_id", c.template_id},
                 {"status", std::string(to_string(c.status))},
                 {"score", c.score}});
  }
  return j.dump(2);
}

}  // namespace tyfix
