#include "relmine/query_generator.hpp"

#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include <nlohmann/json.hpp>

namespace relmine {

std::string StubQueryGenerator::generate(const GenerationRequest& request) {
  std::string out = request.query + suffix_;
  if (request.attempt > 0) out += "-" + std::to_string(request.attempt);
  return out;
}

std::string encode_generation_request(const GenerationRequest& request) {
  const nlohmann::json j = {
      {"query", request.query}, {"language", std::string(code(request.language))}, {"path", request.path.render()}};
  return j.dump();
}

std::string decode_generation_response(std::string_view line) {
  const auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw GeneratorUnavailable("generator sent malformed JSON");
  const auto it = j.find("query");
  if (it == j.end() || !it->is_string()) throw GeneratorUnavailable("generator response lacks a \"query\" string");
  return it->get<std::string>();
}

struct ProcessQueryGenerator::Process {
  pid_t pid = -1;
  int fd = -1;
  std::string buffer;

  ~Process() {
    if (fd >= 0) {
      ::shutdown(fd, SHUT_WR);
      ::close(fd);
    }
    if (pid > 0) {
      int status = 0;
      ::waitpid(pid, &status, 0);
    }
  }

  void send_line(const std::string& line) {
    std::string data = line + "\n";
    std::size_t sent = 0;
    while (sent < data.size()) {
      const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw GeneratorUnavailable(std::string("write to generator failed: ") + std::strerror(errno));
      }
      sent += static_cast<std::size_t>(n);
    }
  }

  std::string read_line() {
    while (true) {
      const std::size_t nl = buffer.find('\n');
      if (nl != std::string::npos) {
        std::string line = buffer.substr(0, nl);
        buffer.erase(0, nl + 1);
        return line;
      }
      char chunk[4096];
      const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) throw GeneratorUnavailable("generator closed its output");
      buffer.append(chunk, static_cast<std::size_t>(n));
    }
  }
};

ProcessQueryGenerator::ProcessQueryGenerator(std::vector<std::string> argv) : process_(std::make_unique<Process>()) {
  if (argv.empty()) throw ValidationError("generator command is empty");
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0) {
    throw GeneratorUnavailable(std::string("socketpair failed: ") + std::strerror(errno));
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(fds[0]);
    ::close(fds[1]);
    throw GeneratorUnavailable(std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::close(fds[0]);
    ::dup2(fds[1], STDIN_FILENO);
    ::dup2(fds[1], STDOUT_FILENO);
    ::close(fds[1]);
    std::vector<char*> args;
    for (auto& a : argv) args.push_back(a.data());
    args.push_back(nullptr);
    ::execvp(args[0], args.data());
    ::_exit(127);
  }
  ::close(fds[1]);
  process_->pid = pid;
  process_->fd = fds[0];
}

ProcessQueryGenerator::~ProcessQueryGenerator() = default;

std::string ProcessQueryGenerator::generate(const GenerationRequest& request) {
  process_->send_line(encode_generation_request(request));
  return decode_generation_response(process_->read_line());
}

}  // namespace relmine
