#include "dfax/model_client.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstring>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "dfax/parallel.hpp"

namespace dfax::model {

using nlohmann::json;

namespace detail {

// Line-oriented bidirectional pipe to a child process started via the shell.
class SubprocessPipe {
 public:
  explicit SubprocessPipe(const std::string& command) {
    int to_child[2], from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0)
      throw ModelUnavailable("failed to create pipes for subprocess model");
    pid_ = fork();
    if (pid_ < 0) throw ModelUnavailable("failed to fork subprocess model");
    if (pid_ == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      execl("/bin/sh", "sh", "-c", command.c_str(), (char*)nullptr);
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    write_fd_ = to_child[1];
    read_fd_ = from_child[0];
  }

  ~SubprocessPipe() {
    if (write_fd_ >= 0) close(write_fd_);
    if (read_fd_ >= 0) close(read_fd_);
    if (pid_ > 0) {
      // Give the child a moment to exit on EOF, then force it.
      for (int i = 0; i < 50; ++i) {
        if (waitpid(pid_, nullptr, WNOHANG) != 0) return;
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
      }
      kill(pid_, SIGKILL);
      waitpid(pid_, nullptr, 0);
    }
  }

  void write_line(const std::string& line, int timeout_ms) {
    std::string payload = line;
    payload.push_back('\n');
    std::size_t written = 0;
    const auto deadline =
        std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    while (written < payload.size()) {
      struct pollfd pfd{write_fd_, POLLOUT, 0};
      const int remaining = remaining_ms(deadline);
      if (remaining <= 0 || poll(&pfd, 1, remaining) <= 0)
        throw ModelUnavailable("timed out writing to subprocess model");
      const ssize_t n = ::write(write_fd_, payload.data() + written, payload.size() - written);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw ModelUnavailable("subprocess model closed its input: " +
                               std::string(std::strerror(errno)));
      }
      written += static_cast<std::size_t>(n);
    }
  }

  std::string read_line(int timeout_ms) {
    const auto deadline =
        std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    for (;;) {
      const auto newline = buffer_.find('\n');
      if (newline != std::string::npos) {
        std::string line = buffer_.substr(0, newline);
        buffer_.erase(0, newline + 1);
        return line;
      }
      struct pollfd pfd{read_fd_, POLLIN, 0};
      const int remaining = remaining_ms(deadline);
      if (remaining <= 0 || poll(&pfd, 1, remaining) <= 0)
        throw ModelUnavailable("timed out waiting for subprocess model output");
      char chunk[4096];
      const ssize_t n = ::read(read_fd_, chunk, sizeof(chunk));
      if (n < 0) {
        if (errno == EINTR) continue;
        throw ModelUnavailable("failed reading from subprocess model");
      }
      if (n == 0) throw ModelUnavailable("subprocess model exited before responding");
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 private:
  static int remaining_ms(std::chrono::steady_clock::time_point deadline) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                          deadline - std::chrono::steady_clock::now())
                          .count();
    return left > 0 ? static_cast<int>(left) : 0;
  }

  pid_t pid_ = -1;
  int write_fd_ = -1;
  int read_fd_ = -1;
  std::string buffer_;
};

}  // namespace detail

ExternalClient::ExternalClient(EndpointDescriptor endpoint, int num_classes, Index dim)
    : endpoint_(std::move(endpoint)), num_classes_(num_classes), dim_(dim) {
  if (endpoint_.transport == Transport::Subprocess) {
    // A dying child must not take the process down with SIGPIPE.
    static std::once_flag ignore_sigpipe;
    std::call_once(ignore_sigpipe, [] { signal(SIGPIPE, SIG_IGN); });
    pipe_ = std::make_unique<detail::SubprocessPipe>(endpoint_.target);
  }
}

ExternalClient::~ExternalClient() = default;

namespace {

std::string encode_request(const Matrix& chunk, std::uint64_t id) {
  json instances = json::array();
  for (Index i = 0; i < chunk.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < chunk.cols(); ++j) row.push_back(chunk(i, j));
    instances.push_back(std::move(row));
  }
  return json{{"id", id}, {"instances", std::move(instances)}}.dump();
}

Matrix decode_response(const std::string& body, std::uint64_t id, Index rows, int num_classes) {
  const json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.contains("id") || !doc.contains("probabilities"))
    throw ModelUnavailable("endpoint returned a malformed response document");
  if (doc["id"].get<std::uint64_t>() != id)
    throw ModelUnavailable("endpoint response id does not match the request");
  const json& probs = doc["probabilities"];
  if (!probs.is_array() || static_cast<Index>(probs.size()) != rows)
    throw ModelUnavailable("endpoint returned the wrong number of probability rows");
  Matrix out(rows, num_classes);
  for (Index i = 0; i < rows; ++i) {
    const json& row = probs[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != num_classes)
      throw ModelUnavailable("endpoint returned probability rows of the wrong width");
    double sum = 0.0;
    for (int c = 0; c < num_classes; ++c) {
      const json& cell = row[static_cast<std::size_t>(c)];
      // Standard JSON emitters serialize inf/nan as null.
      if (!cell.is_number())
        throw InvalidModelOutput("endpoint returned a non-finite probability");
      const double p = cell.get<double>();
      if (!std::isfinite(p)) throw InvalidModelOutput("endpoint returned a non-finite probability");
      out(i, c) = p;
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6)
      throw InvalidModelOutput("endpoint probabilities do not sum to 1");
  }
  return out;
}

}  // namespace

std::string ExternalClient::exchange_http(const std::string& body) {
  httplib::Client client(endpoint_.target);
  client.set_connection_timeout(0, endpoint_.timeout_ms * 1000LL);
  client.set_read_timeout(endpoint_.timeout_ms / 1000, (endpoint_.timeout_ms % 1000) * 1000);
  client.set_write_timeout(endpoint_.timeout_ms / 1000, (endpoint_.timeout_ms % 1000) * 1000);
  auto result = client.Post("/predict", body, "application/json");
  if (!result) throw ModelUnavailable("endpoint unreachable: " + endpoint_.target);
  if (result->status != 200)
    throw ModelUnavailable("endpoint returned status " + std::to_string(result->status));
  return result->body;
}

std::string ExternalClient::exchange_subprocess(const std::string& body, std::uint64_t id) {
  std::lock_guard<std::mutex> lock(subprocess_mutex_);
  pipe_->write_line(body, endpoint_.timeout_ms);
  // Skip stale responses left over from a timed-out earlier request.
  for (;;) {
    const std::string line = pipe_->read_line(endpoint_.timeout_ms);
    const json doc = json::parse(line, nullptr, false);
    if (!doc.is_discarded() && doc.contains("id") &&
        doc["id"].is_number_unsigned() && doc["id"].get<std::uint64_t>() < id)
      continue;
    return line;
  }
}

Matrix ExternalClient::round_trip(const Matrix& chunk, std::uint64_t id) {
  const std::string body = encode_request(chunk, id);
  std::string failure;
  for (int attempt = 0; attempt <= endpoint_.max_retries; ++attempt) {
    try {
      const std::string response = endpoint_.transport == Transport::Http
                                       ? exchange_http(body)
                                       : exchange_subprocess(body, id);
      return decode_response(response, id, chunk.rows(), num_classes_);
    } catch (const InvalidModelOutput&) {
      throw;  // model-side defect; retrying cannot help
    } catch (const ModelUnavailable& e) {
      failure = e.what();
    }
  }
  throw ModelUnavailable(failure + " (after " + std::to_string(endpoint_.max_retries + 1) +
                         " attempts)");
}

Matrix ExternalClient::predict_proba(const Matrix& rows) {
  if (rows.cols() != dim_) throw DimensionMismatch("external model expects d = " +
                                                   std::to_string(dim_));
  const Index k = rows.rows();
  Matrix out(k, num_classes_);
  const Index batch = endpoint_.max_batch;
  const Index chunks = (k + batch - 1) / batch;
  const std::uint64_t first_id = next_id_.fetch_add(static_cast<std::uint64_t>(chunks));

  const int jobs = endpoint_.transport == Transport::Http ? endpoint_.concurrency : 1;
  parallel_for(chunks, jobs, [&](std::int64_t ci) {
    const Index begin = static_cast<Index>(ci) * batch;
    const Index count = std::min(batch, k - begin);
    out.middleRows(begin, count) =
        round_trip(rows.middleRows(begin, count), first_id + static_cast<std::uint64_t>(ci));
  });
  return out;
}

}  // namespace dfax::model
