#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>

#include "dfax/model.hpp"

namespace dfax::model {

namespace detail {
class SubprocessPipe;
}

// Transport for external models. Requests are chunked at max_batch, tagged
// with sequence identifiers, and the probabilities are reassembled in request
// order, so batch partitioning never changes the result. The client is
// stateless with respect to the instances it forwards.
class ExternalClient {
 public:
  ExternalClient(EndpointDescriptor endpoint, int num_classes, Index dim);
  ~ExternalClient();

  ExternalClient(const ExternalClient&) = delete;
  ExternalClient& operator=(const ExternalClient&) = delete;

  Matrix predict_proba(const Matrix& rows);

 private:
  Matrix round_trip(const Matrix& chunk, std::uint64_t id);
  std::string exchange_http(const std::string& body);
  std::string exchange_subprocess(const std::string& body, std::uint64_t id);

  EndpointDescriptor endpoint_;
  int num_classes_;
  Index dim_;
  std::atomic<std::uint64_t> next_id_{1};
  std::mutex subprocess_mutex_;
  std::unique_ptr<detail::SubprocessPipe> pipe_;
};

}  // namespace dfax::model
