#include "mlgw/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mlgw {

void run_chunks(int workers, int n_chunks, const std::function<void(int)>& body) {
  std::atomic<int> next{0};
  std::mutex mx;
  std::exception_ptr error;
  auto loop = [&]() {
    for (;;) {
      const int c = next.fetch_add(1);
      if (c >= n_chunks) return;
      {
        std::lock_guard<std::mutex> lock(mx);
        if (error) return;
      }
      try {
        body(c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mx);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  const int n = std::min(workers, n_chunks);
  if (n <= 1) {
    loop();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pool.emplace_back(loop);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace mlgw
