#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace wigner_align {

template <class T>
std::vector<T> run_ordered(std::size_t count, std::size_t threads,
                           const std::function<T(std::size_t)>& task) {
  if (threads == 0) threads = default_thread_count();
  threads = std::min(threads, count);
  std::vector<std::optional<T>> slots(count);
  if (threads <= 1) {
    for (std::size_t k = 0; k < count; ++k) slots[k].emplace(task(k));
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t k = next.fetch_add(1);
          if (k >= count) return;
          try {
            slots[k].emplace(task(k));
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = count;
            return;
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }
  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace wigner_align
