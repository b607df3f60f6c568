#ifndef SNLS_DETAIL_PARALLEL_HPP
#define SNLS_DETAIL_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace snls {

template <class Fn>
void parallel_for(int count, int threads, Fn&& fn)
{
  const int workers = std::min(resolve_threads(threads), count);
  if(workers <= 1)
  {
    for(int i = 0; i < count; ++i)
      fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for(int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for(int i = next++; i < count; i = next++)
      {
        try
        {
          fn(i);
        }
        catch(...)
        {
          std::lock_guard lock(error_mutex);
          if(!error)
            error = std::current_exception();
        }
      }
    });
  pool.clear();
  if(error)
    std::rethrow_exception(error);
}

}  // namespace snls

#endif
