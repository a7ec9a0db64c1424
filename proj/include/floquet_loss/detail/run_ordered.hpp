// Copyright 2026 The floquet-loss Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <condition_variable>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

namespace floquet_loss {

template <typename Result>
void run_ordered(std::size_t count, int threads, const std::function<Result(std::size_t)>& compute,
                 const std::function<bool(std::size_t, Result&&)>& commit) {
  if (count == 0) return;
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(count, threads > 0 ? threads : 1));
  std::mutex mutex;
  std::condition_variable ready;
  std::map<std::size_t, Result> done;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;

  const auto work = [&] {
    while (!stop.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        Result r = compute(i);
        std::lock_guard lock(mutex);
        done.emplace(i, std::move(r));
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!error) error = std::current_exception();
        stop = true;
      }
      ready.notify_all();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);

  std::size_t expected = 0;
  while (expected < count) {
    std::unique_lock lock(mutex);
    ready.wait(lock, [&] { return done.count(expected) > 0 || error; });
    if (error) break;
    Result r = std::move(done.at(expected));
    done.erase(expected);
    lock.unlock();
    if (!commit(expected, std::move(r))) {
      stop = true;
      break;
    }
    ++expected;
  }
  stop = true;
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace floquet_loss
