/*
 * Copyright 2026 The SBSR Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SBSR_ERRORS_H_
#define SBSR_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sbsr {

// Process exit codes of the sbsr tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInputMissing = 2,
  kExitDiverged = 3,
  kExitBadQuery = 4,
  kExitUnevaluable = 5,
  kExitServiceBind = 6,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const { return 1; }
};

// Missing, unreadable or malformed input files.
class InputError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return kExitInputMissing; }
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return kExitDiverged; }
};

class TrainingDiverged : public NonFiniteError {
 public:
  TrainingDiverged(std::size_t epoch, std::size_t pair_index,
                   const std::string& detail)
      : NonFiniteError("training diverged at epoch " + std::to_string(epoch) +
                       ", pair " + std::to_string(pair_index) + ": " + detail),
        epoch_(epoch),
        pair_index_(pair_index) {}
  std::size_t epoch() const { return epoch_; }
  std::size_t pair_index() const { return pair_index_; }

 private:
  std::size_t epoch_;
  std::size_t pair_index_;
};

class BadQuery : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return kExitBadQuery; }
};

class Unevaluable : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return kExitUnevaluable; }
};

class BindError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return kExitServiceBind; }
};

}  // namespace sbsr

#endif  // SBSR_ERRORS_H_
