// Copyright 2026 The tablebench Authors
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

#ifndef TABLEBENCH_ERRORS_H_
#define TABLEBENCH_ERRORS_H_

#include <stdexcept>
#include <string>

namespace tablebench {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Markup that cannot be turned into a valid Grid.
class MalformedTable : public Error {
 public:
  using Error::Error;
};

// Network, auth or HTTP failure after the retry budget is spent.
class EndpointError : public Error {
 public:
  using Error::Error;
};

// The model answered, but the answer could not be parsed.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class JoinEmpty : public Error {
 public:
  using Error::Error;
};

class CompileError : public Error {
 public:
  CompileError(const std::string& what, std::string log_tail)
      : Error(what), log_tail_(std::move(log_tail)) {}
  const std::string& log_tail() const { return log_tail_; }

 private:
  std::string log_tail_;
};

class ToolMissing : public Error {
 public:
  using Error::Error;
};

class CleanFailure : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tablebench

#endif  // TABLEBENCH_ERRORS_H_
