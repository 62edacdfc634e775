// Copyright 2026 The ARC Authors.
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace arc {

// Broad classes of failure. The CLI maps these onto process exit codes.
enum class ErrorClass {
  kInternal,
  kValidation,  // bad input files, schema violations, missing upstream data
  kTransport,   // network and authentication failures
  kBudget,      // call-count cap reached
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what)
      : std::runtime_error(what), class_(cls) {}
  ErrorClass error_class() const { return class_; }

 private:
  ErrorClass class_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorClass::kValidation, what) {}
};

// corpus

class MalformedRecord : public ValidationError {
 public:
  MalformedRecord(std::size_t line, const std::string& reason)
      : ValidationError("line " + std::to_string(line) + ": " + reason),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DuplicateDocId : public ValidationError {
 public:
  explicit DuplicateDocId(const std::string& doc_id)
      : ValidationError("duplicate doc_id '" + doc_id + "'") {}
};

class UnknownRole : public ValidationError {
 public:
  UnknownRole(const std::string& role, const std::string& scheme)
      : ValidationError("role '" + role + "' is not in scheme '" + scheme + "'") {}
};

class SpanOutOfBounds : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class PolicyInapplicable : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// judge

class MissingBinding : public ValidationError {
 public:
  explicit MissingBinding(const std::string& name)
      : ValidationError("no binding for placeholder {" + name + "}"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class TransportError : public Error {
 public:
  explicit TransportError(const std::string& what)
      : Error(ErrorClass::kTransport, what) {}
};

class AuthError : public Error {
 public:
  explicit AuthError(const std::string& what)
      : Error(ErrorClass::kTransport, what) {}
};

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(std::size_t cap)
      : Error(ErrorClass::kBudget,
              "judge call budget of " + std::to_string(cap) + " exhausted") {}
};

class UnparseableVerdict : public Error {
 public:
  UnparseableVerdict(const std::string& reason, std::string raw)
      : Error(ErrorClass::kInternal, "unparseable verdict: " + reason),
        raw_(std::move(raw)) {}
  const std::string& raw() const { return raw_; }

 private:
  std::string raw_;
};

// scoring, bias, position, stats

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorClass::kValidation, what) {}
};

class OutOfRangeLikert : public DomainError {
 public:
  explicit OutOfRangeLikert(int value)
      : DomainError("likert rating " + std::to_string(value) +
                    " outside 1..4") {}
};

class EmptyArgumentSet : public DomainError {
 public:
  EmptyArgumentSet() : DomainError("empty argument set") {}
};

class NoArgumentsOfRole : public DomainError {
 public:
  explicit NoArgumentsOfRole(const std::string& role)
      : DomainError("no judged arguments with role '" + role + "'") {}
};

class NoArguments : public DomainError {
 public:
  NoArguments() : DomainError("no arguments in scope") {}
};

class ZeroFraction : public DomainError {
 public:
  ZeroFraction() : DomainError("prior fraction must be positive") {}
};

class IndexOutOfRange : public DomainError {
 public:
  using DomainError::DomainError;
};

class NoSalientArguments : public DomainError {
 public:
  using DomainError::DomainError;
};

class DegenerateSeries : public DomainError {
 public:
  using DomainError::DomainError;
};

class AlignmentMismatch : public DomainError {
 public:
  using DomainError::DomainError;
};

// cli

class MissingUpstream : public ValidationError {
 public:
  explicit MissingUpstream(const std::string& artifact)
      : ValidationError("missing upstream artifact: " + artifact),
        artifact_(artifact) {}
  const std::string& artifact() const { return artifact_; }

 private:
  std::string artifact_;
};

}  // namespace arc
