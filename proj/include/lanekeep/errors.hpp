/*
 * Copyright 2026 The lanekeep Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LANEKEEP_ERRORS_HPP_
#define LANEKEEP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace lanekeep {

// Base for every error raised by the library. Callers that only care about
// "something went wrong" catch this; the subclasses name the failure.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter set violates a documented inequality. The message names it.
class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

// Pose is farther than the capture radius from every section of the path.
class OffTrackError : public Error {
 public:
  using Error::Error;
};

// Fewer than two path points lie on the lookahead circle.
class NoLookaheadError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Vehicle sits on the local centre of curvature of the path.
class SingularityError : public Error {
 public:
  using Error::Error;
};

// Timestamps were not strictly increasing.
class OrderingError : public Error {
 public:
  using Error::Error;
};

// Actuator queried for a command older than its history.
class InitializationError : public Error {
 public:
  using Error::Error;
};

// n(jw) vanishes at an imaginary-axis crossing, or d and n share a root.
class DegenerateCrossingError : public Error {
 public:
  using Error::Error;
};

class InfeasibleTuningError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent configuration (file or API).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace lanekeep

#endif  // LANEKEEP_ERRORS_HPP_
