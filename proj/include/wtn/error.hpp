/*
 * Copyright 2026 The wtn Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wtn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A malformed line in a delimited input file.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// The input parsed cleanly but held no rows for the requested year.
class NoRecordsError : public Error {
public:
    explicit NoRecordsError(int year)
        : Error("no records for year " + std::to_string(year)), year_(year) {}

    int year() const noexcept { return year_; }

private:
    int year_;
};

/// A power iteration or series expansion ran out of iterations.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

} // namespace wtn
