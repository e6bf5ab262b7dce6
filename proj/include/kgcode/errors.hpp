// Copyright 2026 The kgcode Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "kgcode/dyadic.hpp"
#include "kgcode/schedule.hpp"

namespace kgc {

// The schedule's certified sum is not strictly below 1 - mu([[Q]]).
class HypothesisViolation : public std::runtime_error {
 public:
  HypothesisViolation(const std::string& what, Dyadic class_measure,
                      ScheduleValidation validation)
      : std::runtime_error(what),
        class_measure_(std::move(class_measure)),
        validation_(std::move(validation)) {}
  const Dyadic& class_measure() const noexcept { return class_measure_; }
  const ScheduleValidation& validation() const noexcept { return validation_; }

 private:
  Dyadic class_measure_;
  ScheduleValidation validation_;
};

class CapExhausted : public std::runtime_error {
 public:
  CapExhausted(const std::string& what, std::uint64_t cap)
      : std::runtime_error(what), cap_(cap) {}
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t cap_;
};

// An adaptive stage found no unsaturated clone to rebuild above.
class ConstructionTerminated : public std::runtime_error {
 public:
  ConstructionTerminated(const std::string& what, std::uint64_t stage)
      : std::runtime_error(what), stage_(stage) {}
  std::uint64_t stage() const noexcept { return stage_; }

 private:
  std::uint64_t stage_;
};

}  // namespace kgc
