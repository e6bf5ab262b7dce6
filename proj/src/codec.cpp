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

#include "kgcode/codec.hpp"

#include <algorithm>
#include <stdexcept>

#include "kgcode/errors.hpp"

namespace kgc {

bool OracleTape::read(std::size_t i) {
  if (i >= bits_.size()) throw std::out_of_range("OracleTape: read past known prefix");
  ++reads_;
  touched_.insert(i);
  return bits_[i];
}

std::uint64_t default_stage_cap(const LevelSchedule& schedule,
                                const EnumeratedClass& cls, std::uint64_t n) {
  const std::uint64_t floor = std::max<std::uint64_t>(cls.max_len(), schedule.level(n));
  std::uint64_t frontier = n;
  while (schedule.level(frontier) < floor) ++frontier;
  const std::uint64_t spread =
      cls.max_len() >= 40 ? (std::uint64_t{1} << 40) : (std::uint64_t{1} << cls.max_len());
  return 10 * (frontier + cls.entries().size() * spread);
}

bool is_settled(const LabelledTreeState& st, const EnumeratedClass& cls,
                std::uint64_t n) {
  const std::uint64_t frontier = st.dvls();
  if (frontier < n) return false;
  const std::uint64_t need = std::max<std::uint64_t>(cls.max_len(), st.level(n));
  if (st.level(frontier) < need) return false;
  return !least_open_leaf_below(st, cls.all_strings());
}

namespace {

void run_or_throw(LabelledTreeState& st, const EnumeratedClass& cls,
                  const std::function<bool(const LabelledTreeState&)>& done,
                  std::uint64_t cap, const char* what) {
  RunOutcome out = run_until(st, cls, done, cap);
  switch (out.status) {
    case RunStatus::Satisfied: return;
    case RunStatus::CapExhausted:
      throw CapExhausted(std::string(what) + ": stage cap " + std::to_string(cap) +
                             " exhausted",
                         cap);
    case RunStatus::Terminated:
      throw ConstructionTerminated(std::string(what) + ": construction terminated at stage " +
                                       std::to_string(out.stage),
                                   out.stage);
  }
}

}  // namespace

CodeResult encode(const BitString& x, const LevelSchedule& schedule,
                  const EnumeratedClass& cls, std::optional<std::uint64_t> stage_cap) {
  const std::uint64_t n = x.size();
  const std::uint64_t cap = stage_cap.value_or(default_stage_cap(schedule, cls, n));
  LabelledTreeState st = init(schedule, cls);
  run_or_throw(st, cls, [&](const LabelledTreeState& s) { return is_settled(s, cls, n); },
               cap, "encode");

  // Leftmost-path convention: extend x by zeros up to the frontier.
  const BitString target = x + BitString::zeros(st.dvls() - n);
  auto leaf = st.active_clone_of(target);
  if (!leaf) throw std::logic_error("encode: label " + target.display() + " has no active clone");
  CodeResult r;
  r.leaf_witness = *leaf;
  r.code_prefix = leaf->prefix(st.level(n));
  r.settled_at_stage = st.stage();
  if (st.label_of(r.code_prefix) != x) {
    throw std::logic_error("encode: witness prefix " + r.code_prefix.display() +
                           " does not carry x_" + x.display());
  }
  r.extendible = is_extendible(r.code_prefix, cls);
  return r;
}

DecodeResult decode_prefix(OracleTape& oracle, std::uint64_t n,
                           const LevelSchedule& schedule, const EnumeratedClass& cls,
                           std::optional<std::uint64_t> stage_cap) {
  const std::uint64_t use = schedule.level(n);
  std::string bits;
  bits.reserve(use);
  for (std::uint64_t i = 0; i < use; ++i) bits.push_back(oracle.read(i) ? '1' : '0');
  const BitString y(bits);

  const std::uint64_t cap = stage_cap.value_or(default_stage_cap(schedule, cls, n));
  LabelledTreeState st = init(schedule, cls);
  run_or_throw(st, cls, [&](const LabelledTreeState& s) { return s.is_labelled(y); }, cap,
               "decode");
  return {*st.label_of(y), st.stage()};
}

DecodeResult decode(const BitString& y, const LevelSchedule& schedule,
                    const EnumeratedClass& cls, std::optional<std::uint64_t> stage_cap) {
  auto n = schedule.index_of_level(y.size());
  if (!n) {
    throw std::invalid_argument("decode: length " + std::to_string(y.size()) +
                                " is not a schedule level");
  }
  OracleTape tape(y);
  return decode_prefix(tape, *n, schedule, cls, stage_cap);
}

bool roundtrip(const BitString& x, const LevelSchedule& schedule,
               const EnumeratedClass& cls, std::optional<std::uint64_t> stage_cap) {
  const CodeResult code = encode(x, schedule, cls, stage_cap);
  OracleTape tape(code.leaf_witness);
  const DecodeResult back = decode_prefix(tape, x.size(), schedule, cls, stage_cap);
  const std::uint64_t use = schedule.level(x.size());
  return back.sigma == x && tape.extent() == use && tape.distinct_positions() == use;
}

CodecSession::CodecSession(const LevelSchedule& schedule, EnumeratedClass cls,
                           std::uint64_t n_max)
    : cls_(std::move(cls)), n_max_(n_max), st_(init(schedule, cls_)) {
  note_settled();
}

void CodecSession::note_settled() {
  // Settledness for n implies it for every shorter length, and lasts.
  while (settled_.size() <= n_max_ && is_settled(st_, cls_, settled_.size())) {
    settled_.push_back({st_.stage(), st_.dvls()});
  }
}

void CodecSession::step_once() {
  step(st_, cls_);
  note_settled();
}

void CodecSession::resolve(std::optional<std::uint64_t> first, std::uint64_t cap,
                           const char* what) const {
  if (st_.terminated() && (!first || st_.stage() <= *first) && st_.stage() <= cap) {
    throw ConstructionTerminated(std::string(what) + ": construction terminated at stage " +
                                     std::to_string(st_.stage()),
                                 st_.stage());
  }
  if (!first || *first > cap) {
    throw CapExhausted(std::string(what) + ": stage cap " + std::to_string(cap) + " exhausted",
                       cap);
  }
}

CodeResult CodecSession::encode(const BitString& x, std::optional<std::uint64_t> stage_cap) {
  const std::uint64_t n = x.size();
  if (n > n_max_) throw std::invalid_argument("encode: input longer than the session's n_max");
  const std::uint64_t cap = stage_cap.value_or(default_stage_cap(st_.schedule(), cls_, n));
  while (settled_.size() <= n && !st_.terminated() && st_.stage() < cap) step_once();
  resolve(settled_.size() > n ? std::optional(settled_[n].stage) : std::nullopt, cap, "encode");

  // No adaptive stage follows a settled one, so active clones seen then
  // are still active now.
  const BitString target = x + BitString::zeros(settled_[n].dvls - n);
  auto leaf = st_.active_clone_of(target);
  if (!leaf) throw std::logic_error("encode: label " + target.display() + " has no active clone");
  CodeResult r;
  r.leaf_witness = leaf->prefix(st_.level(settled_[n].dvls));
  r.code_prefix = leaf->prefix(st_.level(n));
  r.settled_at_stage = settled_[n].stage;
  if (r.leaf_witness != *leaf || st_.label_of(r.code_prefix) != x) {
    throw std::logic_error("encode: witness for x_" + x.display() + " moved after settling");
  }
  r.extendible = is_extendible(r.code_prefix, cls_);
  return r;
}

DecodeResult CodecSession::decode_prefix(OracleTape& oracle, std::uint64_t n,
                                         std::optional<std::uint64_t> stage_cap) {
  if (n > n_max_) throw std::invalid_argument("decode: input longer than the session's n_max");
  const std::uint64_t use = st_.level(n);
  std::string bits;
  bits.reserve(use);
  for (std::uint64_t i = 0; i < use; ++i) bits.push_back(oracle.read(i) ? '1' : '0');
  const BitString y(bits);

  const std::uint64_t cap = stage_cap.value_or(default_stage_cap(st_.schedule(), cls_, n));
  while (!st_.is_labelled(y) && !st_.terminated() && st_.stage() < cap) step_once();
  std::optional<std::uint64_t> first;
  if (st_.is_labelled(y)) {
    for (const auto& rec : st_.history()) {
      if (rec.where == y) {
        first = rec.stage;
        break;
      }
    }
  }
  resolve(first, cap, "decode");
  return {*st_.label_of(y), *first};
}

DecodeResult CodecSession::decode(const BitString& y, std::optional<std::uint64_t> stage_cap) {
  auto n = st_.schedule().index_of_level(y.size());
  if (!n) {
    throw std::invalid_argument("decode: length " + std::to_string(y.size()) +
                                " is not a schedule level");
  }
  OracleTape tape(y);
  return decode_prefix(tape, *n, stage_cap);
}

bool CodecSession::roundtrip(const BitString& x, std::optional<std::uint64_t> stage_cap) {
  const CodeResult code = encode(x, stage_cap);
  OracleTape tape(code.leaf_witness);
  const DecodeResult back = decode_prefix(tape, x.size(), stage_cap);
  const std::uint64_t use = st_.level(x.size());
  return back.sigma == x && tape.extent() == use && tape.distinct_positions() == use;
}

std::vector<OracleUseRow> oracle_use_profile(const LevelSchedule& schedule,
                                             std::uint64_t n_max) {
  std::vector<OracleUseRow> rows;
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    const std::uint64_t l = schedule.level(n);
    rows.push_back({n, l, l - n});
  }
  return rows;
}

}  // namespace kgc
